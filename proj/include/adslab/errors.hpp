#pragma once

#include <stdexcept>
#include <string>

namespace adslab {

enum class ErrorKind {
  invalid_argument,
  domain,
  order,
  dimension,
  degenerate_metric,
  precondition,
  gauge,
  unsupported_topology,
  incomplete_boundary,
  extraction,
  critical_point,
};

const char* to_string(ErrorKind kind);

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Function argument outside the domain of an elementary function or chart.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double offending)
      : Error(ErrorKind::domain, what + " (value " + std::to_string(offending) + ")"),
        value_(offending) {}

  double value() const noexcept { return value_; }

 private:
  double value_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace adslab
