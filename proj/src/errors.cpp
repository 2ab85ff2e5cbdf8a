#include "adslab/errors.hpp"

namespace adslab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::order: return "insufficient jet order";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::degenerate_metric: return "degenerate metric";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::gauge: return "gauge error";
    case ErrorKind::unsupported_topology: return "unsupported topology";
    case ErrorKind::incomplete_boundary: return "incomplete boundary";
    case ErrorKind::extraction: return "ill-conditioned extraction";
    case ErrorKind::critical_point: return "critical point";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace adslab
