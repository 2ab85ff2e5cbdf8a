#pragma once

/**
 * Truncated multivariate Taylor arithmetic.
 *
 * A Jet of order K in `dim` variables stores the Taylor coefficients
 *   c_b = (d^b f / b!)(x0)
 * for every multi-index b with |b| <= K. Multi-indices are enumerated in
 * graded lexicographic order: by total degree first, then lexicographically
 * with the first variable most significant (x^2, xy, y^2 for degree two).
 * This order is frozen; report files and golden values depend on it.
 *
 * Because the coefficients of degree < K form a prefix of the layout, an
 * order-K computation reproduces the order-(K-1) computation bit-for-bit on
 * the shared coefficients.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace adslab {

inline constexpr int kMaxJetDim = 6;
inline constexpr int kMaxJetOrder = 4;

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

int degree(const MultiIndex& b);

/// Multi-index enumeration and the product / derivative tables for one
/// (dim, order) pair. Instances are created once and shared.
class JetLayout {
 public:
  static const JetLayout& get(int dim, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& index(std::size_t pos) const { return indices_[pos]; }
  /// Position of `b`; throws if |b| exceeds the order.
  std::size_t position(const MultiIndex& b) const;
  /// First position of total degree `d`; degree_begin(order + 1) == size().
  std::size_t degree_begin(int d) const { return degree_begin_[static_cast<std::size_t>(d)]; }

  // Truncated Cauchy product: output k sums over unordered pairs {i, j}
  // with index(i) + index(j) == index(k), i <= j, in increasing i.
  struct Pair {
    std::uint16_t i;
    std::uint16_t j;
  };
  std::span<const Pair> product_pairs(std::size_t k) const {
    return {pairs_.data() + pair_begin_[k], pairs_.data() + pair_begin_[k + 1]};
  }

  // Shift tables used by derivative / antiderivative along variable v:
  // shift(v)[p] is the position of index(p) + e_v, or npos when that index
  // exceeds the order.
  static constexpr std::uint16_t npos = 0xffff;
  std::span<const std::uint16_t> shift(int v) const {
    return {shift_.data() + static_cast<std::size_t>(v) * size(), size()};
  }

  JetLayout(int dim, int order);

 private:
  int dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> degree_begin_;
  std::vector<std::uint16_t> lookup_;
  std::vector<Pair> pairs_;
  std::vector<std::size_t> pair_begin_;
  std::vector<std::uint16_t> shift_;
};

class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int dim, int order);
  /// Jet of the coordinate function x_variable at a point where it equals
  /// `value`. Requires variable < dim and 1 <= order <= kMaxJetOrder.
  static Jet seed(int variable, double value, int dim, int order);

  int dim() const noexcept { return layout_ ? layout_->dim() : 0; }
  int order() const noexcept { return layout_ ? layout_->order() : -1; }
  bool empty() const noexcept { return layout_ == nullptr; }
  const JetLayout& layout() const { return *layout_; }

  double value() const { return c_[0]; }
  std::span<const double> coefficients() const { return c_; }
  std::span<double> coefficients() { return c_; }
  double coefficient(const MultiIndex& b) const;

  /// Raw partial derivative d^b f = b! * c_b.
  double partial(const MultiIndex& b) const;
  /// Partial derivative along the listed variables, e.g. {0, 0, 1}.
  double partial(std::initializer_list<int> vars) const;

  /// d/dx_v; the result has order one lower.
  Jet derivative(int v) const;
  /// Antiderivative along x_v vanishing on the hyperplane through the
  /// expansion point; coefficients beyond the order are dropped.
  Jet antiderivative(int v) const;
  /// Drop every coefficient of degree above `order`.
  Jet truncated(int order) const;
  /// Value-only copy (every derivative zeroed).
  Jet constant_part() const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return (-b) += a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b);

  friend bool operator==(const Jet& a, const Jet& b);

 private:
  Jet(const JetLayout* layout, std::vector<double> c) : layout_(layout), c_(std::move(c)) {}

  const JetLayout* layout_ = nullptr;
  std::vector<double> c_;
};

/// Truncate to `order` if needed (no-op when already at or below it).
Jet at_order(const Jet& a, int order);

/// Univariate composition: sum over m of taylor[m] * (a - a(0))^m, where
/// taylor[m] = f^(m)(a(0)) / m!. Needs at least order + 1 coefficients.
Jet compose(std::span<const double> taylor, const Jet& a);

enum class Elementary { sinh, cosh, exp, log, sqrt, reciprocal, power, sin, cos };

/// Taylor composition f(a) through the order of `a`. `exponent` is used by
/// Elementary::power only. Domain violations throw DomainError.
Jet apply(Elementary f, const Jet& a, double exponent = 0.0);

inline Jet sinh(const Jet& a) { return apply(Elementary::sinh, a); }
inline Jet cosh(const Jet& a) { return apply(Elementary::cosh, a); }
inline Jet exp(const Jet& a) { return apply(Elementary::exp, a); }
inline Jet log(const Jet& a) { return apply(Elementary::log, a); }
inline Jet sqrt(const Jet& a) { return apply(Elementary::sqrt, a); }
inline Jet reciprocal(const Jet& a) { return apply(Elementary::reciprocal, a); }
inline Jet pow(const Jet& a, double p) { return apply(Elementary::power, a, p); }
inline Jet sin(const Jet& a) { return apply(Elementary::sin, a); }
inline Jet cos(const Jet& a) { return apply(Elementary::cos, a); }
Jet square(const Jet& a);

}  // namespace adslab
