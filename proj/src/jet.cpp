#include "adslab/jet.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "adslab/errors.hpp"

namespace adslab {

int degree(const MultiIndex& b) {
  int d = 0;
  for (auto e : b) d += e;
  return d;
}

namespace {

void enumerate_degree(int dim, int var, int remaining, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
  if (var == dim - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
    out.push_back(current);
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, var + 1, remaining - e, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

std::size_t encode(const MultiIndex& b, int dim, int order) {
  std::size_t key = 0;
  for (int l = dim - 1; l >= 0; --l) key = key * static_cast<std::size_t>(order + 1) + b[static_cast<std::size_t>(l)];
  return key;
}

struct LayoutRegistry {
  std::unique_ptr<JetLayout> table[kMaxJetDim + 1][kMaxJetOrder + 1];

  LayoutRegistry() {
    for (int d = 1; d <= kMaxJetDim; ++d)
      for (int k = 0; k <= kMaxJetOrder; ++k) table[d][k] = std::make_unique<JetLayout>(d, k);
  }
};

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

void require_same_layout(const Jet& a, const Jet& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::invalid_argument, "arithmetic on an empty jet");
  if (&a.layout() != &b.layout())
    fail(ErrorKind::invalid_argument,
         "jet layouts differ (dim " + std::to_string(a.dim()) + "/" + std::to_string(b.dim()) +
             ", order " + std::to_string(a.order()) + "/" + std::to_string(b.order()) + ")");
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  MultiIndex current{};
  degree_begin_.reserve(static_cast<std::size_t>(order) + 2);
  for (int d = 0; d <= order; ++d) {
    degree_begin_.push_back(indices_.size());
    enumerate_degree(dim, 0, d, current, indices_);
  }
  degree_begin_.push_back(indices_.size());

  std::size_t span = 1;
  for (int l = 0; l < dim; ++l) span *= static_cast<std::size_t>(order + 1);
  lookup_.assign(span, npos);
  for (std::size_t p = 0; p < indices_.size(); ++p)
    lookup_[encode(indices_[p], dim, order)] = static_cast<std::uint16_t>(p);

  pair_begin_.push_back(0);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const auto& bk = indices_[k];
    const int dk = adslab::degree(bk);
    for (std::size_t i = 0; i < degree_begin_[static_cast<std::size_t>(dk) + 1]; ++i) {
      const auto& bi = indices_[i];
      MultiIndex rest{};
      bool fits = true;
      for (int l = 0; l < dim; ++l) {
        auto u = static_cast<std::size_t>(l);
        if (bi[u] > bk[u]) {
          fits = false;
          break;
        }
        rest[u] = static_cast<std::uint8_t>(bk[u] - bi[u]);
      }
      if (!fits) continue;
      const std::size_t j = lookup_[encode(rest, dim, order)];
      if (i <= j) pairs_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)});
    }
    pair_begin_.push_back(pairs_.size());
  }

  shift_.assign(static_cast<std::size_t>(dim) * indices_.size(), npos);
  for (int v = 0; v < dim; ++v) {
    for (std::size_t p = 0; p < indices_.size(); ++p) {
      MultiIndex b = indices_[p];
      if (adslab::degree(b) >= order) continue;
      b[static_cast<std::size_t>(v)]++;
      shift_[static_cast<std::size_t>(v) * indices_.size() + p] = lookup_[encode(b, dim, order)];
    }
  }
}

const JetLayout& JetLayout::get(int dim, int order) {
  static const LayoutRegistry registry;
  if (dim < 1 || dim > kMaxJetDim)
    fail(ErrorKind::invalid_argument, "jet dimension " + std::to_string(dim) + " outside [1, " +
                                          std::to_string(kMaxJetDim) + "]");
  if (order < 0 || order > kMaxJetOrder)
    fail(ErrorKind::invalid_argument, "jet order " + std::to_string(order) + " outside [0, " +
                                          std::to_string(kMaxJetOrder) + "]");
  return *registry.table[dim][order];
}

std::size_t JetLayout::position(const MultiIndex& b) const {
  for (int l = dim_; l < kMaxJetDim; ++l)
    if (b[static_cast<std::size_t>(l)] != 0) fail(ErrorKind::invalid_argument, "multi-index exceeds jet dimension");
  if (adslab::degree(b) > order_) fail(ErrorKind::order, "multi-index degree exceeds jet order");
  return lookup_[encode(b, dim_, order_)];
}

Jet Jet::constant(double value, int dim, int order) {
  const auto& layout = JetLayout::get(dim, order);
  std::vector<double> c(layout.size(), 0.0);
  c[0] = value;
  return Jet(&layout, std::move(c));
}

Jet Jet::seed(int variable, double value, int dim, int order) {
  if (order < 1 || order > kMaxJetOrder)
    fail(ErrorKind::invalid_argument, "seed order " + std::to_string(order) + " outside [1, 4]");
  if (variable < 0 || variable >= dim)
    fail(ErrorKind::invalid_argument,
         "seed variable " + std::to_string(variable) + " not below dimension " + std::to_string(dim));
  Jet j = constant(value, dim, order);
  j.c_[1 + static_cast<std::size_t>(variable)] = 1.0;
  return j;
}

double Jet::coefficient(const MultiIndex& b) const { return c_[layout_->position(b)]; }

double Jet::partial(const MultiIndex& b) const {
  double scale = 1.0;
  for (auto e : b) scale *= factorial(e);
  return scale * coefficient(b);
}

double Jet::partial(std::initializer_list<int> vars) const {
  MultiIndex b{};
  for (int v : vars) {
    if (v < 0 || v >= dim()) fail(ErrorKind::invalid_argument, "partial: variable out of range");
    b[static_cast<std::size_t>(v)]++;
  }
  return partial(b);
}

Jet Jet::derivative(int v) const {
  if (empty()) fail(ErrorKind::invalid_argument, "derivative of an empty jet");
  if (order() < 1) fail(ErrorKind::order, "derivative of an order-0 jet");
  if (v < 0 || v >= dim()) fail(ErrorKind::invalid_argument, "derivative: variable out of range");
  const auto& out_layout = JetLayout::get(dim(), order() - 1);
  const auto shift = layout_->shift(v);
  std::vector<double> out(out_layout.size());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = (out_layout.index(p)[static_cast<std::size_t>(v)] + 1) * c_[shift[p]];
  return Jet(&out_layout, std::move(out));
}

Jet Jet::antiderivative(int v) const {
  if (empty()) fail(ErrorKind::invalid_argument, "antiderivative of an empty jet");
  if (v < 0 || v >= dim()) fail(ErrorKind::invalid_argument, "antiderivative: variable out of range");
  const auto shift = layout_->shift(v);
  std::vector<double> out(c_.size(), 0.0);
  const std::size_t limit = layout_->degree_begin(order());
  for (std::size_t p = 0; p < limit; ++p)
    out[shift[p]] = c_[p] / (layout_->index(p)[static_cast<std::size_t>(v)] + 1);
  return Jet(layout_, std::move(out));
}

Jet Jet::truncated(int order) const {
  if (empty()) fail(ErrorKind::invalid_argument, "truncating an empty jet");
  if (order > this->order())
    fail(ErrorKind::order, "cannot raise jet order " + std::to_string(this->order()) + " to " +
                               std::to_string(order));
  const auto& out_layout = JetLayout::get(dim(), order);
  return Jet(&out_layout, std::vector<double>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(out_layout.size())));
}

Jet Jet::constant_part() const { return constant(value(), dim(), order()); }

Jet at_order(const Jet& a, int order) { return a.order() > order ? a.truncated(order) : a; }

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_layout(*this, rhs);
  for (std::size_t p = 0; p < c_.size(); ++p) c_[p] += rhs.c_[p];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_layout(*this, rhs);
  for (std::size_t p = 0; p < c_.size(); ++p) c_[p] -= rhs.c_[p];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet& Jet::operator+=(double rhs) {
  c_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) {
  c_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (auto& x : c_) x *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  for (auto& x : c_) x /= rhs;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_layout(a, b);
  const auto& layout = *a.layout_;
  std::vector<double> out(layout.size());
  const double* x = a.c_.data();
  const double* y = b.c_.data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (const auto& p : layout.product_pairs(k)) {
      if (p.i == p.j)
        s += x[p.i] * y[p.i];
      else
        s += x[p.i] * y[p.j] + x[p.j] * y[p.i];
    }
    out[k] = s;
  }
  return Jet(&layout, std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

bool operator==(const Jet& a, const Jet& b) { return a.layout_ == b.layout_ && a.c_ == b.c_; }

Jet square(const Jet& a) { return a * a; }

namespace {

// Taylor coefficients f^(m)(x0) / m!, m = 0..order.
std::vector<double> taylor_coefficients(Elementary f, double x0, int order, double p) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  auto power_series = [&](double exponent) {
    double binom = 1.0;
    for (int m = 0; m <= order; ++m) {
      c[static_cast<std::size_t>(m)] = binom == 0.0 ? 0.0 : binom * std::pow(x0, exponent - m);
      binom *= (exponent - m) / (m + 1);
    }
  };
  switch (f) {
    case Elementary::exp: {
      const double e = std::exp(x0);
      for (int m = 0; m <= order; ++m) c[static_cast<std::size_t>(m)] = e / factorial(m);
      break;
    }
    case Elementary::sinh:
    case Elementary::cosh: {
      const double s = std::sinh(x0), ch = std::cosh(x0);
      const bool odd_is_cosh = f == Elementary::sinh;
      for (int m = 0; m <= order; ++m) {
        const bool even = m % 2 == 0;
        const double d = (even == odd_is_cosh) ? s : ch;
        c[static_cast<std::size_t>(m)] = d / factorial(m);
      }
      break;
    }
    case Elementary::sin:
    case Elementary::cos: {
      const double s = std::sin(x0), co = std::cos(x0);
      // derivative cycle of sin: sin, cos, -sin, -cos
      const double cycle[4] = {s, co, -s, -co};
      const int offset = f == Elementary::sin ? 0 : 1;
      for (int m = 0; m <= order; ++m)
        c[static_cast<std::size_t>(m)] = cycle[(m + offset) % 4] / factorial(m);
      break;
    }
    case Elementary::log: {
      if (!(x0 > 0.0)) throw DomainError("log of a jet with non-positive value", x0);
      c[0] = std::log(x0);
      for (int m = 1; m <= order; ++m)
        c[static_cast<std::size_t>(m)] = ((m % 2 == 1) ? 1.0 : -1.0) / (m * std::pow(x0, m));
      break;
    }
    case Elementary::sqrt:
      if (!(x0 > 0.0)) throw DomainError("sqrt of a jet with non-positive value", x0);
      power_series(0.5);
      break;
    case Elementary::reciprocal:
      if (x0 == 0.0 || !std::isfinite(x0)) throw DomainError("reciprocal of a jet with zero value", x0);
      power_series(-1.0);
      break;
    case Elementary::power: {
      const bool integral = std::floor(p) == p;
      if (!integral && !(x0 > 0.0)) throw DomainError("non-integer power of a non-positive jet", x0);
      if (integral && p < 0.0 && x0 == 0.0) throw DomainError("negative power of a jet with zero value", x0);
      power_series(p);
      break;
    }
  }
  return c;
}

}  // namespace

Jet compose(std::span<const double> taylor, const Jet& a) {
  if (a.empty()) fail(ErrorKind::invalid_argument, "composition with an empty jet");
  const int order = a.order();
  if (taylor.size() < static_cast<std::size_t>(order + 1))
    fail(ErrorKind::order, "composition needs " + std::to_string(order + 1) + " Taylor coefficients");
  Jet result = Jet::constant(taylor[0], a.dim(), order);
  if (order == 0) return result;
  Jet t = a;
  t -= a.value();
  Jet power = t;
  result += taylor[1] * power;
  for (int m = 2; m <= order; ++m) {
    power = power * t;
    result += taylor[static_cast<std::size_t>(m)] * power;
  }
  return result;
}

Jet apply(Elementary f, const Jet& a, double exponent) {
  if (a.empty()) fail(ErrorKind::invalid_argument, "elementary function of an empty jet");
  return compose(taylor_coefficients(f, a.value(), a.order(), exponent), a);
}

}  // namespace adslab
