#include <cmath>
#include <cstring>
#include <map>
#include <random>

#include "adslab/errors.hpp"
#include "adslab/jet.hpp"
#include "adslab/tensor.hpp"
#include "doctest.h"

using namespace adslab;

namespace {

// Sparse polynomial oracle: exponent vector -> coefficient, expanded about 0.
using Poly = std::map<std::vector<int>, double>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

Poly random_poly(std::mt19937_64& rng, int dim, int max_degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  const auto& layout = JetLayout::get(dim, max_degree);
  for (std::size_t k = 0; k < layout.size(); ++k) {
    std::vector<int> e(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i)] = layout.index(k)[static_cast<std::size_t>(i)];
    p[e] = u(rng);
  }
  return p;
}

// Evaluate a polynomial on jets seeded at the origin.
Jet poly_jet(const Poly& p, int dim, int order) {
  std::vector<Jet> x;
  for (int i = 0; i < dim; ++i) x.push_back(Jet::seed(i, 0.0, dim, order));
  Jet out = Jet::constant(0.0, dim, order);
  for (const auto& [e, c] : p) {
    Jet term = Jet::constant(c, dim, order);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) term = term * x[static_cast<std::size_t>(i)];
    out += term;
  }
  return out;
}

double coefficient_of(const Poly& p, const MultiIndex& b, int dim) {
  std::vector<int> e(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
  auto it = p.find(e);
  return it == p.end() ? 0.0 : it->second;
}

bool same_bits(std::span<const double> a, std::span<const double> b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("layout sizes and graded lexicographic order") {
  CHECK(JetLayout::get(2, 2).size() == 6);
  CHECK(JetLayout::get(3, 3).size() == 20);
  CHECK(JetLayout::get(5, 4).size() == 126);
  const auto& l = JetLayout::get(2, 2);
  // 1, x, y, x^2, xy, y^2
  CHECK(l.index(1)[0] == 1);
  CHECK(l.index(2)[1] == 1);
  CHECK(l.index(3)[0] == 2);
  CHECK((l.index(4)[0] == 1 && l.index(4)[1] == 1));
  CHECK(l.index(5)[1] == 2);
}

TEST_CASE("seed") {
  const Jet x = Jet::seed(0, 2.0, 2, 2);
  CHECK(x.value() == 2.0);
  CHECK(x.partial({0}) == 1.0);
  CHECK(x.partial({1}) == 0.0);
  CHECK(x.partial({0, 0}) == 0.0);

  CHECK_THROWS_AS(Jet::seed(1, 0.0, 1, 2), Error);
  CHECK_THROWS_AS(Jet::seed(0, 0.0, 2, 0), Error);
  CHECK_THROWS_AS(Jet::seed(0, 0.0, 2, 5), Error);

  const Jet y = Jet::seed(0, 1.0, 3, 3);
  CHECK(doctest::Approx((y * y * y).partial({0, 0, 0})) == 6.0);
}

TEST_CASE("products") {
  const Jet ex = Jet::seed(0, 0.0, 2, 2) + 1.0;
  const Jet ey = Jet::seed(1, 0.0, 2, 2) + 1.0;
  const Jet p = ex * ey;
  CHECK(p.value() == 1.0);
  CHECK(p.partial({0}) == 1.0);
  CHECK(p.partial({1}) == 1.0);
  CHECK(p.partial({0, 1}) == 1.0);
  CHECK(p.partial({0, 0}) == 0.0);

  const Jet x = Jet::seed(0, 3.0, 1, 2);
  const Jet sq = x * x;
  CHECK(sq.value() == 9.0);
  CHECK(sq.partial({0}) == 6.0);
  CHECK(sq.partial({0, 0}) == 2.0);

  CHECK_THROWS_AS(Jet::seed(0, 1.0, 2, 2) * Jet::seed(0, 1.0, 2, 3), Error);
  CHECK_THROWS_AS(Jet::seed(0, 1.0, 2, 2) + Jet::seed(0, 1.0, 3, 2), Error);
}

TEST_CASE("product matches symbolic multiplication") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly a = random_poly(rng, 2, 2);
    const Poly b = random_poly(rng, 2, 2);
    const Poly ab = multiply(a, b);
    for (int order = 2; order <= 4; ++order) {
      const Jet j = poly_jet(a, 2, order) * poly_jet(b, 2, order);
      const auto& l = j.layout();
      for (std::size_t k = 0; k < l.size(); ++k)
        CHECK(j.coefficients()[k] == doctest::Approx(coefficient_of(ab, l.index(k), 2)).epsilon(1e-14));
    }
  }
}

TEST_CASE("chain rule exact for polynomial compositions") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick_dim(1, 3);
  std::uniform_int_distribution<int> pick_power(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = pick_dim(rng);
    const int order = 4;
    Poly q = random_poly(rng, dim, 1);
    q[std::vector<int>(static_cast<std::size_t>(dim), 0)] = 1.5;  // value part away from zero
    const int m = pick_power(rng);
    Poly expected = q;
    for (int i = 1; i < m; ++i) expected = multiply(expected, q);
    const Jet composed = pow(poly_jet(q, dim, order), m);
    const auto& l = composed.layout();
    for (std::size_t k = 0; k < l.size(); ++k) {
      const double want = coefficient_of(expected, l.index(k), dim);
      CHECK(std::abs(composed.coefficients()[k] - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("elementary functions") {
  SUBCASE("sinh at 0") {
    const Jet s = sinh(Jet::seed(0, 0.0, 1, 3));
    CHECK(s.partial({}) == 0.0);
    CHECK(s.partial({0}) == doctest::Approx(1.0));
    CHECK(s.partial({0, 0}) == doctest::Approx(0.0));
    CHECK(s.partial({0, 0, 0}) == doctest::Approx(1.0));
  }
  SUBCASE("reciprocal at 2") {
    const Jet r = reciprocal(Jet::seed(0, 2.0, 1, 3));
    CHECK(r.value() == 0.5);
    CHECK(r.partial({0}) == doctest::Approx(-0.25));
    CHECK(r.partial({0, 0}) == doctest::Approx(0.25));
    CHECK(r.partial({0, 0, 0}) == doctest::Approx(-0.375));
  }
  SUBCASE("cosh(sinh(x)) at 0.7 against symbolic derivatives") {
    const Jet j = cosh(sinh(Jet::seed(0, 0.7, 1, 4)));
    const double want[5] = {1.3017895893847870066, 1.0461335836889777180, 2.6831528382703655537,
                            6.4127637398690297824, 20.290759994093038228};
    MultiIndex b{};
    for (int k = 0; k <= 4; ++k) {
      b[0] = static_cast<std::uint8_t>(k);
      CHECK(std::abs(j.partial(b) - want[k]) <= 1e-14 * want[k]);
    }
  }
  SUBCASE("sqrt(1 + x^2) exp(-x) at 0.3 against symbolic derivatives") {
    const Jet x = Jet::seed(0, 0.3, 1, 4);
    const Jet j = sqrt(1.0 + x * x) * exp(-x);
    const double want[5] = {0.77343692913028713977, -0.56056437982837324809, 0.99867821982894832180,
                            -2.6252901467212234332, 4.9259011961461066385};
    MultiIndex b{};
    for (int k = 0; k <= 4; ++k) {
      b[0] = static_cast<std::uint8_t>(k);
      CHECK(std::abs(j.partial(b) - want[k]) <= 1e-13 * std::abs(want[k]));
    }
  }
  SUBCASE("log and exp invert each other") {
    const Jet x = Jet::seed(0, 0.4, 2, 4) + 2.0 * Jet::seed(1, 0.1, 2, 4);
    const Jet back = log(exp(x));
    for (std::size_t k = 0; k < x.coefficients().size(); ++k)
      CHECK(back.coefficients()[k] == doctest::Approx(x.coefficients()[k]).epsilon(1e-14));
  }
  SUBCASE("sin^2 + cos^2 = 1") {
    const Jet x = Jet::seed(0, 1.1, 1, 4);
    const Jet one = sin(x) * sin(x) + cos(x) * cos(x);
    CHECK(one.value() == doctest::Approx(1.0));
    for (std::size_t k = 1; k < one.coefficients().size(); ++k) CHECK(std::abs(one.coefficients()[k]) < 1e-15);
  }
  SUBCASE("domain errors carry the value") {
    const Jet neg = Jet::seed(0, -2.0, 1, 2);
    try {
      (void)sqrt(neg);
      FAIL("expected domain error");
    } catch (const DomainError& e) {
      CHECK(e.value() == -2.0);
      CHECK(e.kind() == ErrorKind::domain);
    }
    CHECK_THROWS_AS(log(neg), DomainError);
    CHECK_THROWS_AS(reciprocal(Jet::seed(0, 0.0, 1, 2)), DomainError);
    CHECK_THROWS_AS(pow(neg, 0.5), DomainError);
    CHECK_NOTHROW(pow(neg, 3.0));
  }
}

TEST_CASE("bitwise invariants") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto random_jet = [&](int dim, int order) {
    Jet j = Jet::constant(0.0, dim, order);
    for (auto& c : j.coefficients()) c = u(rng);
    return j;
  };

  SUBCASE("addition and multiplication commute exactly") {
    for (int t = 0; t < 50; ++t) {
      const Jet a = random_jet(3, 4), b = random_jet(3, 4);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
    }
  }

  SUBCASE("associativity exact on dyadic data, tight otherwise") {
    std::uniform_int_distribution<int> small(-8, 8);
    for (int t = 0; t < 50; ++t) {
      Jet a = Jet::constant(0.0, 2, 3), b = a, c = a;
      for (auto* j : {&a, &b, &c})
        for (auto& x : j->coefficients()) x = small(rng) / 4.0;
      CHECK((a * b) * c == a * (b * c));
      const Jet x = random_jet(2, 3), y = random_jet(2, 3), z = random_jet(2, 3);
      const Jet l = (x * y) * z, r = x * (y * z);
      for (std::size_t k = 0; k < l.coefficients().size(); ++k)
        CHECK(std::abs(l.coefficients()[k] - r.coefficients()[k]) <= 1e-14 * std::max(1.0, std::abs(l.coefficients()[k])));
    }
  }

  SUBCASE("order-K computations reproduce order-(K-1) coefficients bit for bit") {
    for (int t = 0; t < 20; ++t) {
      const double v0 = u(rng), v1 = 1.0 + std::abs(u(rng));
      auto compute = [&](int order) {
        const Jet x = Jet::seed(0, v0, 2, order);
        const Jet y = Jet::seed(1, v1, 2, order);
        return cosh(x * y) * sqrt(y) + exp(x) / (y + x * x) + pow(y, -1.5) * sinh(x);
      };
      for (int order = 2; order <= 4; ++order) {
        const Jet hi = compute(order), lo = compute(order - 1);
        CHECK(same_bits(hi.coefficients(), lo.coefficients(), lo.coefficients().size()));
      }
    }
  }
}

TEST_CASE("derivative, antiderivative and truncation") {
  const Jet x = Jet::seed(0, 0.5, 2, 4);
  const Jet y = Jet::seed(1, -0.2, 2, 4);
  const Jet f = sin(x) * exp(y) + x * x * y;
  const Jet fx = f.derivative(0);
  CHECK(fx.order() == 3);
  CHECK(fx.value() == doctest::Approx(std::cos(0.5) * std::exp(-0.2) + 2 * 0.5 * -0.2));
  CHECK(fx.partial({1}) == doctest::Approx(f.partial({0, 1})));
  CHECK(fx.partial({0, 0, 1}) == doctest::Approx(f.partial({0, 0, 0, 1})));

  const Jet back = fx.truncated(3).antiderivative(0);
  CHECK(back.value() == 0.0);
  const Jet again = back.derivative(0);
  for (std::size_t k = 0; k < again.coefficients().size(); ++k)
    CHECK(again.coefficients()[k] == doctest::Approx(fx.truncated(2).coefficients()[k]));

  CHECK_THROWS_AS(Jet::constant(1.0, 2, 0).derivative(0), Error);
  CHECK_THROWS_AS(x.truncated(2).truncated(3), Error);
}

TEST_CASE("jet matrix inverse and determinant") {
  const int n = 3;
  const Jet x = Jet::seed(0, 0.3, 2, 4);
  const Jet y = Jet::seed(1, 0.7, 2, 4);
  JetMatrix a = JetMatrix::zero(n, 2, 4);
  a(0, 0) = 2.0 + x * y;
  a(0, 1) = a(1, 0) = sin(x);
  a(1, 1) = exp(y);
  a(1, 2) = a(2, 1) = x * x - y;
  a(2, 2) = 3.0 + cos(y);
  a(0, 2) = a(2, 0) = 0.25 * y;

  const JetMatrix ai = inverse(a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(0.0, 2, 4);
      for (int k = 0; k < n; ++k) s += a(i, k) * ai(k, j);
      CHECK(s.value() == doctest::Approx(i == j ? 1.0 : 0.0));
      for (std::size_t k = 1; k < s.coefficients().size(); ++k) CHECK(std::abs(s.coefficients()[k]) < 1e-13);
    }

  // det via cofactor expansion as an independent route
  const Jet cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                  a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  const Jet det = determinant(a);
  for (std::size_t k = 0; k < det.coefficients().size(); ++k)
    CHECK(det.coefficients()[k] == doctest::Approx(cof.coefficients()[k]).epsilon(1e-12));
}
