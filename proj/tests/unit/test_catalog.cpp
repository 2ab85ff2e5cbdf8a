#include <cmath>
#include <string>

#include "adslab/catalog.hpp"
#include "adslab/errors.hpp"
#include "adslab/verify.hpp"
#include "doctest.h"

using namespace adslab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double value(const JetMatrix& g, int i, int j) { return g(i, j).value(); }

// Bisection on 1 + r² - M r^{2-n}, independent of the library root finder.
double bisect_horizon(int n, double m) {
  auto f = [n, m](double r) { return 1.0 + r * r - m * std::pow(r, 2 - n); };
  double lo = 1e-6, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("hyperbolic metric components") {
  const auto s = make_hyperbolic(3);
  const Point p{{1.0, 1.0, 0.5}};
  const auto g = s.g.at(p, 1);
  CHECK(value(g, 0, 0) == doctest::Approx(1.0));
  CHECK(value(g, 1, 1) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  CHECK(value(g, 1, 1) == doctest::Approx(1.38109).epsilon(1e-5));
  CHECK(value(g, 2, 2) == doctest::Approx(std::pow(std::sinh(1.0) * std::sin(1.0), 2)).epsilon(1e-14));
  CHECK(s.V.at(p, 1).value() == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
}

TEST_CASE("AdS in FG form") {
  const auto s = make_ads_fg(3);
  const Point p{{0.1, 1.0, 1.0}};
  CHECK(s.V.at(p, 1).value() == doctest::Approx(10.025).epsilon(1e-14));
  CHECK(s.profile->fg_form);
  const auto g = s.g.at(p, 1);
  CHECK(value(g, 0, 0) * 0.01 == doctest::Approx(1.0).epsilon(1e-14));
  const double h = std::pow(1.0 - 0.0025, 2);
  CHECK(value(g, 1, 1) * 0.01 == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("Schwarzschild-AdS and its horizon") {
  const auto s = make_schwarzschild_ads(3, 1.0);
  const Point p{{2.0, 1.0, 1.0}};
  CHECK(1.0 / value(s.g.at(p, 1), 0, 0) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(s.V.at(p, 1).value() == doctest::Approx(2.1213203).epsilon(1e-7));
  const double rh = schwarzschild_ads_horizon(3, 1.0);
  CHECK(rh == doctest::Approx(0.682328).epsilon(1e-6));
  CHECK(rh == doctest::Approx(bisect_horizon(3, 1.0)).epsilon(1e-12));
  CHECK(schwarzschild_ads_horizon(4, 2.0) == doctest::Approx(bisect_horizon(4, 2.0)).epsilon(1e-12));
  CHECK(s.profile->inner_boundary);
  CHECK(s.g.chart.interval(0).lo == doctest::Approx(rh + 1e-3));
  CHECK_THROWS_AS(make_schwarzschild_ads(3, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(make_schwarzschild_ads(3, -1.0), Error);
}

TEST_CASE("soliton warp and period") {
  const auto m = make_ads_soliton(4, 1.0);
  const Point p{{0.0, 2.0, 0.3, 1.0, 1.0}};
  const auto g = m.metric.at(p, 1);
  CHECK(value(g, 2, 2) == doctest::Approx(3.75).epsilon(1e-14));
  CHECK(value(g, 1, 1) == doctest::Approx(1.0 / 3.75).epsilon(1e-14));
  CHECK(value(g, 0, 0) == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(m.metadata.at("phi_period") == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(residual_einstein_spacetime(m.metric, p) < 1e-9);
}

TEST_CASE("doubled AdS at r = 0.2") {
  const auto d = doubled_riemannian(make_ads_fg(3));
  const Point p{{1.0, 0.2, 1.0, 1.0}};
  const auto g = d.metric.at(p, 1);
  CHECK(value(g, 0, 0) * 0.04 == doctest::Approx(1.0201).epsilon(1e-14));
  CHECK(d.theta_period == doctest::Approx(2.0 * kPi));
}

TEST_CASE("spacetime form carries -V^2") {
  const auto s = make_schwarzschild_ads(3, 1.0);
  const auto m = spacetime_metric(s);
  const Point p{{0.0, 2.0, 1.0, 1.0}};
  CHECK(value(m.metric.at(p, 1), 0, 0) == doctest::Approx(-4.5).epsilon(1e-14));
  CHECK(residual_einstein_spacetime(m.metric, p) < 1e-9);
}

TEST_CASE("catalog lookup") {
  CHECK(make_triple("schwarzschild-ads", 3, {{"M", 2.0}}).params.at("M") == 2.0);
  CHECK_THROWS_AS(make_triple("nope", 3, {}), Error);
  CHECK_THROWS_AS(make_triple("ads-fg", 3, {{"M", 1.0}}), Error);
  CHECK_THROWS_AS(make_triple("hyperbolic", 7, {}), Error);
  try {
    make_triple("ads-soliton", 4, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Lorentzian only; no static triple") != std::string::npos);
  }
  bool soliton_flagged = false;
  for (const auto& e : catalog_entries())
    if (e.id == "ads-soliton") soliton_flagged = !e.static_triple;
  CHECK(soliton_flagged);
}

TEST_CASE("n = 2 charts work") {
  const auto s = make_hyperbolic(2);
  const Point p{{1.0, 2.0}};
  CHECK(value(s.g.at(p, 1), 1, 1) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)));
  const auto r = residual_static(s, p);
  CHECK(r.f1 < 1e-12);
  CHECK(r.f2 < 1e-12);
}
