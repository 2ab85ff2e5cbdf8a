#include <cmath>

#include "adslab/catalog.hpp"
#include "adslab/errors.hpp"
#include "adslab/numerics.hpp"
#include "adslab/verify.hpp"
#include "doctest.h"

using namespace adslab;

namespace {

// Diagonal metric that is neither Einstein nor conformally flat.
MetricField lumpy3() {
  return {Chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}), [](Coordinates c) {
            return diagonal_matrix({1.0 + 0.3 * c[1] * c[1], 1.0 + 0.2 * c[0] * c[2], exp(0.4 * c[0])});
          }};
}

}  // namespace

TEST_CASE("static equations on catalog vacua") {
  for (const auto& s : {make_hyperbolic(3), make_hyperbolic(4), make_ads_fg(3), make_schwarzschild_ads(3, 1.0),
                        make_schwarzschild_ads(4, 2.0)}) {
    for (const auto& p : halton_points(s.g.chart, 10)) {
      const auto r = residual_static(s, p);
      CHECK(r.f1 < 1e-9);
      CHECK(r.f2 < 1e-9);
    }
  }
  // Flat space: Ric + 3g = 3g, V constant.
  const auto flat = make_flat_polar(3);
  const auto r = residual_static(flat, Point{{1.0, 1.0, 1.0}});
  CHECK(r.f1 == doctest::Approx(3.0));
  CHECK(r.f2 == doctest::Approx(3.0));
}

TEST_CASE("einstein tensor vanishes two ways on vacua") {
  const auto s = make_schwarzschild_ads(3, 1.0);
  const auto e = einstein_tensor(s, Point{{2.0, 1.0, 1.0}});
  CHECK((e.geom - e.lapse).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(e.geom.cwiseAbs().maxCoeff() > 0.1);
  const auto a = einstein_tensor(make_hyperbolic(3), Point{{1.0, 1.0, 1.0}});
  CHECK(a.geom.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.lapse.cwiseAbs().maxCoeff() < 1e-12);
  const auto f = einstein_tensor(make_flat_polar(3), Point{{2.0, 1.0, 1.0}});
  CHECK(f.geom(0, 0) == doctest::Approx(2.0));
  CHECK(f.lapse(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("Bach tensor") {
  CHECK(bach_tensor(make_hyperbolic(3).g, Point{{1.0, 1.0, 1.0}}).max_abs() < 1e-9);
  CHECK(bach_tensor(make_schwarzschild_ads(3, 1.0).g, Point{{2.0, 1.0, 1.0}}).max_abs() < 1e-9);
  CHECK(bach_tensor(lumpy3(), Point{{0.2, 0.3, -0.1}}).max_abs() > 1e-3);

  const auto b = bach_static_formula(make_schwarzschild_ads(3, 1.0), Point{{2.0, 1.0, 1.0}});
  CHECK(b.residual < 1e-8);
  CHECK_THROWS_AS(bach_static_formula(make_flat_polar(3), Point{{1.0, 1.0, 1.0}}), Error);
}

TEST_CASE("3d Riemann from Ricci on a generic metric") {
  const auto d = riemann_from_ricci_3d(lumpy3(), Point{{0.2, 0.3, -0.1}});
  CHECK(d.residual < 1e-9);
  CHECK(d.direct.max_abs() > 1e-3);
}

TEST_CASE("Lindblom identity on Schwarzschild-AdS") {
  const auto s = make_schwarzschild_ads(3, 1.0);
  const auto t = check_lindblom(s, Point{{2.0, 1.0, 1.0}});
  // Closed form 2M/r + M²/(4r⁴) at r = 2.
  CHECK(std::abs(t.W - t.W0 - 1.015625) < 1e-12);
  CHECK(t.residual < 1e-8);
  CHECK(t.bach_term < 1e-12);
  CHECK(t.grad_term > 0.1);

  const auto pts = halton_points(s.g.chart.with_interval(0, {1.5, 6.0}), 20, 1, 0.0);
  const auto fit = fit_lindblom(s, pts);
  CHECK(fit.grad_identifiable);
  CHECK_FALSE(fit.bach_identifiable);
  CHECK(fit.grad_coefficient == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(fit.residual < 1e-8);

  CHECK_THROWS_AS(check_lindblom(make_hyperbolic(3), Point{{1e-9, 1.0, 1.0}}, 1e-8), Error);
}

TEST_CASE("Bochner: the minus variant holds") {
  const auto h = check_bochner(make_hyperbolic(3), Point{{1.0, 1.0, 1.0}});
  CHECK(std::abs(h.lhs) < 1e-10);
  CHECK(std::abs(h.rhs_minus) < 1e-10);
  CHECK(h.rhs_plus == doctest::Approx(24.0 * std::cosh(1.0) * std::cosh(1.0)).epsilon(1e-12));
  CHECK(h.rhs_plus == doctest::Approx(57.146).epsilon(1e-5));

  const auto s = make_schwarzschild_ads(3, 1.0);
  for (const auto& p : halton_points(s.g.chart, 10)) {
    const auto b = check_bochner(s, p);
    CHECK(relative_gap(b.lhs, b.rhs_minus) < 1e-8);
  }
}

TEST_CASE("max principle scalar") {
  CHECK(std::abs(max_principle_scalar(make_hyperbolic(3), Point{{1.0, 1.0, 1.0}})) < 1e-12);
  // u = 2M/r + M²/(4r⁴) - M/r ... closed form for n = 3: f'²/4 - f + 1
  const double r = 2.0;
  const double f = 1.0 + r * r - 1.0 / r;
  const double fp = 2.0 * r + 1.0 / (r * r);
  CHECK(max_principle_scalar(make_schwarzschild_ads(3, 1.0), Point{{r, 1.0, 1.0}}) ==
        doctest::Approx(fp * fp / 4.0 - f + 1.0).epsilon(1e-13));
}

TEST_CASE("Fermat metric of AdS") {
  const auto s = make_ads_fg(3);
  const auto d = fermat_check(s, 8);
  CHECK(d.max_abs_rbar < 1e-7);
  CHECK(d.boundary_metric_deviation < 1e-4);
  CHECK(std::abs(d.hbar_limit - 2.0) < 1e-4);
  for (const auto& r : d.reports) CHECK(r.pass);
  for (const auto& fs : d.samples)
    if (fs.eps == 0.1) CHECK(fs.phi == doctest::Approx(1.1025).epsilon(1e-14));
  CHECK_THROWS_AS(fermat_check(make_hyperbolic(3), 4), Error);
}

TEST_CASE("Fermat scalar curvature of a vacuum is -n(n-1)u") {
  // Negative wherever u > 0, which holds throughout Schwarzschild-AdS.
  const auto s = make_schwarzschild_ads(3, 1.0);
  for (const auto& p : halton_points(s.g.chart, 10)) {
    const auto c = conformal_scalar(s.g, s.V, p);
    const double u = max_principle_scalar(s, p);
    CHECK(u > 0.0);
    CHECK(c.direct_value == doctest::Approx(-6.0 * u).epsilon(1e-9));
    CHECK(c.formula_value == doctest::Approx(-6.0 * u).epsilon(1e-9));
  }
}
