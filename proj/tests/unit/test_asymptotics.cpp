#include <cmath>
#include <numbers>
#include <vector>

#include "adslab/asymptotics.hpp"
#include "adslab/catalog.hpp"
#include "adslab/errors.hpp"
#include "doctest.h"

using namespace adslab;

namespace {

constexpr double kPi = std::numbers::pi;

const FGGauge& sads3() {
  static const FGGauge fg = to_fg_gauge(make_schwarzschild_ads(3, 1.0));
  return fg;
}

}  // namespace

TEST_CASE("hyperbolic collar reproduces r = 2 exp(-rho)") {
  const auto fg = to_fg_gauge(make_hyperbolic(3));
  REQUIRE(fg.map);
  CHECK(fg.map->r_of_rho(2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-10));
  CHECK(fg.map->r_of_rho(2.0) == doctest::Approx(0.270671).epsilon(1e-6));
  CHECK(fg.map->rho_of_r(0.1) == doctest::Approx(std::log(20.0)).epsilon(1e-11));
  // Componentwise the metric is the AdS FG form.
  const Point p{{0.3, 1.0, 2.0}};
  const auto g = fg.triple.g.at(p, 2);
  const double c = 1.0 - 0.09 / 4.0;
  CHECK(g(1, 1).value() * 0.09 == doctest::Approx(c * c).epsilon(1e-10));
  CHECK(fg.triple.V.at(p, 1).value() == doctest::Approx(1.0 / 0.3 + 0.3 / 4.0).epsilon(1e-10));
  const auto dg = g(1, 1).derivative(0).value();
  CHECK(dg == doctest::Approx(-2.0 * c / 0.3 * (c / 0.09 + 0.5)).epsilon(1e-8));
}

TEST_CASE("AdS in FG form is kept as is") {
  const auto fg = to_fg_gauge(make_ads_fg(3));
  CHECK(fg.identity());
  const auto rule = sphere_rule(2, 4);
  const std::vector<double> radii{0.01, 0.1, 0.2};
  const auto gc = check_gauge(fg, radii, rule);
  CHECK(gc.radial < 1e-12);
  CHECK(gc.cross == 0.0);
  CHECK(gc.h0_positive);
  const auto ma = extract_expansion(fg, rule);
  for (std::size_t k = 0; k < ma.alpha.size(); ++k) {
    CHECK(std::abs(ma.alpha[k]) < 1e-8);
    CHECK(ma.tau[k].cwiseAbs().maxCoeff() < 1e-8);
  }
  const auto mf = mass_functional(ma, rule);
  CHECK(std::abs(mf.scalar_mass) < 1e-7);
  CHECK(mf.inequality);
  CHECK(validate_ah(fg, ma).pass);
  CHECK(check_bm(fg, ma, ma.radii, 1e-8).pass);
}

TEST_CASE("Schwarzschild-AdS gauge condition") {
  const auto& fg = sads3();
  CHECK(fg.default_inner.has_value());
  CHECK(*fg.default_inner < fg.r_max());
  const auto rule = sphere_rule(2, 2);
  std::vector<double> radii;
  for (int k = 0; k <= 10; ++k) radii.push_back(0.01 + 0.019 * k);
  const auto gc = check_gauge(fg, radii, rule);
  CHECK(gc.radial < 1e-8);
  CHECK(gc.cross < 1e-9);
  CHECK(gc.map_residual < 1e-8);
  // r ρ → 1 with the first correction from ρ r = 1 - r²/4 + (M/6) r³.
  const double r = 0.01;
  CHECK(fg.map->rho_of_r(r) * r == doctest::Approx(1.0 - r * r / 4.0 + r * r * r / 6.0).epsilon(1e-9));
}

TEST_CASE("Schwarzschild-AdS mass aspect") {
  const auto& fg = sads3();
  const auto rule = sphere_rule(2, 4);
  const auto ma = extract_expansion(fg, rule);
  CHECK(ma.alpha_mean == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
  CHECK(ma.alpha_spread < 1e-5);
  CHECK(ma.trace_identity < 1e-4);
  CHECK(ma.tau[0](0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-5));

  const auto mf = mass_functional(ma, rule);
  CHECK(mf.scalar_mass == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-5));
  CHECK(mf.vector_mass.norm() < 1e-5 * mf.scalar_mass);
  CHECK(mf.inequality);

  CHECK(check_bm(fg, ma, ma.radii).pass);
  const auto ah = validate_ah(fg, ma);
  CHECK(ah.pass);

  const auto fg2 = to_fg_gauge(make_schwarzschild_ads(3, 2.0));
  const auto ma2 = extract_expansion(fg2, rule);
  CHECK(ma2.alpha_mean / ma.alpha_mean == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("extraction is stable under a halved gauge step") {
  const auto rule = sphere_rule(2, 2);
  const auto a = extract_expansion(sads3(), rule);
  const auto fine = to_fg_gauge(make_schwarzschild_ads(3, 1.0), FGOptions{0.5e-4});
  const auto b = extract_expansion(fine, rule);
  CHECK(std::abs(a.alpha_mean - b.alpha_mean) < 1e-6 * std::abs(a.alpha_mean));
}

TEST_CASE("Schwarzschild-AdS in four dimensions") {
  const auto fg = to_fg_gauge(make_schwarzschild_ads(4, 1.0));
  const auto rule = sphere_rule(3, 2);
  const auto ma = extract_expansion(fg, rule);
  CHECK(ma.alpha_mean == doctest::Approx(-0.75).epsilon(1e-5));
  CHECK(ma.trace_identity < 1e-4);
  CHECK(check_bm(fg, ma, ma.radii).pass);
}

TEST_CASE("torus infinity") {
  const auto w = soliton_slice(4, 1.0);
  StaticTriple s;
  s.n = 4;
  s.profile = w;
  CHECK_THROWS_AS(to_fg_gauge(s), Error);
  try {
    to_fg_gauge(s);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_topology);
    CHECK(std::string(e.what()).find("conformal infinity is not a sphere") != std::string::npos);
  }
  const auto fg = collar_gauge(w, 4, "ads-soliton", {{"r0", 1.0}});
  const auto rule = section_rule(*fg.triple.profile, 2);
  ExtractionOptions loose;
  loose.fit_tolerance = INFINITY;
  const auto ma = extract_expansion(fg, rule, loose);
  const auto ah = validate_ah(fg, ma);
  CHECK_FALSE(ah.pass);
  REQUIRE_FALSE(ah.notes.empty());
  CHECK(ah.notes.front().find("(i)") != std::string::npos);
}

TEST_CASE("mass identity on Schwarzschild-AdS") {
  const auto& fg = sads3();
  const auto rule = sphere_rule(2, 2);
  const auto ma = extract_expansion(fg, rule);
  CHECK_THROWS_AS(mass_identity_check(fg.triple, 0.05, std::nullopt, 1, 0.0), Error);
  const auto m = mass_identity(fg, ma, rule, 0.05, 2);
  CHECK(m.fg_limit == doctest::Approx(-4.0 * kPi).epsilon(1e-5));
  CHECK(m.bulk.refined > 0.0);
  CHECK(m.outer_boundary.refined < 0.0);
  CHECK(m.inner_boundary.refined > 0.0);
  CHECK(m.balance < 1e-5);
}

TEST_CASE("validate_ah detects a wrong tau") {
  const auto& fg = sads3();
  const auto rule = sphere_rule(2, 2);
  auto ma = extract_expansion(fg, rule);
  for (auto& t : ma.tau) t.setZero();
  const auto ah = validate_ah(fg, ma);
  CHECK_FALSE(ah.pass);
  bool flagged = false;
  for (const auto& note : ah.notes) flagged = flagged || note.find("(ii)") != std::string::npos;
  CHECK(flagged);
}
