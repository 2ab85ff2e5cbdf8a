#include "adslab/catalog.hpp"

#include <cmath>
#include <numbers>

#include "adslab/errors.hpp"

namespace adslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHorizonMargin = 1e-3;

void require_dimension(int n) {
  if (n < 2 || n > 5) fail(ErrorKind::dimension, "spatial dimension must lie in [2, 5], got " + std::to_string(n));
}

Jet one_like(const Jet& x) { return Jet::constant(1.0, x.dim(), x.order()); }

Params checked(const Params& given, const Params& defaults, const std::string& id) {
  Params out = defaults;
  for (const auto& [k, v] : given) {
    if (!defaults.contains(k)) fail(ErrorKind::invalid_argument, "metric " + id + " has no parameter " + k);
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "parameter " + k + " is not finite");
    out[k] = v;
  }
  return out;
}

}  // namespace

Jet sphere_factor(Coordinates section, int a) {
  Jet f = one_like(section[0]);
  for (int b = 0; b < a; ++b) {
    const Jet s = sin(section[static_cast<std::size_t>(b)]);
    f = f * s * s;
  }
  return f;
}

std::vector<Interval> sphere_section_domain(int n) {
  std::vector<Interval> d(static_cast<std::size_t>(n - 2), Interval{0.0, kPi});
  d.push_back({0.0, 2.0 * kPi});
  return d;
}

std::vector<std::string> sphere_section_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n - 2; ++i) names.push_back("theta" + std::to_string(i));
  names.push_back("phi");
  return names;
}

MetricField warped_metric(const WarpedProfile& w, std::string radial_name) {
  std::vector<std::string> names{std::move(radial_name)};
  std::vector<Interval> domain{w.radial_domain};
  for (std::size_t a = 0; a < w.section_domain.size(); ++a) {
    names.push_back(w.topology == SectionTopology::sphere ? sphere_section_names(static_cast<int>(w.section_domain.size()) + 1)[a]
                                                          : (a == 0 ? "phi" : "x" + std::to_string(a)));
    domain.push_back(w.section_domain[a]);
  }
  MetricField g;
  g.chart = Chart(std::move(names), std::move(domain));
  g.fn = [w](Coordinates x) {
    std::vector<Jet> diag{w.radial(x[0])};
    const auto section = x.subspan(1);
    for (std::size_t a = 0; a < w.warps.size(); ++a) {
      Jet c = w.warps[a](x[0]);
      if (w.topology == SectionTopology::sphere) c = c * sphere_factor(section, static_cast<int>(a));
      diag.push_back(std::move(c));
    }
    return diagonal_matrix(diag);
  };
  return g;
}

ScalarField warped_lapse(const WarpedProfile& w, const Chart& chart) {
  return {chart, [lapse = w.lapse](Coordinates x) { return lapse(x[0]); }};
}

StaticTriple warped_triple(const WarpedProfile& w, int n, std::string label, Params params) {
  StaticTriple s;
  s.n = n;
  s.g = warped_metric(w);
  s.V = warped_lapse(w, s.g.chart);
  s.label = std::move(label);
  s.params = std::move(params);
  s.profile = w;
  return s;
}

StaticTriple make_hyperbolic(int n, double r_max) {
  require_dimension(n);
  if (!(r_max > 0.0)) fail(ErrorKind::invalid_argument, "r_max must be positive");
  WarpedProfile w;
  w.radial = [](const Jet& r) { return one_like(r); };
  w.warps.assign(static_cast<std::size_t>(n - 1), [](const Jet& r) { return square(sinh(r)); });
  w.lapse = [](const Jet& r) { return cosh(r); };
  w.radial_domain = {0.0, r_max};
  w.section_domain = sphere_section_domain(n);
  return warped_triple(w, n, "hyperbolic", {{"r_max", r_max}});
}

StaticTriple make_ads_fg(int n) {
  require_dimension(n);
  WarpedProfile w;
  w.radial = [](const Jet& r) { return reciprocal(r * r); };
  w.warps.assign(static_cast<std::size_t>(n - 1), [](const Jet& r) { return square((1.0 - r * r / 4.0) / r); });
  w.lapse = [](const Jet& r) { return 1.0 / r + r / 4.0; };
  w.radial_domain = {0.0, 2.0};
  w.section_domain = sphere_section_domain(n);
  w.fg_form = true;
  return warped_triple(w, n, "ads-fg", {});
}

double schwarzschild_ads_horizon(int n, double mass) {
  auto f = [n, mass](double r) { return 1.0 + r * r - mass * std::pow(r, 2 - n); };
  if (mass <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  if (n == 2) {
    if (mass <= 1.0) return 0.0;
  } else {
    lo = hi;
    while (f(lo) > 0.0) lo *= 0.5;
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

StaticTriple make_schwarzschild_ads(int n, double mass, double r_max) {
  require_dimension(n);
  if (!(mass >= 0.0)) fail(ErrorKind::invalid_argument, "mass parameter must be nonnegative");
  const double rh = schwarzschild_ads_horizon(n, mass);
  const double lo = rh + kHorizonMargin;
  if (r_max <= lo) throw DomainError("outer radius at or below the horizon margin", r_max);
  WarpedProfile w;
  const double p = 2.0 - n;
  auto f = [mass, p](const Jet& r) { return 1.0 + r * r - mass * pow(r, p); };
  w.radial = [f](const Jet& r) { return reciprocal(f(r)); };
  w.warps.assign(static_cast<std::size_t>(n - 1), [](const Jet& r) { return r * r; });
  w.lapse = [f](const Jet& r) { return sqrt(f(r)); };
  w.radial_domain = {lo, r_max};
  w.section_domain = sphere_section_domain(n);
  w.inner_boundary = rh > 0.0;
  w.horizon = rh;
  return warped_triple(w, n, "schwarzschild-ads", {{"M", mass}, {"r_max", r_max}});
}

StaticTriple make_flat_polar(int n, double r_max) {
  require_dimension(n);
  if (!(r_max > 0.0)) fail(ErrorKind::invalid_argument, "r_max must be positive");
  WarpedProfile w;
  w.radial = [](const Jet& r) { return one_like(r); };
  w.warps.assign(static_cast<std::size_t>(n - 1), [](const Jet& r) { return r * r; });
  w.lapse = [](const Jet& r) { return one_like(r); };
  w.radial_domain = {0.0, r_max};
  w.section_domain = sphere_section_domain(n);
  return warped_triple(w, n, "flat", {{"r_max", r_max}});
}

WarpedProfile soliton_slice(int n, double r0, double r_max) {
  require_dimension(n);
  if (!(r0 > 0.0)) fail(ErrorKind::invalid_argument, "r0 must be positive");
  if (r_max <= r0 + kHorizonMargin) throw DomainError("outer radius at or below r0", r_max);
  const double r0n = std::pow(r0, n);
  const double nn = n;
  auto v = [r0n, nn](const Jet& r) { return r * r * (1.0 - r0n * pow(r, -nn)); };
  WarpedProfile w;
  w.topology = SectionTopology::torus;
  w.radial = [v](const Jet& r) { return reciprocal(v(r)); };
  w.warps.push_back(v);
  for (int a = 1; a < n - 1; ++a) w.warps.push_back([](const Jet& r) { return r * r; });
  w.lapse = [](const Jet& r) { return r; };
  w.radial_domain = {r0 + kHorizonMargin, r_max};
  w.section_domain.push_back({0.0, 4.0 * kPi / (n * r0)});
  for (int a = 1; a < n - 1; ++a) w.section_domain.push_back({0.0, 2.0 * kPi});
  return w;
}

LorentzMetric make_ads_soliton(int n, double r0, double r_max) {
  const WarpedProfile slice = soliton_slice(n, r0, r_max);
  std::vector<std::string> names{"t", "r", "phi"};
  for (int a = 1; a < n - 1; ++a) names.push_back("x" + std::to_string(a));
  std::vector<Interval> domain{{-1.0, 1.0}, slice.radial_domain};
  for (const auto& iv : slice.section_domain) domain.push_back(iv);
  std::vector<int> signature(names.size(), 1);
  signature[0] = -1;

  LorentzMetric m;
  m.metric.chart = Chart(std::move(names), std::move(domain), std::move(signature));
  m.metric.fn = [slice](Coordinates x) {
    const Jet& r = x[1];
    std::vector<Jet> diag{-(r * r), slice.radial(r)};
    for (const auto& w : slice.warps) diag.push_back(w(r));
    return diagonal_matrix(diag);
  };
  m.label = "ads-soliton";
  m.params = {{"r0", r0}, {"r_max", r_max}};
  m.metadata = {{"phi_period", 4.0 * kPi / (n * r0)}};
  m.spatial = slice;
  return m;
}

LorentzMetric spacetime_metric(const StaticTriple& s) {
  std::vector<std::string> names{"t"};
  std::vector<Interval> domain{{-1.0, 1.0}};
  for (int i = 0; i < s.g.chart.dim(); ++i) {
    names.push_back(s.g.chart.names()[static_cast<std::size_t>(i)]);
    domain.push_back(s.g.chart.interval(i));
  }
  std::vector<int> signature(names.size(), 1);
  signature[0] = -1;
  LorentzMetric m;
  m.metric.chart = Chart(std::move(names), std::move(domain), std::move(signature));
  m.metric.fn = [gf = s.g.fn, vf = s.V.fn](Coordinates x) {
    const auto spatial = x.subspan(1);
    const JetMatrix g = gf(spatial);
    const Jet v = vf(spatial);
    const int n = g.size();
    JetMatrix out = JetMatrix::zero(n + 1, x[0].dim(), x[0].order());
    out(0, 0) = -(v * v);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i + 1, j + 1) = g(i, j);
    return out;
  };
  m.label = s.label;
  m.params = s.params;
  return m;
}

DoubledMetric doubled_riemannian(const StaticTriple& s) {
  std::vector<std::string> names{"theta"};
  std::vector<Interval> domain{{0.0, 2.0 * kPi}};
  for (int i = 0; i < s.g.chart.dim(); ++i) {
    names.push_back(s.g.chart.names()[static_cast<std::size_t>(i)]);
    domain.push_back(s.g.chart.interval(i));
  }
  DoubledMetric d;
  d.theta_period = 2.0 * kPi;
  d.metric.chart = Chart(std::move(names), std::move(domain));
  d.metric.fn = [gf = s.g.fn, vf = s.V.fn](Coordinates x) {
    const auto spatial = x.subspan(1);
    const JetMatrix g = gf(spatial);
    const Jet v = vf(spatial);
    const int n = g.size();
    JetMatrix out = JetMatrix::zero(n + 1, x[0].dim(), x[0].order());
    out(0, 0) = v * v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i + 1, j + 1) = g(i, j);
    return out;
  };
  return d;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"hyperbolic", "hyperbolic metric in polar coordinates, dr^2 + sinh^2 r dw^2, V = cosh r", {"r_max > 0 (default 3)"}, 2, 5, true},
      {"ads-fg", "anti-de Sitter in Fefferman-Graham form, r^-2 (dr^2 + (1 - r^2/4)^2 dw^2), V = 1/r + r/4, r in (0, 2)", {}, 2, 5, true},
      {"schwarzschild-ads", "Schwarzschild-anti-de Sitter, f^-1 dr^2 + r^2 dw^2, f = 1 + r^2 - M r^(2-n), V = sqrt f", {"M >= 0 (default 1)", "r_max > horizon (default 10)"}, 2, 5, true},
      {"flat", "Euclidean space in polar coordinates with V = 1 (non-vacuum reference)", {"r_max > 0 (default 3)"}, 2, 5, true},
      {"ads-soliton", "AdS soliton, -r^2 dt^2 + V^-1 dr^2 + V dphi^2 + r^2 dx^2, V = r^2 (1 - r0^n / r^n), phi period 4 pi / (n r0); Lorentzian only; no static triple", {"r0 > 0 (default 1)", "r_max > r0 (default 10)"}, 2, 5, false},
  };
  return entries;
}

StaticTriple make_triple(const std::string& id, int n, const Params& params) {
  if (id == "hyperbolic") {
    const auto p = checked(params, {{"r_max", 3.0}}, id);
    return make_hyperbolic(n, p.at("r_max"));
  }
  if (id == "ads-fg") {
    checked(params, {}, id);
    return make_ads_fg(n);
  }
  if (id == "schwarzschild-ads") {
    const auto p = checked(params, {{"M", 1.0}, {"r_max", 10.0}}, id);
    return make_schwarzschild_ads(n, p.at("M"), p.at("r_max"));
  }
  if (id == "flat") {
    const auto p = checked(params, {{"r_max", 3.0}}, id);
    return make_flat_polar(n, p.at("r_max"));
  }
  if (id == "ads-soliton") fail(ErrorKind::invalid_argument, "ads-soliton is Lorentzian only; no static triple");
  fail(ErrorKind::invalid_argument, "unknown metric id " + id);
}

}  // namespace adslab
