#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adslab/geometry.hpp"

namespace adslab {

using Params = std::map<std::string, double>;
using Profile1d = std::function<Jet(const Jet&)>;

enum class SectionTopology { sphere, torus };

/// Warped product data g = g_rr(ρ) dρ² + Σ_a warp_a(ρ) σ_a(x) dx_a², where
/// σ is the round-sphere factor (products of sin² of earlier angles) or 1
/// for a flat torus. The radial coordinate is always chart slot 0.
struct WarpedProfile {
  SectionTopology topology = SectionTopology::sphere;
  Profile1d radial;
  std::vector<Profile1d> warps;  // one per section coordinate
  Profile1d lapse;
  Interval radial_domain;
  std::vector<Interval> section_domain;
  /// Coordinates already satisfy g = r⁻²(dr² + h_r).
  bool fg_form = false;
  /// Horizon at the lower radial end (Schwarzschild-AdS).
  bool inner_boundary = false;
  double horizon = 0.0;
};

struct StaticTriple {
  int n = 0;
  MetricField g;
  ScalarField V;
  std::string label;
  Params params;
  std::optional<WarpedProfile> profile;
};

struct LorentzMetric {
  MetricField metric;
  std::string label;
  Params params;
  Params metadata;
  std::optional<WarpedProfile> spatial;
};

struct DoubledMetric {
  MetricField metric;
  double theta_period = 0.0;
};

/// Section metric factor for slot `a` of a sphere section.
Jet sphere_factor(Coordinates section, int a);

/// Open box charts for S^{n-1}: theta_1 … theta_{n-2} in (0, π), phi in (0, 2π).
std::vector<Interval> sphere_section_domain(int n);
std::vector<std::string> sphere_section_names(int n);

/// Metric of a warped profile on the chart (radius, section…).
MetricField warped_metric(const WarpedProfile& w, std::string radial_name = "r");
ScalarField warped_lapse(const WarpedProfile& w, const Chart& chart);
StaticTriple warped_triple(const WarpedProfile& w, int n, std::string label, Params params);

StaticTriple make_hyperbolic(int n, double r_max = 3.0);
StaticTriple make_ads_fg(int n);
/// Largest root of 1 + r² - M r^{2-n}.
double schwarzschild_ads_horizon(int n, double mass);
StaticTriple make_schwarzschild_ads(int n, double mass, double r_max = 10.0);
/// Flat polar metric with V = 1, a non-vacuum reference triple.
StaticTriple make_flat_polar(int n, double r_max = 3.0);

/// -r²dt² + V⁻¹dr² + V dφ² + r² Σ dx², V = r²(1 - r0ⁿ/rⁿ); n is the spatial
/// dimension, so the chart is (t, r, phi, x_1 … x_{n-2}).
LorentzMetric make_ads_soliton(int n, double r0, double r_max = 10.0);
/// The t = const slice of the soliton as a warped profile with torus section
/// (phi, x_1 …); lapse r.
WarpedProfile soliton_slice(int n, double r0, double r_max = 10.0);

/// -V²dt² + g on (t, spatial…).
LorentzMetric spacetime_metric(const StaticTriple& s);
/// V²dθ² + g on (theta, spatial…), θ-period 2π.
DoubledMetric doubled_riemannian(const StaticTriple& s);

struct CatalogEntry {
  std::string id;
  std::string description;
  std::vector<std::string> parameters;  // e.g. "M >= 0"
  int n_min = 2;
  int n_max = 5;
  bool static_triple = true;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Static triple by catalog id. Throws invalid_argument for unknown ids or
/// parameters and for ids that have no static triple.
StaticTriple make_triple(const std::string& id, int n, const Params& params);

}  // namespace adslab
