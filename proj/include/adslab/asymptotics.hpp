#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adslab/catalog.hpp"
#include "adslab/integrate.hpp"
#include "adslab/verify.hpp"

namespace adslab {

struct FGOptions {
  double step = 1e-4;          // RK4 step in y = 1/ρ
  double collar_floor = 0.25;  // smallest original radius kept in the collar
};

/// Original radius ρ against the FG radius r for a warped profile. The
/// relation is ln r = q(1/ρ) - ½ ln warp(ρ), with q the tabulated integral
/// of (√g_ρρ - (ln √warp)') / y² in y = 1/ρ, normalised so r² warp → 1.
class RadialMap {
 public:
  RadialMap(WarpedProfile profile, FGOptions options);

  double r_of_rho(double rho) const;
  /// Newton solve of r_of_rho(ρ) = r.
  double rho_of_r(double r) const;
  /// ρ(r) as a jet in the FG coordinates; `r` is a coordinate jet.
  Jet rho(const Jet& r) const;

  double rho_min() const noexcept { return rho_min_; }
  double r_max() const noexcept { return r_max_; }
  const WarpedProfile& profile() const noexcept { return profile_; }

 private:
  double log_r(double rho) const;
  double integrand(double y) const;
  double q(double y) const;

  WarpedProfile profile_;
  FGOptions options_;
  double rho_min_ = 0.0;
  double r_max_ = 0.0;
  std::vector<double> q_table_;
  std::vector<double> f_table_;
  struct TaylorCache;
  std::shared_ptr<TaylorCache> cache_;
};

/// A static triple rewritten as g = r⁻²(dr² + h_r) near the boundary r = 0.
struct FGGauge {
  int n = 0;
  SectionTopology topology = SectionTopology::sphere;
  StaticTriple triple;  // FG chart (r, section…), profile->fg_form set
  std::shared_ptr<const RadialMap> map;  // empty for metrics already in FG form
  /// Inner end of the mass-identity region: the FG radius of ρ = 2 r_h for
  /// horizon metrics, the collar end otherwise; empty for FG-form metrics.
  std::optional<double> default_inner;

  bool identity() const noexcept { return map == nullptr; }
  double r_max() const { return triple.g.chart.interval(0).hi; }
  /// h_r at (r, y): r² times the section block of g.
  Eigen::MatrixXd h(double r, std::span<const double> y) const;
  /// h₀ at y: the section metric of the boundary.
  Eigen::MatrixXd h0(std::span<const double> y) const;
  /// H(r, y) = det h_r.
  double det_h(double r, std::span<const double> y) const;
};

struct GaugeCheck {
  double radial = 0.0;       // max |g_rr r² - 1|
  double cross = 0.0;        // max |g_ra r²|
  double map_residual = 0.0; // max |r² g_ρρ (dρ/dr)² - 1|, dρ/dr by differences of the point map
  bool h0_positive = true;
};

/// Converts a conformally compact static triple with sphere infinity.
/// Throws unsupported_topology for non-sphere infinity, invalid_argument
/// when the triple carries no warped profile.
FGGauge to_fg_gauge(const StaticTriple& s, const FGOptions& options = {});
/// The collar construction without the topology restriction (used to show
/// that a torus infinity fails the asymptotic hyperbolicity test).
FGGauge collar_gauge(const WarpedProfile& w, int n, std::string label, Params params, const FGOptions& options = {});

GaugeCheck check_gauge(const FGGauge& fg, std::span<const double> radii, const BoundaryRule& rule);

struct ExtractionOptions {
  double r0 = 0.2;
  int halvings = 5;
  double fit_tolerance = 1e-4;
};

/// Coefficients of V = 1/r + r/4 + α r^{n-1}/2 + … and
/// h_r = (1 - r²/4)² h₀ + τ rⁿ + … on the nodes of a boundary rule.
struct MassAspect {
  int n = 0;
  std::vector<std::vector<double>> nodes;
  std::vector<double> alpha;
  std::vector<Eigen::MatrixXd> tau;
  std::vector<double> trace_tau;  // tr_{h₀} τ
  std::vector<double> radii;
  double alpha_mean = 0.0;
  double alpha_spread = 0.0;  // max - min
  double fit_residual = 0.0;  // largest Richardson error estimate
  double trace_identity = 0.0;  // max |α + tr τ|
};

/// Throws extraction when the fit residual exceeds the tolerance.
MassAspect extract_expansion(const FGGauge& fg, const BoundaryRule& rule, const ExtractionOptions& options = {});

/// (|∇V|² - V² + 1) / r^{n-2} → -nα and ∂_r u / ((n-2) r^{n-3}) → -nα,
/// extrapolated over the sample radii (geometric, ratio 2). Needs n >= 3.
IdentityReport check_bm(const FGGauge& fg, const MassAspect& ma, std::span<const double> r_samples,
                        double tolerance = 1e-4);

struct MassFunctional {
  double scalar_mass = 0.0;
  Eigen::VectorXd vector_mass;
  bool inequality = false;
};

/// ∫ tr τ dμ and ∫ (tr τ) x dμ over the round sphere; the rule must be the
/// one the aspect was extracted on.
MassFunctional mass_functional(const MassAspect& ma, const BoundaryRule& rule, double tolerance = 1e-9);

/// Asymptotic hyperbolicity: (i) h₀ round, (ii) the remainder after τ rⁿ
/// is o(rⁿ), (iii) the radial derivatives of the expansion are consistent.
IdentityReport validate_ah(const FGGauge& fg, const MassAspect& ma, double tolerance = 1e-4);

/// The mass identity on an FG gauge, with the inner boundary defaulting to
/// `default_inner` and fg_limit = (n(n-2)/2) ∫ α dσ.
MassIdentity mass_identity(const FGGauge& fg, const MassAspect& ma, const BoundaryRule& rule, double eps, int level,
                           std::optional<double> r_inner = std::nullopt);

}  // namespace adslab
