#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adslab/catalog.hpp"
#include "adslab/geometry.hpp"

namespace adslab {

struct PointResidual {
  std::vector<double> point;
  double abs = 0.0;
  double rel = 0.0;
};

/// Summary of one identity over a set of points; pass iff max_rel <= tolerance.
struct IdentityReport {
  std::string name;
  std::size_t points = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<PointResidual> samples;
  std::vector<std::string> notes;

  IdentityReport() = default;
  IdentityReport(std::string name, double tolerance) : name(std::move(name)), tolerance(tolerance) {}

  void add(const Point& p, double abs_residual, double rel_residual);
  /// Recompute points / maxima / pass from the samples.
  void finish();
};

/// |a - b| / max(1, |a|, |b|).
double relative_gap(double a, double b);

struct StaticResidual {
  double f1 = 0.0;  // max |Ric + n g - V⁻¹ D²V|
  double f2 = 0.0;  // |ΔV - n V|
};

StaticResidual residual_static(const StaticTriple& s, const Point& p);

/// max |Ric(ḡ) + n ḡ|, n = dim - 1.
double residual_einstein_spacetime(const MetricField& m, const Point& p);

struct EinsteinPair {
  Eigen::MatrixXd geom;   // Ric + (n-1) g
  Eigen::MatrixXd lapse;  // V⁻¹ D²V - g
};

EinsteinPair einstein_tensor(const StaticTriple& s, const Point& p);

/// Ric + (n-1) g as a field; evaluating at order k uses metric jets of order k + 2.
Sym2Field einstein_tensor_field(const StaticTriple& s);

/// B_ijk = ∇_k R_ij - ∇_j R_ik + ¼(S_j g_ik - S_k g_ij), coordinate components.
Tensor3 bach_tensor(const MetricField& g, const Point& p);

struct RiemannDecomposition {
  Tensor4 reconstructed;
  Tensor4 direct;
  double residual = 0.0;
};

RiemannDecomposition riemann_from_ricci_3d(const MetricField& g, const Point& p);

struct BachStatic {
  Tensor3 formula;  // orthonormal frame at p
  Tensor3 direct;   // same frame
  double residual = 0.0;
};

/// The static-vacuum expression of the Bach tensor against bach_tensor.
/// Throws precondition when s is not vacuum at p (static residual above
/// `vacuum_tolerance`).
BachStatic bach_static_formula(const StaticTriple& s, const Point& p, double vacuum_tolerance = 1e-8);

struct LindblomTerms {
  double lhs = 0.0;        // div(V⁻¹ ∇(W - W0))
  double bach_term = 0.0;  // V³ W⁻¹ |B|²
  double grad_term = 0.0;  // V⁻¹ W⁻¹ |∇(W - W0)|²
  double rhs = 0.0;        // ¼ bach_term + ¾ grad_term
  double residual = 0.0;   // relative
  double W = 0.0;
  double W0 = 0.0;
};

/// n = 3 only. Throws critical_point when W < w_floor.
LindblomTerms check_lindblom(const StaticTriple& s, const Point& p, double w_floor = 1e-8);

/// Least-squares fit lhs = a·bach_term + b·grad_term over the points.
/// A coefficient whose column vanishes on every point is reported as
/// unidentifiable and left at the stated value.
struct LindblomFit {
  double bach_coefficient = 0.25;
  double grad_coefficient = 0.75;
  bool bach_identifiable = false;
  bool grad_identifiable = false;
  double residual = 0.0;  // max relative residual of the fitted identity
};

LindblomFit fit_lindblom(const StaticTriple& s, std::span<const Point> points, double w_floor = 1e-8);

struct BochnerTerms {
  double lhs = 0.0;        // Δu - V⁻¹ ∇V·∇u
  double rhs_minus = 0.0;  // 2|D²V - V g|²
  double rhs_plus = 0.0;   // 2|D²V + V g|²
};

BochnerTerms check_bochner(const StaticTriple& s, const Point& p);

/// u = |∇V|² - V² + 1.
double max_principle_scalar(const StaticTriple& s, const Point& p);

struct FermatSample {
  double eps = 0.0;
  std::vector<double> section;
  double rbar = 0.0;
  double rbar_formula = 0.0;
  double u = 0.0;
  double phi = 0.0;  // r (V + 1)
  double hbar = 0.0;
};

struct FermatData {
  MetricField gbar;
  std::vector<FermatSample> samples;
  double min_rbar = 0.0;
  double max_abs_rbar = 0.0;
  double hbar_limit = 0.0;              // worst node
  double boundary_metric_deviation = 0.0;  // max |extrapolated - h0|
  std::vector<IdentityReport> reports;  // fermat-scalar, fermat-boundary, fermat-mean-curvature
};

struct FermatOptions {
  std::vector<double> eps{0.1, 0.05, 0.025};
  double scalar_tolerance = 1e-7;
  double limit_tolerance = 1e-4;
};

/// Needs a triple in FG coordinates (radial slot 0, boundary at r = 0);
/// throws gauge otherwise.
FermatData fermat_check(const StaticTriple& s, int boundary_samples, const FermatOptions& options = {});

}  // namespace adslab
