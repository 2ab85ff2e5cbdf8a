#pragma once

/**
 * Charts, jet-valued fields and the curvature / differential operators used
 * by every identity check.
 *
 * Index convention: tensors are stored fully lowered, except Christoffel
 * symbols which carry their upper index first, Gamma(k, i, j) = Γ^k_ij.
 * Contractions always go through the inverse metric explicitly.
 *
 * Riemann convention: R^a_bcd = ∂_c Γ^a_db - ∂_d Γ^a_cb + Γ^a_ce Γ^e_db
 * - Γ^a_de Γ^e_cb, R_abcd = g_ae R^e_bcd, Ric_bd = R^a_bad. The unit round
 * sphere has R_abcd = g_ac g_bd - g_ad g_bc and positive scalar curvature.
 */

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adslab/jet.hpp"
#include "adslab/tensor.hpp"

namespace adslab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains_open(double x) const noexcept { return x > lo && x < hi; }
};

struct Point {
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
};

/// Coordinate box with per-slot signature markers (+1 Riemannian slot,
/// -1 for the single time slot of a static Lorentzian metric).
class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> names, std::vector<Interval> domain, std::vector<int> signature = {});

  int dim() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }
  const Interval& interval(int i) const { return domain_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& signature() const noexcept { return signature_; }
  int negative_slots() const;

  bool contains(const Point& p) const;
  /// Throws DomainError naming the offending coordinate when p is outside.
  void require_inside(const Point& p) const;
  Chart with_interval(int coord, Interval interval) const;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> domain_;
  std::vector<int> signature_;
};

using Coordinates = std::span<const Jet>;

/// Coordinate jets of `p` (one seed per chart coordinate).
std::vector<Jet> seed_point(const Chart& chart, const Point& p, int order);
/// Coordinate seeds at the same point with a different order; fields built
/// from derivatives of other fields (Ricci, Einstein tensor) use this.
std::vector<Jet> reseed(Coordinates x, int order);

struct ScalarField {
  Chart chart;
  std::function<Jet(Coordinates)> fn;

  Jet at(const Point& p, int order) const;
};

struct Sym2Field {
  Chart chart;
  std::function<JetMatrix(Coordinates)> fn;

  JetMatrix at(const Point& p, int order) const;
};

/// Metric components as a function of the coordinate jets. Evaluation
/// validates symmetry, conditioning and the chart signature.
struct MetricField {
  Chart chart;
  std::function<JetMatrix(Coordinates)> fn;

  JetMatrix at(const Point& p, int order) const;
};

/// Condition-number bound on the metric value part.
inline constexpr double kMaxMetricCondition = 1e12;

/// Throws degenerate_metric if the value part of g is singular, not
/// symmetric, ill conditioned, or has a signature other than expected.
void validate_metric_values(const Eigen::MatrixXd& g, int expected_negative);

JetMatrix diagonal_matrix(const std::vector<Jet>& diagonal);

// ---------------------------------------------------------------------------
// Jet-level machinery. Every function works at the highest order its inputs
// support and documents the order of its result.
// ---------------------------------------------------------------------------

/// Metric jets of order K with inverse (order K) and Γ^k_ij (order K-1).
struct Connection {
  int dim = 0;
  int order = 0;
  JetMatrix g;
  JetMatrix ginv;
  std::vector<Jet> gamma;

  const Jet& christoffel(int k, int i, int j) const {
    return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

Connection make_connection(const JetMatrix& g);

/// Lowered Riemann, Ricci and scalar curvature jets of order K-2.
struct CurvatureJets {
  int dim = 0;
  int order = 0;
  std::vector<Jet> riemann;
  JetMatrix ricci;
  Jet scalar;

  const Jet& riem(int a, int b, int c, int d) const {
    return riemann[static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d)];
  }
};

CurvatureJets curvature_jets(const Connection& conn);

std::vector<Jet> gradient(const Jet& f);
/// g^{ij} a_i b_j at the common order.
Jet inner_covectors(const JetMatrix& ginv, std::span<const Jet> a, std::span<const Jet> b);
/// g^{ik} g^{jl} A_ij B_kl at the common order.
Jet inner_sym2(const JetMatrix& ginv, const JetMatrix& a, const JetMatrix& b);
/// Raise a covector: X^i = g^{ij} a_j.
std::vector<Jet> raise(const JetMatrix& ginv, std::span<const Jet> a);
/// D²f_ij = ∂_i∂_j f - Γ^k_ij ∂_k f, order min(K, ord f) - 2.
JetMatrix hessian_jets(const Connection& conn, const Jet& f);
/// ∇_k T_ij stored at [(k*dim + i)*dim + j], order min(K, ord T + 1) - 1.
std::vector<Jet> covariant_derivative_sym2(const Connection& conn, const JetMatrix& t);
/// Divergence of a symmetric 2-tensor, g^{jk} ∇_k T_ji, order min(K, ord T + 1) - 1.
std::vector<Jet> divergence_sym2(const Connection& conn, const JetMatrix& t);
/// Divergence of a vector field through the volume density,
/// |g|^{-1/2} ∂_i(|g|^{1/2} X^i). Independent of the Christoffel symbols.
Jet divergence_density(const JetMatrix& g, std::span<const Jet> x_upper);
/// sqrt(|det g|).
Jet volume_density(const JetMatrix& g);

// ---------------------------------------------------------------------------
// Pointwise real-valued operations.
// ---------------------------------------------------------------------------

struct CurvaturePack {
  Point at;
  Tensor3 gamma;    // Γ^k_ij as gamma(k, i, j)
  Tensor4 riemann;  // R_ijkl
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

CurvaturePack curvature_package(const MetricField& g, const Point& p);

Eigen::MatrixXd hessian(const MetricField& g, const ScalarField& f, const Point& p);

struct LaplacianGradient {
  double laplacian = 0.0;
  double gradsq = 0.0;
};

LaplacianGradient laplacian_gradsq(const MetricField& g, const ScalarField& f, const Point& p);

/// δT with the sign that makes ⟨T, D²f⟩ = div(i_∇f T) - ⟨df, δT⟩ hold,
/// i.e. (δT)_i = g^{jk} ∇_k T_ji.
Eigen::VectorXd div_sym2(const MetricField& g, const Sym2Field& t, const Point& p);

/// Residual of ⟨T, D²f⟩ = div(i_∇f T) - ⟨df, δT⟩. The divergence term is
/// computed through the volume density, the other two through Christoffels.
struct DivIdentity {
  double pairing = 0.0;     // ⟨T, D²f⟩
  double divergence = 0.0;  // div(i_∇f T)
  double bianchi = 0.0;     // ⟨df, δT⟩
  double residual = 0.0;    // absolute
  double relative = 0.0;    // residual / max(1, |terms|)
};

DivIdentity check_div_identity(const MetricField& g, const Sym2Field& t, const ScalarField& f, const Point& p);

/// Scalar curvature of (V+1)^{-2} g two ways: the conformal-change formula
/// and a direct curvature computation of the rescaled metric.
struct ConformalScalar {
  double formula_value = 0.0;
  double direct_value = 0.0;
};

ConformalScalar conformal_scalar(const MetricField& g, const ScalarField& v, const Point& p);

/// The Fermat-type rescaling (V+1)^{-2} g as a field.
MetricField conformal_rescale(const MetricField& g, const ScalarField& v);

enum class Orientation { increasing, decreasing };

/// Mean curvature (trace convention, not averaged) of {x_level = value}
/// with respect to the unit normal pointing towards `outward`.
double hypersurface_mean_curvature(const MetricField& g, int level, double value, const Point& p,
                                   Orientation outward = Orientation::increasing);

}  // namespace adslab
