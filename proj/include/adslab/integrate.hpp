#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adslab/catalog.hpp"
#include "adslab/geometry.hpp"

namespace adslab {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule (cached).
const GaussLegendre& gauss_legendre(int m);

/// Product rule on a boundary section: the round sphere S^{n-1} in iterated
/// polar angles, or a flat torus box. `weights` integrate against the
/// section's own area element; `coord_weights` are the bare coordinate
/// weights for integrands that carry their own density.
struct BoundaryRule {
  int dim = 0;
  int order = 0;  // nodes per polar angle (phi and torus slots use 2x)
  SectionTopology topology = SectionTopology::sphere;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
  std::vector<double> coord_weights;
  std::vector<Eigen::VectorXd> embedding;  // unit vectors in R^{dim+1}, sphere only
};

using SphereRule = BoundaryRule;

/// Rule on S^{dim}: `order` Gauss nodes in cos theta per polar angle (the
/// sine powers of the area element absorbed into the weights), 2 * order
/// Gauss-Legendre nodes on phi.
SphereRule sphere_rule(int dim, int order);
/// Rule on the box prod (0, period_a), 2 * order nodes per slot.
BoundaryRule torus_rule(std::span<const double> periods, int order);
/// The rule matching a profile's section.
BoundaryRule section_rule(const WarpedProfile& w, int order);

/// Volume of the unit round S^{dim}: 2 π^{(dim+1)/2} / Γ((dim+1)/2).
double sphere_volume(int dim);

using SectionFunction = std::function<double(std::span<const double>)>;
using PointFunction = std::function<double(const Point&)>;

double integrate_sphere(const SectionFunction& f, const BoundaryRule& rule);

/// A quadrature value with its refinement companion.
struct Refined {
  double value = 0.0;
  double refined = 0.0;
  int level = 0;

  double gap() const { return std::abs(refined - value); }
};

/// Radial Gauss-Legendre nodes 8 * 2^level, sphere order 2 + 2 * level.
int radial_nodes_for_level(int level);
int sphere_order_for_level(int level);

struct AnnulusDomain {
  double r_in = 0.0;
  double r_out = 0.0;
  int radial_nodes = 64;
  BoundaryRule section;
};

/// Validates r_in < r_out inside the closure of the triple's radial interval.
AnnulusDomain make_annulus(const StaticTriple& s, double r_in, double r_out, int level);

/// ∫ f √det g over the annulus.
double integrate_annulus(const StaticTriple& s, const PointFunction& integrand, const AnnulusDomain& dom);

/// ∫ f dA over the coordinate sphere r = radius, dA the induced area element.
double integrate_level_sphere(const MetricField& g, double radius, const PointFunction& f, const BoundaryRule& rule);

struct StokesResult {
  double volume_lhs = 0.0;     // ∫⟨T, D²f⟩
  double boundary_rhs = 0.0;   // Σ ∫ T(∇f, ν) over both spheres, ν outward
  double bianchi_term = 0.0;   // ∫⟨df, δT⟩
  double gap = 0.0;            // |lhs - rhs + bianchi| / max(1, |terms|)
};

StokesResult stokes_check(const StaticTriple& s, const Sym2Field& t, const ScalarField& f, const AnnulusDomain& dom);

struct MassIdentity {
  Refined bulk;            // ∫ V |T|²
  Refined outer_boundary;  // ∫ T(∇V, ν) at r = eps, ν = -r ∂_r
  Refined inner_boundary;  // same at r_inner with ν pointing to increasing r
  double fg_limit = 0.0;   // (n(n-2)/2) ∫ α dσ, supplied by the caller
  double normal_deviation = 0.0;  // max |ν - (-r ∂_r)| at the outer sphere
  double balance = 0.0;    // |bulk - outer - inner| / max(1, |terms|), refined values
};

/// Main-proof bookkeeping on {eps <= r <= r_inner} of an FG triple. With no
/// r_inner the region runs to the upper chart radius, which must be a regular
/// centre. Throws incomplete_boundary when the triple has an inner boundary
/// and r_inner is missing, gauge when the triple is not in FG form.
MassIdentity mass_identity_check(const StaticTriple& fg, double eps, std::optional<double> r_inner, int level,
                                 double fg_limit);

/// V |T|² with T = V⁻¹ D²V - g at a point.
double lapse_einstein_density(const StaticTriple& s, const Point& p);

}  // namespace adslab
