#include "adslab/integrate.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "adslab/errors.hpp"
#include "adslab/numerics.hpp"

namespace adslab {

namespace {

constexpr double kPi = std::numbers::pi;

// (P_m(x), P_m'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

GaussLegendre compute_gauss_legendre(int m) {
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(m));
  gl.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(m, x).second;
    const auto slot = static_cast<std::size_t>(m - 1 - i);
    gl.nodes[slot] = x;
    gl.weights[slot] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

// Golub-Welsch for the weight (1 - t²)^alpha on (-1, 1).
GaussLegendre compute_gauss_gegenbauer(int m, double alpha) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int j = 1; j < m; ++j) {
    const double s = 2.0 * j + 2.0 * alpha;
    const double b = std::sqrt(4.0 * j * (j + alpha) * (j + alpha) * (j + 2.0 * alpha) / (s * s * (s + 1.0) * (s - 1.0)));
    jac(j, j - 1) = jac(j - 1, j) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::sqrt(kPi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
  GaussLegendre out;
  for (int i = 0; i < m; ++i) {
    const double v = eig.eigenvectors()(0, i);
    out.nodes.push_back(eig.eigenvalues()(i));
    out.weights.push_back(mu0 * v * v);
  }
  return out;
}

const GaussLegendre& gauss_gegenbauer(int m, int sin_power) {
  static std::map<std::pair<int, int>, GaussLegendre> cache;
  static std::mutex lock;
  std::lock_guard<std::mutex> guard(lock);
  const auto key = std::make_pair(m, sin_power);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_gauss_gegenbauer(m, 0.5 * (sin_power - 1))).first;
  return it->second;
}

// Polar angle rule for ∫_0^π g(θ) sin^k θ dθ, Gauss in t = cos θ; weights
// include the sine power.
struct Axis {
  std::vector<double> x;
  std::vector<double> w;
};

Axis mapped_axis(int m, double lo, double hi) {
  const auto& gl = gauss_legendre(m);
  Axis a;
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < m; ++i) {
    a.x.push_back(lo + half * (gl.nodes[static_cast<std::size_t>(i)] + 1.0));
    a.w.push_back(half * gl.weights[static_cast<std::size_t>(i)]);
  }
  return a;
}

Axis polar_axis(int m, int sin_power) {
  const auto& gg = gauss_gegenbauer(m, sin_power);
  Axis a;
  for (int i = m - 1; i >= 0; --i) {
    a.x.push_back(std::acos(gg.nodes[static_cast<std::size_t>(i)]));
    a.w.push_back(gg.weights[static_cast<std::size_t>(i)]);
  }
  return a;
}

// Tensor product of axes, last axis fastest.
void product(const std::vector<Axis>& axes, std::vector<std::vector<double>>& nodes, std::vector<double>& weights) {
  nodes.assign(1, {});
  weights.assign(1, 1.0);
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next_nodes;
    std::vector<double> next_weights;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (std::size_t i = 0; i < axis.x.size(); ++i) {
        auto node = nodes[k];
        node.push_back(axis.x[i]);
        next_nodes.push_back(std::move(node));
        next_weights.push_back(weights[k] * axis.w[i]);
      }
    nodes = std::move(next_nodes);
    weights = std::move(next_weights);
  }
}

Point join(double r, std::span<const double> y) {
  Point p{{r}};
  p.coords.insert(p.coords.end(), y.begin(), y.end());
  return p;
}

double section_area_density(const Eigen::MatrixXd& g) {
  const auto m = g.rows() - 1;
  return std::sqrt(std::abs(g.bottomRightCorner(m, m).determinant()));
}

// T(∇V, ν) with T = V⁻¹D²V - g and ν = ±g^{i0}/sqrt(g^{00}).
double lapse_flux(const StaticTriple& s, const Point& p, Orientation outward, double* normal_r = nullptr) {
  const JetMatrix gj = s.g.at(p, 2);
  const Jet v = s.V.at(p, 2);
  const auto conn = make_connection(gj);
  const Eigen::MatrixXd g = gj.values();
  const Eigen::MatrixXd ginv = conn.ginv.values();
  const Eigen::MatrixXd t = hessian_jets(conn, v).values() / v.value() - g;
  Eigen::VectorXd dv(g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i) dv(i) = v.derivative(static_cast<int>(i)).value();
  const double sign = outward == Orientation::increasing ? 1.0 : -1.0;
  const Eigen::VectorXd nu = sign * ginv.col(0) / std::sqrt(ginv(0, 0));
  if (normal_r) {
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(g.rows());
    expected(0) = -p[0];
    *normal_r = (nu - expected).cwiseAbs().maxCoeff();
  }
  return (ginv * dv).dot(t * nu);
}

}  // namespace

const GaussLegendre& gauss_legendre(int m) {
  if (m < 1 || m > 4096) fail(ErrorKind::invalid_argument, "Gauss-Legendre node count out of range");
  static std::map<int, GaussLegendre> cache;
  static std::mutex lock;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gauss_legendre(m)).first;
  return it->second;
}

double sphere_volume(int dim) {
  const double h = 0.5 * (dim + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

SphereRule sphere_rule(int dim, int order) {
  if (dim < 1) fail(ErrorKind::dimension, "sphere rule needs dimension >= 1");
  if (order < 1) fail(ErrorKind::invalid_argument, "sphere rule order must be positive");
  std::vector<Axis> axes;
  for (int a = 0; a + 1 < dim; ++a) axes.push_back(polar_axis(order, dim - 1 - a));
  axes.push_back(mapped_axis(2 * order, 0.0, 2.0 * kPi));
  SphereRule rule;
  rule.dim = dim;
  rule.order = order;
  rule.topology = SectionTopology::sphere;
  product(axes, rule.nodes, rule.weights);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const auto& y = rule.nodes[k];
    double jac = 1.0;
    for (int a = 0; a + 1 < dim; ++a) jac *= std::pow(std::sin(y[static_cast<std::size_t>(a)]), dim - 1 - a);
    rule.coord_weights.push_back(rule.weights[k] / jac);
    Eigen::VectorXd x(dim + 1);
    double s = 1.0;
    for (int a = 0; a + 1 < dim; ++a) {
      x(a) = s * std::cos(y[static_cast<std::size_t>(a)]);
      s *= std::sin(y[static_cast<std::size_t>(a)]);
    }
    x(dim - 1) = s * std::cos(y.back());
    x(dim) = s * std::sin(y.back());
    rule.embedding.push_back(std::move(x));
  }
  return rule;
}

BoundaryRule torus_rule(std::span<const double> periods, int order) {
  if (periods.empty()) fail(ErrorKind::dimension, "torus rule needs at least one slot");
  if (order < 1) fail(ErrorKind::invalid_argument, "torus rule order must be positive");
  std::vector<Axis> axes;
  for (double p : periods) axes.push_back(mapped_axis(2 * order, 0.0, p));
  BoundaryRule rule;
  rule.dim = static_cast<int>(periods.size());
  rule.order = order;
  rule.topology = SectionTopology::torus;
  product(axes, rule.nodes, rule.coord_weights);
  rule.weights = rule.coord_weights;
  return rule;
}

BoundaryRule section_rule(const WarpedProfile& w, int order) {
  if (w.topology == SectionTopology::sphere) return sphere_rule(static_cast<int>(w.section_domain.size()), order);
  std::vector<double> periods;
  for (const auto& iv : w.section_domain) periods.push_back(iv.width());
  return torus_rule(periods, order);
}

double integrate_sphere(const SectionFunction& f, const BoundaryRule& rule) {
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) terms[k] = rule.weights[k] * f(rule.nodes[k]);
  return pairwise_sum(terms);
}

int radial_nodes_for_level(int level) {
  if (level < 0 || level > 8) fail(ErrorKind::invalid_argument, "refinement level must lie in [0, 8]");
  return 8 << level;
}

int sphere_order_for_level(int level) {
  if (level < 0 || level > 8) fail(ErrorKind::invalid_argument, "refinement level must lie in [0, 8]");
  return 2 + 2 * level;
}

AnnulusDomain make_annulus(const StaticTriple& s, double r_in, double r_out, int level) {
  if (!s.profile) fail(ErrorKind::invalid_argument, "annulus needs a warped triple");
  const auto& iv = s.g.chart.interval(0);
  if (!(r_in < r_out)) fail(ErrorKind::invalid_argument, "annulus needs r_in < r_out");
  if (r_in < iv.lo) throw DomainError("annulus inner radius outside the chart", r_in);
  if (r_out > iv.hi) throw DomainError("annulus outer radius outside the chart", r_out);
  AnnulusDomain d;
  d.r_in = r_in;
  d.r_out = r_out;
  d.radial_nodes = radial_nodes_for_level(level);
  d.section = section_rule(*s.profile, sphere_order_for_level(level));
  return d;
}

double integrate_annulus(const StaticTriple& s, const PointFunction& integrand, const AnnulusDomain& dom) {
  const Axis radial = mapped_axis(dom.radial_nodes, dom.r_in, dom.r_out);
  std::vector<double> terms;
  terms.reserve(radial.x.size() * dom.section.nodes.size());
  for (std::size_t i = 0; i < radial.x.size(); ++i)
    for (std::size_t k = 0; k < dom.section.nodes.size(); ++k) {
      const Point p = join(radial.x[i], dom.section.nodes[k]);
      const double vol = std::sqrt(std::abs(s.g.at(p, 1).values().determinant()));
      terms.push_back(radial.w[i] * dom.section.coord_weights[k] * vol * integrand(p));
    }
  return pairwise_sum(terms);
}

double integrate_level_sphere(const MetricField& g, double radius, const PointFunction& f, const BoundaryRule& rule) {
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Point p = join(radius, rule.nodes[k]);
    terms[k] = rule.coord_weights[k] * section_area_density(g.at(p, 1).values()) * f(p);
  }
  return pairwise_sum(terms);
}

StokesResult stokes_check(const StaticTriple& s, const Sym2Field& t, const ScalarField& f, const AnnulusDomain& dom) {
  const Axis radial = mapped_axis(dom.radial_nodes, dom.r_in, dom.r_out);
  std::vector<double> pairing;
  std::vector<double> bianchi;
  for (std::size_t i = 0; i < radial.x.size(); ++i)
    for (std::size_t k = 0; k < dom.section.nodes.size(); ++k) {
      const Point p = join(radial.x[i], dom.section.nodes[k]);
      const JetMatrix gj = s.g.at(p, 2);
      const JetMatrix tj = t.at(p, 1);
      const Jet fj = f.at(p, 2);
      const auto conn = make_connection(gj);
      const double w = radial.w[i] * dom.section.coord_weights[k] * std::sqrt(std::abs(gj.values().determinant()));
      pairing.push_back(w * inner_sym2(conn.ginv, tj, hessian_jets(conn, fj)).value());
      const auto df = gradient(fj);
      bianchi.push_back(w * inner_covectors(conn.ginv, df, divergence_sym2(conn, tj)).value());
    }
  auto flux = [&](Orientation o) {
    return [&, o](const Point& p) {
      const Eigen::MatrixXd g = s.g.at(p, 1).values();
      const Eigen::MatrixXd ginv = g.inverse();
      const Eigen::MatrixXd tv = t.at(p, 1).values();
      const Jet fj = f.at(p, 1);
      Eigen::VectorXd df(g.rows());
      for (Eigen::Index i = 0; i < g.rows(); ++i) df(i) = fj.derivative(static_cast<int>(i)).value();
      const double sign = o == Orientation::increasing ? 1.0 : -1.0;
      const Eigen::VectorXd nu = sign * ginv.col(0) / std::sqrt(ginv(0, 0));
      return (ginv * df).dot(tv * nu);
    };
  };
  StokesResult out;
  out.volume_lhs = pairwise_sum(pairing);
  out.bianchi_term = pairwise_sum(bianchi);
  out.boundary_rhs = integrate_level_sphere(s.g, dom.r_out, flux(Orientation::increasing), dom.section) +
                     integrate_level_sphere(s.g, dom.r_in, flux(Orientation::decreasing), dom.section);
  const double scale =
      std::max({1.0, std::abs(out.volume_lhs), std::abs(out.boundary_rhs), std::abs(out.bianchi_term)});
  out.gap = std::abs(out.volume_lhs - out.boundary_rhs + out.bianchi_term) / scale;
  return out;
}

double lapse_einstein_density(const StaticTriple& s, const Point& p) {
  const JetMatrix gj = s.g.at(p, 2);
  const Jet v = s.V.at(p, 2);
  const auto conn = make_connection(gj);
  const Eigen::MatrixXd ginv = conn.ginv.values();
  const Eigen::MatrixXd t = hessian_jets(conn, v).values() / v.value() - gj.values();
  return v.value() * (ginv * t * ginv * t.transpose()).trace();
}

MassIdentity mass_identity_check(const StaticTriple& fg, double eps, std::optional<double> r_inner, int level,
                                 double fg_limit) {
  if (!fg.profile || !fg.profile->fg_form) fail(ErrorKind::gauge, "mass identity needs a triple in FG coordinates");
  const WarpedProfile& w = *fg.profile;
  if (w.inner_boundary && !r_inner)
    fail(ErrorKind::incomplete_boundary, "triple has an inner boundary; supply r_inner");
  const double upper = r_inner ? *r_inner : fg.g.chart.interval(0).hi;
  if (!r_inner) {
    for (const auto& warp : w.warps)
      if (std::abs(warp(Jet::constant(upper, 1, 1)).value()) > 1e-12)
        fail(ErrorKind::incomplete_boundary, "upper chart radius is not a regular centre; supply r_inner");
  }
  if (!(eps > 0.0 && eps < upper)) throw DomainError("eps must lie inside (0, r_inner)", eps);

  MassIdentity out;
  out.fg_limit = fg_limit;
  out.bulk.level = out.outer_boundary.level = out.inner_boundary.level = level;
  const PointFunction density = [&fg](const Point& p) { return lapse_einstein_density(fg, p); };
  out.bulk.value = integrate_annulus(fg, density, make_annulus(fg, eps, upper, level));
  out.bulk.refined = integrate_annulus(fg, density, make_annulus(fg, eps, upper, level + 1));

  for (int k = 0; k < 2; ++k) {
    const BoundaryRule rule = section_rule(w, sphere_order_for_level(level + k));
    double deviation = 0.0;
    const PointFunction outer = [&](const Point& p) {
      double d = 0.0;
      const double v = lapse_flux(fg, p, Orientation::decreasing, &d);
      deviation = std::max(deviation, d);
      return v;
    };
    const double o = integrate_level_sphere(fg.g, eps, outer, rule);
    (k == 0 ? out.outer_boundary.value : out.outer_boundary.refined) = o;
    out.normal_deviation = std::max(out.normal_deviation, deviation);
    if (r_inner) {
      const PointFunction inner = [&](const Point& p) {
        return lapse_flux(fg, p, Orientation::increasing);
      };
      (k == 0 ? out.inner_boundary.value : out.inner_boundary.refined) =
          integrate_level_sphere(fg.g, *r_inner, inner, rule);
    }
  }
  if (out.normal_deviation > 1e-10)
    fail(ErrorKind::gauge, "outer normal differs from -r d/dr by " + std::to_string(out.normal_deviation));
  const double b = out.bulk.refined;
  const double o = out.outer_boundary.refined;
  const double i = out.inner_boundary.refined;
  out.balance = std::abs(b - o - i) / std::max({1.0, std::abs(b), std::abs(o), std::abs(i)});
  return out;
}

}  // namespace adslab
