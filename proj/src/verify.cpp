#include "adslab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "adslab/errors.hpp"
#include "adslab/numerics.hpp"

namespace adslab {

namespace {

Jet lapse_at(const StaticTriple& s, const Point& p, int order) {
  Jet v = s.V.at(p, order);
  if (!(v.value() > 0.0)) throw DomainError("lapse must be positive", v.value());
  return v;
}

Eigen::VectorXd values_of(std::span<const Jet> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

// |A|² with both indices raised.
double norm_sq(const Eigen::MatrixXd& ginv, const Eigen::MatrixXd& a) { return (ginv * a * ginv * a.transpose()).trace(); }

double norm_sq(const Eigen::MatrixXd& ginv, const Tensor3& b) {
  const int n = b.dim();
  Tensor3 up(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) s += ginv(i, a) * ginv(j, c) * ginv(k, d) * b(a, c, d);
        up(i, j, k) = s;
      }
  double s = 0.0;
  for (std::size_t q = 0; q < up.data().size(); ++q) s += up.data()[q] * b.data()[q];
  return s;
}

Tensor3 bach_from(const Connection& conn, const CurvatureJets& curv) {
  const int n = conn.dim;
  const auto nabla = covariant_derivative_sym2(conn, curv.ricci);
  const auto ds = gradient(curv.scalar);
  const Eigen::MatrixXd g = conn.g.values();
  auto dr = [&](int k, int i, int j) { return nabla[static_cast<std::size_t>((k * n + i) * n + j)].value(); };
  Tensor3 b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        b(i, j, k) = dr(k, i, j) - dr(j, i, k) +
                     0.25 * (ds[static_cast<std::size_t>(j)].value() * g(i, k) - ds[static_cast<std::size_t>(k)].value() * g(i, j));
  return b;
}

void require_three(int dim) {
  if (dim != 3) fail(ErrorKind::dimension, "operation is defined for three-dimensional metrics, got " + std::to_string(dim));
}

std::vector<double> section_metric_diagonal(const WarpedProfile& w, std::span<const double> y) {
  std::vector<double> d;
  double f = 1.0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    d.push_back(w.topology == SectionTopology::sphere ? f : 1.0);
    f *= std::sin(y[a]) * std::sin(y[a]);
  }
  return d;
}

}  // namespace

void IdentityReport::add(const Point& p, double abs_residual, double rel_residual) {
  samples.push_back({p.coords, abs_residual, rel_residual});
}

void IdentityReport::finish() {
  points = samples.size();
  max_abs = 0.0;
  max_rel = 0.0;
  bool finite = true;
  for (const auto& s : samples) {
    if (!std::isfinite(s.abs) || !std::isfinite(s.rel)) finite = false;
    max_abs = std::max(max_abs, s.abs);
    max_rel = std::max(max_rel, s.rel);
  }
  pass = finite && points > 0 && max_rel <= tolerance;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

StaticResidual residual_static(const StaticTriple& s, const Point& p) {
  const JetMatrix gj = s.g.at(p, 2);
  const Jet v = lapse_at(s, p, 2);
  const auto conn = make_connection(gj);
  const auto curv = curvature_jets(conn);
  const Eigen::MatrixXd h = hessian_jets(conn, v).values();
  const Eigen::MatrixXd f1 = curv.ricci.values() + s.n * gj.values() - h / v.value();
  StaticResidual out;
  out.f1 = f1.cwiseAbs().maxCoeff();
  const Jet lap = divergence_density(gj, raise(conn.ginv, gradient(v)));
  out.f2 = std::abs(lap.value() - s.n * v.value());
  return out;
}

double residual_einstein_spacetime(const MetricField& m, const Point& p) {
  const JetMatrix gj = m.at(p, 2);
  const auto curv = curvature_jets(make_connection(gj));
  const int n = gj.size() - 1;
  return (curv.ricci.values() + n * gj.values()).cwiseAbs().maxCoeff();
}

EinsteinPair einstein_tensor(const StaticTriple& s, const Point& p) {
  const JetMatrix gj = s.g.at(p, 2);
  const Jet v = lapse_at(s, p, 2);
  const auto conn = make_connection(gj);
  const auto curv = curvature_jets(conn);
  const Eigen::MatrixXd g = gj.values();
  EinsteinPair out;
  out.geom = curv.ricci.values() + (s.n - 1) * g;
  out.lapse = hessian_jets(conn, v).values() / v.value() - g;
  return out;
}

Sym2Field einstein_tensor_field(const StaticTriple& s) {
  return {s.g.chart, [gf = s.g.fn, n = s.n](Coordinates x) {
            const auto conn = make_connection(gf(reseed(x, x[0].order() + 2)));
            const auto curv = curvature_jets(conn);
            JetMatrix t = curv.ricci;
            for (int i = 0; i < t.size(); ++i)
              for (int j = 0; j < t.size(); ++j) t(i, j) += (n - 1) * at_order(conn.g(i, j), curv.order);
            return t;
          }};
}

Tensor3 bach_tensor(const MetricField& g, const Point& p) {
  require_three(g.chart.dim());
  const auto conn = make_connection(g.at(p, 3));
  return bach_from(conn, curvature_jets(conn));
}

RiemannDecomposition riemann_from_ricci_3d(const MetricField& g, const Point& p) {
  require_three(g.chart.dim());
  const auto pack = curvature_package(g, p);
  const Eigen::MatrixXd gv = g.at(p, 1).values();
  const Eigen::MatrixXd& ric = pack.ricci;
  const double s = pack.scalar;
  RiemannDecomposition out;
  out.direct = pack.riemann;
  out.reconstructed = Tensor4(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const double r = ric(i, k) * gv(j, l) - ric(i, l) * gv(j, k) + gv(i, k) * ric(j, l) - gv(i, l) * ric(j, k) -
                           0.5 * s * (gv(i, k) * gv(j, l) - gv(i, l) * gv(j, k));
          out.reconstructed(i, j, k, l) = r;
          out.residual = std::max(out.residual, std::abs(r - out.direct(i, j, k, l)));
        }
  return out;
}

BachStatic bach_static_formula(const StaticTriple& s, const Point& p, double vacuum_tolerance) {
  require_three(s.g.chart.dim());
  const auto vac = residual_static(s, p);
  if (std::max(vac.f1, vac.f2) > vacuum_tolerance)
    fail(ErrorKind::precondition, "static Bach formula needs a vacuum triple; static residual " +
                                      std::to_string(std::max(vac.f1, vac.f2)));
  const JetMatrix gj = s.g.at(p, 3);
  const Jet v = lapse_at(s, p, 3);
  const auto conn = make_connection(gj);
  const Tensor3 coord = bach_from(conn, curvature_jets(conn));

  // Orthonormal frame E = L^{-T} with g = L Lᵀ.
  const Eigen::MatrixXd g = gj.values();
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::MatrixXd e = llt.matrixL().solve(Eigen::MatrixXd::Identity(3, 3)).transpose();

  const Eigen::VectorXd dv = e.transpose() * values_of(gradient(at_order(v, 1)));
  const Eigen::MatrixXd h = e.transpose() * hessian_jets(conn, v).values() * e;
  const double vv = v.value();
  const Eigen::VectorXd hv = h * dv;

  BachStatic out;
  out.formula = Tensor3(3);
  out.direct = Tensor3(3);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double d = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) d += e(a, i) * e(b, j) * e(c, k) * coord(a, b, c);
        out.direct(i, j, k) = d;
        out.formula(i, j, k) = ((hv(j) - 3.0 * vv * dv(j)) * delta(i, k) - (hv(k) - 3.0 * vv * dv(k)) * delta(i, j) +
                                2.0 * (h(i, k) * dv(j) - h(i, j) * dv(k))) /
                               (vv * vv);
        out.residual = std::max(out.residual, std::abs(out.formula(i, j, k) - d));
      }
  return out;
}

LindblomTerms check_lindblom(const StaticTriple& s, const Point& p, double w_floor) {
  require_three(s.g.chart.dim());
  const JetMatrix gj = s.g.at(p, 3);
  const Jet v = lapse_at(s, p, 3);
  const auto conn = make_connection(gj);
  const auto dv = gradient(v);

  LindblomTerms out;
  const Jet w = inner_covectors(conn.ginv, dv, dv);
  out.W = w.value();
  out.W0 = v.value() * v.value() - 1.0;
  if (!(out.W >= w_floor))
    throw Error(ErrorKind::critical_point, "critical point: |grad V|^2 = " + std::to_string(out.W) + " below floor");

  // Left side through the volume density.
  const Jet q = w - (at_order(v, 2) * at_order(v, 2) - 1.0);
  auto x = raise(conn.ginv, gradient(q));
  const Jet inv_v = reciprocal(at_order(v, 1));
  for (auto& xi : x) xi = xi * inv_v;
  out.lhs = divergence_density(gj, x).value();

  // Right side through the Hessian and the Bach tensor.
  const Eigen::MatrixXd ginv = conn.ginv.values();
  const Eigen::VectorXd grad = values_of(dv);
  const Eigen::MatrixXd h = hessian_jets(conn, v).values();
  const double vv = v.value();
  const Eigen::VectorXd dq = 2.0 * h * ginv * grad - 2.0 * vv * grad;
  const double dq_sq = dq.dot(ginv * dq);
  const double b_sq = norm_sq(ginv, bach_from(conn, curvature_jets(conn)));
  out.bach_term = vv * vv * vv * b_sq / out.W;
  out.grad_term = dq_sq / (vv * out.W);
  out.rhs = 0.25 * out.bach_term + 0.75 * out.grad_term;
  out.residual = relative_gap(out.lhs, out.rhs);
  return out;
}

LindblomFit fit_lindblom(const StaticTriple& s, std::span<const Point> points, double w_floor) {
  std::vector<LindblomTerms> rows;
  for (const auto& p : points) rows.push_back(check_lindblom(s, p, w_floor));
  LindblomFit fit;
  if (rows.empty()) return fit;
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    a(i, 0) = r.bach_term;
    a(i, 1) = r.grad_term;
    y(i) = r.lhs;
  }
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  fit.bach_identifiable = a.col(0).cwiseAbs().maxCoeff() > 1e-10 * scale;
  fit.grad_identifiable = a.col(1).cwiseAbs().maxCoeff() > 1e-10 * scale;
  if (fit.bach_identifiable && fit.grad_identifiable) {
    const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
    fit.bach_coefficient = c(0);
    fit.grad_coefficient = c(1);
  } else if (fit.grad_identifiable) {
    const Eigen::VectorXd rest = y - fit.bach_coefficient * a.col(0);
    fit.grad_coefficient = rest.dot(a.col(1)) / a.col(1).squaredNorm();
  } else if (fit.bach_identifiable) {
    const Eigen::VectorXd rest = y - fit.grad_coefficient * a.col(1);
    fit.bach_coefficient = rest.dot(a.col(0)) / a.col(0).squaredNorm();
  }
  for (Eigen::Index i = 0; i < m; ++i)
    fit.residual = std::max(fit.residual, relative_gap(y(i), fit.bach_coefficient * a(i, 0) + fit.grad_coefficient * a(i, 1)));
  return fit;
}

BochnerTerms check_bochner(const StaticTriple& s, const Point& p) {
  const JetMatrix gj = s.g.at(p, 3);
  const Jet v = lapse_at(s, p, 3);
  const auto conn = make_connection(gj);
  const auto dv = gradient(v);
  const Jet u = inner_covectors(conn.ginv, dv, dv) - at_order(v, 2) * at_order(v, 2) + 1.0;
  const auto du = gradient(u);

  BochnerTerms out;
  const double lap_u = divergence_density(gj, raise(conn.ginv, du)).value();
  out.lhs = lap_u - inner_covectors(conn.ginv, dv, du).value() / v.value();

  const Eigen::MatrixXd ginv = conn.ginv.values();
  const Eigen::MatrixXd h = hessian_jets(conn, v).values();
  const Eigen::MatrixXd g = gj.values();
  out.rhs_minus = 2.0 * norm_sq(ginv, h - v.value() * g);
  out.rhs_plus = 2.0 * norm_sq(ginv, h + v.value() * g);
  return out;
}

double max_principle_scalar(const StaticTriple& s, const Point& p) {
  const JetMatrix gj = s.g.at(p, 1);
  const Jet v = s.V.at(p, 1);
  const Eigen::VectorXd dv = values_of(gradient(v));
  const Eigen::MatrixXd ginv = gj.values().inverse();
  return dv.dot(ginv * dv) - v.value() * v.value() + 1.0;
}

namespace {

// Value at r = 0 of the radial Taylor polynomial of c, expanded at r = eps.
double step_to_boundary(const Jet& c, double eps) {
  double sum = 0.0;
  MultiIndex b{};
  for (int k = c.order(); k >= 0; --k) {
    b[0] = static_cast<std::uint8_t>(k);
    sum = sum * -eps + c.coefficient(b);
  }
  return sum;
}

// Mean curvature of {r = const} for the normal towards decreasing r, as a jet
// one order below g.
Jet inward_mean_curvature(const JetMatrix& g) {
  const JetMatrix ginv = inverse(g);
  const Jet inv_norm = pow(ginv(0, 0), -0.5);
  std::vector<Jet> nu;
  for (int i = 0; i < g.size(); ++i) nu.push_back(-(ginv(i, 0) * inv_norm));
  return divergence_density(g, nu);
}

std::vector<int> remainder_powers(int first, std::size_t count) {
  std::vector<int> p;
  for (std::size_t k = 0; k < count; ++k) p.push_back(first + static_cast<int>(k));
  return p;
}

}  // namespace

FermatData fermat_check(const StaticTriple& s, int boundary_samples, const FermatOptions& options) {
  if (!s.profile || !s.profile->fg_form)
    fail(ErrorKind::gauge, "Fermat check needs FG coordinates; convert with to_fg_gauge first");
  if (options.eps.size() < 2) fail(ErrorKind::invalid_argument, "Fermat check needs at least two eps levels");
  const double ratio = options.eps[0] / options.eps[1];
  for (std::size_t k = 1; k < options.eps.size(); ++k)
    if (std::abs(options.eps[k - 1] / options.eps[k] - ratio) > 1e-12 * ratio)
      fail(ErrorKind::invalid_argument, "eps levels must form a geometric sequence");

  const WarpedProfile& w = *s.profile;
  const int n = s.n;
  const auto& names = s.g.chart.names();
  std::vector<Point> grid;
  if (n >= 3) {
    const Chart section(std::vector<std::string>(names.begin() + 1, names.end()), w.section_domain);
    grid = halton_points(section, boundary_samples);
  } else {
    for (int k = 0; k < boundary_samples; ++k)
      grid.push_back(Point{{w.section_domain[0].lo + w.section_domain[0].width() * (k + 0.5) / boundary_samples}});
  }

  const auto metric_powers = remainder_powers(kMaxJetOrder + 1, options.eps.size());
  const auto mean_powers = remainder_powers(kMaxJetOrder, options.eps.size());

  FermatData out;
  out.gbar = conformal_rescale(s.g, s.V);
  out.min_rbar = INFINITY;
  IdentityReport scalar("fermat-scalar", options.scalar_tolerance);
  IdentityReport boundary("fermat-boundary", options.limit_tolerance);
  IdentityReport mean("fermat-mean-curvature", options.limit_tolerance);

  for (const auto& y : grid) {
    std::vector<double> hsamples;  // per eps, then per section slot
    std::vector<std::vector<double>> metric_samples(y.size());
    for (double eps : options.eps) {
      Point p{{eps}};
      p.coords.insert(p.coords.end(), y.coords.begin(), y.coords.end());
      FermatSample fs;
      fs.eps = eps;
      fs.section = y.coords;
      const auto cs = conformal_scalar(s.g, s.V, p);
      fs.rbar = cs.direct_value;
      fs.rbar_formula = cs.formula_value;
      fs.u = max_principle_scalar(s, p);
      fs.phi = eps * (s.V.at(p, 1).value() + 1.0);
      fs.hbar = hypersurface_mean_curvature(out.gbar, 0, eps, p, Orientation::decreasing);
      // ḡ is smooth up to r = 0: step back to the boundary along the radial
      // Taylor series first, then extrapolate the remainder over eps.
      const JetMatrix gb = out.gbar.at(p, kMaxJetOrder);
      for (std::size_t a = 0; a < y.size(); ++a)
        metric_samples[a].push_back(step_to_boundary(gb(static_cast<int>(a + 1), static_cast<int>(a + 1)), eps));
      hsamples.push_back(step_to_boundary(inward_mean_curvature(gb), eps));
      out.min_rbar = std::min(out.min_rbar, fs.rbar);
      out.max_abs_rbar = std::max(out.max_abs_rbar, std::abs(fs.rbar));
      const double violation = std::max(0.0, -fs.rbar);
      scalar.add(p, violation, violation);
      out.samples.push_back(std::move(fs));
    }
    Point at_boundary{{0.0}};
    at_boundary.coords.insert(at_boundary.coords.end(), y.coords.begin(), y.coords.end());

    const auto h0 = section_metric_diagonal(w, y.coords);
    double dev = 0.0;
    for (std::size_t a = 0; a < y.size(); ++a)
      dev = std::max(dev, std::abs(richardson(metric_samples[a], ratio, metric_powers).value - h0[a]));
    boundary.add(at_boundary, dev, dev);
    out.boundary_metric_deviation = std::max(out.boundary_metric_deviation, dev);

    const double hlim = richardson(hsamples, ratio, mean_powers).value;
    const double hdev = std::abs(hlim - (n - 1));
    if (hdev >= std::abs(out.hbar_limit - (n - 1)) || out.hbar_limit == 0.0) out.hbar_limit = hlim;
    mean.add(at_boundary, hdev, hdev / (n - 1));
  }
  for (auto* r : {&scalar, &boundary, &mean}) {
    r->finish();
    out.reports.push_back(*r);
  }
  return out;
}

}  // namespace adslab
