#include "adslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adslab/errors.hpp"

namespace adslab {

namespace {

std::size_t idx3(int dim, int a, int b, int c) { return static_cast<std::size_t>((a * dim + b) * dim + c); }

std::size_t idx4(int dim, int a, int b, int c, int d) {
  return static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d);
}

}  // namespace

Chart::Chart(std::vector<std::string> names, std::vector<Interval> domain, std::vector<int> signature)
    : names_(std::move(names)), domain_(std::move(domain)), signature_(std::move(signature)) {
  if (names_.size() != domain_.size()) fail(ErrorKind::invalid_argument, "chart names and domain differ in length");
  if (names_.size() < 2) fail(ErrorKind::invalid_argument, "chart dimension must be at least 2");
  if (signature_.empty()) signature_.assign(names_.size(), 1);
  if (signature_.size() != names_.size()) fail(ErrorKind::invalid_argument, "chart signature length mismatch");
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (!(domain_[i].lo < domain_[i].hi))
      fail(ErrorKind::invalid_argument, "empty chart interval for coordinate " + names_[i]);
  for (int s : signature_)
    if (s != 1 && s != -1) fail(ErrorKind::invalid_argument, "signature entries must be +1 or -1");
  if (negative_slots() > 1) fail(ErrorKind::invalid_argument, "at most one negative signature slot");
}

int Chart::negative_slots() const {
  return static_cast<int>(std::count(signature_.begin(), signature_.end(), -1));
}

bool Chart::contains(const Point& p) const {
  if (p.size() != domain_.size()) return false;
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (!domain_[i].contains_open(p[i])) return false;
  return true;
}

void Chart::require_inside(const Point& p) const {
  if (p.size() != domain_.size())
    fail(ErrorKind::dimension, "point has " + std::to_string(p.size()) + " coordinates, chart has " +
                                   std::to_string(domain_.size()));
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (!domain_[i].contains_open(p[i]))
      throw DomainError("coordinate " + names_[i] + " outside (" + std::to_string(domain_[i].lo) + ", " +
                            std::to_string(domain_[i].hi) + ")",
                        p[i]);
}

Chart Chart::with_interval(int coord, Interval interval) const {
  auto domain = domain_;
  domain.at(static_cast<std::size_t>(coord)) = interval;
  return Chart(names_, std::move(domain), signature_);
}

std::vector<Jet> seed_point(const Chart& chart, const Point& p, int order) {
  chart.require_inside(p);
  std::vector<Jet> x;
  x.reserve(p.size());
  for (int i = 0; i < chart.dim(); ++i) x.push_back(Jet::seed(i, p[static_cast<std::size_t>(i)], chart.dim(), order));
  return x;
}

std::vector<Jet> reseed(Coordinates x, int order) {
  std::vector<Jet> out;
  out.reserve(x.size());
  const int dim = static_cast<int>(x.size());
  for (int i = 0; i < dim; ++i) out.push_back(Jet::seed(i, x[static_cast<std::size_t>(i)].value(), dim, order));
  return out;
}

Jet ScalarField::at(const Point& p, int order) const {
  const auto x = seed_point(chart, p, order);
  return fn(x);
}

JetMatrix Sym2Field::at(const Point& p, int order) const {
  const auto x = seed_point(chart, p, order);
  return fn(x);
}

void validate_metric_values(const Eigen::MatrixXd& g, int expected_negative) {
  if (!g.allFinite()) fail(ErrorKind::degenerate_metric, "non-finite metric components");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorKind::degenerate_metric, "metric components are not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  const double smallest = lambda.cwiseAbs().minCoeff();
  if (smallest == 0.0 || largest / smallest > kMaxMetricCondition)
    fail(ErrorKind::degenerate_metric,
         "condition number " + std::to_string(smallest == 0.0 ? INFINITY : largest / smallest) + " exceeds 1e12");
  const int negative = static_cast<int>((lambda.array() < 0.0).count());
  if (negative != expected_negative)
    fail(ErrorKind::degenerate_metric, "metric has " + std::to_string(negative) +
                                           " negative directions, chart signature expects " +
                                           std::to_string(expected_negative));
}

JetMatrix MetricField::at(const Point& p, int order) const {
  const auto x = seed_point(chart, p, order);
  JetMatrix g = fn(x);
  if (g.size() != chart.dim()) fail(ErrorKind::dimension, "metric size differs from chart dimension");
  validate_metric_values(g.values(), chart.negative_slots());
  return g;
}

JetMatrix diagonal_matrix(const std::vector<Jet>& diagonal) {
  const int n = static_cast<int>(diagonal.size());
  JetMatrix m = JetMatrix::zero(n, diagonal.front().dim(), diagonal.front().order());
  for (int i = 0; i < n; ++i) m(i, i) = diagonal[static_cast<std::size_t>(i)];
  return m;
}

Connection make_connection(const JetMatrix& g) {
  const int n = g.size();
  const int order = g.order();
  if (order < 1) fail(ErrorKind::order, "connection needs metric jets of order >= 1");
  Connection c;
  c.dim = n;
  c.order = order;
  c.g = g;
  c.ginv = inverse(g);

  // dg[l][i][j] = ∂_l g_ij
  std::vector<Jet> dg(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        Jet d = g(i, j).derivative(l);
        dg[idx3(n, l, j, i)] = d;
        dg[idx3(n, l, i, j)] = std::move(d);
      }

  const JetMatrix ginv = c.ginv.truncated(order - 1);
  std::vector<Jet> lowered(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = dg[idx3(n, i, j, l)] + dg[idx3(n, j, i, l)] - dg[idx3(n, l, i, j)];
        s *= 0.5;
        lowered[idx3(n, l, j, i)] = s;
        lowered[idx3(n, l, i, j)] = std::move(s);
      }

  c.gamma.assign(static_cast<std::size_t>(n * n * n), Jet::constant(0.0, g.jet_dim(), order - 1));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = Jet::constant(0.0, g.jet_dim(), order - 1);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * lowered[idx3(n, l, i, j)];
        c.gamma[idx3(n, k, j, i)] = s;
        c.gamma[idx3(n, k, i, j)] = std::move(s);
      }
  return c;
}

CurvatureJets curvature_jets(const Connection& conn) {
  const int n = conn.dim;
  const int w = conn.order - 2;
  if (w < 0) fail(ErrorKind::order, "curvature needs metric jets of order >= 2");
  const int jd = conn.g.jet_dim();

  std::vector<Jet> gam(conn.gamma.size());
  for (std::size_t q = 0; q < gam.size(); ++q) gam[q] = at_order(conn.gamma[q], w);
  // dgam[c][a][d][b] = ∂_c Γ^a_db
  std::vector<Jet> dgam(static_cast<std::size_t>(n * n * n * n));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int b = d; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          Jet v = conn.christoffel(a, d, b).derivative(c);
          dgam[idx4(n, c, a, b, d)] = v;
          dgam[idx4(n, c, a, d, b)] = std::move(v);
        }

  // Mixed R^a_bcd, antisymmetric in (c, d).
  const Jet zero = Jet::constant(0.0, jd, w);
  std::vector<Jet> mixed(static_cast<std::size_t>(n * n * n * n), zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet r = dgam[idx4(n, c, a, d, b)] - dgam[idx4(n, d, a, c, b)];
          for (int e = 0; e < n; ++e) {
            r += gam[idx3(n, a, c, e)] * gam[idx3(n, e, d, b)];
            r -= gam[idx3(n, a, d, e)] * gam[idx3(n, e, c, b)];
          }
          mixed[idx4(n, a, b, d, c)] = -r;
          mixed[idx4(n, a, b, c, d)] = std::move(r);
        }

  CurvatureJets out;
  out.dim = n;
  out.order = w;
  const JetMatrix g = conn.g.truncated(w);
  const JetMatrix ginv = conn.ginv.truncated(w);
  out.riemann.assign(mixed.size(), zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet r = zero;
          for (int e = 0; e < n; ++e) r += g(a, e) * mixed[idx4(n, e, b, c, d)];
          out.riemann[idx4(n, a, b, d, c)] = -r;
          out.riemann[idx4(n, a, b, c, d)] = std::move(r);
        }

  out.ricci = JetMatrix::zero(n, jd, w);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) out.ricci(b, d) += mixed[idx4(n, a, b, a, d)];

  out.scalar = zero;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) out.scalar += ginv(b, d) * out.ricci(b, d);
  return out;
}

std::vector<Jet> gradient(const Jet& f) {
  std::vector<Jet> df;
  df.reserve(static_cast<std::size_t>(f.dim()));
  for (int i = 0; i < f.dim(); ++i) df.push_back(f.derivative(i));
  return df;
}

Jet inner_covectors(const JetMatrix& ginv, std::span<const Jet> a, std::span<const Jet> b) {
  const int n = ginv.size();
  const int w = std::min({ginv.order(), a.front().order(), b.front().order()});
  Jet s = Jet::constant(0.0, ginv.jet_dim(), w);
  for (int i = 0; i < n; ++i) {
    Jet ai = Jet::constant(0.0, ginv.jet_dim(), w);
    for (int j = 0; j < n; ++j) ai += at_order(ginv(i, j), w) * at_order(b[static_cast<std::size_t>(j)], w);
    s += at_order(a[static_cast<std::size_t>(i)], w) * ai;
  }
  return s;
}

Jet inner_sym2(const JetMatrix& ginv, const JetMatrix& a, const JetMatrix& b) {
  const int n = ginv.size();
  const int w = std::min({ginv.order(), a.order(), b.order()});
  const JetMatrix gi = ginv.truncated(w);
  const JetMatrix aw = a.truncated(w);
  const JetMatrix bw = b.truncated(w);
  // a^{kl} = g^{ik} g^{jl} a_ij, then contract with b_kl
  JetMatrix half = JetMatrix::zero(n, ginv.jet_dim(), w);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) half(k, j) += gi(k, i) * aw(i, j);
  Jet s = Jet::constant(0.0, ginv.jet_dim(), w);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Jet up = Jet::constant(0.0, ginv.jet_dim(), w);
      for (int j = 0; j < n; ++j) up += half(k, j) * gi(j, l);
      s += up * bw(k, l);
    }
  return s;
}

std::vector<Jet> raise(const JetMatrix& ginv, std::span<const Jet> a) {
  const int n = ginv.size();
  const int w = std::min(ginv.order(), a.front().order());
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet s = Jet::constant(0.0, ginv.jet_dim(), w);
    for (int j = 0; j < n; ++j) s += at_order(ginv(i, j), w) * at_order(a[static_cast<std::size_t>(j)], w);
    out.push_back(std::move(s));
  }
  return out;
}

JetMatrix hessian_jets(const Connection& conn, const Jet& f) {
  const int n = conn.dim;
  const int w = std::min(conn.order, f.order()) - 2;
  if (w < 0) fail(ErrorKind::order, "hessian needs jets of order >= 2");
  const Jet fk = at_order(f, w + 2);
  std::vector<Jet> df;
  for (int k = 0; k < n; ++k) df.push_back(fk.derivative(k));
  JetMatrix h = JetMatrix::zero(n, f.dim(), w);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet s = df[static_cast<std::size_t>(i)].derivative(j);
      for (int k = 0; k < n; ++k) s -= at_order(conn.christoffel(k, i, j), w) * at_order(df[static_cast<std::size_t>(k)], w);
      h(j, i) = s;
      h(i, j) = std::move(s);
    }
  return h;
}

std::vector<Jet> covariant_derivative_sym2(const Connection& conn, const JetMatrix& t) {
  const int n = conn.dim;
  const int w = std::min(conn.order, t.order()) - 1;
  if (w < 0) fail(ErrorKind::order, "covariant derivative needs jets of order >= 1");
  const JetMatrix tw = t.truncated(w);
  std::vector<Jet> out(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = at_order(t(i, j), w + 1).derivative(k);
        for (int m = 0; m < n; ++m) {
          s -= at_order(conn.christoffel(m, k, i), w) * tw(m, j);
          s -= at_order(conn.christoffel(m, k, j), w) * tw(i, m);
        }
        out[idx3(n, k, j, i)] = s;
        out[idx3(n, k, i, j)] = std::move(s);
      }
  return out;
}

std::vector<Jet> divergence_sym2(const Connection& conn, const JetMatrix& t) {
  const int n = conn.dim;
  const auto nabla = covariant_derivative_sym2(conn, t);
  const int w = nabla.front().order();
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i) {
    Jet s = Jet::constant(0.0, t.jet_dim(), w);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += at_order(conn.ginv(j, k), w) * nabla[idx3(n, k, j, i)];
    out.push_back(std::move(s));
  }
  return out;
}

Jet volume_density(const JetMatrix& g) {
  const Jet det = determinant(g);
  return det.value() < 0.0 ? sqrt(-det) : sqrt(det);
}

Jet divergence_density(const JetMatrix& g, std::span<const Jet> x_upper) {
  const int n = g.size();
  const int w = std::min(g.order(), x_upper.front().order()) - 1;
  if (w < 0) fail(ErrorKind::order, "divergence needs jets of order >= 1");
  const Jet s = volume_density(g.truncated(w + 1));
  Jet acc = Jet::constant(0.0, g.jet_dim(), w);
  for (int i = 0; i < n; ++i) acc += (s * at_order(x_upper[static_cast<std::size_t>(i)], w + 1)).derivative(i);
  return acc / s.truncated(w);
}

CurvaturePack curvature_package(const MetricField& g, const Point& p) {
  const auto conn = make_connection(g.at(p, 2));
  const auto curv = curvature_jets(conn);
  const int n = conn.dim;
  CurvaturePack pack;
  pack.at = p;
  pack.gamma = Tensor3(n);
  pack.riemann = Tensor4(n);
  pack.ricci = Eigen::MatrixXd(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pack.gamma(k, i, j) = conn.christoffel(k, i, j).value();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      pack.ricci(a, b) = curv.ricci(a, b).value();
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) pack.riemann(a, b, c, d) = curv.riem(a, b, c, d).value();
    }
  pack.scalar = curv.scalar.value();
  return pack;
}

Eigen::MatrixXd hessian(const MetricField& g, const ScalarField& f, const Point& p) {
  const auto conn = make_connection(g.at(p, 2));
  return hessian_jets(conn, f.at(p, 2)).values();
}

LaplacianGradient laplacian_gradsq(const MetricField& g, const ScalarField& f, const Point& p) {
  const auto conn = make_connection(g.at(p, 2));
  const Jet fj = f.at(p, 2);
  const Eigen::MatrixXd h = hessian_jets(conn, fj).values();
  const Eigen::MatrixXd ginv = conn.ginv.values();
  const auto df = gradient(fj);
  LaplacianGradient out;
  out.laplacian = (ginv.array() * h.array()).sum();
  out.gradsq = inner_covectors(conn.ginv, df, df).value();
  return out;
}

Eigen::VectorXd div_sym2(const MetricField& g, const Sym2Field& t, const Point& p) {
  const auto conn = make_connection(g.at(p, 1));
  const auto div = divergence_sym2(conn, t.at(p, 1));
  Eigen::VectorXd out(conn.dim);
  for (int i = 0; i < conn.dim; ++i) out(i) = div[static_cast<std::size_t>(i)].value();
  return out;
}

DivIdentity check_div_identity(const MetricField& g, const Sym2Field& t, const ScalarField& f, const Point& p) {
  const JetMatrix gj = g.at(p, 2);
  const JetMatrix tj = t.at(p, 2);
  const Jet fj = f.at(p, 2);
  const int n = gj.size();
  const auto conn = make_connection(gj);

  DivIdentity out;
  out.pairing = inner_sym2(conn.ginv, tj, hessian_jets(conn, fj)).value();

  const auto df = gradient(fj);
  const auto f_up = raise(conn.ginv, df);
  std::vector<Jet> x_lower;
  for (int i = 0; i < n; ++i) {
    Jet s = Jet::constant(0.0, fj.dim(), 1);
    for (int j = 0; j < n; ++j) s += at_order(tj(i, j), 1) * f_up[static_cast<std::size_t>(j)];
    x_lower.push_back(std::move(s));
  }
  out.divergence = divergence_density(gj, raise(conn.ginv, x_lower)).value();

  const auto delta = divergence_sym2(conn, tj);
  out.bianchi = inner_covectors(conn.ginv, df, delta).value();

  out.residual = std::abs(out.pairing - out.divergence + out.bianchi);
  const double scale = std::max({1.0, std::abs(out.pairing), std::abs(out.divergence), std::abs(out.bianchi)});
  out.relative = out.residual / scale;
  return out;
}

MetricField conformal_rescale(const MetricField& g, const ScalarField& v) {
  MetricField out;
  out.chart = g.chart;
  out.fn = [gf = g.fn, vf = v.fn](Coordinates x) {
    JetMatrix m = gf(x);
    const Jet factor = pow(vf(x) + 1.0, -2.0);
    for (int i = 0; i < m.size(); ++i)
      for (int j = 0; j < m.size(); ++j) m(i, j) = factor * m(i, j);
    return m;
  };
  return out;
}

ConformalScalar conformal_scalar(const MetricField& g, const ScalarField& v, const Point& p) {
  const JetMatrix gj = g.at(p, 2);
  const Jet vj = v.at(p, 2);
  const double u = vj.value() + 1.0;
  if (!(u > 0.0)) throw DomainError("conformal factor requires V + 1 > 0", vj.value());
  const int n = gj.size();

  const auto conn = make_connection(gj);
  const double r = curvature_jets(conn).scalar.value();
  const Eigen::MatrixXd h = hessian_jets(conn, vj).values();
  const double lap = (conn.ginv.values().array() * h.array()).sum();
  const auto dv = gradient(vj);
  const double gradsq = inner_covectors(conn.ginv, dv, dv).value();

  ConformalScalar out;
  out.formula_value = u * u * (r + 2.0 * (n - 1) * lap / u - n * (n - 1) * gradsq / (u * u));

  const Jet factor = pow(vj + 1.0, -2.0);
  JetMatrix gbar = gj;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gbar(i, j) = factor * gj(i, j);
  out.direct_value = curvature_jets(make_connection(gbar)).scalar.value();
  return out;
}

double hypersurface_mean_curvature(const MetricField& g, int level, double value, const Point& p,
                                   Orientation outward) {
  if (level < 0 || level >= g.chart.dim()) fail(ErrorKind::invalid_argument, "level coordinate out of range");
  if (std::abs(p[static_cast<std::size_t>(level)] - value) > 1e-12 * std::max(1.0, std::abs(value)))
    fail(ErrorKind::precondition, "point is not on the requested level set");
  const JetMatrix gj = g.at(p, 1);
  const JetMatrix ginv = inverse(gj);
  const Jet& normsq = ginv(level, level);
  if (!(normsq.value() > 0.0)) fail(ErrorKind::degenerate_metric, "level-set normal is null or timelike");
  const double sign = outward == Orientation::increasing ? 1.0 : -1.0;
  const Jet inv_norm = pow(normsq, -0.5);
  std::vector<Jet> nu;
  for (int i = 0; i < gj.size(); ++i) nu.push_back(sign * ginv(i, level) * inv_norm);
  return divergence_density(gj, nu).value();
}

}  // namespace adslab
