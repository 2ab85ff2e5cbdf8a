#include "adslab/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "adslab/errors.hpp"
#include "adslab/numerics.hpp"

namespace adslab {

namespace {

Jet point_jet(double x, int order) { return Jet::seed(0, x, 1, order); }

Point join(double r, std::span<const double> y) {
  Point p{{r}};
  p.coords.insert(p.coords.end(), y.begin(), y.end());
  return p;
}

Eigen::MatrixXd section_block(const Eigen::MatrixXd& g) {
  const auto m = g.rows() - 1;
  return g.bottomRightCorner(m, m);
}

Eigen::MatrixXd section_factor(const WarpedProfile& w, std::span<const double> y) {
  const auto m = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m, m);
  if (w.topology == SectionTopology::torus) return s;
  std::vector<Jet> x;
  for (double v : y) x.push_back(Jet::constant(v, 1, 1));
  for (Eigen::Index a = 0; a < m; ++a) s(a, a) = sphere_factor(x, static_cast<int>(a)).value();
  return s;
}

// Taylor cache size before it is cleared.
constexpr std::size_t kMaxCachedTaylor = 1 << 14;

}  // namespace

struct RadialMap::TaylorCache {
  std::mutex lock;
  std::map<std::pair<double, int>, std::vector<double>> entries;
};

RadialMap::RadialMap(WarpedProfile profile, FGOptions options)
    : profile_(std::move(profile)), options_(options), cache_(std::make_shared<TaylorCache>()) {
  if (profile_.warps.empty()) fail(ErrorKind::invalid_argument, "FG collar needs at least one section warp");
  if (!(options_.step > 0.0 && options_.step < 0.1)) fail(ErrorKind::invalid_argument, "FG step must lie in (0, 0.1)");
  rho_min_ = std::max(profile_.radial_domain.lo, options_.collar_floor);
  if (!(rho_min_ < profile_.radial_domain.hi))
    fail(ErrorKind::gauge, "radial domain leaves no collar above " + std::to_string(rho_min_));

  const double y_max = 1.0 / rho_min_;
  const auto steps = static_cast<std::size_t>(std::ceil(y_max / options_.step));
  const double h = y_max / static_cast<double>(steps);
  q_table_.assign(steps + 1, 0.0);
  f_table_.assign(steps + 1, 0.0);
  f_table_[0] = integrand(0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double y = h * static_cast<double>(k);
    const double mid = integrand(y + 0.5 * h);
    f_table_[k + 1] = integrand(y + h);
    // RK4 on q' = F(y), which does not depend on q.
    q_table_[k + 1] = q_table_[k] + h / 6.0 * (f_table_[k] + 4.0 * mid + f_table_[k + 1]);
  }
  r_max_ = std::exp(log_r(rho_min_));
}

double RadialMap::integrand(double y) const {
  if (y == 0.0) return 0.0;
  const double rho = 1.0 / y;
  const Jet x = point_jet(rho, 1);
  const Jet w = profile_.warps[0](x);
  const double a = std::sqrt(profile_.radial(x).value());
  const double dlog = 0.5 * w.coefficient(MultiIndex{1}) / w.value();
  const double f = (a - dlog) * rho * rho;
  if (!std::isfinite(f)) {
    // Far out the warp can overflow while the integrand has long since vanished.
    if (y < 1e-2) return 0.0;
    fail(ErrorKind::gauge, "FG gauge integrand not finite at rho = " + std::to_string(rho));
  }
  return f;
}

double RadialMap::q(double y) const {
  const double h = 1.0 / rho_min_ / static_cast<double>(q_table_.size() - 1);
  const double s = y / h;
  if (s < 0.0 || s > static_cast<double>(q_table_.size() - 1) * (1.0 + 1e-12))
    fail(ErrorKind::gauge, "FG gauge table queried outside its range at y = " + std::to_string(y));
  const auto k = std::min(static_cast<std::size_t>(s), q_table_.size() - 2);
  const double t = s - static_cast<double>(k);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * q_table_[k] + (t3 - 2 * t2 + t) * h * f_table_[k] + (-2 * t3 + 3 * t2) * q_table_[k + 1] +
         (t3 - t2) * h * f_table_[k + 1];
}

double RadialMap::log_r(double rho) const {
  return q(1.0 / rho) - 0.5 * std::log(profile_.warps[0](Jet::constant(rho, 1, 1)).value());
}

double RadialMap::r_of_rho(double rho) const {
  if (!(rho >= rho_min_ * (1.0 - 1e-14))) throw DomainError("rho below the FG collar", rho);
  return std::exp(log_r(rho));
}

double RadialMap::rho_of_r(double r) const {
  if (!(r > 0.0 && r <= r_max_ * (1.0 + 1e-12))) throw DomainError("FG radius outside the collar", r);
  const double target = std::log(r);
  auto residual = [&](double rho) { return log_r(rho) - target; };
  double lo = rho_min_;
  double hi = 2.0 * rho_min_;
  for (int i = 0; residual(hi) > 0.0; ++i) {
    if (i > 200) fail(ErrorKind::gauge, "no FG bracket for r = " + std::to_string(r));
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(x);
    (f > 0.0 ? lo : hi) = x;
    const double slope = -std::sqrt(profile_.radial(Jet::constant(x, 1, 1)).value());
    double next = x - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  return x;
}

Jet RadialMap::rho(const Jet& r) const {
  const int order = r.order();
  const double r0 = r.value();
  auto& cache = *cache_;
  std::vector<double> taylor;
  {
    std::lock_guard<std::mutex> guard(cache.lock);
    auto it = cache.entries.find({r0, order});
    if (it != cache.entries.end()) taylor = it->second;
  }
  if (taylor.empty()) {
    // Picard iteration on dρ/dr = -1/(r √g_ρρ(ρ)); each pass fixes one more
    // Taylor coefficient.
    const double rho0 = rho_of_r(r0);
    const Jet t = point_jet(r0, order);
    Jet rho = Jet::constant(rho0, 1, order);
    for (int pass = 0; pass <= order; ++pass) {
      const Jet slope = -reciprocal(t * sqrt(profile_.radial(rho)));
      rho = slope.antiderivative(0) + rho0;
    }
    taylor.assign(rho.coefficients().begin(), rho.coefficients().end());
    std::lock_guard<std::mutex> guard(cache.lock);
    if (cache.entries.size() > kMaxCachedTaylor) cache.entries.clear();
    cache.entries[{r0, order}] = taylor;
  }
  return compose(taylor, r);
}

Eigen::MatrixXd FGGauge::h(double r, std::span<const double> y) const {
  return r * r * section_block(triple.g.at(join(r, y), 1).values());
}

Eigen::MatrixXd FGGauge::h0(std::span<const double> y) const { return section_factor(*triple.profile, y); }

double FGGauge::det_h(double r, std::span<const double> y) const { return h(r, y).determinant(); }

FGGauge collar_gauge(const WarpedProfile& w, int n, std::string label, Params params, const FGOptions& options) {
  auto map = std::make_shared<const RadialMap>(w, options);
  WarpedProfile fg;
  fg.topology = w.topology;
  fg.radial = [map](const Jet& r) {
    const Jet rho = map->rho(r);
    const Jet grr = map->profile().radial(rho);
    const Jet drho = -reciprocal(r * sqrt(grr));
    return grr * drho * drho;
  };
  for (const auto& warp : w.warps) fg.warps.push_back([map, warp](const Jet& r) { return warp(map->rho(r)); });
  fg.lapse = [map](const Jet& r) { return map->profile().lapse(map->rho(r)); };
  fg.radial_domain = {0.0, map->r_max()};
  fg.section_domain = w.section_domain;
  fg.fg_form = true;
  fg.inner_boundary = w.inner_boundary;
  fg.horizon = w.inner_boundary ? map->r_max() : 0.0;

  FGGauge out;
  out.n = n;
  out.topology = w.topology;
  out.triple = warped_triple(fg, n, std::move(label), std::move(params));
  out.map = map;
  out.default_inner = w.inner_boundary ? map->r_of_rho(2.0 * w.horizon) : map->r_max();
  return out;
}

FGGauge to_fg_gauge(const StaticTriple& s, const FGOptions& options) {
  if (!s.profile) fail(ErrorKind::invalid_argument, "FG gauge needs a warped triple");
  const WarpedProfile& w = *s.profile;
  if (w.topology != SectionTopology::sphere)
    fail(ErrorKind::unsupported_topology, "conformal infinity is not a sphere");
  if (w.fg_form) {
    FGGauge out;
    out.n = s.n;
    out.topology = w.topology;
    out.triple = s;
    return out;
  }
  return collar_gauge(w, s.n, s.label, s.params, options);
}

GaugeCheck check_gauge(const FGGauge& fg, std::span<const double> radii, const BoundaryRule& rule) {
  GaugeCheck out;
  for (double r : radii) {
    for (const auto& y : rule.nodes) {
      const Eigen::MatrixXd g = fg.triple.g.at(join(r, y), 1).values();
      out.radial = std::max(out.radial, std::abs(g(0, 0) * r * r - 1.0));
      for (Eigen::Index a = 1; a < g.rows(); ++a) out.cross = std::max(out.cross, std::abs(g(0, a) * r * r));
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fg.h0(y));
      if (eig.eigenvalues().minCoeff() <= 0.0) out.h0_positive = false;
    }
    if (fg.map) {
      const double d = 1e-3 * r;
      auto rho = [&](double x) { return fg.map->rho_of_r(x); };
      const double drho = (rho(r - 2 * d) - 8 * rho(r - d) + 8 * rho(r + d) - rho(r + 2 * d)) / (12 * d);
      const double grr = fg.map->profile().radial(Jet::constant(rho(r), 1, 1)).value();
      out.map_residual = std::max(out.map_residual, std::abs(r * r * grr * drho * drho - 1.0));
    }
  }
  return out;
}

MassAspect extract_expansion(const FGGauge& fg, const BoundaryRule& rule, const ExtractionOptions& options) {
  if (options.halvings < 1) fail(ErrorKind::invalid_argument, "extraction needs at least one halving");
  if (!(options.r0 > 0.0 && options.r0 < fg.r_max())) throw DomainError("extraction radius outside the FG chart", options.r0);
  const int n = fg.n;
  MassAspect out;
  out.n = n;
  out.nodes = rule.nodes;
  for (int k = 0; k <= options.halvings; ++k) out.radii.push_back(options.r0 * std::pow(0.5, k));

  for (const auto& y : rule.nodes) {
    std::vector<double> a_samples;
    std::vector<Eigen::MatrixXd> t_samples;
    const Eigen::MatrixXd h0 = fg.h0(y);
    for (double r : out.radii) {
      const double v = fg.triple.V.at(join(r, y), 1).value();
      a_samples.push_back(2.0 * (v - 1.0 / r - r / 4.0) / std::pow(r, n - 1));
      const double c = 1.0 - r * r / 4.0;
      t_samples.push_back((fg.h(r, y) - c * c * h0) / std::pow(r, n));
    }
    const auto a = richardson(a_samples);
    double residual = a.error;
    const auto m = h0.rows();
    Eigen::MatrixXd tau(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        std::vector<double> s;
        for (const auto& t : t_samples) s.push_back(0.5 * (t(i, j) + t(j, i)));
        const auto e = richardson(s);
        tau(i, j) = tau(j, i) = e.value;
        residual = std::max(residual, e.error);
      }
    const double tr = (h0.inverse() * tau).trace();
    out.alpha.push_back(a.value);
    out.tau.push_back(tau);
    out.trace_tau.push_back(tr);
    out.fit_residual = std::max(out.fit_residual, residual);
    out.trace_identity = std::max(out.trace_identity, std::abs(a.value + tr));
  }
  const auto [lo, hi] = std::minmax_element(out.alpha.begin(), out.alpha.end());
  out.alpha_spread = *hi - *lo;
  out.alpha_mean = pairwise_sum(out.alpha) / static_cast<double>(out.alpha.size());
  if (!(out.fit_residual <= options.fit_tolerance))
    fail(ErrorKind::extraction, "ill-conditioned extraction: fit residual " + std::to_string(out.fit_residual) +
                                    " above tolerance " + std::to_string(options.fit_tolerance));
  return out;
}

IdentityReport check_bm(const FGGauge& fg, const MassAspect& ma, std::span<const double> r_samples, double tolerance) {
  const int n = fg.n;
  if (n < 3) fail(ErrorKind::dimension, "the mass expansion of |grad V|^2 - V^2 needs n >= 3");
  if (r_samples.size() < 2) fail(ErrorKind::invalid_argument, "check_bm needs at least two radii");
  IdentityReport report("bm", tolerance);
  for (std::size_t k = 0; k < ma.nodes.size(); ++k) {
    const auto& y = ma.nodes[k];
    std::vector<double> values;
    std::vector<double> slopes;
    for (double r : r_samples) {
      const Point p = join(r, y);
      const JetMatrix gj = fg.triple.g.at(p, 2);
      const Jet v = fg.triple.V.at(p, 2);
      const auto conn = make_connection(gj);
      const auto dv = gradient(v);
      const Jet vv = at_order(v, 1);
      const Jet u = inner_covectors(conn.ginv, dv, dv) - vv * vv + 1.0;
      values.push_back(u.value() / std::pow(r, n - 2));
      slopes.push_back(u.derivative(0).value() / ((n - 2) * std::pow(r, n - 3)));
    }
    const double expected = -n * ma.alpha[k];
    Point at{{0.0}};
    at.coords.insert(at.coords.end(), y.begin(), y.end());
    for (const auto* s : {&values, &slopes}) {
      const double limit = richardson(*s).value;
      const double gap = std::abs(limit - expected);
      report.add(at, gap, relative_gap(limit, expected));
    }
  }
  report.finish();
  return report;
}

MassFunctional mass_functional(const MassAspect& ma, const BoundaryRule& rule, double tolerance) {
  if (rule.topology != SectionTopology::sphere || rule.embedding.size() != rule.nodes.size())
    fail(ErrorKind::invalid_argument, "mass functional needs a sphere rule");
  if (rule.nodes != ma.nodes) fail(ErrorKind::invalid_argument, "mass aspect grid does not match the sphere rule");
  MassFunctional out;
  const auto dim = rule.embedding.front().size();
  std::vector<double> scalar;
  std::vector<std::vector<double>> vec(static_cast<std::size_t>(dim));
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double w = rule.weights[k] * ma.trace_tau[k];
    scalar.push_back(w);
    for (Eigen::Index i = 0; i < dim; ++i) vec[static_cast<std::size_t>(i)].push_back(w * rule.embedding[k](i));
  }
  out.scalar_mass = pairwise_sum(scalar);
  out.vector_mass = Eigen::VectorXd(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out.vector_mass(i) = pairwise_sum(vec[static_cast<std::size_t>(i)]);
  out.inequality = out.scalar_mass >= out.vector_mass.norm() - tolerance;
  return out;
}

IdentityReport validate_ah(const FGGauge& fg, const MassAspect& ma, double tolerance) {
  // Remainders below this multiple of the cancelling terms are rounding noise
  // and need no ratio test.
  constexpr double kNoise = 1e-11;
  // Largest accepted ratio of normalised remainders at halved radii.
  constexpr double kMaxRatio = 0.75;

  IdentityReport report("ah", tolerance);
  const int n = fg.n;
  const bool sphere = fg.topology == SectionTopology::sphere;
  if (!sphere) report.notes.push_back("(i) conformal infinity is not a sphere");
  bool failed_ii = false;
  bool failed_iii = false;
  double worst_i = 0.0;

  const std::size_t last = ma.radii.size() - 1;
  for (std::size_t k = 0; k < ma.nodes.size(); ++k) {
    const auto& y = ma.nodes[k];
    const Eigen::MatrixXd h0 = fg.h0(y);
    const Eigen::MatrixXd& tau = ma.tau[k];
    const auto m = h0.rows();

    // (i) boundary metric against the round metric on the same chart.
    double dev_i = 1.0;
    if (sphere) {
      std::vector<Eigen::MatrixXd> hs;
      for (double r : ma.radii) hs.push_back(fg.h(r, y));
      dev_i = 0.0;
      const Eigen::MatrixXd round = section_factor(*fg.triple.profile, y);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
          std::vector<double> s;
          for (const auto& h : hs) s.push_back(h(i, j));
          dev_i = std::max(dev_i, std::abs(richardson(s).value - round(i, j)));
        }
    }
    worst_i = std::max(worst_i, dev_i);

    // (ii), (iii): normalised remainders of h, ∂_r h and ∂²_r h at the two
    // smallest radii.
    std::array<std::array<double, 2>, 3> rem{};
    std::array<double, 3> floor{};
    for (int s = 0; s < 2; ++s) {
      const double r = ma.radii[last - 1 + static_cast<std::size_t>(s)];
      const JetMatrix gj = fg.triple.g.at(join(r, y), 2);
      const double c = 1.0 - r * r / 4.0;
      Eigen::MatrixXd h(m, m), dh(m, m), ddh(m, m);
      std::array<double, 3> scale{};
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
          const Jet& gij = gj(static_cast<int>(i + 1), static_cast<int>(j + 1));
          MultiIndex b1{}, b2{};
          b1[0] = 1;
          b2[0] = 2;
          const double g0 = gij.value();
          const double g1 = gij.coefficient(b1);
          const double g2 = 2.0 * gij.coefficient(b2);
          h(i, j) = r * r * g0;
          dh(i, j) = 2.0 * r * g0 + r * r * g1;
          ddh(i, j) = 2.0 * g0 + 4.0 * r * g1 + r * r * g2;
          scale[0] = std::max(scale[0], std::abs(h(i, j)));
          scale[1] = std::max({scale[1], std::abs(2.0 * r * g0), std::abs(r * r * g1)});
          scale[2] = std::max({scale[2], std::abs(2.0 * g0), std::abs(4.0 * r * g1), std::abs(r * r * g2)});
        }
      const Eigen::MatrixXd r0 = h - c * c * h0 - tau * std::pow(r, n);
      const Eigen::MatrixXd r1 = dh + r * c * h0 - n * tau * std::pow(r, n - 1);
      const Eigen::MatrixXd r2 = ddh - (0.75 * r * r - 1.0) * h0 - n * (n - 1) * tau * std::pow(r, n - 2);
      rem[0][static_cast<std::size_t>(s)] = r0.cwiseAbs().maxCoeff() / std::pow(r, n);
      rem[1][static_cast<std::size_t>(s)] = r1.cwiseAbs().maxCoeff() / std::pow(r, n - 1);
      rem[2][static_cast<std::size_t>(s)] = r2.cwiseAbs().maxCoeff() / std::pow(r, n - 2);
      for (std::size_t d = 0; d < 3; ++d)
        floor[d] = std::max(floor[d], kNoise * scale[d] / std::pow(r, n - static_cast<int>(d)));
    }
    double excess = 0.0;
    for (std::size_t d = 0; d < 3; ++d) {
      const double big = rem[d][0];
      const double small = rem[d][1];
      if (small < floor[d]) continue;
      const double e = std::max(0.0, small / big - kMaxRatio);
      if (e > 0.0) (d == 0 ? failed_ii : failed_iii) = true;
      excess = std::max(excess, e);
    }
    Point at{{0.0}};
    at.coords.insert(at.coords.end(), y.begin(), y.end());
    const double worst = std::max(dev_i, excess);
    report.add(at, worst, worst);
  }
  if (sphere && worst_i > tolerance) report.notes.push_back("(i) boundary metric is not the round metric");
  if (failed_ii) report.notes.push_back("(ii) remainder after tau r^n is not o(r^n)");
  if (failed_iii) report.notes.push_back("(iii) radial derivatives of the expansion are inconsistent");
  report.finish();
  return report;
}

MassIdentity mass_identity(const FGGauge& fg, const MassAspect& ma, const BoundaryRule& rule, double eps, int level,
                           std::optional<double> r_inner) {
  if (rule.nodes != ma.nodes) fail(ErrorKind::invalid_argument, "mass aspect grid does not match the boundary rule");
  std::vector<double> terms;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) terms.push_back(rule.weights[k] * ma.alpha[k]);
  const double limit = 0.5 * fg.n * (fg.n - 2) * pairwise_sum(terms);
  if (!r_inner) r_inner = fg.default_inner;
  return mass_identity_check(fg.triple, eps, r_inner, level, limit);
}

}  // namespace adslab
