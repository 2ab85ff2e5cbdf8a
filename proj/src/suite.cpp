#include "adslab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "adslab/errors.hpp"
#include "adslab/numerics.hpp"

namespace adslab {

namespace {

const std::map<std::string, double>& tolerance_table() {
  static const std::map<std::string, double> table{
      {"static", 1e-9},         {"scalar-curvature", 1e-9}, {"einstein-spacetime", 1e-8},
      {"einstein-doubled", 1e-8}, {"einstein-tensor", 1e-9}, {"div-identity", 1e-9},
      {"conformal-scalar", 1e-8}, {"bochner", 1e-8},        {"bochner-plus", 1e-8},
      {"lindblom", 1e-8},       {"bach", 1e-9},             {"bach-static", 1e-8},
      {"riemann-3d", 1e-9},     {"max-principle", 1e-10},   {"fermat-scalar", 1e-7},
      {"fermat-boundary", 1e-4}, {"fermat-mean-curvature", 1e-4}, {"bm", 1e-4},
      {"ah", 1e-4},
  };
  return table;
}

double tolerance_for(const SuiteOptions& o, const std::string& name) {
  auto it = o.tolerances.find(name);
  return it != o.tolerances.end() ? it->second : default_tolerance(name);
}

Params with_defaults(const Params& given, const Params& defaults, const std::string& id) {
  Params out = defaults;
  for (const auto& [k, v] : given) {
    if (!defaults.contains(k)) fail(ErrorKind::invalid_argument, "metric " + id + " has no parameter " + k);
    out[k] = v;
  }
  return out;
}

Point prepend(double t, const Point& p) {
  Point q{{t}};
  q.coords.insert(q.coords.end(), p.coords.begin(), p.coords.end());
  return q;
}

bool three_only(const std::string& name) {
  return name == "lindblom" || name == "bach" || name == "bach-static" || name == "riemann-3d";
}

// Identities whose statements assume a complete manifold without inner boundary.
bool needs_complete(const std::string& name) { return name == "max-principle" || name == "fermat"; }

BoundaryRule rule_for(const FGGauge& fg, int level) {
  return section_rule(*fg.triple.profile, sphere_order_for_level(level));
}

}  // namespace

Subject make_subject(const std::string& id, int n, const Params& params) {
  Subject s;
  s.metric = id;
  s.n = n;
  if (id == "ads-soliton") {
    s.params = with_defaults(params, {{"r0", 1.0}, {"r_max", 10.0}}, id);
    s.lorentz = make_ads_soliton(n, s.params.at("r0"), s.params.at("r_max"));
    return s;
  }
  s.triple = make_triple(id, n, params);
  s.params = s.triple->params;
  return s;
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{
      "static",   "scalar-curvature", "einstein-spacetime", "einstein-doubled", "einstein-tensor",
      "div-identity", "conformal-scalar", "bochner", "bochner-plus", "lindblom", "bach", "bach-static",
      "riemann-3d", "max-principle", "fermat", "bm", "ah"};
  return names;
}

double default_tolerance(const std::string& name) {
  auto it = tolerance_table().find(name);
  if (it == tolerance_table().end()) fail(ErrorKind::invalid_argument, "unknown identity " + name);
  return it->second;
}

std::vector<std::string> expand_identities(const Subject& s, std::span<const std::string> requested) {
  auto known = [](const std::string& name) {
    return std::find(identity_names().begin(), identity_names().end(), name) != identity_names().end();
  };
  std::vector<std::string> out;
  auto push = [&out](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  for (const auto& name : requested) {
    if (name == "all") {
      if (s.lorentz) {
        push("einstein-spacetime");
        continue;
      }
      const bool inner = s.triple->profile && s.triple->profile->inner_boundary;
      for (const auto& id : identity_names()) {
        if (id == "bochner-plus") continue;
        if (three_only(id) && s.n != 3) continue;
        if ((id == "bm" || id == "ah") && s.n < 3) continue;
        if (needs_complete(id) && inner) continue;
        if ((id == "fermat" || id == "bm" || id == "ah") && s.metric == "flat") continue;
        push(id);
      }
      continue;
    }
    if (!known(name)) fail(ErrorKind::invalid_argument, "unknown identity " + name);
    if (s.lorentz && name != "einstein-spacetime" && name != "ah")
      fail(ErrorKind::invalid_argument, "identity " + name + " needs a static triple; " + s.metric + " is Lorentzian only");
    if (three_only(name) && s.n != 3) fail(ErrorKind::dimension, "identity " + name + " is defined for n = 3 only");
    if ((name == "bm" || name == "ah") && s.n < 3) fail(ErrorKind::dimension, "identity " + name + " needs n >= 3");
    push(name);
  }
  return out;
}

PolynomialPair random_polynomial_pair(const Chart& chart, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int d = chart.dim();
  // Monomials 1, x_i, x_i x_j (i <= j) in centred coordinates.
  const int terms = 1 + d + d * (d + 1) / 2;
  auto draw = [&] {
    std::vector<double> c(static_cast<std::size_t>(terms));
    for (auto& v : c) v = coef(rng);
    return c;
  };
  std::vector<double> centre, scale;
  for (const auto& iv : chart.domain()) {
    centre.push_back(0.5 * (iv.lo + iv.hi));
    scale.push_back(2.0 / iv.width());
  }
  auto poly = [d, centre, scale](const std::vector<double>& c, Coordinates x) {
    std::vector<Jet> y;
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      y.push_back((x[k] - centre[k]) * scale[k]);
    }
    Jet s = Jet::constant(c[0], x[0].dim(), x[0].order());
    std::size_t m = 1;
    for (int i = 0; i < d; ++i) s += c[m++] * y[static_cast<std::size_t>(i)];
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) s += c[m++] * (y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]);
    return s;
  };
  std::vector<std::vector<double>> tc;
  for (int i = 0; i < d * (d + 1) / 2; ++i) tc.push_back(draw());
  const auto fc = draw();

  PolynomialPair out;
  out.t.chart = chart;
  out.t.fn = [d, tc, poly](Coordinates x) {
    JetMatrix t = JetMatrix::zero(d, x[0].dim(), x[0].order());
    std::size_t m = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) t(i, j) = t(j, i) = poly(tc[m++], x);
    return t;
  };
  out.f.chart = chart;
  out.f.fn = [fc, poly](Coordinates x) { return poly(fc, x); };
  return out;
}

std::vector<IdentityReport> run_identity(const Subject& s, const std::string& name, const SuiteOptions& options) {
  if (options.samples < 1) fail(ErrorKind::invalid_argument, "sample count must be at least 1");
  const double tol = name == "fermat" ? 0.0 : tolerance_for(options, name);
  IdentityReport report(name, tol);

  if (s.lorentz) {
    if (name == "einstein-spacetime") {
      for (const auto& p : halton_points(s.lorentz->metric.chart, options.samples, options.start)) {
        const double r = residual_einstein_spacetime(s.lorentz->metric, p);
        report.add(p, r, r);
      }
    } else if (name == "ah") {
      const auto slice = *s.lorentz->spatial;
      const auto fg = collar_gauge(slice, s.n, s.metric, s.params);
      ExtractionOptions loose;
      loose.fit_tolerance = INFINITY;
      return {validate_ah(fg, extract_expansion(fg, rule_for(fg, options.level), loose), tol)};
    } else {
      fail(ErrorKind::invalid_argument, "identity " + name + " needs a static triple");
    }
    report.finish();
    return {report};
  }

  const StaticTriple& t = *s.triple;
  const auto points = halton_points(t.g.chart, options.samples, options.start);
  const double n = t.n;

  if (name == "static") {
    for (const auto& p : points) {
      const auto r = residual_static(t, p);
      const double worst = std::max(r.f1, r.f2);
      report.add(p, worst, worst);
    }
  } else if (name == "scalar-curvature") {
    for (const auto& p : points) {
      const double sc = curvature_package(t.g, p).scalar;
      report.add(p, std::abs(sc + n * (n - 1)), relative_gap(sc, -n * (n - 1)));
    }
  } else if (name == "einstein-spacetime" || name == "einstein-doubled") {
    const MetricField m = name == "einstein-spacetime" ? spacetime_metric(t).metric : doubled_riemannian(t).metric;
    for (const auto& p : points) {
      const double r = residual_einstein_spacetime(m, prepend(name == "einstein-spacetime" ? 0.0 : 1.0, p));
      report.add(p, r, r);
    }
  } else if (name == "einstein-tensor") {
    for (const auto& p : points) {
      const auto e = einstein_tensor(t, p);
      const double r = (e.geom - e.lapse).cwiseAbs().maxCoeff();
      const double scale = std::max({1.0, e.geom.cwiseAbs().maxCoeff(), e.lapse.cwiseAbs().maxCoeff()});
      report.add(p, r, r / scale);
    }
  } else if (name == "div-identity") {
    std::mt19937_64 rng(options.seed);
    for (const auto& p : points) {
      const auto pair = random_polynomial_pair(t.g.chart, rng);
      const auto d = check_div_identity(t.g, pair.t, pair.f, p);
      report.add(p, d.residual, d.relative);
    }
  } else if (name == "conformal-scalar") {
    for (const auto& p : points) {
      const auto c = conformal_scalar(t.g, t.V, p);
      report.add(p, std::abs(c.formula_value - c.direct_value), relative_gap(c.formula_value, c.direct_value));
    }
  } else if (name == "bochner" || name == "bochner-plus") {
    for (const auto& p : points) {
      const auto b = check_bochner(t, p);
      const double rhs = name == "bochner" ? b.rhs_minus : b.rhs_plus;
      report.add(p, std::abs(b.lhs - rhs), relative_gap(b.lhs, rhs));
    }
  } else if (name == "lindblom") {
    int skipped = 0;
    std::vector<Point> used;
    for (const auto& p : points) {
      try {
        const auto l = check_lindblom(t, p);
        report.add(p, std::abs(l.lhs - l.rhs), l.residual);
        used.push_back(p);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::critical_point) throw;
        ++skipped;
      }
    }
    if (skipped > 0) report.notes.push_back(std::to_string(skipped) + " sample points skipped at critical points of V");
    if (!used.empty()) {
      const auto fit = fit_lindblom(t, used);
      char buf[200];
      std::snprintf(buf, sizeof buf, "fitted coefficients: bach %.12g%s, grad %.12g%s; fit residual %.3g",
                    fit.bach_coefficient, fit.bach_identifiable ? "" : " (unidentifiable, stated value kept)",
                    fit.grad_coefficient, fit.grad_identifiable ? "" : " (unidentifiable, stated value kept)",
                    fit.residual);
      if (std::abs(fit.bach_coefficient - 0.25) > 1e-6 || std::abs(fit.grad_coefficient - 0.75) > 1e-6)
        report.notes.emplace_back("fitted coefficients differ from the stated 1/4 and 3/4");
      report.notes.emplace_back(buf);
    }
  } else if (name == "bach") {
    for (const auto& p : points) {
      const double b = bach_tensor(t.g, p).max_abs();
      report.add(p, b, b);
    }
  } else if (name == "bach-static") {
    for (const auto& p : points) {
      const double r = bach_static_formula(t, p).residual;
      report.add(p, r, r);
    }
  } else if (name == "riemann-3d") {
    for (const auto& p : points) {
      const auto d = riemann_from_ricci_3d(t.g, p);
      report.add(p, d.residual, d.residual / std::max(1.0, d.direct.max_abs()));
    }
  } else if (name == "max-principle") {
    for (const auto& p : points) {
      const double u = max_principle_scalar(t, p);
      report.add(p, std::max(0.0, u), std::max(0.0, u));
    }
    report.notes.emplace_back("residual is max(0, u) with u = |grad V|^2 - V^2 + 1");
  } else if (name == "fermat") {
    const auto fg = to_fg_gauge(t);
    FermatOptions fo;
    auto it = options.tolerances.find("fermat-scalar");
    if (it != options.tolerances.end()) fo.scalar_tolerance = it->second;
    it = options.tolerances.find("fermat-boundary");
    if (it != options.tolerances.end()) fo.limit_tolerance = it->second;
    auto data = fermat_check(fg.triple, options.boundary_samples, fo);
    it = options.tolerances.find("fermat-mean-curvature");
    if (it != options.tolerances.end()) {
      data.reports[2].tolerance = it->second;
      data.reports[2].finish();
    }
    return data.reports;
  } else if (name == "bm" || name == "ah") {
    const auto fg = to_fg_gauge(t);
    const auto rule = rule_for(fg, options.level);
    const auto ma = extract_expansion(fg, rule);
    if (name == "bm") return {check_bm(fg, ma, ma.radii, tol)};
    return {validate_ah(fg, ma, tol)};
  } else {
    fail(ErrorKind::invalid_argument, "unknown identity " + name);
  }
  report.finish();
  return {report};
}

MassReport run_mass(const Subject& s, const MassOptions& options) {
  if (s.lorentz) {
    if (s.lorentz->spatial && s.lorentz->spatial->topology != SectionTopology::sphere)
      fail(ErrorKind::unsupported_topology, "conformal infinity is not a sphere");
    fail(ErrorKind::invalid_argument, s.metric + " has no static triple");
  }
  if (options.eps.size() < 2) fail(ErrorKind::invalid_argument, "mass run needs at least two eps levels");
  if (s.n < 3) fail(ErrorKind::dimension, "mass aspect needs n >= 3");
  const auto fg = to_fg_gauge(*s.triple, options.gauge);
  const auto rule = rule_for(fg, options.level);

  MassReport out;
  out.aspect = extract_expansion(fg, rule, options.extraction);
  out.functional = mass_functional(out.aspect, rule);
  out.eps = options.eps;
  std::vector<double> outer;
  for (double eps : options.eps) {
    auto m = mass_identity(fg, out.aspect, rule, eps, options.level);
    out.fg_limit = m.fg_limit;
    outer.push_back(m.outer_boundary.refined);
    out.convergence.push_back({"bulk", eps, m.bulk});
    out.convergence.push_back({"outer_boundary", eps, m.outer_boundary});
    out.convergence.push_back({"inner_boundary", eps, m.inner_boundary});
    out.identity.push_back(std::move(m));
  }
  std::vector<int> powers;
  for (std::size_t k = 0; k + 1 < outer.size(); ++k) powers.push_back(s.n - 2 + static_cast<int>(k));
  const double ratio = options.eps[0] / options.eps[1];
  out.outer_limit = richardson(outer, ratio, powers).value;
  return out;
}

}  // namespace adslab
