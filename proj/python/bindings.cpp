#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adslab/catalog.hpp"
#include "adslab/errors.hpp"
#include "adslab/suite.hpp"
#include "cli.hpp"

namespace py = pybind11;

namespace {

py::dict report_dict(const adslab::IdentityReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["points"] = r.points;
  d["max_abs_residual"] = r.max_abs;
  d["max_rel_residual"] = r.max_rel;
  d["tolerance"] = r.tolerance;
  d["pass"] = r.pass;
  d["notes"] = r.notes;
  return d;
}

py::list verify(const std::string& metric, int n, const adslab::Params& params,
                const std::vector<std::string>& identities, int samples, unsigned long seed, int level,
                const std::map<std::string, double>& tolerances) {
  if (samples < 1) adslab::fail(adslab::ErrorKind::invalid_argument, "samples must be at least 1");
  const auto s = adslab::make_subject(metric, n, params);
  adslab::SuiteOptions o;
  o.samples = samples;
  o.start = seed;
  o.seed = seed;
  o.level = level;
  o.tolerances = tolerances;
  py::list out;
  for (const auto& name : adslab::expand_identities(s, identities))
    for (const auto& r : adslab::run_identity(s, name, o)) out.append(report_dict(r));
  return out;
}

py::dict mass(const std::string& metric, int n, const adslab::Params& params, int level) {
  const auto s = adslab::make_subject(metric, n, params);
  adslab::MassOptions o;
  o.level = level;
  const auto m = adslab::run_mass(s, o);
  py::dict d;
  d["alpha_mean"] = m.aspect.alpha_mean;
  d["alpha_spread"] = m.aspect.alpha_spread;
  d["alpha"] = m.aspect.alpha;
  d["scalar_mass"] = m.functional.scalar_mass;
  d["vector_mass"] = std::vector<double>(m.functional.vector_mass.begin(), m.functional.vector_mass.end());
  d["inequality"] = m.functional.inequality;
  d["trace_tau"] = m.aspect.trace_tau;
  d["trace_identity"] = m.aspect.trace_identity;
  d["fg_limit"] = m.fg_limit;
  d["outer_limit"] = m.outer_limit;
  py::list rows;
  for (std::size_t k = 0; k < m.identity.size(); ++k) {
    py::dict row;
    row["eps"] = m.eps[k];
    row["bulk"] = m.identity[k].bulk.refined;
    row["outer_boundary"] = m.identity[k].outer_boundary.refined;
    row["inner_boundary"] = m.identity[k].inner_boundary.refined;
    row["balance"] = m.identity[k].balance;
    rows.append(row);
  }
  d["mass_identity"] = rows;
  return d;
}

py::list catalog() {
  py::list out;
  for (const auto& e : adslab::catalog_entries()) {
    py::dict d;
    d["id"] = e.id;
    d["description"] = e.description;
    d["parameters"] = e.parameters;
    d["n_min"] = e.n_min;
    d["n_max"] = e.n_max;
    d["static_triple"] = e.static_triple;
    out.append(d);
  }
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = adslab::cli::run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_adslab, m) {
  m.doc() = "Static vacuum identity checks and mass extraction";

  py::register_exception<adslab::Error>(m, "Error", PyExc_ValueError);

  m.def("catalog", &catalog, "Catalog entries as dicts.");
  m.def("identity_names", &adslab::identity_names, "Identity names in report order.");
  m.def("default_tolerance", &adslab::default_tolerance, py::arg("name"));
  m.def("verify", &verify, py::arg("metric"), py::arg("n") = 3, py::arg("params") = adslab::Params{},
        py::arg("identities") = std::vector<std::string>{"all"}, py::arg("samples") = 100, py::arg("seed") = 1,
        py::arg("level") = 1, py::arg("tolerances") = std::map<std::string, double>{},
        "Run identities on a catalog metric; one report dict per identity.");
  m.def("mass", &mass, py::arg("metric"), py::arg("n") = 3, py::arg("params") = adslab::Params{},
        py::arg("level") = 1, "Mass aspect, positive-mass functional and mass identity.");
  m.def("run_cli", &run_cli, py::arg("args"), "Run the command line; returns (exit code, stdout, stderr).");
}
