#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adslab/errors.hpp"
#include "config.hpp"
#include "report.hpp"

namespace adslab::cli {

namespace {

const std::vector<std::string> kParamKeys{"M", "r0", "r_max"};

std::pair<std::string, double> parse_assignment(const std::string& s, const std::string& flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0)
    fail(ErrorKind::invalid_argument, flag + " expects name=value, got '" + s + "'");
  const std::string value = s.substr(eq + 1);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) fail(ErrorKind::invalid_argument, flag + ": bad number '" + value + "'");
  return {s.substr(0, eq), x};
}

double as_number(const ConfigValue& v, const std::string& key) {
  if (const auto* x = std::get_if<double>(&v)) return *x;
  fail(ErrorKind::invalid_argument, "config key " + key + " must be a number");
}

std::string as_string(const ConfigValue& v, const std::string& key) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  fail(ErrorKind::invalid_argument, "config key " + key + " must be a string");
}

int as_int(const ConfigValue& v, const std::string& key) {
  const double x = as_number(v, key);
  if (x != static_cast<double>(static_cast<long>(x)) || std::abs(x) > 1e9)
    fail(ErrorKind::invalid_argument, "config key " + key + " must be an integer");
  return static_cast<int>(x);
}

void apply_config(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_argument, "cannot open config " + path);
  std::map<std::string, ConfigValue> table;
  try {
    table = parse_config(in, path);
  } catch (const std::runtime_error& e) {
    fail(ErrorKind::invalid_argument, e.what());
  }
  for (const auto& [key, value] : table) {
    if (key == "metric") {
      c.metric = as_string(value, key);
    } else if (key == "n") {
      c.n = as_int(value, key);
    } else if (std::find(kParamKeys.begin(), kParamKeys.end(), key) != kParamKeys.end()) {
      c.params[key] = as_number(value, key);
    } else if (key.starts_with("params.")) {
      c.params[key.substr(7)] = as_number(value, key);
    } else if (key.starts_with("tolerances.")) {
      c.tolerances[key.substr(11)] = as_number(value, key);
    } else if (key == "identities") {
      if (const auto* list = std::get_if<std::vector<std::string>>(&value))
        c.identities = *list;
      else
        c.identities = {as_string(value, key)};
    } else if (key == "identity") {
      c.identities = {as_string(value, key)};
    } else if (key == "suite") {
      c.identities = {as_string(value, key)};
    } else if (key == "samples") {
      c.samples = as_int(value, key);
    } else if (key == "seed") {
      const int s = as_int(value, key);
      if (s < 0) fail(ErrorKind::invalid_argument, "seed must be non-negative");
      c.seed = static_cast<unsigned long>(s);
    } else if (key == "level") {
      c.level = as_int(value, key);
    } else if (key == "output") {
      c.output = as_string(value, key);
    } else if (key == "format") {
      c.format = as_string(value, key);
    } else {
      fail(ErrorKind::invalid_argument, "unknown config key " + key);
    }
  }
}

int emit(const RunConfig& c, const Report& r, std::ostream& out) {
  const std::string text = c.format == "csv" ? to_csv(r) : to_json(r);
  if (c.output.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) fail(ErrorKind::invalid_argument, "cannot write " + c.output);
  f << text;
  if (!f) fail(ErrorKind::invalid_argument, "write failed for " + c.output);
  return 0;
}

IdentityReport single(const std::string& name, double abs_residual, double rel_residual, double tolerance,
                      std::vector<double> point = {}) {
  IdentityReport r(name, tolerance);
  r.samples.push_back({std::move(point), abs_residual, rel_residual});
  r.finish();
  return r;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  } catch (...) {
    err << "error: unknown failure\n";
  }
  return 2;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.metric.empty()) fail(ErrorKind::invalid_argument, "no metric given (--metric)");
  if (c.samples < 1) fail(ErrorKind::invalid_argument, "samples must be at least 1");
  if (c.level < 0 || c.level > 4) fail(ErrorKind::invalid_argument, "level must lie in [0, 4]");
  if (c.format != "json" && c.format != "csv") fail(ErrorKind::invalid_argument, "format must be json or csv");
  for (const auto& [name, tol] : c.tolerances) {
    if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorKind::invalid_argument, "tolerance for " + name + " must be positive");
    const auto& names = identity_names();
    const bool fermat_part = name == "fermat-scalar" || name == "fermat-boundary" || name == "fermat-mean-curvature";
    const bool mass_part = name == "mass-identity" || name == "outer-limit" || name == "trace-identity";
    if (std::find(names.begin(), names.end(), name) == names.end() && !fermat_part && !mass_part)
      fail(ErrorKind::invalid_argument, "tolerance for unknown identity " + name);
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const Subject s = make_subject(c.metric, c.n, c.params);
    const std::vector<std::string> requested = c.identities.empty() ? std::vector<std::string>{"all"} : c.identities;
    const auto names = expand_identities(s, requested);

    SuiteOptions o;
    o.samples = c.samples;
    o.start = c.seed;
    o.seed = c.seed;
    o.level = c.level;
    o.tolerances = c.tolerances;

    Report r{s.metric, s.n, s.params, {}, std::nullopt};
    for (const auto& name : names) {
      auto reports = run_identity(s, name, o);
      for (auto& rep : reports) r.identities.push_back(std::move(rep));
    }
    emit(c, r, out);
    const bool ok = std::all_of(r.identities.begin(), r.identities.end(), [](const auto& x) { return x.pass; });
    return ok ? 0 : 1;
  });
}

int cmd_mass(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const Subject s = make_subject(c.metric, c.n, c.params);
    MassOptions o;
    o.level = c.level;
    MassReport m = run_mass(s, o);

    auto tol = [&](const std::string& name, double fallback) {
      auto it = c.tolerances.find(name);
      return it != c.tolerances.end() ? it->second : fallback;
    };
    Report r{s.metric, s.n, s.params, {}, std::nullopt};

    IdentityReport balance("mass-identity", tol("mass-identity", 1e-5));
    for (std::size_t k = 0; k < m.identity.size(); ++k) {
      const auto& id = m.identity[k];
      const double gap = id.bulk.refined - id.outer_boundary.refined - id.inner_boundary.refined;
      balance.samples.push_back({{m.eps[k]}, std::abs(gap), id.balance});
    }
    balance.finish();
    r.identities.push_back(std::move(balance));
    r.identities.push_back(single("outer-limit", std::abs(m.outer_limit - m.fg_limit),
                                  relative_gap(m.outer_limit, m.fg_limit), tol("outer-limit", 1e-4)));
    r.identities.push_back(single("trace-identity", m.aspect.trace_identity, m.aspect.trace_identity,
                                  tol("trace-identity", 1e-4)));
    r.mass = std::move(m);
    emit(c, r, out);
    const bool ok = std::all_of(r.identities.begin(), r.identities.end(), [](const auto& x) { return x.pass; });
    return ok ? 0 : 1;
  });
}

int cmd_catalog(const std::string& format, std::ostream& out) {
  const auto& entries = catalog_entries();
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json row;
      row["id"] = e.id;
      row["description"] = e.description;
      row["parameters"] = e.parameters;
      row["n_min"] = e.n_min;
      row["n_max"] = e.n_max;
      row["static_triple"] = e.static_triple;
      j.push_back(std::move(row));
    }
    out << j.dump(2) << '\n';
    return 0;
  }
  for (const auto& e : entries) {
    out << e.id << "\n  " << e.description << "\n  n in [" << e.n_min << ", " << e.n_max << "]\n";
    out << "  parameters: ";
    if (e.parameters.empty()) out << "none";
    for (std::size_t i = 0; i < e.parameters.size(); ++i) out << (i ? ", " : "") << e.parameters[i];
    out << '\n';
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Static vacuum identity checks and mass extraction", "adslab"};
  app.require_subcommand(1);

  RunConfig c;
  std::string config_path;
  std::vector<std::string> identities;
  std::vector<std::string> tolerances;
  std::vector<std::string> params;
  std::string suite;
  double mass = 0.0, r0 = 0.0, r_max = 0.0;
  std::string catalog_format = "text";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "TOML config file; flags override it");
    sub->add_option("--metric", c.metric, "catalog metric id");
    sub->add_option("--n", c.n, "spatial dimension");
    sub->add_option("--M", mass, "mass parameter");
    sub->add_option("--r0", r0, "soliton parameter r0");
    sub->add_option("--r_max", r_max, "outer chart radius");
    sub->add_option("--param", params, "metric parameter name=value");
    sub->add_option("--level", c.level, "quadrature refinement level");
    sub->add_option("--tolerance", tolerances, "tolerance override name=value");
    sub->add_option("-o,--output", c.output, "report path (default: standard output)");
    sub->add_option("--format", c.format, "json or csv");
  };

  auto* verify = app.add_subcommand("verify", "run identity checks on a catalog metric");
  add_common(verify);
  verify->add_option("--identity", identities, "identity name (repeatable)");
  verify->add_option("--suite", suite, "identity group, e.g. all");
  verify->add_option("--samples", c.samples, "Halton sample count");
  verify->add_option("--seed", c.seed, "Halton start index and polynomial seed");

  auto* mass_cmd = app.add_subcommand("mass", "extract the mass aspect and evaluate the mass identity");
  add_common(mass_cmd);

  auto* catalog = app.add_subcommand("catalog", "list catalog metrics");
  catalog->add_option("--format", catalog_format, "text or json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (catalog->parsed()) {
    if (catalog_format != "text" && catalog_format != "json") {
      err << "error: catalog format must be text or json\n";
      return 2;
    }
    return cmd_catalog(catalog_format, out);
  }

  CLI::App* sub = verify->parsed() ? verify : mass_cmd;
  const int status = guarded(err, [&] {
    if (!config_path.empty()) {
      // Re-apply flags on top of the file.
      RunConfig from_file;
      apply_config(from_file, config_path);
      auto given = [&](const char* name) { return sub->count(name) > 0; };
      if (!given("--metric")) c.metric = from_file.metric;
      if (!given("--n")) c.n = from_file.n;
      if (!given("--level")) c.level = from_file.level;
      if (!given("--output")) c.output = from_file.output;
      if (!given("--format")) c.format = from_file.format;
      if (sub == verify) {
        if (!given("--samples")) c.samples = from_file.samples;
        if (!given("--seed")) c.seed = from_file.seed;
        c.identities = from_file.identities;
      }
      c.params = from_file.params;
      c.tolerances = from_file.tolerances;
    }
    if (sub->count("--M")) c.params["M"] = mass;
    if (sub->count("--r0")) c.params["r0"] = r0;
    if (sub->count("--r_max")) c.params["r_max"] = r_max;
    for (const auto& p : params) {
      const auto [k, v] = parse_assignment(p, "--param");
      c.params[k] = v;
    }
    for (const auto& t : tolerances) {
      const auto [k, v] = parse_assignment(t, "--tolerance");
      c.tolerances[k] = v;
    }
    if (sub == verify && (!identities.empty() || !suite.empty())) {
      c.identities = identities;
      if (!suite.empty()) c.identities.push_back(suite);
    }
    return 0;
  });
  if (status != 0) return status;
  return sub == verify ? cmd_verify(c, out, err) : cmd_mass(c, out, err);
}

}  // namespace adslab::cli
