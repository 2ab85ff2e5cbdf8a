#include "report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace adslab::cli {

namespace {

using json = nlohmann::ordered_json;

json identity_json(const IdentityReport& r) {
  json j;
  j["name"] = r.name;
  j["points"] = r.points;
  j["max_abs_residual"] = r.max_abs;
  j["max_rel_residual"] = r.max_rel;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  return j;
}

json mass_json(const MassReport& m) {
  json j;
  j["alpha_mean"] = m.aspect.alpha_mean;
  j["alpha_spread"] = m.aspect.alpha_spread;
  j["scalar_mass"] = m.functional.scalar_mass;
  j["vector_mass"] = std::vector<double>(m.functional.vector_mass.data(),
                                         m.functional.vector_mass.data() + m.functional.vector_mass.size());
  j["inequality"] = m.functional.inequality;
  j["trace_tau"] = m.aspect.trace_tau;
  j["fit_residual"] = m.aspect.fit_residual;
  j["trace_identity"] = m.aspect.trace_identity;
  j["fg_limit"] = m.fg_limit;
  j["outer_limit"] = m.outer_limit;
  json rows = json::array();
  for (std::size_t k = 0; k < m.identity.size(); ++k) {
    const auto& id = m.identity[k];
    json row;
    row["eps"] = m.eps[k];
    row["bulk"] = id.bulk.refined;
    row["outer_boundary"] = id.outer_boundary.refined;
    row["inner_boundary"] = id.inner_boundary.refined;
    row["balance"] = id.balance;
    row["normal_deviation"] = id.normal_deviation;
    rows.push_back(std::move(row));
  }
  j["mass_identity"] = std::move(rows);
  return j;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_json(const Report& r) {
  json j;
  j["metric"] = r.metric;
  j["n"] = r.n;
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = std::move(params);
  json ids = json::array();
  for (const auto& id : r.identities) ids.push_back(identity_json(id));
  j["identities"] = std::move(ids);
  j["mass"] = r.mass ? mass_json(*r.mass) : json(nullptr);
  json conv = json::array();
  if (r.mass) {
    for (const auto& c : r.mass->convergence) {
      json row;
      row["integral"] = c.integral;
      row["eps"] = c.eps;
      row["level"] = c.value.level;
      row["value"] = c.value.value;
      row["refined"] = c.value.refined;
      row["gap"] = c.value.gap();
      conv.push_back(std::move(row));
    }
  }
  j["convergence"] = std::move(conv);
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "identity,point,abs_residual,rel_residual,tolerance,pass\n";
  for (const auto& id : r.identities) {
    for (const auto& s : id.samples) {
      os << id.name << ',';
      for (std::size_t i = 0; i < s.point.size(); ++i) os << (i ? ";" : "") << number(s.point[i]);
      os << ',' << number(s.abs) << ',' << number(s.rel) << ',' << number(id.tolerance) << ','
         << (s.rel <= id.tolerance ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

}  // namespace adslab::cli
