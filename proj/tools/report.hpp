#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adslab/suite.hpp"
#include "adslab/verify.hpp"

namespace adslab::cli {

struct Report {
  std::string metric;
  int n = 0;
  Params params;
  std::vector<IdentityReport> identities;
  std::optional<MassReport> mass;
};

/// Keys in fixed order, numbers in shortest round-trip form.
std::string to_json(const Report& r);
/// identity,point,abs_residual,rel_residual,tolerance,pass; point
/// coordinates joined by ';'.
std::string to_csv(const Report& r);

}  // namespace adslab::cli
