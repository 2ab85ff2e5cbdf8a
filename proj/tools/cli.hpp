#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "adslab/catalog.hpp"
#include "adslab/suite.hpp"

namespace adslab::cli {

struct RunConfig {
  std::string metric;
  int n = 3;
  Params params;
  std::vector<std::string> identities;  // empty means "all"
  int samples = 100;
  unsigned long seed = 1;  // Halton start index and polynomial-pair seed
  int level = 1;
  std::map<std::string, double> tolerances;
  std::string output;  // empty writes to the output stream
  std::string format = "json";
};

/// Throws invalid_argument on a non-positive tolerance, samples < 1,
/// an unknown format or a level outside [0, 4].
void validate(const RunConfig& c);

/// Exit codes: 0 every identity passes, 1 some identity fails, 2 usage or
/// evaluation error (diagnostic on `err`).
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_mass(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_catalog(const std::string& format, std::ostream& out);

/// Entry point without the program name: `verify …`, `mass …`, `catalog`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adslab::cli
