#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adslab/asymptotics.hpp"
#include "adslab/catalog.hpp"
#include "adslab/integrate.hpp"
#include "adslab/verify.hpp"

namespace adslab {

/// A catalog metric: a static triple, or the Lorentzian soliton.
struct Subject {
  std::string metric;
  int n = 0;
  Params params;
  std::optional<StaticTriple> triple;
  std::optional<LorentzMetric> lorentz;
};

/// Builds a subject from a catalog id; unknown ids or parameters throw
/// invalid_argument.
Subject make_subject(const std::string& id, int n, const Params& params);

struct SuiteOptions {
  int samples = 100;
  unsigned long start = 1;  // Halton start index
  int boundary_samples = 16;
  int level = 1;
  std::uint64_t seed = 1;  // random polynomial pairs
  std::map<std::string, double> tolerances;
};

/// Every identity name the suite knows, in report order.
const std::vector<std::string>& identity_names();
double default_tolerance(const std::string& name);

/// Resolves "all" and group names ("fermat") into identity names for the
/// subject. Throws invalid_argument for unknown names and for identities
/// that do not apply to the subject.
std::vector<std::string> expand_identities(const Subject& s, std::span<const std::string> requested);

/// One identity over the sample set; "fermat" yields three reports.
std::vector<IdentityReport> run_identity(const Subject& s, const std::string& name, const SuiteOptions& options);

struct PolynomialPair {
  Sym2Field t;
  ScalarField f;
};

/// Quadratic T and f in the chart coordinates (centred and scaled to the
/// box), coefficients uniform in [-1, 1].
PolynomialPair random_polynomial_pair(const Chart& chart, std::mt19937_64& rng);

struct ConvergenceRow {
  std::string integral;
  double eps = 0.0;
  Refined value;
};

struct MassOptions {
  int level = 1;
  std::vector<double> eps{0.1, 0.05, 0.025};
  ExtractionOptions extraction;
  FGOptions gauge;
};

struct MassReport {
  MassAspect aspect;
  MassFunctional functional;
  std::vector<double> eps;
  std::vector<MassIdentity> identity;  // one per eps
  double fg_limit = 0.0;
  double outer_limit = 0.0;  // outer boundary extrapolated to eps = 0
  std::vector<ConvergenceRow> convergence;
};

/// Extraction, the positive-mass functional and the mass identity at each
/// eps. Throws unsupported_topology for non-sphere infinity.
MassReport run_mass(const Subject& s, const MassOptions& options = {});

}  // namespace adslab
