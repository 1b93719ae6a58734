#ifndef SLC_SUITES_HPP
#define SLC_SUITES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "slc/generate.hpp"

namespace slc {

struct SuiteConfig {
  GenConfig gen;
  // Calculi to run; suites that are calculus-specific ignore this.
  std::vector<Calculus> calculi = {Calculus::Linear, Calculus::Affine};
  // Generated points per type for the comonoid laws.
  std::size_t points_per_type = 100;
  // Generated values for the naturality and coherence suites.
  std::size_t value_cases = 500;
  // Fuel for comparing generated semantic values. Their computations
  // converge within a few delay steps or never.
  Fuel law_fuel = 200;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct CaseFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // gen seed reproducing the case
  std::string calculus;
  std::string term;
  std::string type;
  std::string detail;
};

// A comparison that ran out of fuel or probes without a verdict.
struct UnknownCase {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string term;
  Fuel fuel = 0;
  std::string detail;
};

struct TestReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<CaseFailure> failures;
  std::vector<UnknownCase> unknowns;
  std::map<std::string, double> metrics;
  RuleCoverage coverage;
  double wall_seconds = 0;
  // For most suites: no failures. The degeneracy suite passes when the
  // naive backend fails on t and the standard one does not.
  bool passed = false;

  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();

// Runs a property suite. Throws ContractViolation for an unknown name.
TestReport run_suite(const std::string& name, const SuiteConfig& cfg);

// Non-linear types built from the atoms I, I+I, !I, !(I -o I) by up to two
// rounds of +, * and !.
std::vector<Type> comonoid_types();

// The adequacy constant: denotational fuel needed for a converging program is
// at most this many times its evaluation rule count.
inline constexpr Fuel kAdequacyFactor = 1;

}  // namespace slc

#endif
