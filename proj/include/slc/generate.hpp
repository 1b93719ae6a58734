#ifndef SLC_GENERATE_HPP
#define SLC_GENERATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slc/eval.hpp"
#include "slc/syntax.hpp"

namespace slc {

struct GenConfig {
  Calculus calculus = Calculus::Linear;
  int max_depth = 5;
  // Atoms for binder, injection and target types.
  std::vector<Type> palette = {Type::unit(), Type::sum(Type::unit(), Type::unit()),
                               Type::lolli(Type::unit(), Type::unit()), Type::bang(Type::unit())};
  std::uint64_t seed = 1;
  int count = 1000;
  Fuel fuel = 10000;
  int probes = 8;
  double rec_probability = 0.08;
  // Bound under which a non-converged program counts as divergent.
  Fuel divergence_bound = 1000000;
  // Sweep bound for the naive backend's lambda judgments in random suites.
  Fuel bottom_bound = 2000;
  // Fixed result type, if any.
  std::optional<Type> target;
};

// Counts how often each formation rule appears in emitted terms.
struct RuleCoverage {
  std::map<std::string, std::size_t> counts;

  void add(const Term& m);
  // Rules never seen.
  std::vector<std::string> missing() const;
  static const std::vector<std::string>& rules();
};

struct Generated {
  Term term;
  Type type;
};

// A closed term accepted by typecheck(cfg.calculus), deterministic in
// cfg.seed. Generation picks formation rules top-down and threads the
// linear variables each subterm must consume; the result is re-checked and
// regenerated (then made shallower) in the rare case it is rejected.
Generated gen_typed_term(const GenConfig& cfg);

struct GeneratedValue {
  Context ctx;
  Term value;
  Type type;
};

// A value well-typed in a generated context. With `nonlinear` set, both the
// context and the type are non-linear.
GeneratedValue gen_typed_value(const GenConfig& cfg, bool nonlinear);

// Seed of the i-th case of a suite run with base seed `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::size_t i);

// Counters over all gen_typed_term / gen_typed_value calls in this process.
struct GenStats {
  std::size_t emitted = 0;
  std::size_t rejected = 0;  // candidates the type checker turned down
};
GenStats gen_stats();

}  // namespace slc

#endif
