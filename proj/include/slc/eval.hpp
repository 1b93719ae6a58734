#ifndef SLC_EVAL_HPP
#define SLC_EVAL_HPP

#include <cstdint>
#include <optional>

#include "slc/syntax.hpp"

namespace slc {

// Number of big-step rule instances a derivation may use.
using Fuel = std::uint64_t;

struct EvalOutcome {
  enum class Status {
    Converged,
    OutOfFuel,
    // No rule applies, e.g. `force x` for a free x or `*; *` where the left
    // side is not `*`. Only reachable for open or ill-typed terms.
    Stuck,
  };

  Status status;
  std::optional<Term> value;  // set iff Converged

  bool converged() const { return status == Status::Converged; }
};

struct EvalTrace {
  EvalOutcome outcome;
  Fuel rules = 0;            // rule instances used
  std::size_t max_depth = 0;  // height of the (partial) derivation
};

// Call-by-value big-step evaluation. Converges iff a derivation of m => v
// exists using at most `fuel` rule instances.
EvalOutcome eval(const Term& m, Fuel fuel);
EvalTrace eval_trace(const Term& m, Fuel fuel);

// Rule instances needed to evaluate a value to itself.
Fuel value_size(const Term& v);

}  // namespace slc

#endif
