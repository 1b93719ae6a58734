#ifndef SLC_DENOTE_STANDARD_HPP
#define SLC_DENOTE_STANDARD_HPP

#include <functional>

#include "slc/domains.hpp"
#include "slc/syntax.hpp"

namespace slc {

// A map from environments over `ctx` to computations of `type`.
struct Denotation {
  Context ctx;
  Type type;
  std::function<Comp(const SemEnv&)> fun;
};

// A total map from environments to values; no fuel involved.
struct ValueDenotation {
  Context ctx;
  Type type;
  std::function<SemVal(const SemEnv&)> fun;

  // The computation that returns fun(env) at once.
  Denotation as_denotation() const;
};

// Compositional interpretation of a well-typed term. Lambdas are values,
// multi-premise constructs sequence their parts left to right and strictly,
// and rec is the least fixed point, one delay step per unfolding. Throws
// ContractViolation unless typecheck(calc, ctx, m) = a.
Denotation denote(Calculus calc, const Context& ctx, const Term& m, const Type& a);

// Value-level interpretation of a value term.
ValueDenotation denote_value_V(Calculus calc, const Context& ctx, const Term& v, const Type& a);

// Interpretation of a non-linear value in a non-linear context. The value
// itself is calculus-neutral, but a lifted body may only typecheck affinely.
ValueDenotation denote_value_B(const Context& ctx, const Term& v, const Type& p,
                               Calculus calc = Calculus::Linear);

// The least fixed point of `body` (over ctx, z : !a) in its z argument:
// fix(env) = delay, then body(env, z = thunk(fix(env))). The n-th
// approximant is what running with fuel n observes.
Denotation fix_denote(const Context& ctx, const Name& z, const Type& a, const Denotation& body);

}  // namespace slc

#endif
