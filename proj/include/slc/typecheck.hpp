#ifndef SLC_TYPECHECK_HPP
#define SLC_TYPECHECK_HPP

#include <set>
#include <stdexcept>
#include <string>

#include "slc/syntax.hpp"

namespace slc {

enum class TypeErrorKind {
  UnboundVariable,
  TypeMismatch,
  LinearVarDuplicated,
  LinearVarDiscarded,
  LinearVarInLift,
  LinearVarInRec,
  BranchUsageMismatch,
  NotAFunction,
  NotABang,
  NotASum,
  NotATensor,
};

const char* to_string(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  // `rule` names the formation rule that failed, e.g. "pair" or "lift";
  // `location` is the printed subterm being checked.
  TypeError(TypeErrorKind kind, std::string rule, std::string location, std::string details);

  TypeErrorKind kind() const { return kind_; }
  const std::string& rule() const { return rule_; }
  const std::string& location() const { return location_; }
  const std::string& details() const { return details_; }

 private:
  TypeErrorKind kind_;
  std::string rule_;
  std::string location_;
  std::string details_;
};

// The linearly-typed context variables a term uses. Non-linear variables
// never appear: they may be shared freely between premises.
struct UsageReport {
  std::set<Name> consumed;
};

struct Typing {
  Type type;
  UsageReport usage;
};

// Algorithmic checking of `ctx |- m : A` in the given calculus.
//
// Context splitting is done by usage accounting: the premises of a
// multi-premise rule must use disjoint sets of linear variables. In the
// linear calculus every linear variable must be used exactly once. In the
// affine calculus an unused linear variable is discarded, which requires a
// var, star or lift leaf to receive it; `rec` only admits a non-linear
// context and therefore cannot.
//
// Throws TypeError on rejection.
Typing typecheck(Calculus calc, const Context& ctx, const Term& m);

// Closed-program entry point.
Type check_program(Calculus calc, const Term& m);

// Plain simple-type synthesis that ignores usage restrictions. Used where a
// term is already known to be well-typed and only binder types are needed.
Type synthesize(const Context& ctx, const Term& m);

}  // namespace slc

#endif
