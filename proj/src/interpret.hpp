#ifndef SLC_SRC_INTERPRET_HPP
#define SLC_SRC_INTERPRET_HPP

// Shared compiler from typed terms to environment-to-computation closures,
// used by both the standard and the naive backend. Each compiled node takes
// an environment over exactly its free variables; parents route their
// environment to children, copying shared entries and discarding dropped ones.

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "slc/domains.hpp"

namespace slc::detail {

using Vars = std::vector<std::pair<Name, Type>>;  // sorted by name
using Scope = std::map<Name, Type>;
using CompFn = std::function<Comp(const SemEnv&)>;
using ValFn = std::function<SemVal(const SemEnv&)>;

struct NaiveLambdas {
  Fuel bottom_bound;
  int probes;
};

struct Compiled {
  Type type;
  Vars fv;
  CompFn fun;
};

struct CompiledValue {
  Type type;
  Vars fv;
  ValFn fun;
};

class Interpreter {
 public:
  Interpreter(Calculus calc, std::optional<NaiveLambdas> naive) : calc_(calc), naive_(naive) {}

  std::shared_ptr<const Compiled> term(const Scope& scope, const Term& m) const;
  // Throws ContractViolation if v is not a value.
  std::shared_ptr<const CompiledValue> value(const Scope& scope, const Term& v) const;

  // Adapts a compiled node to environments over all of `ctx`.
  CompFn close(const Context& ctx, std::shared_ptr<const Compiled> c) const;
  ValFn close(const Context& ctx, std::shared_ptr<const CompiledValue> c) const;

  Calculus calculus() const { return calc_; }

 private:
  CompFn lambda(const Name& x, const Type& a, const Vars& fv,
                std::shared_ptr<const Compiled> body) const;

  Calculus calc_;
  std::optional<NaiveLambdas> naive_;
};

Vars vars_of(const Context& ctx);
Scope scope_of(const Context& ctx);

// Keeps the entries of env (over `from`) named in `to`, discarding the rest.
SemEnv slice(Calculus calc, const SemEnv& env, const Vars& from, const Vars& to);

// The least fixed point of body in z, for body over `fv` plus z.
Comp fixpoint(Calculus calc, std::shared_ptr<const CompFn> body, const Vars& body_fv, const Name& z,
              const Type& z_type, const Vars& fv, const SemEnv& env);

}  // namespace slc::detail

#endif
