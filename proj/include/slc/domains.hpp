#ifndef SLC_DOMAINS_HPP
#define SLC_DOMAINS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slc/eval.hpp"
#include "slc/syntax.hpp"

namespace slc {

class Comp;

// Elements of the value interpretation of a type: unit, injections, pairs,
// value-to-computation functions and suspended computations.
class SemVal {
 public:
  enum class Kind { Unit, Inl, Inr, Pair, Fun, Thunk };
  using Fn = std::function<Comp(const SemVal&)>;

  static SemVal unit();
  static SemVal inl(SemVal v);
  static SemVal inr(SemVal v);
  static SemVal pair(SemVal a, SemVal b);
  // `label` is only used when printing (probe tables, witnesses).
  static SemVal fun(Fn f, std::string label = "fun");
  static SemVal thunk(Comp c);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  const SemVal& payload() const;  // Inl / Inr
  const SemVal& first() const;    // Pair
  const SemVal& second() const;   // Pair
  Comp apply(const SemVal& arg) const;  // Fun
  const std::string& label() const;     // Fun
  const Comp& suspended() const;        // Thunk

 private:
  struct Node;
  explicit SemVal(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct RunResult {
  std::optional<SemVal> value;  // nullopt: not yet converged
  Fuel used = 0;                // delay steps taken
  bool converged() const { return value.has_value(); }
};

// A possibly-divergent computation in the partiality monad. A computation is
// a finite tree of returns and binds interleaved with delay steps; running it
// with fuel n allows at most n delay steps. Running is pure and monotone in
// fuel, and never recurses on the host stack.
class Comp {
 public:
  using K = std::function<Comp(const SemVal&)>;

  static Comp pure(SemVal v);
  // One delay step, then continue with next().
  static Comp later(std::function<Comp()> next);
  // Never converges at any fuel.
  static Comp bottom();

  Comp bind(K k) const;
  RunResult run(Fuel fuel) const;

 private:
  struct Node;
  explicit Comp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend class SemVal;
};

using SemEnv = std::map<Name, SemVal>;

// Structural check; functions and thunks are only checked by kind.
bool well_typed_sem(const Type& a, const SemVal& v);

// First-order rendering: `*`, `left v`, `right v`, `<a, b>`, `<fun>`, `<thunk>`.
std::string render(const SemVal& v);

// ---- substructural maps

// Discarding into the unit. In the linear model only non-linear types may be
// discarded; in the affine model the unit is terminal and anything may be.
SemVal discard(const Type& x, const SemVal& v, Calculus model = Calculus::Linear);
SemVal discard(const Context& x, const SemEnv& env, Calculus model = Calculus::Linear);
// The diagonal at a non-linear type.
SemVal copy(const Type& x, const SemVal& v);
std::pair<SemEnv, SemEnv> copy(const Context& x, const SemEnv& env);
// Promotion: the thunk of the computation that returns v at once.
SemVal box(const Type& x, const SemVal& v);

// ---- observation-bounded equality

struct Observation {
  enum class Step { Run, Left, Right, First, Second, Apply, Force };
  Step step;
  std::optional<SemVal> arg;  // Apply only
  std::string describe() const;
};

struct EqVerdict {
  enum class Kind { Equal, Differ, Unknown };
  Kind kind = Kind::Equal;
  // For Differ: the observations leading to two converged values whose
  // injection tags differ.
  std::vector<Observation> witness;
  // For Unknown: the fuel at which some compared computation had not
  // converged.
  Fuel fuel = 0;
  std::string detail;

  bool differ() const { return kind == Kind::Differ; }
  std::string describe() const;
};

std::string to_string(EqVerdict::Kind k);

// Runs both computations with `fuel` and compares results structurally. At
// function types both sides are applied to up to `probe_budget` generated
// arguments (fewer at nested function positions); at ! both thunks are
// forced. Differ is always a genuine inequality; Equal is approximate.
EqVerdict sem_equal(const Type& a, const Comp& d1, const Comp& d2, Fuel fuel, int probe_budget);

// Follows `witness` on both sides and reports whether the final observations
// differ. Used to check that Differ verdicts are genuine.
bool replay_witness(const Type& a, const Comp& d1, const Comp& d2,
                    const std::vector<Observation>& witness, Fuel fuel);

// Deterministic in (a, seed, size). Functions are finite tables keyed by the
// argument's first-order rendering, with generated or divergent results;
// thunks are sometimes divergent.
SemVal gen_sem_val(const Type& a, std::uint64_t seed, int size);

// One generated value per context entry.
SemEnv gen_sem_env(const Context& ctx, std::uint64_t seed, int size);

}  // namespace slc

#endif
