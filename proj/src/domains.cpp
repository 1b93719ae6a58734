#include "slc/domains.hpp"

#include <random>
#include <sstream>
#include <variant>

#include "slc/text.hpp"

namespace slc {

// ---------------------------------------------------------------- SemVal

namespace {
struct UnitV {};
struct InlV { SemVal v; };
struct InrV { SemVal v; };
struct PairV { SemVal a, b; };
struct FunV { SemVal::Fn f; std::string label; };
struct ThunkV { Comp c; };
}  // namespace

struct SemVal::Node {
  std::variant<UnitV, InlV, InrV, PairV, FunV, ThunkV> v;
};

SemVal SemVal::unit() {
  static const SemVal u(std::make_shared<const Node>(Node{UnitV{}}));
  return u;
}
SemVal SemVal::inl(SemVal v) { return SemVal(std::make_shared<const Node>(Node{InlV{std::move(v)}})); }
SemVal SemVal::inr(SemVal v) { return SemVal(std::make_shared<const Node>(Node{InrV{std::move(v)}})); }
SemVal SemVal::pair(SemVal a, SemVal b) {
  return SemVal(std::make_shared<const Node>(Node{PairV{std::move(a), std::move(b)}}));
}
SemVal SemVal::fun(Fn f, std::string label) {
  return SemVal(std::make_shared<const Node>(Node{FunV{std::move(f), std::move(label)}}));
}
SemVal SemVal::thunk(Comp c) { return SemVal(std::make_shared<const Node>(Node{ThunkV{std::move(c)}})); }

SemVal::Kind SemVal::kind() const { return static_cast<Kind>(node_->v.index()); }

const SemVal& SemVal::payload() const {
  if (auto* l = std::get_if<InlV>(&node_->v)) return l->v;
  if (auto* r = std::get_if<InrV>(&node_->v)) return r->v;
  throw ContractViolation("payload of a non-injection");
}
const SemVal& SemVal::first() const {
  if (auto* p = std::get_if<PairV>(&node_->v)) return p->a;
  throw ContractViolation("first of a non-pair");
}
const SemVal& SemVal::second() const {
  if (auto* p = std::get_if<PairV>(&node_->v)) return p->b;
  throw ContractViolation("second of a non-pair");
}
Comp SemVal::apply(const SemVal& arg) const {
  if (auto* f = std::get_if<FunV>(&node_->v)) return f->f(arg);
  throw ContractViolation("apply of a non-function");
}
const std::string& SemVal::label() const {
  if (auto* f = std::get_if<FunV>(&node_->v)) return f->label;
  throw ContractViolation("label of a non-function");
}
const Comp& SemVal::suspended() const {
  if (auto* t = std::get_if<ThunkV>(&node_->v)) return t->c;
  throw ContractViolation("force of a non-thunk");
}

// ---------------------------------------------------------------- Comp

namespace {
struct PureC { SemVal v; };
struct BindC { Comp c; Comp::K k; };
struct LaterC { std::function<Comp()> next; };
}  // namespace

struct Comp::Node {
  std::variant<PureC, BindC, LaterC> v;
};

Comp Comp::pure(SemVal v) { return Comp(std::make_shared<const Node>(Node{PureC{std::move(v)}})); }

Comp Comp::later(std::function<Comp()> next) {
  return Comp(std::make_shared<const Node>(Node{LaterC{std::move(next)}}));
}

Comp Comp::bottom() {
  static const Comp b = later([] { return bottom(); });
  return b;
}

Comp Comp::bind(K k) const { return Comp(std::make_shared<const Node>(Node{BindC{*this, std::move(k)}})); }

RunResult Comp::run(Fuel fuel) const {
  RunResult out;
  std::vector<const K*> stack;
  // Keeps nodes whose continuations are on the stack alive.
  std::vector<std::shared_ptr<const Node>> keep;
  std::shared_ptr<const Node> cur = node_;
  for (;;) {
    if (auto* p = std::get_if<PureC>(&cur->v)) {
      if (stack.empty()) {
        out.value = p->v;
        return out;
      }
      const K* k = stack.back();
      stack.pop_back();
      Comp next = (*k)(p->v);
      keep.pop_back();
      cur = next.node_;
    } else if (auto* b = std::get_if<BindC>(&cur->v)) {
      keep.push_back(cur);
      stack.push_back(&b->k);
      cur = b->c.node_;
    } else {
      if (out.used == fuel) return out;
      ++out.used;
      cur = std::get<LaterC>(cur->v).next().node_;
    }
  }
}

// ---------------------------------------------------------------- helpers

bool well_typed_sem(const Type& a, const SemVal& v) {
  switch (a.kind()) {
    case Type::Kind::Unit: return v.is(SemVal::Kind::Unit);
    case Type::Kind::Sum:
      if (v.is(SemVal::Kind::Inl)) return well_typed_sem(a.left(), v.payload());
      if (v.is(SemVal::Kind::Inr)) return well_typed_sem(a.right(), v.payload());
      return false;
    case Type::Kind::Tensor:
      return v.is(SemVal::Kind::Pair) && well_typed_sem(a.left(), v.first()) &&
             well_typed_sem(a.right(), v.second());
    case Type::Kind::Lolli: return v.is(SemVal::Kind::Fun);
    case Type::Kind::Bang: return v.is(SemVal::Kind::Thunk);
  }
  return false;
}

std::string render(const SemVal& v) {
  switch (v.kind()) {
    case SemVal::Kind::Unit: return "*";
    case SemVal::Kind::Inl: return "left " + render(v.payload());
    case SemVal::Kind::Inr: return "right " + render(v.payload());
    case SemVal::Kind::Pair: return "<" + render(v.first()) + ", " + render(v.second()) + ">";
    case SemVal::Kind::Fun: return "<fun>";
    case SemVal::Kind::Thunk: return "<thunk>";
  }
  return "?";
}

// ---------------------------------------------------------------- substructural maps

SemVal discard(const Type& x, const SemVal& v, Calculus model) {
  if (model == Calculus::Linear && !is_nonlinear(x))
    throw ContractViolation("discard at linear type " + to_string(x));
  if (!well_typed_sem(x, v)) throw ContractViolation("discard of an ill-typed value");
  return SemVal::unit();
}

SemVal discard(const Context& x, const SemEnv& env, Calculus model) {
  for (const auto& [n, t] : x.entries()) {
    auto it = env.find(n);
    if (it == env.end()) throw ContractViolation("environment lacks " + n);
    discard(t, it->second, model);
  }
  return SemVal::unit();
}

SemVal copy(const Type& x, const SemVal& v) {
  if (!is_nonlinear(x)) throw ContractViolation("copy at a linear type");
  return SemVal::pair(v, v);
}

std::pair<SemEnv, SemEnv> copy(const Context& x, const SemEnv& env) {
  SemEnv a, b;
  for (const auto& [n, t] : x.entries()) {
    auto it = env.find(n);
    if (it == env.end()) throw ContractViolation("environment lacks " + n);
    SemVal d = copy(t, it->second);
    a.emplace(n, d.first());
    b.emplace(n, d.second());
  }
  return {a, b};
}

SemVal box(const Type& x, const SemVal& v) {
  if (!is_nonlinear(x)) throw ContractViolation("box at a linear type");
  return SemVal::thunk(Comp::pure(v));
}

// ---------------------------------------------------------------- generation

namespace {

Comp gen_result(const Type& b, std::mt19937_64& rng, int size);

SemVal gen(const Type& a, std::mt19937_64& rng, int size) {
  auto coin = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int sub = std::max(1, size - 1);
  switch (a.kind()) {
    case Type::Kind::Unit: return SemVal::unit();
    case Type::Kind::Sum:
      return coin(2) ? SemVal::inr(gen(a.right(), rng, sub)) : SemVal::inl(gen(a.left(), rng, sub));
    case Type::Kind::Tensor: {
      SemVal l = gen(a.left(), rng, sub);
      return SemVal::pair(l, gen(a.right(), rng, sub));
    }
    case Type::Kind::Bang: return SemVal::thunk(gen_result(a.body(), rng, sub));
    case Type::Kind::Lolli: {
      // A finite table keyed by the argument's rendering. Functions and
      // thunks render opaquely, so the table never inspects definedness.
      int entries = coin(size + 1);
      std::vector<std::pair<std::string, Comp>> table;
      std::ostringstream label;
      label << "{";
      for (int i = 0; i < entries; ++i) {
        std::string key = render(gen(a.arg(), rng, sub));
        bool seen = false;
        for (const auto& e : table) seen = seen || e.first == key;
        if (seen) continue;
        Comp r = gen_result(a.result(), rng, sub);
        label << key << " -> " << (r.run(2).converged() ? render(*r.run(2).value) : "bottom") << "; ";
        table.emplace_back(key, r);
      }
      Comp dflt = gen_result(a.result(), rng, sub);
      label << "_ -> " << (dflt.run(2).converged() ? render(*dflt.run(2).value) : "bottom") << "}";
      return SemVal::fun(
          [table, dflt](const SemVal& x) {
            std::string key = render(x);
            for (const auto& [k, r] : table)
              if (k == key) return r;
            return dflt;
          },
          label.str());
    }
  }
  return SemVal::unit();
}

// Divergent, delayed or immediate results.
Comp gen_result(const Type& b, std::mt19937_64& rng, int size) {
  int pick = std::uniform_int_distribution<int>(0, 4)(rng);
  if (pick == 0) return Comp::bottom();
  SemVal v = gen(b, rng, size);
  if (pick == 1) return Comp::later([v] { return Comp::pure(v); });
  return Comp::pure(v);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SemVal gen_sem_val(const Type& a, std::uint64_t seed, int size) {
  std::mt19937_64 rng(mix(seed));
  return gen(a, rng, std::max(1, size));
}

SemEnv gen_sem_env(const Context& ctx, std::uint64_t seed, int size) {
  SemEnv env;
  std::uint64_t i = 0;
  for (const auto& [n, t] : ctx.entries()) env.emplace(n, gen_sem_val(t, mix(seed) + i++, size));
  return env;
}

// ---------------------------------------------------------------- equality

std::string Observation::describe() const {
  switch (step) {
    case Step::Run: return "run";
    case Step::Left: return "left";
    case Step::Right: return "right";
    case Step::First: return "fst";
    case Step::Second: return "snd";
    case Step::Apply: return "apply(" + (arg ? render(*arg) : std::string("?")) +
                             (arg && arg->is(SemVal::Kind::Fun) ? " " + arg->label() : "") + ")";
    case Step::Force: return "force";
  }
  return "?";
}

std::string to_string(EqVerdict::Kind k) {
  switch (k) {
    case EqVerdict::Kind::Equal: return "Equal";
    case EqVerdict::Kind::Differ: return "Differ";
    case EqVerdict::Kind::Unknown: return "Unknown";
  }
  return "?";
}

std::string EqVerdict::describe() const {
  std::string s = to_string(kind);
  if (kind == Kind::Differ) {
    s += " at";
    for (const auto& o : witness) s += " " + o.describe();
  }
  if (kind == Kind::Unknown) s += " (not converged at fuel " + std::to_string(fuel) + ")";
  if (!detail.empty()) s += ": " + detail;
  return s;
}

namespace {

using Path = std::vector<Observation>;

// Differ beats Unknown beats Equal.
void merge(EqVerdict& acc, EqVerdict v) {
  if (acc.kind == EqVerdict::Kind::Differ) return;
  if (v.kind == EqVerdict::Kind::Differ || acc.kind == EqVerdict::Kind::Equal) acc = std::move(v);
}

EqVerdict compare_comps(const Type& a, const Comp& d1, const Comp& d2, Fuel fuel, int budget,
                        Path& path);

EqVerdict compare_vals(const Type& a, const SemVal& v1, const SemVal& v2, Fuel fuel, int budget,
                       Path& path) {
  EqVerdict out;
  switch (a.kind()) {
    case Type::Kind::Unit: return out;
    case Type::Kind::Sum: {
      if (v1.kind() != v2.kind()) {
        out.kind = EqVerdict::Kind::Differ;
        out.witness = path;
        out.detail = render(v1) + " vs " + render(v2);
        return out;
      }
      bool left = v1.is(SemVal::Kind::Inl);
      path.push_back({left ? Observation::Step::Left : Observation::Step::Right, {}});
      out = compare_vals(left ? a.left() : a.right(), v1.payload(), v2.payload(), fuel, budget, path);
      path.pop_back();
      return out;
    }
    case Type::Kind::Tensor: {
      path.push_back({Observation::Step::First, {}});
      out = compare_vals(a.left(), v1.first(), v2.first(), fuel, budget, path);
      path.back().step = Observation::Step::Second;
      merge(out, compare_vals(a.right(), v1.second(), v2.second(), fuel, budget, path));
      path.pop_back();
      return out;
    }
    case Type::Kind::Lolli: {
      if (budget <= 0) {
        out.kind = EqVerdict::Kind::Unknown;
        out.fuel = fuel;
        out.detail = "no probes at function type";
        return out;
      }
      for (int i = 0; i < budget && !out.differ(); ++i) {
        std::uint64_t seed = mix(path.size() * 1000003ULL + static_cast<std::uint64_t>(i));
        SemVal arg = gen_sem_val(a.arg(), seed, 3);
        path.push_back({Observation::Step::Apply, arg});
        merge(out, compare_comps(a.result(), v1.apply(arg), v2.apply(arg), fuel,
                                 std::max(1, budget / 2), path));
        path.pop_back();
      }
      return out;
    }
    case Type::Kind::Bang: {
      path.push_back({Observation::Step::Force, {}});
      out = compare_comps(a.body(), v1.suspended(), v2.suspended(), fuel, budget, path);
      path.pop_back();
      return out;
    }
  }
  return out;
}

EqVerdict compare_comps(const Type& a, const Comp& d1, const Comp& d2, Fuel fuel, int budget,
                        Path& path) {
  RunResult r1 = d1.run(fuel), r2 = d2.run(fuel);
  if (!r1.converged() || !r2.converged()) {
    EqVerdict out;
    out.kind = EqVerdict::Kind::Unknown;
    out.fuel = fuel;
    out.detail = std::string(r1.converged() ? "right" : r2.converged() ? "left" : "both") +
                 " not converged";
    return out;
  }
  path.push_back({Observation::Step::Run, {}});
  EqVerdict out = compare_vals(a, *r1.value, *r2.value, fuel, budget, path);
  path.pop_back();
  return out;
}

}  // namespace

EqVerdict sem_equal(const Type& a, const Comp& d1, const Comp& d2, Fuel fuel, int probe_budget) {
  Path path;
  return compare_comps(a, d1, d2, fuel, probe_budget, path);
}

bool replay_witness(const Type& a, const Comp& d1, const Comp& d2,
                    const std::vector<Observation>& witness, Fuel fuel) {
  using Step = Observation::Step;
  std::optional<Comp> c1 = d1, c2 = d2;
  std::optional<SemVal> v1, v2;
  Type t = a;
  for (const Observation& o : witness) {
    switch (o.step) {
      case Step::Run: {
        if (!c1) return false;
        auto r1 = c1->run(fuel), r2 = c2->run(fuel);
        if (!r1.converged() || !r2.converged()) return false;
        v1 = r1.value, v2 = r2.value;
        c1.reset(), c2.reset();
        break;
      }
      case Step::Left:
      case Step::Right: {
        auto want = o.step == Step::Left ? SemVal::Kind::Inl : SemVal::Kind::Inr;
        if (!v1 || !t.is(Type::Kind::Sum) || !v1->is(want) || !v2->is(want)) return false;
        t = o.step == Step::Left ? t.left() : t.right();
        v1 = v1->payload(), v2 = v2->payload();
        break;
      }
      case Step::First:
      case Step::Second:
        if (!v1 || !t.is(Type::Kind::Tensor)) return false;
        if (o.step == Step::First) {
          t = t.left();
          v1 = v1->first(), v2 = v2->first();
        } else {
          t = t.right();
          v1 = v1->second(), v2 = v2->second();
        }
        break;
      case Step::Apply:
        if (!v1 || !o.arg || !t.is(Type::Kind::Lolli)) return false;
        c1 = v1->apply(*o.arg), c2 = v2->apply(*o.arg);
        t = t.result();
        v1.reset(), v2.reset();
        break;
      case Step::Force:
        if (!v1 || !t.is(Type::Kind::Bang)) return false;
        c1 = v1->suspended(), c2 = v2->suspended();
        t = t.body();
        v1.reset(), v2.reset();
        break;
    }
  }
  return v1 && t.is(Type::Kind::Sum) && v1->kind() != v2->kind();
}

}  // namespace slc
