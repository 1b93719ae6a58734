#include "slc/generate.hpp"

#include <algorithm>
#include <atomic>
#include <random>

#include "slc/typecheck.hpp"

namespace slc {

namespace {

std::atomic<std::size_t> g_emitted{0}, g_rejected{0};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Var {
  Name name;
  Type type;
};
using Vars = std::vector<Var>;

class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(mix(seed)) {}

  // A term of type t that consumes the linear variables in `owe` (exactly
  // once in the linear calculus; at most once in the affine one) and may
  // share the non-linear ones in `shared`.
  Term term(const Type& t, int depth, Vars owe, const Vars& shared) {
    if (depth <= 1 || chance(0.08)) return complete(t, owe, shared);
    for (int tries = 0; tries < 6; ++tries) {
      switch (pick(9)) {
        case 0:
        case 1:
        case 2: {
          if (auto m = intro(t, depth, owe, shared)) return *m;
          break;
        }
        case 3:
          if (auto m = variable(t, owe, shared)) return *m;
          break;
        case 4: return app(t, depth, owe, shared);
        case 5: return case_of(t, depth, owe, shared);
        case 6: return let_pair(t, depth, owe, shared);
        case 7: return force(t, depth, owe, shared);
        default:
          if (owe.empty() && dropped_ == 0 && chance(cfg_.rec_probability * 4))
            return rec(t, depth, shared);
      }
    }
    return complete(t, owe, shared);
  }

  // A value of type t. Linear variables in `owe` are consumed when a slot of
  // matching shape exists; otherwise the candidate may be rejected by the
  // caller's re-check.
  Term value(const Type& t, int depth, Vars owe, const Vars& shared) {
    if (auto v = variable(t, owe, shared); v && chance(0.3)) return *v;
    switch (t.kind()) {
      case Type::Kind::Unit: return Term::star();
      case Type::Kind::Sum:
        if (chance(0.5)) return Term::inl(t.left(), t.right(), value(t.left(), depth - 1, owe, shared));
        return Term::inr(t.left(), t.right(), value(t.right(), depth - 1, owe, shared));
      case Type::Kind::Tensor: {
        auto [a, b] = split(owe);
        Term l = value(t.left(), depth - 1, a, shared);
        return Term::pair(l, value(t.right(), depth - 1, b, shared));
      }
      case Type::Kind::Lolli: return lambda(t, depth, owe, shared);
      case Type::Kind::Bang: {
        int saved = dropped_;
        dropped_ = 0;
        Term body = term(t.body(), depth - 1, {}, shared);
        dropped_ = saved;
        return Term::lift(body);
      }
    }
    return Term::star();
  }

  Type random_type(int depth) {
    const auto& p = cfg_.palette;
    if (depth <= 1 || chance(0.45)) return p[pick(static_cast<int>(p.size()))];
    switch (pick(4)) {
      case 0: return Type::sum(random_type(depth - 1), random_type(depth - 1));
      case 1: return Type::tensor(random_type(depth - 1), random_type(depth - 1));
      case 2: return Type::lolli(random_type(depth - 1), random_type(depth - 1));
      default: return Type::bang(random_type(depth - 1));
    }
  }

  Type random_nonlinear_type(int depth) {
    for (;;) {
      Type t = random_type(depth);
      if (is_nonlinear(t)) return t;
    }
  }

  Name fresh(const char* base) { return base + std::to_string(counter_++); }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

 private:
  bool affine() const { return cfg_.calculus == Calculus::Affine; }

  std::pair<Vars, Vars> split(const Vars& owe) {
    Vars a, b;
    for (const Var& v : owe) (chance(0.5) ? a : b).push_back(v);
    return {a, b};
  }

  // Adds a freshly bound variable either to the obligations or, if
  // non-linear, to the shared part. In the affine calculus a linear binder
  // is sometimes left unused.
  void bind(const Var& v, Vars& owe, Vars& shared, bool& dropped) {
    if (is_nonlinear(v.type)) {
      shared.push_back(v);
    } else if (affine() && chance(0.2)) {
      dropped = true;
    } else {
      owe.push_back(v);
    }
  }

  std::optional<Term> intro(const Type& t, int depth, const Vars& owe, const Vars& shared) {
    switch (t.kind()) {
      case Type::Kind::Unit: {
        if (owe.empty() && chance(0.3)) return Term::star();
        auto [a, b] = split(owe);
        Term first = term(Type::unit(), depth - 1, a, shared);
        return Term::seq(first, term(t, depth - 1, b, shared));
      }
      case Type::Kind::Sum:
        if (chance(0.5)) return Term::inl(t.left(), t.right(), term(t.left(), depth - 1, owe, shared));
        return Term::inr(t.left(), t.right(), term(t.right(), depth - 1, owe, shared));
      case Type::Kind::Tensor: {
        auto [a, b] = split(owe);
        Term first = term(t.left(), depth - 1, a, shared);
        return Term::pair(first, term(t.right(), depth - 1, b, shared));
      }
      case Type::Kind::Lolli: return lambda(t, depth, owe, shared);
      case Type::Kind::Bang: {
        // lift sees only the non-linear context; the affine rule may drop
        // the rest.
        if (!owe.empty() && !affine()) return std::nullopt;
        int saved = dropped_;
        dropped_ = 0;
        Term body = term(t.body(), depth - 1, {}, shared);
        dropped_ = saved;
        return Term::lift(body);
      }
    }
    return std::nullopt;
  }

  Term lambda(const Type& t, int depth, Vars owe, Vars shared) {
    Var x{fresh("x"), t.arg()};
    bool dropped = false;
    bind(x, owe, shared, dropped);
    dropped_ += dropped;
    Term body = term(t.result(), depth - 1, owe, shared);
    dropped_ -= dropped;
    return Term::lam(x.name, x.type, body);
  }

  std::optional<Term> variable(const Type& t, const Vars& owe, const Vars& shared) {
    std::vector<Term> options;
    for (const Var& v : owe)
      if (v.type == t && (affine() || owe.size() == 1)) options.push_back(Term::var(v.name));
    if (owe.empty() || affine())
      for (const Var& v : shared)
        if (v.type == t) options.push_back(Term::var(v.name));
    if (options.empty()) return std::nullopt;
    return options[static_cast<std::size_t>(pick(static_cast<int>(options.size())))];
  }

  // Prefers a function-typed variable from scope when one fits.
  Term app(const Type& t, int depth, const Vars& owe, const Vars& shared) {
    auto [a, b] = split(owe);
    Type arg = cfg_.palette[static_cast<std::size_t>(pick(static_cast<int>(cfg_.palette.size())))];
    for (const Var& v : a)
      if (v.type.is(Type::Kind::Lolli) && v.type.result() == t && chance(0.5)) arg = v.type.arg();
    Term fn = term(Type::lolli(arg, t), depth - 1, a, shared);
    return Term::app(fn, term(arg, depth - 1, b, shared));
  }

  Term case_of(const Type& t, int depth, const Vars& owe, const Vars& shared) {
    auto [a, b] = split(owe);
    Type sum = Type::sum(random_type(2), random_type(2));
    for (const Var& v : a)
      if (v.type.is(Type::Kind::Sum) && chance(0.5)) sum = v.type;
    Term s = term(sum, depth - 1, a, shared);
    auto branch = [&](const Type& bt, Name& name) {
      Vars o = b, sh = shared;
      bool dropped = false;
      name = fresh("c");
      bind(Var{name, bt}, o, sh, dropped);
      dropped_ += dropped;
      Term m = term(t, depth - 1, o, sh);
      dropped_ -= dropped;
      return m;
    };
    Name x, y;
    Term n = branch(sum.left(), x);
    Term p = branch(sum.right(), y);
    return Term::case_of(s, x, n, y, p);
  }

  Term let_pair(const Type& t, int depth, const Vars& owe, const Vars& shared) {
    auto [a, b] = split(owe);
    Type pair = Type::tensor(random_type(2), random_type(2));
    for (const Var& v : a)
      if (v.type.is(Type::Kind::Tensor) && chance(0.5)) pair = v.type;
    Term bound = term(pair, depth - 1, a, shared);
    Var x{fresh("p"), pair.left()}, y{fresh("p"), pair.right()};
    Vars o = b, sh = shared;
    bool dx = false, dy = false;
    bind(x, o, sh, dx);
    bind(y, o, sh, dy);
    dropped_ += dx + dy;
    Term body = term(t, depth - 1, o, sh);
    dropped_ -= dx + dy;
    return Term::let_pair(x.name, y.name, bound, body);
  }

  Term force(const Type& t, int depth, const Vars& owe, const Vars& shared) {
    return Term::force(term(Type::bang(t), depth - 1, owe, shared));
  }

  // Only generated when no linear variable is pending or dropped, since rec
  // admits a non-linear context only and cannot absorb an unused one.
  Term rec(const Type& t, int depth, const Vars& shared) {
    Var z{fresh("z"), Type::bang(t)};
    Vars sh = shared;
    sh.push_back(z);
    return Term::rec(z.name, z.type, term(t, depth - 1, {}, sh));
  }

  // Consumes every obligation (or, affinely, some of them) and returns a
  // small term of type t.
  Term complete(const Type& t, const Vars& owe, const Vars& shared) {
    Vars use;
    for (const Var& v : owe)
      if (!affine() || chance(0.7)) use.push_back(v);
    if (use.size() == 1 && use[0].type == t) return Term::var(use[0].name);
    if (use.empty()) {
      if (auto v = variable(t, {}, shared); v && chance(0.5)) return *v;
      return minimal(t);
    }
    std::optional<Term> chain;
    for (const Var& v : use) {
      Term c = consume(Term::var(v.name), v.type);
      chain = chain ? Term::seq(*chain, c) : c;
    }
    if (t.is(Type::Kind::Unit)) return *chain;
    return Term::app(Term::lam(fresh("u"), Type::unit(), minimal(t)), *chain);
  }

  // A term of type I using m once.
  Term consume(const Term& m, const Type& a) {
    switch (a.kind()) {
      case Type::Kind::Unit: return m;
      case Type::Kind::Sum: {
        Name l = fresh("c"), r = fresh("c");
        return Term::case_of(m, l, consume(Term::var(l), a.left()), r, consume(Term::var(r), a.right()));
      }
      case Type::Kind::Tensor: {
        Name l = fresh("p"), r = fresh("p");
        return Term::let_pair(l, r, m,
                              Term::seq(consume(Term::var(l), a.left()), consume(Term::var(r), a.right())));
      }
      case Type::Kind::Lolli: return consume(Term::app(m, minimal(a.arg())), a.result());
      case Type::Kind::Bang: {
        // Non-linear: bind and drop.
        return Term::app(Term::lam(fresh("u"), a, Term::star()), m);
      }
    }
    return m;
  }

  // A closed term of type t using no variables.
  Term minimal(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::Unit: return Term::star();
      case Type::Kind::Sum: return Term::inl(t.left(), t.right(), minimal(t.left()));
      case Type::Kind::Tensor: return Term::pair(minimal(t.left()), minimal(t.right()));
      case Type::Kind::Lolli: {
        Name x = fresh("x");
        if (is_nonlinear(t.arg()) || affine()) return Term::lam(x, t.arg(), minimal(t.result()));
        return Term::lam(x, t.arg(), Term::seq(consume(Term::var(x), t.arg()), minimal(t.result())));
      }
      case Type::Kind::Bang: return Term::lift(minimal(t.body()));
    }
    return Term::star();
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  int counter_ = 0;
  int dropped_ = 0;  // linear binders in scope left unused on purpose
};

bool accepted(Calculus calc, const Context& ctx, const Term& m, const Type& t) {
  try {
    return typecheck(calc, ctx, m).type == t;
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::size_t i) { return mix(seed * 0x100000001b3ULL + i); }

GenStats gen_stats() { return GenStats{g_emitted.load(), g_rejected.load()}; }

Generated gen_typed_term(const GenConfig& cfg) {
  for (int attempt = 0;; ++attempt) {
    Generator g(cfg, cfg.seed + static_cast<std::uint64_t>(attempt) * 7919);
    int depth = std::max(1, cfg.max_depth - attempt / 10);
    Type t = cfg.target ? *cfg.target : g.random_type(3);
    Term m = g.term(t, depth, {}, {});
    if (accepted(cfg.calculus, {}, m, t)) {
      ++g_emitted;
      return {m, t};
    }
    ++g_rejected;
  }
}

GeneratedValue gen_typed_value(const GenConfig& cfg, bool nonlinear) {
  for (int attempt = 0;; ++attempt) {
    Generator g(cfg, cfg.seed + static_cast<std::uint64_t>(attempt) * 7919);
    Context ctx;
    Vars owe, shared;
    int n = g.pick(4);
    for (int i = 0; i < n; ++i) {
      Type t = nonlinear ? g.random_nonlinear_type(2) : g.random_type(2);
      Name x = "e" + std::to_string(i);
      ctx.add(x, t);
      (is_nonlinear(t) ? shared : owe).push_back(Var{x, t});
    }
    Type t = nonlinear ? g.random_nonlinear_type(3) : g.random_type(3);
    Term v = g.value(t, std::max(2, cfg.max_depth - attempt / 10), owe, shared);
    if (is_value(v) && accepted(cfg.calculus, ctx, v, t)) {
      ++g_emitted;
      return {ctx, v, t};
    }
    ++g_rejected;
  }
}

// ---------------------------------------------------------------- coverage

const std::vector<std::string>& RuleCoverage::rules() {
  static const std::vector<std::string> names = {"var", "star", "seq",  "inl",  "inr",   "case", "pair",
                                                 "let", "lam",  "app",  "lift", "force", "rec"};
  return names;
}

void RuleCoverage::add(const Term& m) {
  using namespace term;
  static const char* by_kind[] = {"var", "star", "seq", "inl", "inr", "case", "pair",
                                  "let", "lam",  "app", "lift", "force", "rec"};
  ++counts[by_kind[static_cast<int>(m.kind())]];
  m.visit([&](const auto& node) {
    using N = std::decay_t<decltype(node)>;
    if constexpr (std::is_same_v<N, Seq>) add(node.first), add(node.second);
    else if constexpr (std::is_same_v<N, Inl> || std::is_same_v<N, Inr>) add(node.body);
    else if constexpr (std::is_same_v<N, Case>) add(node.scrutinee), add(node.left_branch), add(node.right_branch);
    else if constexpr (std::is_same_v<N, Pair>) add(node.first), add(node.second);
    else if constexpr (std::is_same_v<N, LetPair>) add(node.bound), add(node.body);
    else if constexpr (std::is_same_v<N, Lam>) add(node.body);
    else if constexpr (std::is_same_v<N, App>) add(node.fn), add(node.arg);
    else if constexpr (std::is_same_v<N, Lift>) add(node.body);
    else if constexpr (std::is_same_v<N, Force>) add(node.body);
    else if constexpr (std::is_same_v<N, Rec>) add(node.body);
  });
}

std::vector<std::string> RuleCoverage::missing() const {
  std::vector<std::string> out;
  for (const auto& r : rules())
    if (!counts.count(r)) out.push_back(r);
  return out;
}

}  // namespace slc
