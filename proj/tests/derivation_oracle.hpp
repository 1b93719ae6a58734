#ifndef SLC_TESTS_DERIVATION_ORACLE_HPP
#define SLC_TESTS_DERIVATION_ORACLE_HPP

// Exhaustive search for formation-rule derivations with explicit context
// splits. Each multi-premise rule tries every assignment of context entries
// to the shared non-linear part (non-linear entries only), the left part and
// the right part. Independent of the usage-accounting checker.
//
// Terms must use binder names distinct from each other and from the
// context (see `uniquify`).

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "slc/syntax.hpp"

namespace slc::testing {

using Ctx = std::vector<std::pair<Name, Type>>;

inline bool all_nonlinear(const Ctx& c) {
  for (const auto& [_, t] : c)
    if (!is_nonlinear(t)) return false;
  return true;
}

// Calls `f(shared + left, shared + right)` for every split of `c`.
inline bool for_each_split(const Ctx& c, const std::function<bool(const Ctx&, const Ctx&)>& f) {
  std::size_t n = c.size();
  std::vector<int> choice(n, 0);
  for (;;) {
    Ctx l, r;
    bool valid = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (choice[i] == 0) {
        if (!is_nonlinear(c[i].second)) valid = false;
        l.push_back(c[i]);
        r.push_back(c[i]);
      } else if (choice[i] == 1) {
        l.push_back(c[i]);
      } else {
        r.push_back(c[i]);
      }
    }
    if (valid && f(l, r)) return true;
    std::size_t k = 0;
    while (k < n && ++choice[k] == 3) choice[k++] = 0;
    if (k == n) return false;
  }
}

// Calls `f(sub)` for every sub-context consisting of non-linear entries.
inline bool for_each_nonlinear_subset(const Ctx& c,
                                      const std::function<bool(const Ctx&)>& f) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (is_nonlinear(c[i].second)) idx.push_back(i);
  for (std::size_t mask = 0; mask < (std::size_t{1} << idx.size()); ++mask) {
    Ctx sub;
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (mask & (std::size_t{1} << j)) sub.push_back(c[idx[j]]);
    if (f(sub)) return true;
  }
  return false;
}

inline Ctx plus(Ctx c, std::initializer_list<std::pair<Name, Type>> extra) {
  for (const auto& e : extra) c.push_back(e);
  return c;
}

inline std::optional<Type> derive(Calculus calc, const Ctx& ctx, const Term& m) {
  using namespace term;
  const bool linear = calc == Calculus::Linear;
  switch (m.kind()) {
    case Term::Kind::Var: {
      const Name& x = m.as<Var>().name;
      std::optional<Type> found;
      bool rest_ok = true;
      for (const auto& [n, t] : ctx) {
        if (n == x)
          found = t;
        else if (!is_nonlinear(t))
          rest_ok = false;
      }
      if (!found) return std::nullopt;
      if (linear && !rest_ok) return std::nullopt;
      return found;
    }
    case Term::Kind::Star:
      if (linear && !all_nonlinear(ctx)) return std::nullopt;
      return Type::unit();
    case Term::Kind::Lift: {
      const Term& body = m.as<Lift>().body;
      if (linear) {
        if (!all_nonlinear(ctx)) return std::nullopt;
        auto a = derive(calc, ctx, body);
        if (!a) return std::nullopt;
        return Type::bang(*a);
      }
      std::optional<Type> out;
      for_each_nonlinear_subset(ctx, [&](const Ctx& phi) {
        auto a = derive(calc, phi, body);
        if (a) out = Type::bang(*a);
        return a.has_value();
      });
      return out;
    }
    case Term::Kind::Seq: {
      const auto& s = m.as<Seq>();
      std::optional<Type> out;
      for_each_split(ctx, [&](const Ctx& l, const Ctx& r) {
        auto a = derive(calc, l, s.first);
        if (!a || !a->is(Type::Kind::Unit)) return false;
        out = derive(calc, r, s.second);
        return out.has_value();
      });
      return out;
    }
    case Term::Kind::Inl: {
      const auto& s = m.as<Inl>();
      auto a = derive(calc, ctx, s.body);
      if (!a || !(*a == s.left)) return std::nullopt;
      return Type::sum(s.left, s.right);
    }
    case Term::Kind::Inr: {
      const auto& s = m.as<Inr>();
      auto a = derive(calc, ctx, s.body);
      if (!a || !(*a == s.right)) return std::nullopt;
      return Type::sum(s.left, s.right);
    }
    case Term::Kind::Case: {
      const auto& c = m.as<Case>();
      std::optional<Type> out;
      for_each_split(ctx, [&](const Ctx& l, const Ctx& r) {
        auto s = derive(calc, l, c.scrutinee);
        if (!s || !s->is(Type::Kind::Sum)) return false;
        auto a = derive(calc, plus(r, {{c.left_name, s->left()}}), c.left_branch);
        if (!a) return false;
        auto b = derive(calc, plus(r, {{c.right_name, s->right()}}), c.right_branch);
        if (!b || !(*a == *b)) return false;
        out = a;
        return true;
      });
      return out;
    }
    case Term::Kind::Pair: {
      const auto& p = m.as<Pair>();
      std::optional<Type> out;
      for_each_split(ctx, [&](const Ctx& l, const Ctx& r) {
        auto a = derive(calc, l, p.first);
        if (!a) return false;
        auto b = derive(calc, r, p.second);
        if (!b) return false;
        out = Type::tensor(*a, *b);
        return true;
      });
      return out;
    }
    case Term::Kind::LetPair: {
      const auto& lp = m.as<LetPair>();
      std::optional<Type> out;
      for_each_split(ctx, [&](const Ctx& l, const Ctx& r) {
        auto a = derive(calc, l, lp.bound);
        if (!a || !a->is(Type::Kind::Tensor)) return false;
        out = derive(calc, plus(r, {{lp.first_name, a->left()}, {lp.second_name, a->right()}}),
                     lp.body);
        return out.has_value();
      });
      return out;
    }
    case Term::Kind::Lam: {
      const auto& l = m.as<Lam>();
      auto b = derive(calc, plus(ctx, {{l.param, l.param_type}}), l.body);
      if (!b) return std::nullopt;
      return Type::lolli(l.param_type, *b);
    }
    case Term::Kind::App: {
      const auto& a = m.as<App>();
      std::optional<Type> out;
      for_each_split(ctx, [&](const Ctx& l, const Ctx& r) {
        auto f = derive(calc, l, a.fn);
        if (!f || !f->is(Type::Kind::Lolli)) return false;
        auto x = derive(calc, r, a.arg);
        if (!x || !(*x == f->arg())) return false;
        out = f->result();
        return true;
      });
      return out;
    }
    case Term::Kind::Force: {
      auto a = derive(calc, ctx, m.as<Force>().body);
      if (!a || !a->is(Type::Kind::Bang)) return std::nullopt;
      return a->body();
    }
    case Term::Kind::Rec: {
      const auto& r = m.as<Rec>();
      if (!all_nonlinear(ctx)) return std::nullopt;
      auto a = derive(calc, plus(ctx, {{r.self, r.self_type}}), r.body);
      if (!a || !(*a == r.self_type.body())) return std::nullopt;
      return a;
    }
  }
  return std::nullopt;
}

// Renames every binder to a globally unique name (b0, b1, ...) so that the
// oracle's contexts never contain duplicates.
inline Term uniquify(const Term& m, int& counter) {
  using namespace term;
  auto fresh = [&] { return "b" + std::to_string(counter++); };
  auto rename = [&](const Term& body, const Name& from, const Name& to) {
    return subst(body, Term::var(to), from);
  };
  switch (m.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Star: return m;
    case Term::Kind::Seq:
      return Term::seq(uniquify(m.as<Seq>().first, counter), uniquify(m.as<Seq>().second, counter));
    case Term::Kind::Inl:
      return Term::inl(m.as<Inl>().left, m.as<Inl>().right, uniquify(m.as<Inl>().body, counter));
    case Term::Kind::Inr:
      return Term::inr(m.as<Inr>().left, m.as<Inr>().right, uniquify(m.as<Inr>().body, counter));
    case Term::Kind::Case: {
      const auto& c = m.as<Case>();
      Name x = fresh(), y = fresh();
      return Term::case_of(uniquify(c.scrutinee, counter), x,
                           uniquify(rename(c.left_branch, c.left_name, x), counter), y,
                           uniquify(rename(c.right_branch, c.right_name, y), counter));
    }
    case Term::Kind::Pair:
      return Term::pair(uniquify(m.as<Pair>().first, counter), uniquify(m.as<Pair>().second, counter));
    case Term::Kind::LetPair: {
      const auto& l = m.as<LetPair>();
      Name x = fresh(), y = fresh();
      Term body = subst(l.body, {{l.first_name, Term::var(x)}, {l.second_name, Term::var(y)}});
      return Term::let_pair(x, y, uniquify(l.bound, counter), uniquify(body, counter));
    }
    case Term::Kind::Lam: {
      const auto& l = m.as<Lam>();
      Name x = fresh();
      return Term::lam(x, l.param_type, uniquify(rename(l.body, l.param, x), counter));
    }
    case Term::Kind::App:
      return Term::app(uniquify(m.as<App>().fn, counter), uniquify(m.as<App>().arg, counter));
    case Term::Kind::Lift: return Term::lift(uniquify(m.as<Lift>().body, counter));
    case Term::Kind::Force: return Term::force(uniquify(m.as<Force>().body, counter));
    case Term::Kind::Rec: {
      const auto& r = m.as<Rec>();
      Name z = fresh();
      return Term::rec(z, r.self_type, uniquify(rename(r.body, r.self, z), counter));
    }
  }
  return m;
}

}  // namespace slc::testing

#endif
