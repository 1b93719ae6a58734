#include "interpret.hpp"

#include <algorithm>

#include "slc/text.hpp"

namespace slc::detail {

namespace {

bool has(const Vars& vs, const Name& n) {
  auto it = std::lower_bound(vs.begin(), vs.end(), n,
                             [](const auto& e, const Name& k) { return e.first < k; });
  return it != vs.end() && it->first == n;
}

Vars without(Vars vs, const Name& n) {
  std::erase_if(vs, [&](const auto& e) { return e.first == n; });
  return vs;
}

Vars with(Vars vs, const Name& n, const Type& t) {
  vs = without(std::move(vs), n);
  auto it = std::lower_bound(vs.begin(), vs.end(), n,
                             [](const auto& e, const Name& k) { return e.first < k; });
  vs.insert(it, {n, t});
  return vs;
}

Vars merge(const Vars& a, const Vars& b) {
  Vars out = a;
  for (const auto& [n, t] : b)
    if (!has(out, n)) out = with(std::move(out), n, t);
  return out;
}

Vars free_in(const Scope& scope, const Term& m) {
  Vars out;
  for (const Name& n : free_vars(m)) {
    auto it = scope.find(n);
    if (it == scope.end()) throw ContractViolation("unbound variable " + n);
    out.emplace_back(n, it->second);
  }
  return out;  // free_vars is an ordered set
}

Scope binding(Scope s, const Name& n, const Type& t) {
  s.insert_or_assign(n, t);
  return s;
}

[[noreturn]] void ill_typed(const Term& m, const std::string& why) {
  throw ContractViolation("ill-typed term for the interpreter (" + why + "): " + to_string(m));
}

// Splits env over `fv` between two consumers. Entries used by both are
// copied, entries used by neither are discarded.
std::pair<SemEnv, SemEnv> split(Calculus calc, const SemEnv& env, const Vars& fv, const Vars& a,
                                const Vars& b) {
  SemEnv ea, eb;
  for (const auto& [n, t] : fv) {
    const SemVal& v = env.at(n);
    bool in_a = has(a, n), in_b = has(b, n);
    if (in_a && in_b) {
      SemVal d = copy(t, v);
      ea.emplace(n, d.first());
      eb.emplace(n, d.second());
    } else if (in_a) {
      ea.emplace(n, v);
    } else if (in_b) {
      eb.emplace(n, v);
    } else {
      discard(t, v, calc);
    }
  }
  return {std::move(ea), std::move(eb)};
}

// env over `from`, with x (of type t) bound to v, sliced to `to`. A shadowed
// entry for x is discarded.
SemEnv enter(Calculus calc, SemEnv env, const Vars& from, const Name& x, const Type& t,
             const SemVal& v, const Vars& to) {
  auto it = env.find(x);
  if (it != env.end()) {
    for (const auto& [n, ty] : from)
      if (n == x) discard(ty, it->second, calc);
    env.erase(it);
  }
  SemEnv out;
  for (const auto& [n, ty] : from) {
    if (n == x) continue;
    if (has(to, n))
      out.emplace(n, env.at(n));
    else
      discard(ty, env.at(n), calc);
  }
  if (has(to, x))
    out.emplace(x, v);
  else
    discard(t, v, calc);
  return out;
}

bool first_order(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Sum:
    case Type::Kind::Tensor: return first_order(t.left()) && first_order(t.right());
    default: return false;
  }
}

}  // namespace

Vars vars_of(const Context& ctx) {
  Vars out(ctx.entries().begin(), ctx.entries().end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Scope scope_of(const Context& ctx) {
  Scope s;
  for (const auto& [n, t] : ctx.entries()) s.emplace(n, t);
  return s;
}

SemEnv slice(Calculus calc, const SemEnv& env, const Vars& from, const Vars& to) {
  SemEnv out;
  for (const auto& [n, t] : from) {
    auto it = env.find(n);
    if (it == env.end()) throw ContractViolation("environment lacks " + n);
    if (has(to, n))
      out.emplace(n, it->second);
    else
      discard(t, it->second, calc);
  }
  return out;
}

Comp fixpoint(Calculus calc, std::shared_ptr<const CompFn> body, const Vars& body_fv, const Name& z,
              const Type& z_type, const Vars& fv, const SemEnv& env) {
  return Comp::later([=] {
    SemVal self = SemVal::thunk(fixpoint(calc, body, body_fv, z, z_type, fv, env));
    return (*body)(enter(calc, env, fv, z, z_type, self, body_fv));
  });
}

CompFn Interpreter::lambda(const Name& x, const Type& a, const Vars& fv,
                           std::shared_ptr<const Compiled> body) const {
  Calculus calc = calc_;
  auto closure = [calc, x, a, fv, body](const SemEnv& env) {
    return SemVal::fun([calc, x, a, fv, body, env](const SemVal& arg) {
      return body->fun(enter(calc, env, fv, x, a, arg, body->fv));
    });
  };
  if (!naive_) return [closure](const SemEnv& env) { return Comp::pure(closure(env)); };

  // Curry in the computation category: a body that is bottom on every probe
  // makes the whole abstraction bottom.
  NaiveLambdas opts = *naive_;
  return [calc, x, a, fv, body, closure, opts](const SemEnv& env) {
    std::vector<std::string> seen;
    for (int i = 0; i < std::max(1, opts.probes); ++i) {
      SemVal probe = gen_sem_val(a, 0x5eedULL + static_cast<std::uint64_t>(i), 2);
      if (first_order(a)) {
        std::string key = render(probe);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
      }
      Comp c = body->fun(enter(calc, env, fv, x, a, probe, body->fv));
      if (c.run(opts.bottom_bound).converged()) return Comp::pure(closure(env));
    }
    return Comp::bottom();
  };
}

std::shared_ptr<const Compiled> Interpreter::term(const Scope& scope, const Term& m) const {
  using namespace term;
  auto out = std::make_shared<Compiled>(Compiled{Type::unit(), free_in(scope, m), nullptr});
  const Vars fv = out->fv;
  const Calculus calc = calc_;

  switch (m.kind()) {
    case Term::Kind::Var: {
      Name x = m.as<Var>().name;
      out->type = scope.at(x);
      out->fun = [x](const SemEnv& env) { return Comp::pure(env.at(x)); };
      break;
    }
    case Term::Kind::Star:
      out->fun = [](const SemEnv&) { return Comp::pure(SemVal::unit()); };
      break;
    case Term::Kind::Seq: {
      auto a = term(scope, m.as<Seq>().first);
      auto b = term(scope, m.as<Seq>().second);
      if (!a->type.is(Type::Kind::Unit)) ill_typed(m, "seq");
      out->type = b->type;
      out->fun = [calc, fv, a, b](const SemEnv& env) {
        auto [ea, eb] = split(calc, env, fv, a->fv, b->fv);
        return a->fun(ea).bind([b, eb = std::move(eb)](const SemVal&) { return b->fun(eb); });
      };
      break;
    }
    case Term::Kind::Inl:
    case Term::Kind::Inr: {
      bool left = m.is(Term::Kind::Inl);
      const Type& l = left ? m.as<Inl>().left : m.as<Inr>().left;
      const Type& r = left ? m.as<Inl>().right : m.as<Inr>().right;
      auto a = term(scope, left ? m.as<Inl>().body : m.as<Inr>().body);
      out->type = Type::sum(l, r);
      out->fun = [a, left](const SemEnv& env) {
        return a->fun(env).bind([left](const SemVal& v) {
          return Comp::pure(left ? SemVal::inl(v) : SemVal::inr(v));
        });
      };
      break;
    }
    case Term::Kind::Case: {
      const auto& c = m.as<Case>();
      auto s = term(scope, c.scrutinee);
      if (!s->type.is(Type::Kind::Sum)) ill_typed(m, "case");
      Type lt = s->type.left(), rt = s->type.right();
      auto n = term(binding(scope, c.left_name, lt), c.left_branch);
      auto p = term(binding(scope, c.right_name, rt), c.right_branch);
      out->type = n->type;
      Vars branches = merge(without(n->fv, c.left_name), without(p->fv, c.right_name));
      Name x = c.left_name, y = c.right_name;
      out->fun = [calc, fv, s, n, p, branches, x, y, lt, rt](const SemEnv& env) {
        auto [es, eb] = split(calc, env, fv, s->fv, branches);
        return s->fun(es).bind([=, eb = std::move(eb)](const SemVal& v) {
          if (v.is(SemVal::Kind::Inl)) return n->fun(enter(calc, eb, branches, x, lt, v.payload(), n->fv));
          return p->fun(enter(calc, eb, branches, y, rt, v.payload(), p->fv));
        });
      };
      break;
    }
    case Term::Kind::Pair: {
      auto a = term(scope, m.as<Pair>().first);
      auto b = term(scope, m.as<Pair>().second);
      out->type = Type::tensor(a->type, b->type);
      out->fun = [calc, fv, a, b](const SemEnv& env) {
        auto [ea, eb] = split(calc, env, fv, a->fv, b->fv);
        return a->fun(ea).bind([b, eb = std::move(eb)](const SemVal& va) {
          return b->fun(eb).bind([va](const SemVal& vb) { return Comp::pure(SemVal::pair(va, vb)); });
        });
      };
      break;
    }
    case Term::Kind::LetPair: {
      const auto& l = m.as<LetPair>();
      if (l.first_name == l.second_name) ill_typed(m, "let binds one name twice");
      auto a = term(scope, l.bound);
      if (!a->type.is(Type::Kind::Tensor)) ill_typed(m, "let");
      Type xt = a->type.left(), yt = a->type.right();
      auto b = term(binding(binding(scope, l.first_name, xt), l.second_name, yt), l.body);
      out->type = b->type;
      Vars rest = without(without(b->fv, l.first_name), l.second_name);
      Vars mid = with(rest, l.first_name, xt);
      Name x = l.first_name, y = l.second_name;
      out->fun = [calc, fv, a, b, rest, mid, x, y, xt, yt](const SemEnv& env) {
        auto [ea, eb] = split(calc, env, fv, a->fv, rest);
        return a->fun(ea).bind([=, eb = std::move(eb)](const SemVal& v) {
          SemEnv e1 = enter(calc, eb, rest, x, xt, v.first(), mid);
          return b->fun(enter(calc, e1, mid, y, yt, v.second(), b->fv));
        });
      };
      break;
    }
    case Term::Kind::Lam: {
      const auto& l = m.as<Lam>();
      auto body = term(binding(scope, l.param, l.param_type), l.body);
      out->type = Type::lolli(l.param_type, body->type);
      out->fun = lambda(l.param, l.param_type, fv, body);
      break;
    }
    case Term::Kind::App: {
      auto f = term(scope, m.as<App>().fn);
      auto a = term(scope, m.as<App>().arg);
      if (!f->type.is(Type::Kind::Lolli) || !(f->type.arg() == a->type)) ill_typed(m, "app");
      out->type = f->type.result();
      out->fun = [calc, fv, f, a](const SemEnv& env) {
        auto [ef, ea] = split(calc, env, fv, f->fv, a->fv);
        return f->fun(ef).bind([a, ea = std::move(ea)](const SemVal& fn) {
          return a->fun(ea).bind([fn](const SemVal& arg) { return fn.apply(arg); });
        });
      };
      break;
    }
    case Term::Kind::Lift: {
      auto a = term(scope, m.as<Lift>().body);
      out->type = Type::bang(a->type);
      out->fun = [a](const SemEnv& env) { return Comp::pure(SemVal::thunk(a->fun(env))); };
      break;
    }
    case Term::Kind::Force: {
      auto a = term(scope, m.as<Force>().body);
      if (!a->type.is(Type::Kind::Bang)) ill_typed(m, "force");
      out->type = a->type.body();
      out->fun = [a](const SemEnv& env) {
        return a->fun(env).bind([](const SemVal& t) { return t.suspended(); });
      };
      break;
    }
    case Term::Kind::Rec: {
      const auto& r = m.as<Rec>();
      auto body = term(binding(scope, r.self, r.self_type), r.body);
      out->type = r.self_type.body();
      auto body_fun = std::make_shared<const CompFn>(body->fun);
      Vars body_fv = body->fv;
      Name z = r.self;
      Type zt = r.self_type;
      out->fun = [calc, body_fun, body_fv, z, zt, fv](const SemEnv& env) {
        return fixpoint(calc, body_fun, body_fv, z, zt, fv, env);
      };
      break;
    }
  }
  return out;
}

std::shared_ptr<const CompiledValue> Interpreter::value(const Scope& scope, const Term& v) const {
  using namespace term;
  auto out = std::make_shared<CompiledValue>(CompiledValue{Type::unit(), free_in(scope, v), nullptr});
  const Vars fv = out->fv;
  const Calculus calc = calc_;
  switch (v.kind()) {
    case Term::Kind::Var: {
      Name x = v.as<Var>().name;
      out->type = scope.at(x);
      out->fun = [x](const SemEnv& env) { return env.at(x); };
      break;
    }
    case Term::Kind::Star:
      out->fun = [](const SemEnv&) { return SemVal::unit(); };
      break;
    case Term::Kind::Inl:
    case Term::Kind::Inr: {
      bool left = v.is(Term::Kind::Inl);
      auto a = value(scope, left ? v.as<Inl>().body : v.as<Inr>().body);
      out->type = left ? Type::sum(v.as<Inl>().left, v.as<Inl>().right)
                       : Type::sum(v.as<Inr>().left, v.as<Inr>().right);
      out->fun = [a, left](const SemEnv& env) {
        return left ? SemVal::inl(a->fun(env)) : SemVal::inr(a->fun(env));
      };
      break;
    }
    case Term::Kind::Pair: {
      auto a = value(scope, v.as<Pair>().first);
      auto b = value(scope, v.as<Pair>().second);
      out->type = Type::tensor(a->type, b->type);
      out->fun = [calc, fv, a, b](const SemEnv& env) {
        auto [ea, eb] = split(calc, env, fv, a->fv, b->fv);
        return SemVal::pair(a->fun(ea), b->fun(eb));
      };
      break;
    }
    case Term::Kind::Lam: {
      const auto& l = v.as<Lam>();
      auto body = term(binding(scope, l.param, l.param_type), l.body);
      out->type = Type::lolli(l.param_type, body->type);
      Name x = l.param;
      Type a = l.param_type;
      out->fun = [calc, x, a, fv, body](const SemEnv& env) {
        return SemVal::fun([calc, x, a, fv, body, env](const SemVal& arg) {
          return body->fun(enter(calc, env, fv, x, a, arg, body->fv));
        });
      };
      break;
    }
    case Term::Kind::Lift: {
      auto a = term(scope, v.as<Lift>().body);
      out->type = Type::bang(a->type);
      out->fun = [a](const SemEnv& env) { return SemVal::thunk(a->fun(env)); };
      break;
    }
    default: throw ContractViolation("not a value: " + to_string(v));
  }
  return out;
}

CompFn Interpreter::close(const Context& ctx, std::shared_ptr<const Compiled> c) const {
  Calculus calc = calc_;
  Vars from = vars_of(ctx);
  return [calc, from, c](const SemEnv& env) { return c->fun(slice(calc, env, from, c->fv)); };
}

ValFn Interpreter::close(const Context& ctx, std::shared_ptr<const CompiledValue> c) const {
  Calculus calc = calc_;
  Vars from = vars_of(ctx);
  return [calc, from, c](const SemEnv& env) { return c->fun(slice(calc, env, from, c->fv)); };
}

}  // namespace slc::detail
