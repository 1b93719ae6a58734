#include "slc/denote_standard.hpp"

#include "interpret.hpp"
#include "slc/text.hpp"
#include "slc/typecheck.hpp"

namespace slc {

namespace {

void require_typed(Calculus calc, const Context& ctx, const Term& m, const Type& a) {
  Type got = Type::unit();
  try {
    got = typecheck(calc, ctx, m).type;
  } catch (const TypeError& e) {
    throw ContractViolation(std::string("denotation of an ill-typed term: ") + e.what());
  }
  if (!(got == a))
    throw ContractViolation("term has type " + to_string(got) + ", not " + to_string(a));
}

}  // namespace

Denotation ValueDenotation::as_denotation() const {
  auto f = fun;
  return Denotation{ctx, type, [f](const SemEnv& env) { return Comp::pure(f(env)); }};
}

Denotation denote(Calculus calc, const Context& ctx, const Term& m, const Type& a) {
  require_typed(calc, ctx, m, a);
  detail::Interpreter in(calc, std::nullopt);
  return Denotation{ctx, a, in.close(ctx, in.term(detail::scope_of(ctx), m))};
}

ValueDenotation denote_value_V(Calculus calc, const Context& ctx, const Term& v, const Type& a) {
  if (!is_value(v)) throw ContractViolation("not a value: " + to_string(v));
  require_typed(calc, ctx, v, a);
  detail::Interpreter in(calc, std::nullopt);
  return ValueDenotation{ctx, a, in.close(ctx, in.value(detail::scope_of(ctx), v))};
}

ValueDenotation denote_value_B(const Context& ctx, const Term& v, const Type& p, Calculus calc) {
  if (!is_nonlinear(p)) throw ContractViolation("not a non-linear type: " + to_string(p));
  if (!ctx.is_nonlinear()) throw ContractViolation("context is not non-linear");
  if (!is_value(v)) throw ContractViolation("not a value: " + to_string(v));
  require_typed(calc, ctx, v, p);
  // Every entry of a non-linear context may be shared or dropped, so this
  // interpretation reads the environment directly instead of routing it.
  detail::Interpreter in(calc, std::nullopt);
  std::function<std::function<SemVal(const SemEnv&)>(const Term&)> go =
      [&](const Term& w) -> std::function<SemVal(const SemEnv&)> {
    using namespace term;
    switch (w.kind()) {
      case Term::Kind::Var: {
        Name x = w.as<Var>().name;
        return [x](const SemEnv& env) { return env.at(x); };
      }
      case Term::Kind::Star: return [](const SemEnv&) { return SemVal::unit(); };
      case Term::Kind::Inl: {
        auto a = go(w.as<Inl>().body);
        return [a](const SemEnv& env) { return SemVal::inl(a(env)); };
      }
      case Term::Kind::Inr: {
        auto a = go(w.as<Inr>().body);
        return [a](const SemEnv& env) { return SemVal::inr(a(env)); };
      }
      case Term::Kind::Pair: {
        auto a = go(w.as<Pair>().first), b = go(w.as<Pair>().second);
        return [a, b](const SemEnv& env) { return SemVal::pair(a(env), b(env)); };
      }
      case Term::Kind::Lift: {
        auto body = in.close(ctx, in.term(detail::scope_of(ctx), w.as<Lift>().body));
        return [body](const SemEnv& env) { return SemVal::thunk(body(env)); };
      }
      default: throw ContractViolation("not a non-linear value: " + to_string(w));
    }
  };
  return ValueDenotation{ctx, p, go(v)};
}

Denotation fix_denote(const Context& ctx, const Name& z, const Type& a, const Denotation& body) {
  if (!ctx.is_nonlinear()) throw ContractViolation("fix_denote needs a non-linear context");
  if (!(body.type == a)) throw ContractViolation("fixpoint body has the wrong type");
  Type zt = Type::bang(a);
  detail::Vars fv = detail::vars_of(ctx);
  detail::Vars body_fv = detail::vars_of(body.ctx);
  auto body_fun = std::make_shared<const detail::CompFn>(body.fun);
  return Denotation{ctx, a, [=](const SemEnv& env) {
                      SemEnv e = detail::slice(Calculus::Linear, env, fv, fv);
                      return detail::fixpoint(Calculus::Linear, body_fun, body_fv, z, zt, fv, e);
                    }};
}

}  // namespace slc
