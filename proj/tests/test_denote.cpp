#include "doctest.h"
#include "slc/denote_naive.hpp"
#include "slc/denote_standard.hpp"
#include "slc/text.hpp"
#include "slc/typecheck.hpp"

using namespace slc;

namespace {

const Type I = Type::unit();
const Type II = Type::lolli(I, I);
const Type IplusI = Type::sum(I, I);
const char* kP = "rec z:!I. force z";
const char* kT = "(\\y:(I -o I). *) (\\x:I. rec z:!I. force z)";

RunResult closed(Calculus calc, const std::string& src, Fuel fuel) {
  Term m = parse_term(src);
  return denote(calc, {}, m, check_program(calc, m)).fun({}).run(fuel);
}

}  // namespace

TEST_CASE("standard denotation examples") {
  CHECK(closed(Calculus::Affine, "*", 1).value->is(SemVal::Kind::Unit));

  RunResult p = closed(Calculus::Affine, kP, 1000000);
  CHECK(!p.converged());
  CHECK(p.used == 1000000);

  RunResult t = closed(Calculus::Affine, kT, 10000);
  REQUIRE(t.converged());
  CHECK(t.value->is(SemVal::Kind::Unit));
  CHECK(t.used == 0);

  Denotation id = denote(Calculus::Linear, {}, parse_term("\\x:I. x"), II);
  RunResult f = id.fun({}).run(0);
  REQUIRE(f.converged());
  RunResult applied = f.value->apply(SemVal::unit()).run(0);
  REQUIRE(applied.converged());
  CHECK(applied.value->is(SemVal::Kind::Unit));
  // Operational side of the same application.
  CHECK(*eval(parse_term("(\\x:I. x) *"), 100).value == Term::star());
}

TEST_CASE("denotations of each construct") {
  auto first_order = [](const std::string& src) {
    Term m = parse_term(src);
    RunResult r = denote(Calculus::Linear, {}, m, check_program(Calculus::Linear, m)).fun({}).run(100);
    REQUIRE(r.converged());
    return render(*r.value);
  };
  CHECK(first_order("let <a,b> = <left[I,I] *, right[I,I] *> in <b, a>") == "<right *, left *>");
  CHECK(first_order("case right[I, I + I] left[I,I] * of {left u -> right[I,I] u | right w -> w}") ==
        "left *");
  CHECK(first_order("force (lift <*, *>)") == "<*, *>");
  CHECK(first_order("(\\f:!(I -o I + I). <force f *, force f *>) lift (\\u:I. u; right[I,I] *)") ==
        "<right *, right *>");
  CHECK(first_order("*; left[I, I -o I] *") == "left *");
}

TEST_CASE("denote rejects ill-typed input") {
  CHECK_THROWS_AS(denote(Calculus::Linear, {}, parse_term(kT), I), ContractViolation);
  CHECK_THROWS_AS(denote(Calculus::Affine, {}, parse_term(kT), II), ContractViolation);
  CHECK_THROWS_AS(denote_value_V(Calculus::Affine, {}, parse_term(kT), I), ContractViolation);
}

TEST_CASE("environments are routed through the context") {
  Context ctx{{"f", II}, {"b", Type::bang(IplusI)}};
  Term m = parse_term("<f *, <force b, force b>>");
  Type a = check_program(Calculus::Linear, parse_term("\\f:(I -o I). \\b:!(I + I). <f *, <force b, force b>>"))
               .result()
               .result();
  Denotation d = denote(Calculus::Linear, ctx, m, a);
  SemEnv env{{"f", SemVal::fun([](const SemVal& x) { return Comp::pure(x); })},
             {"b", SemVal::thunk(Comp::pure(SemVal::inr(SemVal::unit())))}};
  RunResult r = d.fun(env).run(10);
  REQUIRE(r.converged());
  CHECK(render(*r.value) == "<*, <right *, right *>>");

  // Affine weakening discards the unused linear entry; the linear model
  // refuses to.
  Context wide{{"f", II}};
  Denotation w = denote(Calculus::Affine, wide, parse_term("*"), I);
  CHECK(w.fun({{"f", env.at("f")}}).run(0).converged());
}

TEST_CASE("value interpretations") {
  ValueDenotation lp = denote_value_V(Calculus::Affine, {}, parse_term("lift (rec z:!I. force z)"),
                                      Type::bang(I));
  SemVal th = lp.fun({});
  REQUIRE(th.is(SemVal::Kind::Thunk));
  CHECK(!th.suspended().run(100000).converged());

  CHECK(render(denote_value_V(Calculus::Linear, {}, parse_term("<*, *>"), Type::tensor(I, I)).fun({})) ==
        "<*, *>");

  SemVal lam = denote_value_V(Calculus::Affine, {}, parse_term("\\x:I. rec z:!I. force z"), II).fun({});
  REQUIRE(lam.is(SemVal::Kind::Fun));
  CHECK(!lam.apply(SemVal::unit()).run(100000).converged());

  CHECK(denote_value_B({}, parse_term("*"), I).fun({}).is(SemVal::Kind::Unit));
  SemVal b = denote_value_B({}, parse_term("lift (rec z:!I. force z)"), Type::bang(I)).fun({});
  CHECK(!b.suspended().run(1000).converged());
  SemVal pr = denote_value_B({}, parse_term("<*, lift *>"), Type::tensor(I, Type::bang(I))).fun({});
  CHECK(render(pr) == "<*, <thunk>>");
  CHECK(pr.second().suspended().run(0).value->is(SemVal::Kind::Unit));

  CHECK_THROWS_AS(denote_value_B({}, parse_term("\\x:I. x"), II), ContractViolation);
  CHECK_THROWS_AS(denote_value_B(Context{{"f", II}}, parse_term("*"), I), ContractViolation);
  CHECK_THROWS_AS(denote_value_V(Calculus::Linear, {}, parse_term("force lift *"), I), ContractViolation);
}

TEST_CASE("fix_denote") {
  Type bang_i = Type::bang(I);
  Context z{{"z", bang_i}};
  Denotation loop = fix_denote({}, "z", I, denote(Calculus::Linear, z, parse_term("force z"), I));
  CHECK(!loop.fun({}).run(100000).converged());

  Denotation constant = fix_denote({}, "z", I, denote(Calculus::Linear, z, parse_term("*"), I));
  CHECK(!constant.fun({}).run(0).converged());
  CHECK(constant.fun({}).run(1).value->is(SemVal::Kind::Unit));

  // A countdown over I+I: right counts once more, left stops.
  Type fn = Type::lolli(IplusI, IplusI);
  std::string body =
      "\\n:(I + I). case n of {left a -> right[I,I] a | right b -> b; force z (left[I,I] *)}";
  Denotation count = fix_denote({}, "z", fn,
                                denote(Calculus::Linear, Context{{"z", Type::bang(fn)}}, parse_term(body), fn));
  RunResult f = count.fun({}).run(1);
  REQUIRE(f.converged());
  RunResult r = f.value->apply(SemVal::inr(SemVal::unit())).run(10);
  REQUIRE(r.converged());
  CHECK(render(*r.value) == "right *");
  CHECK(r.used == 1);

  Term whole = parse_term("(rec z:!(I + I -o I + I). " + body + ") (right[I,I] *)");
  auto ev = eval(whole, 10000);
  REQUIRE(ev.converged());
  CHECK(to_string(*ev.value) == "right[I,I] *");
}

TEST_CASE("naive denotation examples") {
  Term lam = parse_term("\\x:I. rec z:!I. force z");
  auto j = judge_bottom(denote_naive(Calculus::Affine, {}, lam, II, 10000).fun({}), 10000);
  CHECK(j.bottom());

  Term t = parse_term(kT);
  RunResult naive_t = denote_naive(Calculus::Affine, {}, t, I, 10000).fun({}).run(1000000);
  CHECK(!naive_t.converged());
  CHECK(eval(t, 10000).converged());

  CHECK(denote_naive(Calculus::Affine, {}, parse_term("*"), I, 100).fun({}).run(100).value->is(
      SemVal::Kind::Unit));
  RunResult app = denote_naive(Calculus::Affine, {}, parse_term("(\\x:I. x) *"), I, 100).fun({}).run(100);
  REQUIRE(app.converged());
  CHECK(app.value->is(SemVal::Kind::Unit));

  // Lambdas whose bodies converge are ordinary values.
  auto ok = judge_bottom(denote_naive(Calculus::Linear, {}, parse_term("\\x:I. x"), II, 100).fun({}), 1);
  CHECK(!ok.bottom());
  CHECK(ok.fuel == 0);
}

TEST_CASE("naive functions are strict") {
  for (const char* src : {"\\x:I. x", "\\x:I. *; x", "\\x:(I + I). case x of {left a -> a | right b -> b}"}) {
    Term m = parse_term(src);
    Type a = check_program(Calculus::Linear, m);
    RunResult f = denote_naive(Calculus::Linear, {}, m, a, 1000).fun({}).run(10);
    REQUIRE(f.converged());
    Comp applied = Comp::bottom().bind([fn = *f.value](const SemVal& x) { return fn.apply(x); });
    CHECK(!applied.run(100000).converged());
  }
}

TEST_CASE("degeneracy report") {
  DegeneracyReport r = degeneracy_report(10000, 10000);
  CHECK(r.t_affine_type_is_unit);
  CHECK(r.t_rejected_linear);
  CHECK(r.t_linear_error == "LinearVarDiscarded");
  REQUIRE(r.t_eval_value);
  CHECK(*r.t_eval_value == Term::star());
  REQUIRE(r.t_standard_value);
  CHECK(r.t_standard_value->is(SemVal::Kind::Unit));
  CHECK(r.t_naive.bottom());
  CHECK(r.lambda_naive.bottom());
  CHECK(r.p_eval_diverges);
  CHECK(r.p_standard.bottom());
  CHECK(r.p_naive.bottom());
  CHECK(r.demonstrates_degeneracy());
  CHECK(r.facts().size() == 11);
}
