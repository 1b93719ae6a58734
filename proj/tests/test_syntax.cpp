#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "random_terms.hpp"
#include "slc/syntax.hpp"
#include "slc/text.hpp"

using namespace slc;

namespace {

const Type I = Type::unit();
Term v(const char* x) { return Term::var(x); }

}  // namespace

TEST_CASE("parse_term on the grammar examples") {
  CHECK(parse_term("\\x:I. x") == Term::lam("x", I, v("x")));
  CHECK(parse_term("rec z:!I. force z") == Term::rec("z", Type::bang(I), Term::force(v("z"))));

  Term p = Term::rec("z", Type::bang(I), Term::force(v("z")));
  Term t = Term::app(Term::lam("y", Type::lolli(I, I), Term::star()), Term::lam("x", I, p));
  CHECK(parse_term("(\\y:(I -o I). *) (\\x:I. rec z:!I. force z)") == t);
}

TEST_CASE("parse_term covers every construct") {
  Term m = parse_term(
      "let <a,b> = <*, left[I, I -o I] *> in case b of {left u -> u; a | right w -> a}");
  REQUIRE(m.is(Term::Kind::LetPair));
  CHECK(m.as<term::LetPair>().bound ==
        Term::pair(Term::star(), Term::inl(I, Type::lolli(I, I), Term::star())));
  CHECK(m.as<term::LetPair>().body.is(Term::Kind::Case));

  CHECK(parse_term("f x y") == Term::app(Term::app(v("f"), v("x")), v("y")));
  CHECK(parse_term("force f x") == Term::app(Term::force(v("f")), v("x")));
  CHECK(parse_term("*; *; x") == Term::seq(Term::star(), Term::seq(Term::star(), v("x"))));
  CHECK(parse_term("\\x:I. x; *") == Term::lam("x", I, Term::seq(v("x"), Term::star())));
  CHECK(parse_term("lift (f x)") == Term::lift(Term::app(v("f"), v("x"))));
  CHECK(parse_term("right[I,I] * # trailing comment") == Term::inr(I, I, Term::star()));
}

TEST_CASE("parse_type precedence and associativity") {
  CHECK(parse_type("!I -o I + I") == Type::lolli(Type::bang(I), Type::sum(I, I)));
  CHECK(parse_type("I * I * I") == Type::tensor(I, Type::tensor(I, I)));
  CHECK(parse_type("!(I -o I)") == Type::bang(Type::lolli(I, I)));
  CHECK(parse_type("I -o I -o I") == Type::lolli(I, Type::lolli(I, I)));
  CHECK(parse_type("I * I + I") == Type::sum(Type::tensor(I, I), I));
  CHECK(parse_type("!I * I") == Type::tensor(Type::bang(I), I));
}

TEST_CASE("parse errors carry position and expectations") {
  try {
    parse_term("\\x:I.\n  (x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
    CHECK(e.expected().count("')'") == 1);
    CHECK(e.found() == "end of input");
  }
  CHECK_THROWS_AS(parse_term("rec z:I. z"), ParseError);
  CHECK_THROWS_AS(parse_type("I -o"), ParseError);
  CHECK_THROWS_AS(parse_term("x $ y"), ParseError);
  CHECK_THROWS_AS(parse_term("let <x,y> = * in"), ParseError);
}

TEST_CASE("parse_program reads the calculus pragma") {
  auto p = parse_program("# header\ncalculus affine\n\\x:(I -o I). *\n");
  REQUIRE(p.calculus.has_value());
  CHECK(*p.calculus == Calculus::Affine);
  CHECK(!parse_program("*").calculus.has_value());
  CHECK_THROWS_AS(parse_program("calculus classical *"), ParseError);
}

TEST_CASE("is_nonlinear examples") {
  CHECK(is_nonlinear(I));
  CHECK(!is_nonlinear(Type::lolli(I, I)));
  CHECK(is_nonlinear(Type::bang(Type::lolli(I, I))));
  CHECK(!is_nonlinear(Type::tensor(I, Type::lolli(I, I))));
  CHECK(is_nonlinear(Type::sum(I, Type::bang(Type::lolli(I, I)))));
}

namespace {

std::vector<Type> all_types(int depth) {
  if (depth == 1) return {Type::unit()};
  std::vector<Type> smaller = all_types(depth - 1);
  std::vector<Type> out = {Type::unit()};
  for (const Type& a : smaller) {
    out.push_back(Type::bang(a));
    for (const Type& b : smaller) {
      out.push_back(Type::sum(a, b));
      out.push_back(Type::tensor(a, b));
      out.push_back(Type::lolli(a, b));
    }
  }
  return out;
}

// Generates the P-grammar bottom-up: I, P+R, P*R, !A.
std::set<Type> p_grammar(int depth) {
  if (depth == 1) return {Type::unit()};
  std::set<Type> smaller = p_grammar(depth - 1);
  std::set<Type> out = {Type::unit()};
  for (const Type& a : all_types(depth - 1)) out.insert(Type::bang(a));
  for (const Type& p : smaller)
    for (const Type& r : smaller) {
      out.insert(Type::sum(p, r));
      out.insert(Type::tensor(p, r));
    }
  return out;
}

}  // namespace

TEST_CASE("is_nonlinear agrees with the P-grammar on every type of depth <= 4") {
  std::set<Type> nonlinear = p_grammar(4);
  std::vector<Type> types = all_types(4);
  CHECK(types.size() == 19765);
  std::size_t mismatches = 0;
  for (const Type& t : types)
    if (is_nonlinear(t) != (nonlinear.count(t) == 1)) ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("is_value examples") {
  CHECK(is_value(parse_term("lift (rec z:!I. force z)")));
  CHECK(!is_value(parse_term("force (lift *)")));
  CHECK(is_value(parse_term("<*, left[I,I] *>")));
  CHECK(!is_value(parse_term("<*, *; *>")));
  CHECK(is_value(parse_term("\\x:I. x; x")));
}

TEST_CASE("free_vars examples") {
  CHECK(free_vars(v("x")) == std::set<Name>{"x"});
  CHECK(free_vars(Term::lam("x", I, v("x"))).empty());
  CHECK(free_vars(Term::app(v("f"), v("x"))) == std::set<Name>{"f", "x"});
  CHECK(free_vars(parse_term("case a of {left x -> x | right y -> b}")) ==
        std::set<Name>{"a", "b"});
}

TEST_CASE("subst examples") {
  CHECK(subst(v("x"), Term::star(), "x") == Term::star());
  Term id = Term::lam("x", I, v("x"));
  CHECK(subst(id, Term::star(), "x") == id);

  Term body = Term::force(v("z"));
  Term rec = Term::rec("z", Type::bang(I), body);
  CHECK(subst(body, Term::lift(rec), "z") == Term::force(Term::lift(rec)));

  CHECK_THROWS_AS(subst(v("x"), parse_term("force y"), "x"), ContractViolation);
}

TEST_CASE("subst renames binders that would capture") {
  Term m = parse_term("\\y:I. x");
  Term r = subst(m, v("y"), "x");
  REQUIRE(r.is(Term::Kind::Lam));
  CHECK(r.as<term::Lam>().param == "y_1");
  CHECK(r.as<term::Lam>().body == v("y"));
  CHECK(alpha_equal(r, parse_term("\\w:I. y")));

  Term two = subst(parse_term("let <a,b> = p in <a, <b, q>>"),
                   {{"p", v("b")}, {"q", v("a")}});
  CHECK(alpha_equal(two, parse_term("let <c,d> = b in <c, <d, a>>")));
}

TEST_CASE("fresh_name is keyed off the source name") {
  CHECK(fresh_name("x", {"x"}) == "x_1");
  CHECK(fresh_name("x", {"x", "x_1"}) == "x_2");
  CHECK(fresh_name("x_7", {"x_7", "x_1"}) == "x_2");
}

TEST_CASE("round trip: parse(print(m)) == m on random ASTs") {
  std::mt19937_64 rng(20261019);
  for (int i = 0; i < 3000; ++i) {
    Term m = testing::random_term(rng, 6);
    std::string text = to_string(m);
    Term back = parse_term(text);
    INFO(text);
    CHECK(back == m);
  }
  for (int i = 0; i < 2000; ++i) {
    Type t = testing::random_type(rng, 5);
    CHECK(parse_type(to_string(t)) == t);
  }
}

TEST_CASE("subst keeps free variables within fv(m) - {x} + fv(v)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    Term m = testing::random_term(rng, 5);
    Term val = testing::random_value(rng, 3);
    Name x = testing::random_name(rng);
    Term r = subst(m, val, x);
    std::set<Name> allowed = free_vars(m);
    allowed.erase(x);
    auto fv = free_vars(val);
    allowed.insert(fv.begin(), fv.end());
    for (const Name& n : free_vars(r)) CHECK(allowed.count(n) == 1);
    if (!free_vars(m).count(x)) CHECK(alpha_equal(r, m));
  }
}

TEST_CASE("subst agrees with a naive oracle on capture-free instances") {
  // When the value is closed, no renaming can occur, so substitution is plain
  // replacement of free occurrences.
  std::function<Term(const Term&, const Term&, const Name&)> naive =
      [&](const Term& m, const Term& val, const Name& x) -> Term {
    using namespace term;
    switch (m.kind()) {
      case Term::Kind::Var: return m.as<Var>().name == x ? val : m;
      case Term::Kind::Star: return m;
      case Term::Kind::Seq: return Term::seq(naive(m.as<Seq>().first, val, x), naive(m.as<Seq>().second, val, x));
      case Term::Kind::Inl: return Term::inl(m.as<Inl>().left, m.as<Inl>().right, naive(m.as<Inl>().body, val, x));
      case Term::Kind::Inr: return Term::inr(m.as<Inr>().left, m.as<Inr>().right, naive(m.as<Inr>().body, val, x));
      case Term::Kind::Case: {
        const auto& c = m.as<Case>();
        return Term::case_of(naive(c.scrutinee, val, x), c.left_name,
                             c.left_name == x ? c.left_branch : naive(c.left_branch, val, x),
                             c.right_name,
                             c.right_name == x ? c.right_branch : naive(c.right_branch, val, x));
      }
      case Term::Kind::Pair: return Term::pair(naive(m.as<Pair>().first, val, x), naive(m.as<Pair>().second, val, x));
      case Term::Kind::LetPair: {
        const auto& l = m.as<LetPair>();
        bool shadow = l.first_name == x || l.second_name == x;
        return Term::let_pair(l.first_name, l.second_name, naive(l.bound, val, x),
                              shadow ? l.body : naive(l.body, val, x));
      }
      case Term::Kind::Lam: {
        const auto& l = m.as<Lam>();
        return l.param == x ? m : Term::lam(l.param, l.param_type, naive(l.body, val, x));
      }
      case Term::Kind::App: return Term::app(naive(m.as<App>().fn, val, x), naive(m.as<App>().arg, val, x));
      case Term::Kind::Lift: return Term::lift(naive(m.as<Lift>().body, val, x));
      case Term::Kind::Force: return Term::force(naive(m.as<Force>().body, val, x));
      case Term::Kind::Rec: {
        const auto& r = m.as<Rec>();
        return r.self == x ? m : Term::rec(r.self, r.self_type, naive(r.body, val, x));
      }
    }
    return m;
  };
  std::mt19937_64 rng(11);
  int tried = 0;
  while (tried < 2000) {
    Term val = testing::random_value(rng, 3);
    if (!free_vars(val).empty()) continue;
    ++tried;
    Term m = testing::random_term(rng, 5);
    Name x = testing::random_name(rng);
    CHECK(subst(m, val, x) == naive(m, val, x));
  }
}
