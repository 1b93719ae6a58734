#include <set>

#include "doctest.h"
#include "slc/domains.hpp"
#include "slc/text.hpp"

using namespace slc;

namespace {

const Type I = Type::unit();
const Type II = Type::lolli(I, I);
const Type IplusI = Type::sum(I, I);

Comp ret(SemVal v) { return Comp::pure(std::move(v)); }

// A computation that converges after `steps` delay steps.
Comp delayed(SemVal v, int steps) {
  if (steps == 0) return ret(v);
  return Comp::later([v, steps] { return delayed(v, steps - 1); });
}

}  // namespace

TEST_CASE("discard, copy and box examples") {
  CHECK(discard(I, SemVal::unit()).is(SemVal::Kind::Unit));
  CHECK(discard(Type::bang(I), SemVal::thunk(Comp::bottom())).is(SemVal::Kind::Unit));
  SemVal f = SemVal::fun([](const SemVal& x) { return ret(x); });
  CHECK(discard(II, f, Calculus::Affine).is(SemVal::Kind::Unit));
  CHECK_THROWS_AS(discard(II, f, Calculus::Linear), ContractViolation);
  CHECK_THROWS_AS(discard(I, f), ContractViolation);

  SemVal c = copy(I, SemVal::unit());
  CHECK(c.is(SemVal::Kind::Pair));
  CHECK(c.first().is(SemVal::Kind::Unit));

  // Copying a thunk shares the same suspended computation.
  int runs = 0;
  Comp counted = Comp::later([&runs] {
    ++runs;
    return ret(SemVal::unit());
  });
  SemVal t = SemVal::thunk(counted);
  SemVal tt = copy(Type::bang(I), t);
  CHECK(runs == 0);
  CHECK(tt.first().suspended().run(5).converged());
  CHECK(runs == 1);

  SemVal inl = copy(IplusI, SemVal::inl(SemVal::unit()));
  CHECK(render(inl) == "<left *, left *>");
  CHECK_THROWS_AS(copy(II, f), ContractViolation);

  SemVal b = box(I, SemVal::unit());
  RunResult r = b.suspended().run(1);
  REQUIRE(r.converged());
  CHECK(r.value->is(SemVal::Kind::Unit));
  CHECK(r.used == 0);
  CHECK(box(Type::bang(I), t).suspended().run(0).value->is(SemVal::Kind::Thunk));
  CHECK(render(*box(IplusI, SemVal::inr(SemVal::unit())).suspended().run(1).value) == "right *");
  CHECK_THROWS_AS(box(II, f), ContractViolation);
}

TEST_CASE("Comp runs count delay steps only") {
  CHECK(ret(SemVal::unit()).run(0).converged());
  Comp d = delayed(SemVal::unit(), 3);
  CHECK(!d.run(2).converged());
  CHECK(d.run(3).converged());
  CHECK(d.run(3).used == 3);
  CHECK(d.run(100).used == 3);
  RunResult b = Comp::bottom().run(1000000);
  CHECK(!b.converged());
  CHECK(b.used == 1000000);
}

TEST_CASE("deep bind chains do not use the host stack") {
  // Left-nested chains are built eagerly; their depth is only limited by
  // node destruction, which is recursive.
  Comp c = ret(SemVal::unit());
  for (int i = 0; i < 20000; ++i) c = c.bind([](const SemVal& v) { return ret(v); });
  CHECK(c.run(0).converged());
  // Right-nested: each continuation builds the next bind.
  std::function<Comp(int)> chain = [&](int n) -> Comp {
    if (n == 0) return ret(SemVal::unit());
    return ret(SemVal::unit()).bind([&chain, n](const SemVal&) { return chain(n - 1); });
  };
  CHECK(chain(200000).run(0).converged());
}

TEST_CASE("sem_equal examples") {
  CHECK(sem_equal(I, ret(SemVal::unit()), ret(SemVal::unit()), 10, 0).kind == EqVerdict::Kind::Equal);
  CHECK(sem_equal(I, ret(SemVal::unit()), Comp::bottom(), 10000, 0).kind ==
        EqVerdict::Kind::Unknown);
  CHECK(sem_equal(I, Comp::bottom(), Comp::bottom(), 100, 0).kind == EqVerdict::Kind::Unknown);
  auto v = sem_equal(IplusI, ret(SemVal::inl(SemVal::unit())), ret(SemVal::inr(SemVal::unit())), 10, 0);
  CHECK(v.kind == EqVerdict::Kind::Differ);
  CHECK(replay_witness(IplusI, ret(SemVal::inl(SemVal::unit())), ret(SemVal::inr(SemVal::unit())),
                       v.witness, 10));
  // Delays below the fuel are invisible.
  CHECK(sem_equal(IplusI, delayed(SemVal::inl(SemVal::unit()), 4), ret(SemVal::inl(SemVal::unit())),
                  4, 0)
            .kind == EqVerdict::Kind::Equal);
  CHECK(sem_equal(IplusI, delayed(SemVal::inl(SemVal::unit()), 5), ret(SemVal::inl(SemVal::unit())),
                  4, 0)
            .kind == EqVerdict::Kind::Unknown);
}

TEST_CASE("sem_equal probes functions and thunks") {
  Type bool_fn = Type::lolli(IplusI, IplusI);
  SemVal id = SemVal::fun([](const SemVal& x) { return ret(x); });
  SemVal neg = SemVal::fun([](const SemVal& x) {
    return ret(x.is(SemVal::Kind::Inl) ? SemVal::inr(x.payload()) : SemVal::inl(x.payload()));
  });
  SemVal id2 = SemVal::fun([](const SemVal& x) { return delayed(x, 2); });
  CHECK(sem_equal(bool_fn, ret(id), ret(id2), 10, 8).kind == EqVerdict::Kind::Equal);
  CHECK(sem_equal(bool_fn, ret(id), ret(id), 10, 0).kind == EqVerdict::Kind::Unknown);
  auto v = sem_equal(bool_fn, ret(id), ret(neg), 10, 8);
  REQUIRE(v.kind == EqVerdict::Kind::Differ);
  CHECK(replay_witness(bool_fn, ret(id), ret(neg), v.witness, 10));
  CHECK(!replay_witness(bool_fn, ret(id), ret(id2), v.witness, 10));

  Type bang = Type::bang(IplusI);
  SemVal t1 = SemVal::thunk(ret(SemVal::inl(SemVal::unit())));
  SemVal t2 = SemVal::thunk(ret(SemVal::inr(SemVal::unit())));
  SemVal t3 = SemVal::thunk(Comp::bottom());
  auto w = sem_equal(bang, ret(t1), ret(t2), 10, 1);
  REQUIRE(w.kind == EqVerdict::Kind::Differ);
  CHECK(w.describe() == "Differ at run force run: left * vs right *");
  CHECK(replay_witness(bang, ret(t1), ret(t2), w.witness, 10));
  CHECK(sem_equal(bang, ret(t1), ret(t3), 10, 1).kind == EqVerdict::Kind::Unknown);

  // Differ wins over Unknown in a pair.
  Type pair = Type::tensor(Type::bang(I), IplusI);
  auto p = sem_equal(pair, ret(SemVal::pair(t3, SemVal::inl(SemVal::unit()))),
                     ret(SemVal::pair(t3, SemVal::inr(SemVal::unit()))), 10, 1);
  CHECK(p.kind == EqVerdict::Kind::Differ);
}

TEST_CASE("gen_sem_val contract") {
  CHECK(gen_sem_val(I, 1, 5).is(SemVal::Kind::Unit));
  std::set<std::string> bools;
  bool saw_bottom_thunk = false, saw_converging_thunk = false;
  for (std::uint64_t s = 0; s < 200; ++s) {
    bools.insert(render(gen_sem_val(IplusI, s, 1)));
    SemVal t = gen_sem_val(Type::bang(I), s, 2);
    REQUIRE(t.is(SemVal::Kind::Thunk));
    if (t.suspended().run(10000).converged())
      saw_converging_thunk = true;
    else
      saw_bottom_thunk = true;
  }
  CHECK(bools == std::set<std::string>{"left *", "right *"});
  CHECK(saw_bottom_thunk);
  CHECK(saw_converging_thunk);

  const std::vector<Type> types = {I, IplusI, Type::tensor(IplusI, Type::bang(II)),
                                   Type::lolli(IplusI, Type::tensor(I, IplusI)),
                                   Type::bang(Type::lolli(II, IplusI))};
  for (const Type& a : types)
    for (std::uint64_t s = 0; s < 50; ++s) {
      SemVal v = gen_sem_val(a, s, 3);
      CHECK(well_typed_sem(a, v));
      // Deterministic in the seed.
      CHECK(sem_equal(a, ret(v), ret(gen_sem_val(a, s, 3)), 50, 4).kind != EqVerdict::Kind::Differ);
    }
}

TEST_CASE("constructed computations are monotone in fuel") {
  const std::vector<Type> types = {Type::bang(IplusI), Type::lolli(IplusI, IplusI),
                                   Type::bang(Type::bang(I))};
  for (const Type& a : types)
    for (std::uint64_t s = 0; s < 100; ++s) {
      SemVal v = gen_sem_val(a, s, 3);
      Comp c = v.is(SemVal::Kind::Thunk) ? v.suspended() : v.apply(gen_sem_val(a.arg(), s, 2));
      RunResult lo = c.run(3), hi = c.run(300);
      if (lo.converged()) {
        REQUIRE(hi.converged());
        CHECK(render(*lo.value) == render(*hi.value));
        CHECK(lo.used == hi.used);
      }
    }
}

TEST_CASE("comonoid laws on generated points") {
  const std::vector<Type> xs = {I, IplusI, Type::bang(I), Type::bang(II),
                                Type::tensor(IplusI, Type::bang(II))};
  for (const Type& x : xs)
    for (std::uint64_t s = 0; s < 30; ++s) {
      SemVal v = gen_sem_val(x, s, 3);
      SemVal d = copy(x, v);
      // Counit on either side gives back v.
      CHECK(discard(x, d.first()).is(SemVal::Kind::Unit));
      CHECK(!sem_equal(x, ret(d.second()), ret(v), 100, 4).differ());
      CHECK(!sem_equal(x, ret(d.first()), ret(v), 100, 4).differ());
      // Coassociativity after re-bracketing, and cocommutativity.
      SemVal l = copy(x, d.first());
      SemVal r = copy(x, d.second());
      Type xxx = Type::tensor(x, Type::tensor(x, x));
      SemVal left = SemVal::pair(l.first(), SemVal::pair(l.second(), d.second()));
      SemVal right = SemVal::pair(d.first(), SemVal::pair(r.first(), r.second()));
      CHECK(!sem_equal(xxx, ret(left), ret(right), 100, 4).differ());
      SemVal swapped = SemVal::pair(d.second(), d.first());
      CHECK(!sem_equal(Type::tensor(x, x), ret(swapped), ret(d), 100, 4).differ());
    }
}
