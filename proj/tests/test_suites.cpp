#include "doctest.h"
#include "slc/suites.hpp"
#include "slc/text.hpp"

using namespace slc;

namespace {

SuiteConfig small() {
  SuiteConfig cfg;
  cfg.gen.count = 60;
  cfg.gen.divergence_bound = 100000;
  cfg.points_per_type = 2;
  cfg.value_cases = 60;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("every suite passes at small scale and reports in the versioned schema") {
  for (const std::string& name : suite_names()) {
    CAPTURE(name);
    TestReport r = run_suite(name, small());
    CHECK(r.passed);
    CHECK(r.cases > 0);
    auto j = r.to_json();
    CHECK(j["schema"] == "slc.report/1");
    CHECK(j["suite"] == name);
    CHECK(j["coverage"].size() == RuleCoverage::rules().size());
    for (const auto& u : r.unknowns) CHECK(u.fuel > 0);
  }
}

TEST_CASE("reports are deterministic and independent of thread count") {
  SuiteConfig one = small(), many = small();
  one.threads = 1;
  many.threads = 3;
  for (const char* name : {"soundness", "coherence", "degeneracy"}) {
    auto a = run_suite(name, one).to_json(), b = run_suite(name, many).to_json();
    a.erase("wall_seconds");
    b.erase("wall_seconds");
    CHECK(a == b);
  }
}

TEST_CASE("adequacy covers the divergent corpus program") {
  TestReport r = run_suite("adequacy", small());
  CHECK(r.metrics["divergent_corpus_confirmed"] == 1);
  CHECK(r.metrics["max_fuel_ratio"] <= static_cast<double>(kAdequacyFactor));
}

TEST_CASE("comonoid types are non-linear and distinct") {
  auto types = comonoid_types();
  CHECK(types.size() > 1000);
  for (const Type& t : types) CHECK(is_nonlinear(t));
  CHECK(std::adjacent_find(types.begin(), types.end()) == types.end());
}

TEST_CASE("run_suite contract") {
  CHECK_THROWS_AS(run_suite("nope", small()), ContractViolation);
  SuiteConfig none = small();
  none.calculi.clear();
  CHECK_THROWS_AS(run_suite("soundness", none), ContractViolation);
}

TEST_CASE("failures carry a replayable seed") {
  // A failing suite is simulated by comparing a case seed with a fresh
  // generation from that seed alone.
  SuiteConfig cfg = small();
  TestReport r = run_suite("subject-reduction", cfg);
  GenConfig g = cfg.gen;
  g.calculus = Calculus::Linear;
  g.seed = case_seed(cfg.gen.seed * 2, 0);
  Generated a = gen_typed_term(g), b = gen_typed_term(g);
  CHECK(a.term == b.term);
}
