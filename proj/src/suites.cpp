#include "slc/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

#include "slc/corpus.hpp"
#include "slc/denote_naive.hpp"
#include "slc/denote_standard.hpp"
#include "slc/report_json.hpp"
#include "slc/text.hpp"
#include "slc/typecheck.hpp"

namespace slc {

namespace {

// Unknowns are counted in full but only this many are listed.
constexpr std::size_t kMaxListedUnknowns = 100;

struct CaseResult {
  CaseFailure repro;  // copied into `failure` on the first fail()
  std::optional<CaseFailure> failure;
  std::vector<UnknownCase> unknowns;
  std::map<std::string, double> sums;
  std::map<std::string, double> maxima;
  std::optional<Term> covered;

  // Records how to reproduce the case; call before anything can throw.
  void at(const GenConfig& g, std::string term, std::string type) {
    repro.seed = g.seed;
    repro.calculus = to_string(g.calculus);
    repro.term = std::move(term);
    repro.type = std::move(type);
  }

  void fail(std::string detail) {
    if (!failure) failure = repro;
    if (!failure->detail.empty()) failure->detail += "; ";
    failure->detail += std::move(detail);
  }
};

using CaseFn = std::function<void(std::size_t, CaseResult&)>;

// Runs n cases on a small pool and merges results in index order, so the
// report does not depend on scheduling.
void run_cases(TestReport& rep, std::size_t n, unsigned threads, const CaseFn& fn) {
  std::vector<CaseResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i, results[i]);
      } catch (const std::exception& e) {
        results[i].fail(std::string("exception: ") + e.what());
      }
    }
  };
  unsigned k = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  k = static_cast<unsigned>(std::min<std::size_t>(k, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    CaseResult& r = results[i];
    ++rep.cases;
    if (r.failure) {
      r.failure->index = rep.cases - 1;
      rep.failures.push_back(*r.failure);
    }
    for (auto& u : r.unknowns) {
      ++rep.metrics["unknown"];
      if (rep.unknowns.size() < kMaxListedUnknowns) {
        u.index = rep.cases - 1;
        rep.unknowns.push_back(u);
      }
    }
    for (const auto& [k2, v] : r.sums) rep.metrics[k2] += v;
    for (const auto& [k2, v] : r.maxima) rep.metrics[k2] = std::max(rep.metrics[k2], v);
    if (r.covered) rep.coverage.add(*r.covered);
  }
}

std::uint64_t calc_seed(const SuiteConfig& cfg, Calculus calc) {
  return cfg.gen.seed * 2 + (calc == Calculus::Affine ? 1 : 0);
}

GenConfig gen_for(const SuiteConfig& cfg, Calculus calc, std::size_t i) {
  GenConfig g = cfg.gen;
  g.calculus = calc;
  g.seed = case_seed(calc_seed(cfg, calc), i);
  return g;
}

void record_verdict(CaseResult& r, const EqVerdict& v, const GenConfig& g, const std::string& term,
                    const std::string& what, const Type& a, const Comp& d1, const Comp& d2, Fuel fuel) {
  switch (v.kind) {
    case EqVerdict::Kind::Equal: ++r.sums["equal"]; break;
    case EqVerdict::Kind::Unknown:
      r.unknowns.push_back(UnknownCase{0, g.seed, term, v.fuel, what + ": " + v.describe()});
      break;
    case EqVerdict::Kind::Differ: {
      bool replays = replay_witness(a, d1, d2, v.witness, fuel);
      r.fail(what + ": " + v.describe() + (replays ? " (witness replays)" : " (witness does not replay)"));
    }
  }
}

// ---------------------------------------------------------------- suites

// A generated closed term with its reproduction data recorded.
Generated generated(CaseResult& r, const GenConfig& g) {
  Generated gen = gen_typed_term(g);
  r.covered = gen.term;
  r.at(g, to_string(gen.term), to_string(gen.type));
  return gen;
}

GeneratedValue generated_value(CaseResult& r, const GenConfig& g, bool nonlinear) {
  GeneratedValue gv = gen_typed_value(g, nonlinear);
  r.at(g, to_string(gv.value), to_string(gv.type));
  return gv;
}

void subject_reduction(TestReport& rep, const SuiteConfig& cfg) {
  for (Calculus calc : cfg.calculi)
    run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
      GenConfig g = gen_for(cfg, calc, i);
      Generated gen = generated(r, g);
      EvalTrace e = eval_trace(gen.term, g.fuel);
      r.sums[to_string(e.outcome.status)] = 1;
      if (e.outcome.status == EvalOutcome::Status::Stuck) r.fail("well-typed closed term got stuck");
      if (!e.outcome.converged()) return;
      try {
        Type b = typecheck(calc, {}, *e.outcome.value).type;
        if (!(b == gen.type)) r.fail("value has type " + to_string(b));
      } catch (const TypeError& err) {
        r.fail(std::string("value rejected: ") + to_string(err.kind()) + " " + err.details());
      }
    });
}

void soundness(TestReport& rep, const SuiteConfig& cfg) {
  for (Calculus calc : cfg.calculi)
    run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
      GenConfig g = gen_for(cfg, calc, i);
      Generated gen = generated(r, g);
      EvalOutcome e = eval(gen.term, g.fuel);
      if (!e.converged()) {
        ++r.sums["not_converged"];
        return;
      }
      Comp dm = denote(calc, {}, gen.term, gen.type).fun({});
      Comp dv = denote(calc, {}, *e.value, gen.type).fun({});
      EqVerdict v = sem_equal(gen.type, dm, dv, g.fuel, g.probes);
      record_verdict(r, v, g, r.repro.term, "term vs value " + to_string(*e.value), gen.type, dm, dv, g.fuel);
    });
}

// Checks both directions of adequacy for one closed program of type I.
void adequacy_case(CaseResult& r, const SuiteConfig& cfg, Calculus calc, const Term& m) {
  r.covered = m;
  EvalTrace e = eval_trace(m, cfg.gen.fuel);
  Comp d = denote(calc, {}, m, Type::unit()).fun({});
  Fuel bound = cfg.gen.divergence_bound;
  switch (e.outcome.status) {
    case EvalOutcome::Status::Stuck: r.fail("closed program of type I got stuck"); break;
    case EvalOutcome::Status::Converged: {
      ++r.sums["converged"];
      RunResult dr = d.run(bound);
      if (!dr.converged()) {
        r.fail("eval converged in " + std::to_string(e.rules) + " rules; denotation bottom up to " +
               std::to_string(bound));
      } else if (!dr.value->is(SemVal::Kind::Unit)) {
        r.fail("denotation converged to " + render(*dr.value));
      } else {
        double ratio = e.rules ? static_cast<double>(dr.used) / static_cast<double>(e.rules) : 0.0;
        r.maxima["max_fuel_ratio"] = ratio;
        if (dr.used > kAdequacyFactor * e.rules)
          r.fail("denotation used " + std::to_string(dr.used) + " > " + std::to_string(kAdequacyFactor) +
                 " x " + std::to_string(e.rules) + " rules");
      }
      break;
    }
    case EvalOutcome::Status::OutOfFuel: {
      // Converse: a converging denotation must be matched by evaluation.
      RunResult dr = d.run(bound);
      EvalOutcome far = eval(m, bound);
      if (dr.converged() != far.converged())
        r.fail(std::string("at bound ") + std::to_string(bound) + " eval " +
               (far.converged() ? "converges" : "does not") + ", denotation " +
               (dr.converged() ? "converges" : "does not"));
      else if (!dr.converged())
        ++r.sums["both_nonconverged_at_bound"];
      else
        ++r.sums["converged_beyond_fuel"];
    }
  }
}

void adequacy(TestReport& rep, const SuiteConfig& cfg) {
  std::vector<const CorpusEntry*> programs;
  for (const auto& e : corpus())
    if (e.type == "I") programs.push_back(&e);
  run_cases(rep, programs.size(), cfg.threads, [&](std::size_t i, CaseResult& r) {
    const CorpusEntry& e = *programs[i];
    r.repro.calculus = to_string(e.calculus);
    r.repro.term = "corpus:" + e.name;
    r.repro.type = "I";
    adequacy_case(r, cfg, e.calculus, parse_term(e.source));
    if (e.diverges && r.sums.count("both_nonconverged_at_bound")) r.sums["divergent_corpus_confirmed"] = 1;
  });
  for (Calculus calc : cfg.calculi)
    run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
      GenConfig g = gen_for(cfg, calc, i);
      g.target = Type::unit();
      adequacy_case(r, cfg, calc, generated(r, g).term);
    });
}

void comonoid_laws(TestReport& rep, const SuiteConfig& cfg) {
  std::vector<Type> types = comonoid_types();
  rep.metrics["types"] = static_cast<double>(types.size());
  const std::size_t points = cfg.points_per_type;
  const Fuel fuel = cfg.law_fuel;
  run_cases(rep, types.size() * points, cfg.threads, [&](std::size_t i, CaseResult& r) {
    const Type& x = types[i / points];
    GenConfig g = cfg.gen;
    g.seed = case_seed(cfg.gen.seed, i);
    SemVal v = gen_sem_val(x, g.seed, 3);
    // The "term" of a failure is the generated point, replayable from the seed.
    r.at(g, render(v), to_string(x));
    SemVal d = copy(x, v);
    auto same = [&](const std::string& what, const Type& a, const SemVal& p, const SemVal& q) {
      Comp c1 = Comp::pure(p), c2 = Comp::pure(q);
      record_verdict(r, sem_equal(a, c1, c2, fuel, g.probes), g, r.repro.type, what, a, c1, c2, fuel);
    };
    if (!discard(x, d.first()).is(SemVal::Kind::Unit) || !discard(x, d.second()).is(SemVal::Kind::Unit))
      r.fail("discard did not return unit");
    same("left counit", x, d.second(), v);
    same("right counit", x, d.first(), v);
    SemVal l = copy(x, d.first()), rr = copy(x, d.second());
    Type xxx = Type::tensor(x, Type::tensor(x, x));
    same("coassociativity", xxx, SemVal::pair(l.first(), SemVal::pair(l.second(), d.second())),
         SemVal::pair(d.first(), SemVal::pair(rr.first(), rr.second())));
    same("cocommutativity", Type::tensor(x, x), SemVal::pair(d.second(), d.first()), d);
  });
}

// The promoted value: force each boxed entry, then interpret v.
Comp lifted(const Context& ctx, const SemEnv& boxed, const std::function<SemVal(const SemEnv&)>& v,
            std::size_t k = 0, SemEnv acc = {}) {
  if (k == ctx.size()) return Comp::pure(v(acc));
  const Name& x = ctx.entries()[k].first;
  return boxed.at(x).suspended().bind([&ctx, &boxed, &v, k, acc, x](const SemVal& a) {
    SemEnv next = acc;
    next.emplace(x, a);
    return lifted(ctx, boxed, v, k + 1, std::move(next));
  });
}

void substructural_naturality(TestReport& rep, const SuiteConfig& cfg) {
  const std::size_t n = cfg.value_cases;
  // Non-linear values: discard, copy and promotion commute with the value.
  run_cases(rep, n, cfg.threads, [&](std::size_t i, CaseResult& r) {
    Calculus calc = cfg.calculi[i % cfg.calculi.size()];
    GenConfig g = gen_for(cfg, calc, i);
    GeneratedValue gv = generated_value(r, g, true);
    const std::string& term = r.repro.term;
    SemEnv env = gen_sem_env(gv.ctx, g.seed, 3);
    ValueDenotation vd = denote_value_V(calc, gv.ctx, gv.value, gv.type);
    SemVal val = vd.fun(env);
    if (!discard(gv.type, val).is(SemVal::Kind::Unit) || !discard(gv.ctx, env).is(SemVal::Kind::Unit))
      r.fail("discard did not return unit");
    auto [e1, e2] = copy(gv.ctx, env);
    Type pp = Type::tensor(gv.type, gv.type);
    Comp c1 = Comp::pure(copy(gv.type, val)), c2 = Comp::pure(SemVal::pair(vd.fun(e1), vd.fun(e2)));
    record_verdict(r, sem_equal(pp, c1, c2, cfg.law_fuel, g.probes), g, term, "copy", pp, c1, c2, cfg.law_fuel);
    SemEnv boxed;
    for (const auto& [x, t] : gv.ctx.entries()) boxed.emplace(x, box(t, env.at(x)));
    Type bp = Type::bang(gv.type);
    Comp b1 = Comp::pure(box(gv.type, val));
    Comp b2 = Comp::pure(SemVal::thunk(lifted(gv.ctx, boxed, vd.fun)));
    record_verdict(r, sem_equal(bp, b1, b2, cfg.law_fuel, g.probes), g, term, "box", bp, b1, b2, cfg.law_fuel);
    ++r.sums["nonlinear_values"];
  });
  // Affine values of any type: discarding the value is discarding the
  // environment, and the value's denotation needs no fuel.
  run_cases(rep, n, cfg.threads, [&](std::size_t i, CaseResult& r) {
    GenConfig g = gen_for(cfg, Calculus::Affine, n + i);
    GeneratedValue gv = generated_value(r, g, false);
    SemEnv env = gen_sem_env(gv.ctx, g.seed, 3);
    SemVal val = denote_value_V(Calculus::Affine, gv.ctx, gv.value, gv.type).fun(env);
    if (!discard(gv.type, val, Calculus::Affine).is(SemVal::Kind::Unit) ||
        !discard(gv.ctx, env, Calculus::Affine).is(SemVal::Kind::Unit))
      r.fail("affine discard did not return unit");
    if (!denote(Calculus::Affine, gv.ctx, gv.value, gv.type).fun(env).run(0).converged())
      r.fail("value denotation consumed fuel");
    ++r.sums["affine_values"];
  });
}

void coherence(TestReport& rep, const SuiteConfig& cfg) {
  run_cases(rep, cfg.value_cases, cfg.threads, [&](std::size_t i, CaseResult& r) {
    Calculus calc = cfg.calculi[i % cfg.calculi.size()];
    GenConfig g = gen_for(cfg, calc, i);
    bool nonlinear = (i / cfg.calculi.size()) % 2 == 0;
    GeneratedValue gv = generated_value(r, g, nonlinear);
    const std::string& term = r.repro.term;
    SemEnv env = gen_sem_env(gv.ctx, g.seed, 3);
    Comp d = denote(calc, gv.ctx, gv.value, gv.type).fun(env);
    Comp v = Comp::pure(denote_value_V(calc, gv.ctx, gv.value, gv.type).fun(env));
    record_verdict(r, sem_equal(gv.type, d, v, g.fuel, g.probes), g, term, "denote vs V", gv.type, d, v, g.fuel);
    if (nonlinear) {
      Comp b = Comp::pure(denote_value_B(gv.ctx, gv.value, gv.type, calc).fun(env));
      record_verdict(r, sem_equal(gv.type, d, b, g.fuel, g.probes), g, term, "denote vs B", gv.type, d, b,
                     g.fuel);
      ++r.sums["nonlinear_values"];
    }
  });
}

void inclusion(TestReport& rep, const SuiteConfig& cfg) {
  run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
    GenConfig g = gen_for(cfg, Calculus::Linear, i);
    Generated gen = generated(r, g);
    auto affine_agrees = [&](const Context& ctx, const Term& m, const Type& a) {
      try {
        Type b = typecheck(Calculus::Affine, ctx, m).type;
        if (!(b == a)) r.fail(to_string(m) + ": affine type " + to_string(b));
      } catch (const TypeError& e) {
        r.fail(to_string(m) + ": affine rejects with " + to_string(e.kind()));
      }
    };
    affine_agrees({}, gen.term, gen.type);
    // Open values too; the value is regenerated from the same seed.
    GeneratedValue gv = gen_typed_value(g, false);
    affine_agrees(gv.ctx, gv.value, gv.type);
  });
}

void degeneracy(TestReport& rep, const SuiteConfig& cfg) {
  DegeneracyReport d = degeneracy_report(cfg.gen.divergence_bound, cfg.gen.fuel);
  rep.metrics["demonstrates_degeneracy"] = d.demonstrates_degeneracy();
  rep.metrics["t_naive_judged_bottom"] = d.t_naive.bottom();
  rep.metrics["t_standard_converged"] = d.t_standard_value.has_value();
  // On the linear calculus the naive backend agrees with the standard one.
  run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
    GenConfig g = gen_for(cfg, Calculus::Linear, i);
    Generated gen = generated(r, g);
    Comp naive = denote_naive(Calculus::Linear, {}, gen.term, gen.type, g.bottom_bound, g.probes).fun({});
    Comp standard = denote(Calculus::Linear, {}, gen.term, gen.type).fun({});
    record_verdict(r, sem_equal(gen.type, standard, naive, g.fuel, g.probes), g, r.repro.term,
                   "standard vs naive", gen.type, standard, naive, g.fuel);
  });
  if (!d.demonstrates_degeneracy()) {
    CaseFailure f;
    f.calculus = "affine";
    f.term = d.t_source;
    f.type = "I";
    f.detail = "degeneracy not demonstrated";
    rep.failures.push_back(f);
  }
}

void fuel_monotonicity(TestReport& rep, const SuiteConfig& cfg) {
  static const Fuel kLow[] = {1, 4, 16, 64, 256, 1024};
  for (Calculus calc : cfg.calculi)
    run_cases(rep, static_cast<std::size_t>(cfg.gen.count), cfg.threads, [&](std::size_t i, CaseResult& r) {
      GenConfig g = gen_for(cfg, calc, i);
      Generated gen = generated(r, g);
      EvalTrace high = eval_trace(gen.term, g.fuel);
      EvalTrace again = eval_trace(gen.term, g.fuel);
      if (high.outcome.status != again.outcome.status || high.rules != again.rules ||
          high.outcome.value.has_value() != again.outcome.value.has_value() ||
          (high.outcome.value && !(*high.outcome.value == *again.outcome.value)))
        r.fail("evaluation is not deterministic");
      for (Fuel n : kLow) {
        if (n >= g.fuel) continue;
        EvalTrace low = eval_trace(gen.term, n);
        if (!low.outcome.converged()) continue;
        ++r.sums["converged_pairs"];
        if (!high.outcome.converged() || !(*low.outcome.value == *high.outcome.value) || low.rules != high.rules)
          r.fail("converged at fuel " + std::to_string(n) + " but differs at " + std::to_string(g.fuel));
      }
    });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"subject-reduction",
                                                 "soundness",
                                                 "adequacy",
                                                 "comonoid-laws",
                                                 "substructural-naturality",
                                                 "coherence",
                                                 "inclusion",
                                                 "degeneracy",
                                                 "fuel-monotonicity"};
  return names;
}

std::vector<Type> comonoid_types() {
  std::vector<Type> level = {Type::unit(), Type::sum(Type::unit(), Type::unit()), Type::bang(Type::unit()),
                             Type::bang(Type::lolli(Type::unit(), Type::unit()))};
  for (int round = 0; round < 2; ++round) {
    std::vector<Type> next = level;
    for (const Type& a : level)
      for (const Type& b : level) {
        next.push_back(Type::sum(a, b));
        next.push_back(Type::tensor(a, b));
      }
    for (const Type& a : level) next.push_back(Type::bang(a));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return level;
}

TestReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  static const std::map<std::string, void (*)(TestReport&, const SuiteConfig&)> suites = {
      {"subject-reduction", subject_reduction},
      {"soundness", soundness},
      {"adequacy", adequacy},
      {"comonoid-laws", comonoid_laws},
      {"substructural-naturality", substructural_naturality},
      {"coherence", coherence},
      {"inclusion", inclusion},
      {"degeneracy", degeneracy},
      {"fuel-monotonicity", fuel_monotonicity}};
  auto it = suites.find(name);
  if (it == suites.end()) throw ContractViolation("unknown suite " + name);
  if (cfg.calculi.empty()) throw ContractViolation("run_suite: no calculus selected");
  TestReport rep;
  rep.suite = name;
  rep.seed = cfg.gen.seed;
  auto start = std::chrono::steady_clock::now();
  it->second(rep, cfg);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.passed = rep.failures.empty();
  return rep;
}

nlohmann::json TestReport::to_json() const {
  using nlohmann::json;
  json fs = json::array();
  for (const auto& f : failures)
    fs.push_back({{"index", f.index},
                  {"seed", f.seed},
                  {"calculus", f.calculus},
                  {"term", f.term},
                  {"type", f.type},
                  {"detail", f.detail}});
  json us = json::array();
  for (const auto& u : unknowns)
    us.push_back({{"index", u.index}, {"seed", u.seed}, {"term", u.term}, {"fuel", u.fuel}, {"detail", u.detail}});
  json cov = json::object();
  for (const auto& r : RuleCoverage::rules()) cov[r] = coverage.counts.count(r) ? coverage.counts.at(r) : 0;
  return {{"schema", "slc.report/1"},
          {"suite", suite},
          {"seed", seed},
          {"cases", cases},
          {"passed", passed},
          {"failures", fs},
          {"unknowns", us},
          {"metrics", metrics},
          {"coverage", cov},
          {"wall_seconds", wall_seconds}};
}

}  // namespace slc
