#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "slc/denote_naive.hpp"
#include "slc/denote_standard.hpp"
#include "slc/report_json.hpp"
#include "slc/suites.hpp"
#include "slc/text.hpp"

using namespace slc;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kRejected = 1, kUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  bool json = false;
  Fuel fuel = 10000;
  std::string calculus;  // empty: pragma, else linear
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Calculus pick_calculus(const Globals& g, std::optional<Calculus> pragma) {
  if (!g.calculus.empty()) return *calculus_from_string(g.calculus);
  return pragma.value_or(Calculus::Linear);
}

struct Loaded {
  Calculus calc;
  Term term;
};

Loaded load(const Globals& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Program p = parse_program(ss.str());
  return {pick_calculus(g, p.calculus), p.term};
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

// Prints a rejection and returns false, or returns true with the type.
std::optional<Type> checked(const Globals& g, const Loaded& l) {
  try {
    return check_program(l.calc, l.term);
  } catch (const TypeError& e) {
    json j = {{"ok", false}, {"calculus", to_string(l.calc)}, {"error", to_json(e)}};
    emit(g, j, std::string("type error [") + to_string(e.kind()) + "] in " + e.rule() + ": " + e.details() +
                   "\n  at " + e.location());
    return std::nullopt;
  }
}

int cmd_check(const Globals& g, const std::string& file) {
  Loaded l = load(g, file);
  auto a = checked(g, l);
  if (!a) return kRejected;
  emit(g, {{"ok", true}, {"calculus", to_string(l.calc)}, {"type", to_string(*a)}}, to_string(*a));
  return kOk;
}

int cmd_run(const Globals& g, const std::string& file) {
  Loaded l = load(g, file);
  if (!checked(g, l)) return kRejected;
  EvalTrace t = eval_trace(l.term, g.fuel);
  json j = to_json(t);
  j["fuel"] = g.fuel;
  if (t.outcome.converged())
    emit(g, j, to_string(*t.outcome.value));
  else
    emit(g, j, "OUT_OF_FUEL");
  return kOk;
}

int cmd_denote(const Globals& g, const std::string& file, const std::string& backend, int probes,
               Fuel bottom_bound) {
  Loaded l = load(g, file);
  auto a = checked(g, l);
  if (!a) return kRejected;
  Comp c = backend == "naive" ? denote_naive(l.calc, {}, l.term, *a, bottom_bound, probes).fun({})
                              : denote(l.calc, {}, l.term, *a).fun({});
  RunResult r = c.run(g.fuel);
  json j = to_json(r, g.fuel);
  j["backend"] = backend;
  j["type"] = to_string(*a);
  emit(g, j, r.converged() ? render(*r.value) : "BOTTOM_UP_TO_FUEL(" + std::to_string(g.fuel) + ")");
  return kOk;
}

int cmd_demo(const Globals& g, Fuel bottom_bound) {
  DegeneracyReport r = degeneracy_report(bottom_bound, g.fuel);
  std::string text;
  for (const auto& f : r.facts()) text += f + "\n";
  text += r.demonstrates_degeneracy() ? "degeneracy demonstrated" : "degeneracy NOT demonstrated";
  emit(g, to_json(r), text);
  return r.demonstrates_degeneracy() ? kOk : kRejected;
}

int cmd_test(const Globals& g, const std::string& suite, SuiteConfig cfg) {
  cfg.gen.seed = g.seed;
  cfg.gen.fuel = g.fuel;
  if (!g.calculus.empty()) cfg.calculi = {*calculus_from_string(g.calculus)};
  TestReport rep = run_suite(suite, cfg);
  std::ostringstream text;
  text << suite << ": " << (rep.passed ? "PASS" : "FAIL") << ", " << rep.cases << " cases, "
       << rep.failures.size() << " failures, " << rep.metrics["unknown"] << " unknown, " << rep.wall_seconds
       << " s";
  for (const auto& f : rep.failures)
    text << "\n  case " << f.index << " seed " << f.seed << " [" << f.calculus << "] " << f.term << " : " << f.type
         << "\n    " << f.detail;
  emit(g, rep.to_json(), text.str());
  return rep.passed ? kOk : kRejected;
}

int cmd_gen(const Globals& g, GenConfig cfg, const std::string& type) {
  cfg.calculus = pick_calculus(g, std::nullopt);
  cfg.fuel = g.fuel;
  if (!type.empty()) cfg.target = parse_type(type);
  json out = json::array();
  std::ostringstream text;
  for (int i = 0; i < cfg.count; ++i) {
    GenConfig one = cfg;
    // A single term with an explicit seed replays a suite case.
    one.seed = cfg.count == 1 ? g.seed : case_seed(g.seed, static_cast<std::size_t>(i));
    Generated t = gen_typed_term(one);
    out.push_back({{"seed", one.seed}, {"term", to_string(t.term)}, {"type", to_string(t.type)}});
    text << (i ? "\n" : "") << to_string(t.type) << "\t" << to_string(t.term);
  }
  emit(g, out, text.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slc: linear and affine lambda calculi toolkit"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand; subcommands inherit this.
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for generation");
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--fuel", g.fuel, "Evaluation / denotation fuel");
  app.add_option("--calculus", g.calculus, "linear or affine (overrides the file pragma)")
      ->check(CLI::IsMember({"linear", "affine"}));

  std::string file;
  auto* check = app.add_subcommand("check", "Typecheck a program");
  check->add_option("FILE", file)->required();
  auto* run = app.add_subcommand("run", "Evaluate a closed well-typed program");
  run->add_option("FILE", file)->required();

  std::string backend = "standard";
  int probes = 8;
  Fuel bottom_bound = 1000000;
  auto* den = app.add_subcommand("denote", "Run the denotation of a program");
  den->add_option("FILE", file)->required();
  den->add_option("--backend", backend)->check(CLI::IsMember({"standard", "naive"}));
  den->add_option("--probes", probes, "Probe arguments per naive lambda");
  den->add_option("--bottom-bound", bottom_bound, "Naive bottom judgment bound");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Demonstrations");
  demo->add_option("NAME", demo_name)->required()->check(CLI::IsMember({"degeneracy"}));
  demo->add_option("--bottom-bound", bottom_bound, "Bound for bottom judgments");

  std::string suite;
  SuiteConfig scfg;
  auto* test = app.add_subcommand("test", "Run a property suite");
  test->add_option("SUITE", suite)->required()->check(CLI::IsMember(suite_names()));
  test->add_option("--count", scfg.gen.count, "Cases per calculus");
  test->add_option("--depth", scfg.gen.max_depth, "Maximum term depth");
  test->add_option("--probes", scfg.gen.probes, "Probe budget for sem_equal");
  test->add_option("--divergence-bound", scfg.gen.divergence_bound, "Adequacy bound");
  test->add_option("--bottom-bound", scfg.gen.bottom_bound, "Naive bottom judgment bound");
  test->add_option("--points", scfg.points_per_type, "Points per type (comonoid-laws)");
  test->add_option("--values", scfg.value_cases, "Generated values (naturality, coherence)");
  test->add_option("--threads", scfg.threads, "Worker threads, 0 = all cores");

  GenConfig gcfg;
  gcfg.count = 10;
  std::string gen_type;
  auto* gen = app.add_subcommand("gen", "Generate well-typed closed terms");
  gen->add_option("--count", gcfg.count, "Number of terms");
  gen->add_option("--depth", gcfg.max_depth, "Maximum depth");
  gen->add_option("--rec", gcfg.rec_probability, "Weight of rec");
  gen->add_option("--type", gen_type, "Result type");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(g, file);
    if (*run) return cmd_run(g, file);
    if (*den) return cmd_denote(g, file, backend, probes, bottom_bound);
    if (*demo) return cmd_demo(g, bottom_bound);
    if (*test) return cmd_test(g, suite, scfg);
    if (*gen) return cmd_gen(g, gcfg, gen_type);
  } catch (const UsageError& e) {
    std::cerr << "slc: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "slc: parse error: " << e.what() << "\n";
    return kRejected;
  }
  return kUsage;
}
