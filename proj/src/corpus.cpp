#include "slc/corpus.hpp"

#include "slc/denote_naive.hpp"
#include "slc/denote_standard.hpp"
#include "slc/report_json.hpp"
#include "slc/text.hpp"

namespace slc {

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"p", "rec z:!I. force z", Calculus::Linear, "I", true, false, std::nullopt,
       "the simplest non-terminating program"},
      {"t", "(\\y:(I -o I). *) (\\x:I. rec z:!I. force z)", Calculus::Affine, "I", false, true, "*",
       "discards a function whose body diverges"},
      {"discard_argument", "(\\f:(I -o I). \\b:(I + I). b) (\\x:I. x) (right[I,I] *)", Calculus::Affine, "I + I",
       false, true, "right[I,I] *", "drops a linear argument without using it"},
      {"share_thunk", "(\\b:!(I + I). <force b, force b>) lift right[I,I] *", Calculus::Linear,
       "(I + I) * (I + I)", false, false, "<right[I,I] *, right[I,I] *>", "uses a banged variable twice"},
      {"swap_and_branch", "let <a,b> = <left[I,I] *, right[I,I] *> in case a of {left u -> u; b | right w -> w; b}",
       Calculus::Linear, "I + I", false, false, "right[I,I] *", "pairs, unpairs and branches"},
      {"countdown",
       "(rec z:!(I + I -o I + I). \\n:(I + I). case n of {left a -> right[I,I] a | right b -> b; force z "
       "(left[I,I] *)}) (right[I,I] *)",
       Calculus::Linear, "I + I", false, false, "right[I,I] *", "recursion that stops after one unfolding"},
      {"unit_countdown",
       "(rec z:!(I + I -o I). \\n:(I + I). case n of {left a -> a | right b -> b; force z (left[I,I] *)}) "
       "(right[I,I] *)",
       Calculus::Linear, "I", false, false, "*", "the same loop at unit type"},
  };
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw ContractViolation("no corpus entry named " + name);
}

std::string corpus_file_text(const CorpusEntry& e) {
  std::string out = "# " + e.name + ": " + e.about + "\n";
  out += "# type: " + e.type + "\n";
  if (e.diverges) out += "# diverges\n";
  if (e.evaluates_to) out += "# evaluates to: " + *e.evaluates_to + "\n";
  out += std::string("calculus ") + to_string(e.calculus) + "\n";
  out += e.source + "\n";
  return out;
}

nlohmann::json corpus_report(const CorpusEntry& e, Fuel fuel, Fuel bottom_bound) {
  using nlohmann::json;
  Term m = parse_term(e.source);
  json j = {{"schema", "slc.corpus/1"},
            {"name", e.name},
            {"calculus", to_string(e.calculus)},
            {"term", to_string(m)},
            {"fuel", fuel},
            {"bottom_bound", bottom_bound},
            {"check", {{"linear", check_json(Calculus::Linear, m)}, {"affine", check_json(Calculus::Affine, m)}}},
            {"eval", to_json(eval_trace(m, fuel))}};
  Type a = check_program(e.calculus, m);
  j["standard"] = to_json(denote(e.calculus, {}, m, a).fun({}).run(fuel), fuel);
  j["naive"] = to_json(denote_naive(e.calculus, {}, m, a, bottom_bound).fun({}).run(fuel), fuel);
  return j;
}

}  // namespace slc
