#ifndef SLC_CORPUS_HPP
#define SLC_CORPUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "slc/eval.hpp"
#include "slc/syntax.hpp"

namespace slc {

struct CorpusEntry {
  std::string name;  // also the file stem under corpus/
  std::string source;
  Calculus calculus;  // the calculus it is declared in
  std::string type;   // expected type, printed
  bool diverges = false;
  bool affine_only = false;  // rejected by the linear checker
  std::optional<std::string> evaluates_to;  // printed value, if it converges
  std::string about;
};

// Fixed named programs: the two standard witnesses (a divergent program and
// the affine discarder of a divergent function) plus small exercisers.
const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(const std::string& name);

// File contents for an entry: comment header, calculus pragma, term.
std::string corpus_file_text(const CorpusEntry& e);

// Deterministic summary of an entry under both checkers, the evaluator and
// both denotational backends. Checked in as golden JSON.
nlohmann::json corpus_report(const CorpusEntry& e, Fuel fuel, Fuel bottom_bound);

}  // namespace slc

#endif
