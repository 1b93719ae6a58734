#ifndef SLC_REPORT_JSON_HPP
#define SLC_REPORT_JSON_HPP

#include "json.hpp"

#include "slc/denote_naive.hpp"
#include "slc/domains.hpp"
#include "slc/eval.hpp"
#include "slc/typecheck.hpp"

namespace slc {

// JSON renderings shared by the CLI, corpus reports and suite reports.
nlohmann::json to_json(const TypeError& e);
nlohmann::json to_json(const EvalTrace& t);
// {"status": "converged", "value": ..., "fuel": used} or "bottom_up_to_fuel".
nlohmann::json to_json(const RunResult& r, Fuel fuel);
nlohmann::json to_json(const BottomJudgment& j);
nlohmann::json to_json(const DegeneracyReport& r);

const char* to_string(EvalOutcome::Status s);

// Typechecks a closed term: {"ok": true, "type": ...} or {"ok": false, "error": ...}.
nlohmann::json check_json(Calculus calc, const Term& m);

}  // namespace slc

#endif
