#include "slc/report_json.hpp"

#include "slc/text.hpp"

namespace slc {

using nlohmann::json;

const char* to_string(EvalOutcome::Status s) {
  switch (s) {
    case EvalOutcome::Status::Converged: return "converged";
    case EvalOutcome::Status::OutOfFuel: return "out_of_fuel";
    case EvalOutcome::Status::Stuck: return "stuck";
  }
  return "?";
}

json to_json(const TypeError& e) {
  return {{"kind", to_string(e.kind())}, {"rule", e.rule()}, {"location", e.location()}, {"details", e.details()}};
}

json to_json(const EvalTrace& t) {
  json j = {{"status", to_string(t.outcome.status)}, {"rules", t.rules}, {"max_depth", t.max_depth}};
  if (t.outcome.value) j["value"] = to_string(*t.outcome.value);
  return j;
}

json to_json(const RunResult& r, Fuel fuel) {
  if (r.converged()) return {{"status", "converged"}, {"value", render(*r.value)}, {"fuel", r.used}};
  return {{"status", "bottom_up_to_fuel"}, {"fuel", fuel}};
}

json to_json(const BottomJudgment& j) {
  return {{"verdict", j.bottom() ? "judged_bottom" : "not_bottom"}, {"fuel", j.fuel}};
}

json to_json(const DegeneracyReport& r) {
  json j = {{"bottom_bound", r.bottom_bound},
            {"fuel", r.fuel},
            {"t", r.t_source},
            {"p", r.p_source},
            {"t_affine_type_is_unit", r.t_affine_type_is_unit},
            {"t_rejected_linear", r.t_rejected_linear},
            {"t_linear_error", r.t_linear_error},
            {"t_eval_value", r.t_eval_value ? json(to_string(*r.t_eval_value)) : json(nullptr)},
            {"t_eval_rules", r.t_eval_rules},
            {"t_standard_value", r.t_standard_value ? json(render(*r.t_standard_value)) : json(nullptr)},
            {"t_standard_fuel", r.t_standard_fuel},
            {"t_naive", to_json(r.t_naive)},
            {"lambda_naive", to_json(r.lambda_naive)},
            {"p_eval_diverges", r.p_eval_diverges},
            {"p_standard", to_json(r.p_standard)},
            {"p_naive", to_json(r.p_naive)},
            {"demonstrates_degeneracy", r.demonstrates_degeneracy()},
            {"facts", r.facts()}};
  return j;
}

json check_json(Calculus calc, const Term& m) {
  try {
    return {{"ok", true}, {"type", to_string(check_program(calc, m))}};
  } catch (const TypeError& e) {
    return {{"ok", false}, {"error", to_json(e)}};
  }
}

}  // namespace slc
