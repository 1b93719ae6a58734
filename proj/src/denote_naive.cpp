#include "slc/denote_naive.hpp"

#include "interpret.hpp"
#include "slc/text.hpp"
#include "slc/typecheck.hpp"

namespace slc {

BottomJudgment judge_bottom(const Comp& c, Fuel bound) {
  RunResult r = c.run(bound);
  if (r.converged()) return {BottomJudgment::Verdict::NotBottom, r.used};
  return {BottomJudgment::Verdict::JudgedBottom, bound};
}

StrictDenotation denote_naive(Calculus calc, const Context& ctx, const Term& m, const Type& a,
                              Fuel bottom_bound, int probes) {
  try {
    Type got = typecheck(calc, ctx, m).type;
    if (!(got == a))
      throw ContractViolation("term has type " + to_string(got) + ", not " + to_string(a));
  } catch (const TypeError& e) {
    throw ContractViolation(std::string("denotation of an ill-typed term: ") + e.what());
  }
  detail::Interpreter in(calc, detail::NaiveLambdas{bottom_bound, probes});
  return StrictDenotation{ctx, a, in.close(ctx, in.term(detail::scope_of(ctx), m))};
}

bool DegeneracyReport::demonstrates_degeneracy() const {
  return t_affine_type_is_unit && t_rejected_linear && t_eval_value &&
         *t_eval_value == Term::star() && t_standard_value &&
         t_standard_value->is(SemVal::Kind::Unit) && t_naive.bottom();
}

std::vector<std::string> DegeneracyReport::facts() const {
  auto judged = [](const BottomJudgment& j) {
    return j.bottom() ? "judged bottom at bound " + std::to_string(j.fuel)
                      : "converged using fuel " + std::to_string(j.fuel);
  };
  std::vector<std::string> out;
  out.push_back("t = " + t_source);
  out.push_back(std::string("affine typecheck of t: ") + (t_affine_type_is_unit ? "I" : "not I"));
  out.push_back("linear typecheck of t: " +
                (t_rejected_linear ? "rejected (" + t_linear_error + ")" : std::string("accepted")));
  out.push_back("eval of t: " + (t_eval_value ? to_string(*t_eval_value) + " in " +
                                                    std::to_string(t_eval_rules) + " rules"
                                              : std::string("no value")));
  out.push_back("standard denotation of t: " +
                (t_standard_value ? render(*t_standard_value) + " using fuel " +
                                        std::to_string(t_standard_fuel)
                                  : "no value within fuel " + std::to_string(fuel)));
  out.push_back("naive denotation of \\x:I. p: " + judged(lambda_naive));
  out.push_back("naive denotation of t: " + judged(t_naive));
  out.push_back("p = " + p_source);
  out.push_back(std::string("eval of p: ") +
                (p_eval_diverges ? "out of fuel at " + std::to_string(bottom_bound) : "converged"));
  out.push_back("standard denotation of p: " + judged(p_standard));
  out.push_back("naive denotation of p: " + judged(p_naive));
  return out;
}

DegeneracyReport degeneracy_report(Fuel bottom_bound, Fuel fuel) {
  DegeneracyReport r;
  r.bottom_bound = bottom_bound;
  r.fuel = fuel;
  r.p_source = "rec z:!I. force z";
  r.t_source = "(\\y:(I -o I). *) (\\x:I. " + r.p_source + ")";
  const Term p = parse_term(r.p_source);
  const Term t = parse_term(r.t_source);
  const Term lam = parse_term("\\x:I. " + r.p_source);
  const Type I = Type::unit();

  r.t_affine_type_is_unit = check_program(Calculus::Affine, t) == I;
  try {
    check_program(Calculus::Linear, t);
  } catch (const TypeError& e) {
    r.t_rejected_linear = true;
    r.t_linear_error = to_string(e.kind());
  }

  EvalTrace et = eval_trace(t, fuel);
  r.t_eval_value = et.outcome.value;
  r.t_eval_rules = et.rules;

  RunResult st = denote(Calculus::Affine, {}, t, I).fun({}).run(fuel);
  r.t_standard_value = st.value;
  r.t_standard_fuel = st.used;

  // The naive lambda sweep uses the same bound as the final judgment.
  r.lambda_naive = judge_bottom(
      denote_naive(Calculus::Affine, {}, lam, Type::lolli(I, I), bottom_bound).fun({}), bottom_bound);
  r.t_naive = judge_bottom(denote_naive(Calculus::Affine, {}, t, I, bottom_bound).fun({}), bottom_bound);

  r.p_eval_diverges = eval(p, bottom_bound).status == EvalOutcome::Status::OutOfFuel;
  r.p_standard = judge_bottom(denote(Calculus::Affine, {}, p, I).fun({}), bottom_bound);
  r.p_naive = judge_bottom(denote_naive(Calculus::Affine, {}, p, I, bottom_bound).fun({}), bottom_bound);
  return r;
}

}  // namespace slc
