#ifndef SLC_DENOTE_NAIVE_HPP
#define SLC_DENOTE_NAIVE_HPP

#include <string>
#include <vector>

#include "slc/denote_standard.hpp"

namespace slc {

// Result of running a computation up to a bound. NotBottom is exact;
// JudgedBottom only says nothing converged within `fuel`.
struct BottomJudgment {
  enum class Verdict { JudgedBottom, NotBottom };
  Verdict verdict;
  Fuel fuel;  // the bound for JudgedBottom, the fuel used for NotBottom

  bool bottom() const { return verdict == Verdict::JudgedBottom; }
};

BottomJudgment judge_bottom(const Comp& c, Fuel bound);

// Same shape as Denotation, but function types are interpreted as the strict
// function space of the computation category.
struct StrictDenotation {
  Context ctx;
  Type type;
  std::function<Comp(const SemEnv&)> fun;
};

// Interpretation with lambdas curried in the computation category. A lambda
// body is probed with up to `probes` generated arguments, each run up to
// `bottom_bound`; if all are judged bottom the lambda itself denotes bottom
// (curry of bottom is bottom). Everything else is strict as in `denote`, so
// pairing or applying with a bottom component is bottom.
StrictDenotation denote_naive(Calculus calc, const Context& ctx, const Term& m, const Type& a,
                              Fuel bottom_bound, int probes = 4);

struct DegeneracyReport {
  Fuel bottom_bound = 0;
  Fuel fuel = 0;
  std::string t_source, p_source;

  bool t_affine_type_is_unit = false;
  bool t_rejected_linear = false;
  std::string t_linear_error;
  std::optional<Term> t_eval_value;
  Fuel t_eval_rules = 0;
  std::optional<SemVal> t_standard_value;
  Fuel t_standard_fuel = 0;
  BottomJudgment t_naive{BottomJudgment::Verdict::NotBottom, 0};
  BottomJudgment lambda_naive{BottomJudgment::Verdict::NotBottom, 0};  // \x:I. p

  bool p_eval_diverges = false;
  BottomJudgment p_standard{BottomJudgment::Verdict::NotBottom, 0};
  BottomJudgment p_naive{BottomJudgment::Verdict::NotBottom, 0};

  // The standard backend is sound on t and the naive one is not.
  bool demonstrates_degeneracy() const;
  std::vector<std::string> facts() const;
};

// Builds p = rec z:!I. force z and t = (\y:(I -o I). *) (\x:I. p) and collects
// the typing, evaluation and both denotations of t and p.
DegeneracyReport degeneracy_report(Fuel bottom_bound, Fuel fuel);

}  // namespace slc

#endif
