#include "slc/eval.hpp"

#include <algorithm>
#include <type_traits>
#include <variant>
#include <vector>

namespace slc {

namespace {

// Continuation frames of the evaluation machine. Each frame remembers the
// derivation depth of the rule instance that pushed it.
struct SeqK { Term second; };
struct InjK { bool left; Type a, b; };
struct CaseK { Name x; Term n; Name y; Term p; };
struct PairLeftK { Term second; };
struct PairRightK { Term first_value; };
struct LetK { Name x, y; Term body; };
struct AppFnK { Term arg; };
struct AppArgK { Name param; Term body; };
struct ForceK {};

using FrameKind = std::variant<SeqK, InjK, CaseK, PairLeftK, PairRightK, LetK, AppFnK, AppArgK, ForceK>;

struct Frame {
  FrameKind kind;
  std::size_t depth;
};

class Machine {
 public:
  explicit Machine(Fuel fuel) : fuel_(fuel) {}

  EvalTrace run(const Term& start) {
    using namespace term;
    std::optional<Term> focus = start;  // term to evaluate next
    std::size_t focus_depth = 1;
    std::optional<Term> result;         // value being returned to the top frame

    for (;;) {
      if (focus) {
        if (trace_.rules == fuel_) return finish(EvalOutcome::Status::OutOfFuel);
        ++trace_.rules;
        trace_.max_depth = std::max(trace_.max_depth, focus_depth);
        Term m = *focus;
        focus.reset();
        std::size_t d = focus_depth;
        switch (m.kind()) {
          case Term::Kind::Var:
          case Term::Kind::Star:
          case Term::Kind::Lam:
          case Term::Kind::Lift:
            result = m;
            break;
          case Term::Kind::Seq:
            push(SeqK{m.as<Seq>().second}, d);
            focus = m.as<Seq>().first;
            break;
          case Term::Kind::Inl:
            push(InjK{true, m.as<Inl>().left, m.as<Inl>().right}, d);
            focus = m.as<Inl>().body;
            break;
          case Term::Kind::Inr:
            push(InjK{false, m.as<Inr>().left, m.as<Inr>().right}, d);
            focus = m.as<Inr>().body;
            break;
          case Term::Kind::Case: {
            const auto& c = m.as<Case>();
            push(CaseK{c.left_name, c.left_branch, c.right_name, c.right_branch}, d);
            focus = c.scrutinee;
            break;
          }
          case Term::Kind::Pair:
            push(PairLeftK{m.as<Pair>().second}, d);
            focus = m.as<Pair>().first;
            break;
          case Term::Kind::LetPair: {
            const auto& l = m.as<LetPair>();
            push(LetK{l.first_name, l.second_name, l.body}, d);
            focus = l.bound;
            break;
          }
          case Term::Kind::App:
            push(AppFnK{m.as<App>().arg}, d);
            focus = m.as<App>().fn;
            break;
          case Term::Kind::Force:
            push(ForceK{}, d);
            focus = m.as<Force>().body;
            break;
          case Term::Kind::Rec: {
            const auto& r = m.as<Rec>();
            focus = subst(r.body, Term::lift(m), r.self);
            break;
          }
        }
        if (focus) focus_depth = d + 1;
        continue;
      }

      // Return `result` to the innermost frame.
      if (stack_.empty()) {
        trace_.outcome = {EvalOutcome::Status::Converged, std::move(result)};
        return trace_;
      }
      Frame frame = std::move(stack_.back());
      stack_.pop_back();
      Term v = std::move(*result);
      result.reset();
      std::size_t next_depth = frame.depth + 1;
      bool ok = std::visit(
          [&](auto& k) -> bool {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SeqK>) {
              if (!v.is(Term::Kind::Star)) return false;
              focus = k.second;
            } else if constexpr (std::is_same_v<K, InjK>) {
              result = k.left ? Term::inl(k.a, k.b, v) : Term::inr(k.a, k.b, v);
            } else if constexpr (std::is_same_v<K, CaseK>) {
              if (v.is(Term::Kind::Inl))
                focus = subst(k.n, v.as<Inl>().body, k.x);
              else if (v.is(Term::Kind::Inr))
                focus = subst(k.p, v.as<Inr>().body, k.y);
              else
                return false;
            } else if constexpr (std::is_same_v<K, PairLeftK>) {
              push(PairRightK{v}, frame.depth);
              focus = k.second;
            } else if constexpr (std::is_same_v<K, PairRightK>) {
              result = Term::pair(k.first_value, v);
            } else if constexpr (std::is_same_v<K, LetK>) {
              if (!v.is(Term::Kind::Pair)) return false;
              focus = subst(k.body, {{k.x, v.as<Pair>().first}, {k.y, v.as<Pair>().second}});
            } else if constexpr (std::is_same_v<K, AppFnK>) {
              if (!v.is(Term::Kind::Lam)) return false;
              push(AppArgK{v.as<Lam>().param, v.as<Lam>().body}, frame.depth);
              focus = k.arg;
            } else if constexpr (std::is_same_v<K, AppArgK>) {
              focus = subst(k.body, v, k.param);
            } else if constexpr (std::is_same_v<K, ForceK>) {
              if (!v.is(Term::Kind::Lift)) return false;
              focus = v.as<Lift>().body;
            }
            return true;
          },
          frame.kind);
      if (!ok) return finish(EvalOutcome::Status::Stuck);
      if (focus) focus_depth = next_depth;
    }
  }

 private:
  void push(FrameKind k, std::size_t depth) { stack_.push_back(Frame{std::move(k), depth}); }

  EvalTrace finish(EvalOutcome::Status s) {
    trace_.outcome = {s, std::nullopt};
    return trace_;
  }

  Fuel fuel_;
  EvalTrace trace_{{EvalOutcome::Status::Stuck, std::nullopt}};
  std::vector<Frame> stack_;
};

}  // namespace

EvalTrace eval_trace(const Term& m, Fuel fuel) { return Machine(fuel).run(m); }

EvalOutcome eval(const Term& m, Fuel fuel) { return eval_trace(m, fuel).outcome; }

Fuel value_size(const Term& v) {
  using namespace term;
  switch (v.kind()) {
    case Term::Kind::Inl: return 1 + value_size(v.as<Inl>().body);
    case Term::Kind::Inr: return 1 + value_size(v.as<Inr>().body);
    case Term::Kind::Pair: return 1 + value_size(v.as<Pair>().first) + value_size(v.as<Pair>().second);
    default: return 1;
  }
}

}  // namespace slc
