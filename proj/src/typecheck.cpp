#include "slc/typecheck.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "slc/text.hpp"

namespace slc {

const char* to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::LinearVarDuplicated: return "LinearVarDuplicated";
    case TypeErrorKind::LinearVarDiscarded: return "LinearVarDiscarded";
    case TypeErrorKind::LinearVarInLift: return "LinearVarInLift";
    case TypeErrorKind::LinearVarInRec: return "LinearVarInRec";
    case TypeErrorKind::BranchUsageMismatch: return "BranchUsageMismatch";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::NotABang: return "NotABang";
    case TypeErrorKind::NotASum: return "NotASum";
    case TypeErrorKind::NotATensor: return "NotATensor";
  }
  return "?";
}

TypeError::TypeError(TypeErrorKind kind, std::string rule, std::string location,
                     std::string details)
    : std::runtime_error(std::string(to_string(kind)) + " [" + rule + "] at `" + location +
                         "`: " + details),
      kind_(kind),
      rule_(std::move(rule)),
      location_(std::move(location)),
      details_(std::move(details)) {}

namespace {

enum class Barrier { None, Lift, Rec };

struct Binding {
  Name name;
  Type type;
  int id;
  bool linear;
  Barrier blocked = Barrier::None;
};

struct Result {
  Type type;
  std::set<int> used;  // ids of linear bindings
  // Whether an extra (unused) linear variable in this term's context can be
  // discarded somewhere in its derivation. Only meaningful for the affine
  // calculus.
  bool absorbs;
};

class Checker {
 public:
  explicit Checker(Calculus calc) : calc_(calc) {}

  int bind(std::vector<Binding>& scope, const Name& x, const Type& t) {
    int id = next_id_++;
    scope.push_back({x, t, id, !is_nonlinear(t)});
    return id;
  }

  Result check(std::vector<Binding>& scope, const Term& m) {
    using namespace term;
    switch (m.kind()) {
      case Term::Kind::Var: {
        const Name& x = m.as<Var>().name;
        auto it = std::find_if(scope.rbegin(), scope.rend(),
                               [&](const Binding& b) { return b.name == x; });
        if (it == scope.rend())
          fail(TypeErrorKind::UnboundVariable, "var", m, "variable `" + x + "` is not in scope");
        if (it->blocked == Barrier::Lift)
          fail(TypeErrorKind::LinearVarInLift, "lift", m,
               "linear variable `" + x + "` : " + to_string(it->type) +
                   " used inside lift, whose body admits only non-linear variables");
        if (it->blocked == Barrier::Rec)
          fail(TypeErrorKind::LinearVarInRec, "rec", m,
               "linear variable `" + x + "` : " + to_string(it->type) +
                   " used inside rec, whose body admits only non-linear variables");
        Result r{it->type, {}, true};
        if (it->linear) r.used.insert(it->id);
        return r;
      }
      case Term::Kind::Star: return {Type::unit(), {}, true};
      case Term::Kind::Seq: {
        const auto& s = m.as<Seq>();
        Result a = check(scope, s.first);
        if (!a.type.is(Type::Kind::Unit))
          fail(TypeErrorKind::TypeMismatch, "seq", m,
               "left of `;` has type " + to_string(a.type) + ", expected I");
        Result b = check(scope, s.second);
        return {b.type, join(a.used, b.used, "seq", m), a.absorbs || b.absorbs};
      }
      case Term::Kind::Inl:
      case Term::Kind::Inr: {
        bool left = m.is(Term::Kind::Inl);
        const Type& ta = left ? m.as<Inl>().left : m.as<Inr>().left;
        const Type& tb = left ? m.as<Inl>().right : m.as<Inr>().right;
        const Term& body = left ? m.as<Inl>().body : m.as<Inr>().body;
        Result r = check(scope, body);
        const Type& want = left ? ta : tb;
        if (!(r.type == want))
          fail(TypeErrorKind::TypeMismatch, left ? "left" : "right", m,
               "injected term has type " + to_string(r.type) + ", annotation says " +
                   to_string(want));
        return {Type::sum(ta, tb), r.used, r.absorbs};
      }
      case Term::Kind::Case: {
        const auto& c = m.as<Case>();
        Result s = check(scope, c.scrutinee);
        if (!s.type.is(Type::Kind::Sum))
          fail(TypeErrorKind::NotASum, "case", m,
               "scrutinee has type " + to_string(s.type) + ", expected a sum");
        Result l = branch(scope, c.left_name, s.type.left(), c.left_branch, "case", m);
        Result r = branch(scope, c.right_name, s.type.right(), c.right_branch, "case", m);
        if (!(l.type == r.type))
          fail(TypeErrorKind::TypeMismatch, "case", m,
               "branches have types " + to_string(l.type) + " and " + to_string(r.type));
        std::set<int> branches;
        if (calc_ == Calculus::Linear) {
          if (l.used != r.used)
            fail(TypeErrorKind::BranchUsageMismatch, "case", m,
                 "branches consume different linear variables: " + names(sym_diff(l.used, r.used), scope));
          branches = l.used;
        } else {
          for (int id : l.used)
            if (!r.used.count(id) && !r.absorbs)
              fail(TypeErrorKind::BranchUsageMismatch, "case", m,
                   "linear variable " + names({id}, scope) +
                       " is used in the left branch and cannot be discarded in the right branch");
          for (int id : r.used)
            if (!l.used.count(id) && !l.absorbs)
              fail(TypeErrorKind::BranchUsageMismatch, "case", m,
                   "linear variable " + names({id}, scope) +
                       " is used in the right branch and cannot be discarded in the left branch");
          branches = l.used;
          branches.insert(r.used.begin(), r.used.end());
        }
        return {l.type, join(s.used, branches, "case", m), s.absorbs || (l.absorbs && r.absorbs)};
      }
      case Term::Kind::Pair: {
        const auto& p = m.as<Pair>();
        Result a = check(scope, p.first);
        Result b = check(scope, p.second);
        return {Type::tensor(a.type, b.type), join(a.used, b.used, "pair", m),
                a.absorbs || b.absorbs};
      }
      case Term::Kind::LetPair: {
        const auto& l = m.as<LetPair>();
        Result a = check(scope, l.bound);
        if (!a.type.is(Type::Kind::Tensor))
          fail(TypeErrorKind::NotATensor, "let-pair", m,
               "bound term has type " + to_string(a.type) + ", expected a tensor");
        if (l.first_name == l.second_name)
          fail(TypeErrorKind::TypeMismatch, "let-pair", m,
               "pattern binds `" + l.first_name + "` twice");
        std::size_t mark = scope.size();
        int ix = bind(scope, l.first_name, a.type.left());
        int iy = bind(scope, l.second_name, a.type.right());
        Result b = check(scope, l.body);
        bool lx = scope[mark].linear, ly = scope[mark + 1].linear;
        std::string nx = l.first_name, ny = l.second_name;
        scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(mark), scope.end());
        settle_binder(ix, lx, nx, b, "let-pair", m);
        settle_binder(iy, ly, ny, b, "let-pair", m);
        return {b.type, join(a.used, b.used, "let-pair", m), a.absorbs || b.absorbs};
      }
      case Term::Kind::Lam: {
        const auto& l = m.as<Lam>();
        Result b = branch(scope, l.param, l.param_type, l.body, "lambda", m);
        return {Type::lolli(l.param_type, b.type), b.used, b.absorbs};
      }
      case Term::Kind::App: {
        const auto& a = m.as<App>();
        Result f = check(scope, a.fn);
        if (!f.type.is(Type::Kind::Lolli))
          fail(TypeErrorKind::NotAFunction, "application", m,
               "applied term has type " + to_string(f.type) + ", expected a function");
        Result x = check(scope, a.arg);
        if (!(x.type == f.type.arg()))
          fail(TypeErrorKind::TypeMismatch, "application", m,
               "argument has type " + to_string(x.type) + ", function expects " +
                   to_string(f.type.arg()));
        return {f.type.result(), join(f.used, x.used, "application", m), f.absorbs || x.absorbs};
      }
      case Term::Kind::Lift: {
        std::vector<Binding> inner = blocked(scope, Barrier::Lift);
        Result b = check(inner, m.as<Lift>().body);
        return {Type::bang(b.type), {}, true};
      }
      case Term::Kind::Force: {
        Result b = check(scope, m.as<Force>().body);
        if (!b.type.is(Type::Kind::Bang))
          fail(TypeErrorKind::NotABang, "force", m,
               "forced term has type " + to_string(b.type) + ", expected !A");
        return {b.type.body(), b.used, b.absorbs};
      }
      case Term::Kind::Rec: {
        const auto& r = m.as<Rec>();
        std::vector<Binding> inner = blocked(scope, Barrier::Rec);
        bind(inner, r.self, r.self_type);
        Result b = check(inner, r.body);
        const Type& want = r.self_type.body();
        if (!(b.type == want))
          fail(TypeErrorKind::TypeMismatch, "rec", m,
               "body has type " + to_string(b.type) + ", expected " + to_string(want));
        return {want, {}, false};
      }
    }
    throw ContractViolation("typecheck: unknown term kind");
  }

  // Rejects an unused linear variable in `r`'s context unless the calculus
  // and the derivation of `r` allow it to be discarded.
  void settle_binder(int id, bool linear, const Name& x, Result& r, const char* rule,
                     const Term& at) {
    if (!linear) return;
    if (r.used.erase(id)) return;
    if (calc_ == Calculus::Linear)
      fail(TypeErrorKind::LinearVarDiscarded, rule, at,
           "linear variable `" + x + "` is never used");
    if (!r.absorbs)
      fail(TypeErrorKind::LinearVarDiscarded, rule, at,
           "linear variable `" + x +
               "` is never used and its scope has no var, star or lift to discard it in");
  }

  Calculus calculus() const { return calc_; }

 private:
  Result branch(std::vector<Binding>& scope, const Name& x, const Type& t, const Term& body,
                const char* rule, const Term& at) {
    std::size_t mark = scope.size();
    int id = bind(scope, x, t);
    bool linear = scope.back().linear;
    Result r = check(scope, body);
    scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(mark), scope.end());
    settle_binder(id, linear, x, r, rule, at);
    return r;
  }

  static std::vector<Binding> blocked(const std::vector<Binding>& scope, Barrier why) {
    std::vector<Binding> out = scope;
    for (Binding& b : out)
      if (b.linear && b.blocked == Barrier::None) b.blocked = why;
    return out;
  }

  std::set<int> join(const std::set<int>& a, const std::set<int>& b, const char* rule,
                     const Term& at) const {
    std::set<int> out = a;
    for (int id : b)
      if (!out.insert(id).second)
        fail(TypeErrorKind::LinearVarDuplicated, rule, at,
             "linear variable used in more than one premise (id " + std::to_string(id) + ")");
    return out;
  }

  static std::set<int> sym_diff(const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    for (int x : a)
      if (!b.count(x)) out.insert(x);
    for (int x : b)
      if (!a.count(x)) out.insert(x);
    return out;
  }

  std::string names(const std::set<int>& ids, const std::vector<Binding>& scope) const {
    std::string out;
    for (int id : ids) {
      std::string n = "#" + std::to_string(id);
      for (const Binding& b : scope)
        if (b.id == id) n = "`" + b.name + "`";
      if (!out.empty()) out += ", ";
      out += n;
    }
    return out;
  }

  [[noreturn]] static void fail(TypeErrorKind k, const char* rule, const Term& at,
                                std::string details) {
    std::string loc = to_string(at);
    if (loc.size() > 120) loc = loc.substr(0, 117) + "...";
    throw TypeError(k, rule, std::move(loc), std::move(details));
  }

  Calculus calc_;
  int next_id_ = 0;
};

}  // namespace

Typing typecheck(Calculus calc, const Context& ctx, const Term& m) {
  Checker checker(calc);
  std::vector<Binding> scope;
  std::vector<int> ids;
  for (const auto& [x, t] : ctx.entries()) ids.push_back(checker.bind(scope, x, t));
  std::vector<Binding> top = scope;
  Result r = checker.check(scope, m);
  Typing out{r.type, {}};
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!top[i].linear) continue;
    if (r.used.count(top[i].id)) {
      out.usage.consumed.insert(top[i].name);
      continue;
    }
    if (calc == Calculus::Linear)
      throw TypeError(TypeErrorKind::LinearVarDiscarded, "var", to_string(m),
                      "linear context variable `" + top[i].name + "` is never used");
    if (!r.absorbs)
      throw TypeError(TypeErrorKind::LinearVarDiscarded, "rec", to_string(m),
                      "linear context variable `" + top[i].name +
                          "` is never used and the term has no var, star or lift to discard "
                          "it in");
  }
  return out;
}

Type check_program(Calculus calc, const Term& m) {
  return typecheck(calc, Context{}, m).type;
}

namespace {

Type synth(std::vector<std::pair<Name, Type>>& scope, const Term& m) {
  using namespace term;
  auto mismatch = [&](TypeErrorKind k, const std::string& what) -> Type {
    throw TypeError(k, "synthesize", to_string(m), what);
  };
  auto under = [&](std::vector<std::pair<Name, Type>> binds, const Term& body) {
    std::size_t mark = scope.size();
    for (auto& b : binds) scope.push_back(std::move(b));
    Type t = synth(scope, body);
    scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(mark), scope.end());
    return t;
  };
  switch (m.kind()) {
    case Term::Kind::Var: {
      const Name& x = m.as<Var>().name;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == x) return it->second;
      return mismatch(TypeErrorKind::UnboundVariable, "unbound " + x);
    }
    case Term::Kind::Star: return Type::unit();
    case Term::Kind::Seq: {
      if (!synth(scope, m.as<Seq>().first).is(Type::Kind::Unit))
        return mismatch(TypeErrorKind::TypeMismatch, "seq on non-unit");
      return synth(scope, m.as<Seq>().second);
    }
    case Term::Kind::Inl: {
      const auto& s = m.as<Inl>();
      if (!(synth(scope, s.body) == s.left)) return mismatch(TypeErrorKind::TypeMismatch, "left");
      return Type::sum(s.left, s.right);
    }
    case Term::Kind::Inr: {
      const auto& s = m.as<Inr>();
      if (!(synth(scope, s.body) == s.right)) return mismatch(TypeErrorKind::TypeMismatch, "right");
      return Type::sum(s.left, s.right);
    }
    case Term::Kind::Case: {
      const auto& c = m.as<Case>();
      Type s = synth(scope, c.scrutinee);
      if (!s.is(Type::Kind::Sum)) return mismatch(TypeErrorKind::NotASum, "case");
      Type l = under({{c.left_name, s.left()}}, c.left_branch);
      Type r = under({{c.right_name, s.right()}}, c.right_branch);
      if (!(l == r)) return mismatch(TypeErrorKind::TypeMismatch, "case branches");
      return l;
    }
    case Term::Kind::Pair:
      return Type::tensor(synth(scope, m.as<Pair>().first), synth(scope, m.as<Pair>().second));
    case Term::Kind::LetPair: {
      const auto& l = m.as<LetPair>();
      Type t = synth(scope, l.bound);
      if (!t.is(Type::Kind::Tensor)) return mismatch(TypeErrorKind::NotATensor, "let-pair");
      return under({{l.first_name, t.left()}, {l.second_name, t.right()}}, l.body);
    }
    case Term::Kind::Lam: {
      const auto& l = m.as<Lam>();
      return Type::lolli(l.param_type, under({{l.param, l.param_type}}, l.body));
    }
    case Term::Kind::App: {
      Type f = synth(scope, m.as<App>().fn);
      if (!f.is(Type::Kind::Lolli)) return mismatch(TypeErrorKind::NotAFunction, "application");
      if (!(synth(scope, m.as<App>().arg) == f.arg()))
        return mismatch(TypeErrorKind::TypeMismatch, "argument");
      return f.result();
    }
    case Term::Kind::Lift: return Type::bang(synth(scope, m.as<Lift>().body));
    case Term::Kind::Force: {
      Type t = synth(scope, m.as<Force>().body);
      if (!t.is(Type::Kind::Bang)) return mismatch(TypeErrorKind::NotABang, "force");
      return t.body();
    }
    case Term::Kind::Rec: {
      const auto& r = m.as<Rec>();
      Type b = under({{r.self, r.self_type}}, r.body);
      if (!(b == r.self_type.body())) return mismatch(TypeErrorKind::TypeMismatch, "rec");
      return b;
    }
  }
  throw ContractViolation("synthesize: unknown term kind");
}

}  // namespace

Type synthesize(const Context& ctx, const Term& m) {
  std::vector<std::pair<Name, Type>> scope(ctx.entries().begin(), ctx.entries().end());
  return synth(scope, m);
}

}  // namespace slc
