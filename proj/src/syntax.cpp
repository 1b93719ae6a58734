#include "slc/syntax.hpp"

#include <algorithm>
#include <cctype>

#include "overloaded.hpp"

namespace slc {

// ---------------------------------------------------------------- types

struct Type::Node {
  Kind kind;
  std::optional<Type> a;
  std::optional<Type> b;
};

Type Type::unit() {
  static const Type u{std::make_shared<const Node>(Node{Kind::Unit, std::nullopt, std::nullopt})};
  return u;
}
Type Type::sum(Type left, Type right) {
  return Type{std::make_shared<const Node>(Node{Kind::Sum, std::move(left), std::move(right)})};
}
Type Type::tensor(Type left, Type right) {
  return Type{std::make_shared<const Node>(Node{Kind::Tensor, std::move(left), std::move(right)})};
}
Type Type::lolli(Type arg, Type result) {
  return Type{std::make_shared<const Node>(Node{Kind::Lolli, std::move(arg), std::move(result)})};
}
Type Type::bang(Type body) {
  return Type{std::make_shared<const Node>(Node{Kind::Bang, std::move(body), std::nullopt})};
}

Type::Kind Type::kind() const { return node_->kind; }

const Type& Type::left() const {
  if (kind() != Kind::Sum && kind() != Kind::Tensor && kind() != Kind::Lolli)
    throw ContractViolation("Type::left on a type without two components");
  return *node_->a;
}
const Type& Type::right() const {
  if (kind() != Kind::Sum && kind() != Kind::Tensor && kind() != Kind::Lolli)
    throw ContractViolation("Type::right on a type without two components");
  return *node_->b;
}
const Type& Type::body() const {
  if (kind() != Kind::Bang) throw ContractViolation("Type::body on a non-bang type");
  return *node_->a;
}

std::size_t Type::depth() const {
  switch (kind()) {
    case Kind::Unit: return 1;
    case Kind::Bang: return 1 + body().depth();
    default: return 1 + std::max(left().depth(), right().depth());
  }
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Bang: return a.body() == b.body();
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Type::Kind::Unit: return std::strong_ordering::equal;
    case Type::Kind::Bang: return a.body() <=> b.body();
    default:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
  }
}

bool is_nonlinear(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Bang: return true;
    case Type::Kind::Lolli: return false;
    case Type::Kind::Sum:
    case Type::Kind::Tensor: return is_nonlinear(t.left()) && is_nonlinear(t.right());
  }
  return false;
}

// ---------------------------------------------------------------- terms

Term Term::var(Name x) { return Term{std::make_shared<const Node>(Node{term::Var{std::move(x)}})}; }
Term Term::star() {
  static const Term s{std::make_shared<const Node>(Node{term::Star{}})};
  return s;
}
Term Term::seq(Term m, Term n) {
  return Term{std::make_shared<const Node>(Node{term::Seq{std::move(m), std::move(n)}})};
}
Term Term::inl(Type a, Type b, Term m) {
  return Term{std::make_shared<const Node>(Node{term::Inl{std::move(a), std::move(b), std::move(m)}})};
}
Term Term::inr(Type a, Type b, Term m) {
  return Term{std::make_shared<const Node>(Node{term::Inr{std::move(a), std::move(b), std::move(m)}})};
}
Term Term::case_of(Term scrutinee, Name x, Term n, Name y, Term p) {
  return Term{std::make_shared<const Node>(Node{term::Case{
      std::move(scrutinee), std::move(x), std::move(n), std::move(y), std::move(p)}})};
}
Term Term::pair(Term m, Term n) {
  return Term{std::make_shared<const Node>(Node{term::Pair{std::move(m), std::move(n)}})};
}
Term Term::let_pair(Name x, Name y, Term m, Term n) {
  return Term{std::make_shared<const Node>(
      Node{term::LetPair{std::move(x), std::move(y), std::move(m), std::move(n)}})};
}
Term Term::lam(Name x, Type arg, Term body) {
  return Term{std::make_shared<const Node>(Node{term::Lam{std::move(x), std::move(arg), std::move(body)}})};
}
Term Term::app(Term m, Term n) {
  return Term{std::make_shared<const Node>(Node{term::App{std::move(m), std::move(n)}})};
}
Term Term::lift(Term m) { return Term{std::make_shared<const Node>(Node{term::Lift{std::move(m)}})}; }
Term Term::force(Term m) { return Term{std::make_shared<const Node>(Node{term::Force{std::move(m)}})}; }
Term Term::rec(Name z, Type bang_type, Term body) {
  if (!bang_type.is(Type::Kind::Bang))
    throw ContractViolation("rec annotation must be a bang type");
  return Term{std::make_shared<const Node>(Node{term::Rec{std::move(z), std::move(bang_type), std::move(body)}})};
}

Term::Kind Term::kind() const { return static_cast<Kind>(node_->v.index()); }

namespace {

using detail::Overloaded;

// Children of a node, in left-to-right order.
std::vector<const Term*> children(const Term& m) {
  using namespace term;
  return m.visit(Overloaded{
      [](const Var&) { return std::vector<const Term*>{}; },
      [](const Star&) { return std::vector<const Term*>{}; },
      [](const Seq& s) { return std::vector<const Term*>{&s.first, &s.second}; },
      [](const Inl& s) { return std::vector<const Term*>{&s.body}; },
      [](const Inr& s) { return std::vector<const Term*>{&s.body}; },
      [](const Case& s) {
        return std::vector<const Term*>{&s.scrutinee, &s.left_branch, &s.right_branch};
      },
      [](const Pair& s) { return std::vector<const Term*>{&s.first, &s.second}; },
      [](const LetPair& s) { return std::vector<const Term*>{&s.bound, &s.body}; },
      [](const Lam& s) { return std::vector<const Term*>{&s.body}; },
      [](const App& s) { return std::vector<const Term*>{&s.fn, &s.arg}; },
      [](const Lift& s) { return std::vector<const Term*>{&s.body}; },
      [](const Force& s) { return std::vector<const Term*>{&s.body}; },
      [](const Rec& s) { return std::vector<const Term*>{&s.body}; },
  });
}

}  // namespace

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const Term* c : children(*this)) n += c->size();
  return n;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const Term* c : children(*this)) d = std::max(d, c->depth());
  return d + 1;
}

bool operator==(const Term& a, const Term& b) {
  using namespace term;
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.as<Var>().name == b.as<Var>().name;
    case Term::Kind::Star: return true;
    case Term::Kind::Seq:
      return a.as<Seq>().first == b.as<Seq>().first && a.as<Seq>().second == b.as<Seq>().second;
    case Term::Kind::Inl: {
      auto &x = a.as<Inl>(), &y = b.as<Inl>();
      return x.left == y.left && x.right == y.right && x.body == y.body;
    }
    case Term::Kind::Inr: {
      auto &x = a.as<Inr>(), &y = b.as<Inr>();
      return x.left == y.left && x.right == y.right && x.body == y.body;
    }
    case Term::Kind::Case: {
      auto &x = a.as<Case>(), &y = b.as<Case>();
      return x.scrutinee == y.scrutinee && x.left_name == y.left_name &&
             x.left_branch == y.left_branch && x.right_name == y.right_name &&
             x.right_branch == y.right_branch;
    }
    case Term::Kind::Pair:
      return a.as<Pair>().first == b.as<Pair>().first && a.as<Pair>().second == b.as<Pair>().second;
    case Term::Kind::LetPair: {
      auto &x = a.as<LetPair>(), &y = b.as<LetPair>();
      return x.first_name == y.first_name && x.second_name == y.second_name &&
             x.bound == y.bound && x.body == y.body;
    }
    case Term::Kind::Lam: {
      auto &x = a.as<Lam>(), &y = b.as<Lam>();
      return x.param == y.param && x.param_type == y.param_type && x.body == y.body;
    }
    case Term::Kind::App:
      return a.as<App>().fn == b.as<App>().fn && a.as<App>().arg == b.as<App>().arg;
    case Term::Kind::Lift: return a.as<Lift>().body == b.as<Lift>().body;
    case Term::Kind::Force: return a.as<Force>().body == b.as<Force>().body;
    case Term::Kind::Rec: {
      auto &x = a.as<Rec>(), &y = b.as<Rec>();
      return x.self == y.self && x.self_type == y.self_type && x.body == y.body;
    }
  }
  return false;
}

bool is_value(const Term& m) {
  using namespace term;
  return m.visit(Overloaded{
      [](const Var&) { return true; },
      [](const Star&) { return true; },
      [](const Inl& s) { return is_value(s.body); },
      [](const Inr& s) { return is_value(s.body); },
      [](const Pair& s) { return is_value(s.first) && is_value(s.second); },
      [](const Lam&) { return true; },
      [](const Lift&) { return true; },
      [](const auto&) { return false; },
  });
}

namespace {

void collect_free(const Term& m, std::set<Name>& bound, std::set<Name>& out) {
  using namespace term;
  auto under = [&](std::initializer_list<const Name*> names, const Term& body) {
    std::vector<Name> added;
    for (const Name* n : names)
      if (bound.insert(*n).second) added.push_back(*n);
    collect_free(body, bound, out);
    for (const Name& n : added) bound.erase(n);
  };
  m.visit(Overloaded{
      [&](const Var& s) {
        if (!bound.count(s.name)) out.insert(s.name);
      },
      [&](const Star&) {},
      [&](const Seq& s) {
        collect_free(s.first, bound, out);
        collect_free(s.second, bound, out);
      },
      [&](const Inl& s) { collect_free(s.body, bound, out); },
      [&](const Inr& s) { collect_free(s.body, bound, out); },
      [&](const Case& s) {
        collect_free(s.scrutinee, bound, out);
        under({&s.left_name}, s.left_branch);
        under({&s.right_name}, s.right_branch);
      },
      [&](const Pair& s) {
        collect_free(s.first, bound, out);
        collect_free(s.second, bound, out);
      },
      [&](const LetPair& s) {
        collect_free(s.bound, bound, out);
        under({&s.first_name, &s.second_name}, s.body);
      },
      [&](const Lam& s) { under({&s.param}, s.body); },
      [&](const App& s) {
        collect_free(s.fn, bound, out);
        collect_free(s.arg, bound, out);
      },
      [&](const Lift& s) { collect_free(s.body, bound, out); },
      [&](const Force& s) { collect_free(s.body, bound, out); },
      [&](const Rec& s) { under({&s.self}, s.body); },
  });
}

void collect_all_names(const Term& m, std::set<Name>& out) {
  using namespace term;
  m.visit(Overloaded{
      [&](const Var& s) { out.insert(s.name); },
      [&](const Case& s) {
        out.insert(s.left_name);
        out.insert(s.right_name);
      },
      [&](const LetPair& s) {
        out.insert(s.first_name);
        out.insert(s.second_name);
      },
      [&](const Lam& s) { out.insert(s.param); },
      [&](const Rec& s) { out.insert(s.self); },
      [&](const auto&) {},
  });
  for (const Term* c : children(m)) collect_all_names(*c, out);
}

}  // namespace

std::set<Name> free_vars(const Term& m) {
  std::set<Name> bound, out;
  collect_free(m, bound, out);
  return out;
}

Name fresh_name(const Name& base, const std::set<Name>& avoid) {
  Name stem = base;
  auto us = stem.rfind('_');
  if (us != Name::npos && us + 1 < stem.size() && us > 0 &&
      std::all_of(stem.begin() + static_cast<std::ptrdiff_t>(us) + 1, stem.end(),
                  [](unsigned char c) { return std::isdigit(c); }))
    stem.resize(us);
  for (std::size_t i = 1;; ++i) {
    Name candidate = stem + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

namespace {

class Substituter {
 public:
  explicit Substituter(const std::map<Name, Term>& sigma) : sigma_(sigma) {
    for (const auto& [x, v] : sigma_) {
      if (!is_value(v)) throw ContractViolation("subst: substituted term is not a value");
      auto fv = free_vars(v);
      value_fv_.insert(fv.begin(), fv.end());
    }
  }

  Term run(const Term& m) { return go(m, sigma_); }

 private:
  using Sigma = std::map<Name, Term>;

  // Substitute under a binder list. Binders in `names` shadow sigma; a binder
  // that would capture a free variable of a substituted value is renamed.
  // Returns the (possibly renamed) binder names and the new bodies.
  struct Bound {
    std::vector<Name> names;
    std::vector<Term> bodies;
  };

  Bound under(const std::vector<Name>& names, const std::vector<const Term*>& bodies,
              const Sigma& sigma) {
    Sigma inner = sigma;
    for (const Name& n : names) inner.erase(n);
    Bound out{names, {}};
    if (inner.empty()) {
      for (const Term* b : bodies) out.bodies.push_back(*b);
      return out;
    }
    bool relevant = false;
    std::set<Name> body_fv;
    std::set<Name> body_names;
    for (const Term* b : bodies) {
      auto fv = free_vars(*b);
      body_fv.insert(fv.begin(), fv.end());
      collect_all_names(*b, body_names);
    }
    for (const auto& [x, _] : inner)
      if (body_fv.count(x)) relevant = true;
    if (!relevant) {
      for (const Term* b : bodies) out.bodies.push_back(*b);
      return out;
    }
    Sigma renaming;
    std::set<Name> avoid = value_fv_;
    avoid.insert(body_names.begin(), body_names.end());
    for (const auto& [x, _] : inner) avoid.insert(x);
    for (const Name& n : names) avoid.insert(n);
    for (Name& n : out.names) {
      if (value_fv_.count(n)) {
        Name fresh = fresh_name(n, avoid);
        avoid.insert(fresh);
        renaming.emplace(n, Term::var(fresh));
        n = fresh;
      }
    }
    for (const Term* b : bodies) {
      Term body = *b;
      if (!renaming.empty()) body = go(body, renaming);
      out.bodies.push_back(go(body, inner));
    }
    return out;
  }

  Term go(const Term& m, const Sigma& sigma) {
    using namespace term;
    if (sigma.empty()) return m;
    return m.visit(Overloaded{
        [&](const Var& s) -> Term {
          auto it = sigma.find(s.name);
          return it == sigma.end() ? m : it->second;
        },
        [&](const Star&) -> Term { return m; },
        [&](const Seq& s) -> Term { return Term::seq(go(s.first, sigma), go(s.second, sigma)); },
        [&](const Inl& s) -> Term { return Term::inl(s.left, s.right, go(s.body, sigma)); },
        [&](const Inr& s) -> Term { return Term::inr(s.left, s.right, go(s.body, sigma)); },
        [&](const Case& s) -> Term {
          auto l = under({s.left_name}, {&s.left_branch}, sigma);
          auto r = under({s.right_name}, {&s.right_branch}, sigma);
          return Term::case_of(go(s.scrutinee, sigma), l.names[0], l.bodies[0], r.names[0],
                               r.bodies[0]);
        },
        [&](const Pair& s) -> Term { return Term::pair(go(s.first, sigma), go(s.second, sigma)); },
        [&](const LetPair& s) -> Term {
          auto b = under({s.first_name, s.second_name}, {&s.body}, sigma);
          return Term::let_pair(b.names[0], b.names[1], go(s.bound, sigma), b.bodies[0]);
        },
        [&](const Lam& s) -> Term {
          auto b = under({s.param}, {&s.body}, sigma);
          return Term::lam(b.names[0], s.param_type, b.bodies[0]);
        },
        [&](const App& s) -> Term { return Term::app(go(s.fn, sigma), go(s.arg, sigma)); },
        [&](const Lift& s) -> Term { return Term::lift(go(s.body, sigma)); },
        [&](const Force& s) -> Term { return Term::force(go(s.body, sigma)); },
        [&](const Rec& s) -> Term {
          auto b = under({s.self}, {&s.body}, sigma);
          return Term::rec(b.names[0], s.self_type, b.bodies[0]);
        },
    });
  }

  const Sigma& sigma_;
  std::set<Name> value_fv_;
};

// Alpha-equivalence via paired binder environments (de Bruijn levels).
bool alpha(const Term& a, const Term& b, std::map<Name, int>& env_a, std::map<Name, int>& env_b,
           int level) {
  using namespace term;
  if (a.kind() != b.kind()) return false;
  auto bind = [&](const std::vector<Name>& na, const std::vector<Name>& nb, const Term& ba,
                  const Term& bb) {
    std::map<Name, int> ea = env_a, eb = env_b;
    int l = level;
    for (std::size_t i = 0; i < na.size(); ++i) {
      ea[na[i]] = l;
      eb[nb[i]] = l;
      ++l;
    }
    return alpha(ba, bb, ea, eb, l);
  };
  switch (a.kind()) {
    case Term::Kind::Var: {
      const Name& x = a.as<Var>().name;
      const Name& y = b.as<Var>().name;
      auto ia = env_a.find(x);
      auto ib = env_b.find(y);
      if (ia == env_a.end() && ib == env_b.end()) return x == y;
      if (ia == env_a.end() || ib == env_b.end()) return false;
      return ia->second == ib->second;
    }
    case Term::Kind::Star: return true;
    case Term::Kind::Seq:
      return alpha(a.as<Seq>().first, b.as<Seq>().first, env_a, env_b, level) &&
             alpha(a.as<Seq>().second, b.as<Seq>().second, env_a, env_b, level);
    case Term::Kind::Inl:
      return a.as<Inl>().left == b.as<Inl>().left && a.as<Inl>().right == b.as<Inl>().right &&
             alpha(a.as<Inl>().body, b.as<Inl>().body, env_a, env_b, level);
    case Term::Kind::Inr:
      return a.as<Inr>().left == b.as<Inr>().left && a.as<Inr>().right == b.as<Inr>().right &&
             alpha(a.as<Inr>().body, b.as<Inr>().body, env_a, env_b, level);
    case Term::Kind::Case: {
      auto &x = a.as<Case>(), &y = b.as<Case>();
      return alpha(x.scrutinee, y.scrutinee, env_a, env_b, level) &&
             bind({x.left_name}, {y.left_name}, x.left_branch, y.left_branch) &&
             bind({x.right_name}, {y.right_name}, x.right_branch, y.right_branch);
    }
    case Term::Kind::Pair:
      return alpha(a.as<Pair>().first, b.as<Pair>().first, env_a, env_b, level) &&
             alpha(a.as<Pair>().second, b.as<Pair>().second, env_a, env_b, level);
    case Term::Kind::LetPair: {
      auto &x = a.as<LetPair>(), &y = b.as<LetPair>();
      return alpha(x.bound, y.bound, env_a, env_b, level) &&
             bind({x.first_name, x.second_name}, {y.first_name, y.second_name}, x.body, y.body);
    }
    case Term::Kind::Lam: {
      auto &x = a.as<Lam>(), &y = b.as<Lam>();
      return x.param_type == y.param_type && bind({x.param}, {y.param}, x.body, y.body);
    }
    case Term::Kind::App:
      return alpha(a.as<App>().fn, b.as<App>().fn, env_a, env_b, level) &&
             alpha(a.as<App>().arg, b.as<App>().arg, env_a, env_b, level);
    case Term::Kind::Lift: return alpha(a.as<Lift>().body, b.as<Lift>().body, env_a, env_b, level);
    case Term::Kind::Force:
      return alpha(a.as<Force>().body, b.as<Force>().body, env_a, env_b, level);
    case Term::Kind::Rec: {
      auto &x = a.as<Rec>(), &y = b.as<Rec>();
      return x.self_type == y.self_type && bind({x.self}, {y.self}, x.body, y.body);
    }
  }
  return false;
}

}  // namespace

Term subst(const Term& m, const std::map<Name, Term>& sigma) {
  Substituter s(sigma);
  return s.run(m);
}

Term subst(const Term& m, const Term& v, const Name& x) { return subst(m, {{x, v}}); }

bool alpha_equal(const Term& a, const Term& b) {
  std::map<Name, int> ea, eb;
  return alpha(a, b, ea, eb, 0);
}

// ---------------------------------------------------------------- contexts

const char* to_string(Calculus c) { return c == Calculus::Linear ? "linear" : "affine"; }

std::optional<Calculus> calculus_from_string(const std::string& s) {
  if (s == "linear") return Calculus::Linear;
  if (s == "affine") return Calculus::Affine;
  return std::nullopt;
}

Context::Context(std::initializer_list<std::pair<Name, Type>> entries) {
  for (const auto& [x, t] : entries) add(x, t);
}

Context& Context::add(Name x, Type t) {
  if (contains(x)) throw ContractViolation("duplicate context entry: " + x);
  entries_.emplace_back(std::move(x), std::move(t));
  return *this;
}

Context Context::extended(Name x, Type t) const {
  Context c = *this;
  c.add(std::move(x), std::move(t));
  return c;
}

bool Context::contains(const Name& x) const { return find(x) != nullptr; }

const Type* Context::find(const Name& x) const {
  for (const auto& [n, t] : entries_)
    if (n == x) return &t;
  return nullptr;
}

bool Context::is_nonlinear() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return slc::is_nonlinear(e.second); });
}

Context Context::nonlinear_part() const {
  Context c;
  for (const auto& [n, t] : entries_)
    if (slc::is_nonlinear(t)) c.add(n, t);
  return c;
}

}  // namespace slc
