#ifndef SLC_SYNTAX_HPP
#define SLC_SYNTAX_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace slc {

using Name = std::string;

// Raised when an operation is called outside its documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------- types

class Type {
 public:
  enum class Kind { Unit, Sum, Tensor, Lolli, Bang };

  static Type unit();
  static Type sum(Type left, Type right);
  static Type tensor(Type left, Type right);
  static Type lolli(Type arg, Type result);
  static Type bang(Type body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  // Components. left/right for Sum and Tensor, arg/result for Lolli, body
  // for Bang. Calling the wrong accessor is a ContractViolation.
  const Type& left() const;
  const Type& right() const;
  const Type& arg() const { return left(); }
  const Type& result() const { return right(); }
  const Type& body() const;

  std::size_t depth() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// The P-grammar of non-linear types: I | P+R | P*R | !A.
bool is_nonlinear(const Type& t);

// ---------------------------------------------------------------- terms

class Term;

namespace term {
struct Var { Name name; };
struct Star {};
struct Seq;
struct Inl;
struct Inr;
struct Case;
struct Pair;
struct LetPair;
struct Lam;
struct App;
struct Lift;
struct Force;
struct Rec;
}  // namespace term

class Term {
 public:
  enum class Kind {
    Var, Star, Seq, Inl, Inr, Case, Pair, LetPair, Lam, App, Lift, Force, Rec
  };

  static Term var(Name x);
  static Term star();
  static Term seq(Term m, Term n);
  static Term inl(Type a, Type b, Term m);
  static Term inr(Type a, Type b, Term m);
  static Term case_of(Term scrutinee, Name x, Term n, Name y, Term p);
  static Term pair(Term m, Term n);
  static Term let_pair(Name x, Name y, Term m, Term n);
  static Term lam(Name x, Type arg, Term body);
  static Term app(Term m, Term n);
  static Term lift(Term m);
  static Term force(Term m);
  // `bang_type` is the annotation on z, i.e. !A where A is the result type.
  static Term rec(Name z, Type bang_type, Term body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  template <class Node>
  const Node& as() const;

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const;

  // Node count.
  std::size_t size() const;
  // Height of the AST; leaves have depth 1.
  std::size_t depth() const;

  // Exact structural equality, binder names included.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace term {
struct Seq { Term first, second; };
struct Inl { Type left, right; Term body; };
struct Inr { Type left, right; Term body; };
struct Case { Term scrutinee; Name left_name; Term left_branch; Name right_name; Term right_branch; };
struct Pair { Term first, second; };
struct LetPair { Name first_name, second_name; Term bound, body; };
struct Lam { Name param; Type param_type; Term body; };
struct App { Term fn, arg; };
struct Lift { Term body; };
struct Force { Term body; };
struct Rec { Name self; Type self_type; Term body; };
}  // namespace term

using TermVariant =
    std::variant<term::Var, term::Star, term::Seq, term::Inl, term::Inr, term::Case, term::Pair,
                 term::LetPair, term::Lam, term::App, term::Lift, term::Force, term::Rec>;

struct Term::Node {
  TermVariant v;
};

template <class Node>
const Node& Term::as() const {
  const Node* p = std::get_if<Node>(&node_->v);
  if (p == nullptr) throw ContractViolation("Term::as: wrong node kind");
  return *p;
}

template <class Visitor>
decltype(auto) Term::visit(Visitor&& v) const {
  return std::visit(std::forward<Visitor>(v), node_->v);
}

// Values: x | * | left v | right v | <v, w> | \x:A. m | lift m.
bool is_value(const Term& m);

std::set<Name> free_vars(const Term& m);

// Capture-avoiding substitution. Every substituted term must be a value.
Term subst(const Term& m, const Term& v, const Name& x);
Term subst(const Term& m, const std::map<Name, Term>& sigma);

// Structural equality modulo renaming of bound variables.
bool alpha_equal(const Term& a, const Term& b);

// A name derived from `base` that is not in `avoid`: the base with any
// trailing `_<digits>` stripped, then `_1`, `_2`, ... until unused.
Name fresh_name(const Name& base, const std::set<Name>& avoid);

// ---------------------------------------------------------------- contexts

// Which variant of the var/star/lift formation rules is in force.
enum class Calculus { Linear, Affine };

const char* to_string(Calculus c);
std::optional<Calculus> calculus_from_string(const std::string& s);

class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<Name, Type>> entries);

  // Throws ContractViolation on a duplicate name.
  Context& add(Name x, Type t);
  Context extended(Name x, Type t) const;

  bool contains(const Name& x) const;
  const Type* find(const Name& x) const;
  bool is_nonlinear() const;
  Context nonlinear_part() const;

  const std::vector<std::pair<Name, Type>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<Name, Type>> entries_;
};

}  // namespace slc

#endif
