#ifndef SLC_TEXT_HPP
#define SLC_TEXT_HPP

// Concrete syntax for types and terms.
//
//   types   A ::= I | A + A | A * A | A -o A | !A | (A)
//           `-o` is right-associative and loosest, then `+`, then `*`
//           (both right-associative); `!` binds tightest.
//
//   terms   m ::= x | * | m; m | left[A,B] m | right[A,B] m
//               | case m of {left x -> m | right y -> m}
//               | <m, m> | let <x,y> = m in m | \x:A. m | m m
//               | lift m | force m | rec z:!A. m | (m)
//
// Binders and `;` extend as far right as possible; application is
// juxtaposition and left-associative; lift/force/left/right take a single
// argument at application-argument precedence.
//
// Program files may start with `calculus linear` or `calculus affine`.
// `#` starts a line comment.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "slc/syntax.hpp"

namespace slc {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::set<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
  std::string found_;
};

Type parse_type(const std::string& text);
Term parse_term(const std::string& text);

struct Program {
  std::optional<Calculus> calculus;  // from the pragma, if present
  Term term;
};

Program parse_program(const std::string& text);

std::string to_string(const Type& t);
std::string to_string(const Term& m);

}  // namespace slc

#endif
