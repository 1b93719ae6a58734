#include "slc/text.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace slc {

ParseError::ParseError(int line, int column, std::set<std::string> expected, std::string found)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << line << ":" << column << ": parse error: expected ";
        bool first = true;
        for (const auto& e : expected) {
          os << (first ? "" : ", ") << e;
          first = false;
        }
        os << " but found " << found;
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  Ident, Keyword, Star, Semi, Comma, Dot, Colon, Bar, Arrow, Lolli, Plus, Bang,
  Backslash, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Lt, Gt, Eq, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string> kKeywords = {"case", "of",    "left", "right", "let",      "in",
                                         "lift", "force", "rec",  "I",     "calculus"};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '\''))
        ++j;
      std::string word = src.substr(i, j - i);
      out.push_back({kKeywords.count(word) ? Tok::Keyword : Tok::Ident, word, tl, tc});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "->") {
      out.push_back({Tok::Arrow, two, tl, tc});
      advance(2);
      continue;
    }
    if (two == "-o") {
      out.push_back({Tok::Lolli, two, tl, tc});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '*': k = Tok::Star; break;
      case ';': k = Tok::Semi; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case ':': k = Tok::Colon; break;
      case '|': k = Tok::Bar; break;
      case '+': k = Tok::Plus; break;
      case '!': k = Tok::Bang; break;
      case '\\': k = Tok::Backslash; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '=': k = Tok::Eq; break;
      default:
        throw ParseError(tl, tc, {"a token"}, std::string("'") + c + "'");
    }
    out.push_back({k, std::string(1, c), tl, tc});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Type type() {
    Type lhs = sum_type();
    if (peek().kind == Tok::Lolli) {
      next();
      return Type::lolli(lhs, type());
    }
    return lhs;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Backslash) return lambda();
    if (is_kw("rec")) return rec();
    if (is_kw("let")) return let_pair();
    if (is_kw("case")) return case_of();
    Term lhs = app();
    if (peek().kind == Tok::Semi) {
      next();
      return Term::seq(lhs, term());
    }
    return lhs;
  }

  std::optional<Calculus> pragma() {
    if (!is_kw("calculus")) return std::nullopt;
    next();
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "linear") {
      next();
      return Calculus::Linear;
    }
    if (t.kind == Tok::Ident && t.text == "affine") {
      next();
      return Calculus::Affine;
    }
    fail({"'linear'", "'affine'"});
  }

  void finish() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool is_kw(const char* kw) const {
    return peek().kind == Tok::Keyword && peek().text == kw;
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, std::move(expected), describe(t));
  }

  void expect(Tok k, const char* shown) {
    if (peek().kind != k) fail({std::string("'") + shown + "'"});
    next();
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail({std::string("'") + kw + "'"});
    next();
  }
  Name ident() {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    return next().text;
  }

  Type sum_type() {
    Type lhs = tensor_type();
    if (peek().kind == Tok::Plus) {
      next();
      return Type::sum(lhs, sum_type());
    }
    return lhs;
  }
  Type tensor_type() {
    Type lhs = prefix_type();
    if (peek().kind == Tok::Star) {
      next();
      return Type::tensor(lhs, tensor_type());
    }
    return lhs;
  }
  Type prefix_type() {
    if (peek().kind == Tok::Bang) {
      next();
      return Type::bang(prefix_type());
    }
    if (is_kw("I")) {
      next();
      return Type::unit();
    }
    if (peek().kind == Tok::LParen) {
      next();
      Type t = type();
      expect(Tok::RParen, ")");
      return t;
    }
    fail({"'I'", "'!'", "'('"});
  }

  Term lambda() {
    expect(Tok::Backslash, "\\");
    Name x = ident();
    expect(Tok::Colon, ":");
    Type a = type();
    expect(Tok::Dot, ".");
    return Term::lam(x, a, term());
  }
  Term rec() {
    expect_kw("rec");
    Name z = ident();
    expect(Tok::Colon, ":");
    const Token& at = peek();
    Type a = type();
    if (!a.is(Type::Kind::Bang))
      throw ParseError(at.line, at.column, {"a type of the form !A"}, to_string(a));
    expect(Tok::Dot, ".");
    return Term::rec(z, a, term());
  }
  Term let_pair() {
    expect_kw("let");
    expect(Tok::Lt, "<");
    Name x = ident();
    expect(Tok::Comma, ",");
    Name y = ident();
    expect(Tok::Gt, ">");
    expect(Tok::Eq, "=");
    Term m = term();
    expect_kw("in");
    return Term::let_pair(x, y, m, term());
  }
  Term case_of() {
    expect_kw("case");
    Term m = term();
    expect_kw("of");
    expect(Tok::LBrace, "{");
    expect_kw("left");
    Name x = ident();
    expect(Tok::Arrow, "->");
    Term n = term();
    expect(Tok::Bar, "|");
    expect_kw("right");
    Name y = ident();
    expect(Tok::Arrow, "->");
    Term p = term();
    expect(Tok::RBrace, "}");
    return Term::case_of(m, x, n, y, p);
  }

  bool starts_unary() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Star:
      case Tok::LParen:
      case Tok::Lt: return true;
      case Tok::Keyword:
        return t.text == "lift" || t.text == "force" || t.text == "left" || t.text == "right";
      default: return false;
    }
  }

  Term app() {
    if (!starts_unary())
      fail({"identifier", "'*'", "'('", "'<'", "'\\'", "'lift'", "'force'", "'left'", "'right'",
            "'case'", "'let'", "'rec'"});
    Term fn = unary();
    while (starts_unary()) fn = Term::app(fn, unary());
    return fn;
  }

  std::pair<Type, Type> annotations() {
    expect(Tok::LBracket, "[");
    Type a = type();
    expect(Tok::Comma, ",");
    Type b = type();
    expect(Tok::RBracket, "]");
    return {a, b};
  }

  Term unary() {
    if (is_kw("lift")) {
      next();
      return Term::lift(unary());
    }
    if (is_kw("force")) {
      next();
      return Term::force(unary());
    }
    if (is_kw("left")) {
      next();
      auto [a, b] = annotations();
      return Term::inl(a, b, unary());
    }
    if (is_kw("right")) {
      next();
      auto [a, b] = annotations();
      return Term::inr(a, b, unary());
    }
    return atom();
  }

  Term atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: return Term::var(next().text);
      case Tok::Star: next(); return Term::star();
      case Tok::LParen: {
        next();
        Term m = term();
        expect(Tok::RParen, ")");
        return m;
      }
      case Tok::Lt: {
        next();
        Term m = term();
        expect(Tok::Comma, ",");
        Term n = term();
        expect(Tok::Gt, ">");
        return Term::pair(m, n);
      }
      default: fail({"identifier", "'*'", "'('", "'<'"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

// Precedence levels: 0 lolli, 1 sum, 2 tensor, 3 prefix/atom.
void print_type(std::ostream& os, const Type& t, int ctx) {
  auto paren = [&](int level, auto body) {
    if (level < ctx) os << '(';
    body();
    if (level < ctx) os << ')';
  };
  switch (t.kind()) {
    case Type::Kind::Unit: os << 'I'; return;
    case Type::Kind::Bang:
      os << '!';
      print_type(os, t.body(), 3);
      return;
    case Type::Kind::Lolli:
      paren(0, [&] {
        print_type(os, t.arg(), 1);
        os << " -o ";
        print_type(os, t.result(), 0);
      });
      return;
    case Type::Kind::Sum:
      paren(1, [&] {
        print_type(os, t.left(), 2);
        os << " + ";
        print_type(os, t.right(), 1);
      });
      return;
    case Type::Kind::Tensor:
      paren(2, [&] {
        print_type(os, t.left(), 3);
        os << " * ";
        print_type(os, t.right(), 2);
      });
      return;
  }
}

// Binder types print parenthesised unless atomic, e.g. `\x:(I -o I). m`.
void print_binder_type(std::ostream& os, const Type& t) {
  print_type(os, t, t.is(Type::Kind::Unit) || t.is(Type::Kind::Bang) ? 0 : 3);
}

// Precedence levels: 0 seq/binders, 1 application, 2 unary, 3 atom.
void print_term(std::ostream& os, const Term& m, int ctx) {
  using namespace term;
  auto open = [&](int level) {
    if (level < ctx) os << '(';
  };
  auto close = [&](int level) {
    if (level < ctx) os << ')';
  };
  switch (m.kind()) {
    case Term::Kind::Var: os << m.as<Var>().name; return;
    case Term::Kind::Star: os << '*'; return;
    case Term::Kind::Seq:
      open(0);
      print_term(os, m.as<Seq>().first, 1);
      os << "; ";
      print_term(os, m.as<Seq>().second, 0);
      close(0);
      return;
    case Term::Kind::Inl:
    case Term::Kind::Inr: {
      bool left = m.is(Term::Kind::Inl);
      const Type& a = left ? m.as<Inl>().left : m.as<Inr>().left;
      const Type& b = left ? m.as<Inl>().right : m.as<Inr>().right;
      const Term& body = left ? m.as<Inl>().body : m.as<Inr>().body;
      open(2);
      os << (left ? "left[" : "right[");
      print_type(os, a, 0);
      os << ',';
      print_type(os, b, 0);
      os << "] ";
      print_term(os, body, 2);
      close(2);
      return;
    }
    case Term::Kind::Case: {
      const auto& c = m.as<Case>();
      open(0);
      os << "case ";
      print_term(os, c.scrutinee, 0);
      os << " of {left " << c.left_name << " -> ";
      print_term(os, c.left_branch, 0);
      os << " | right " << c.right_name << " -> ";
      print_term(os, c.right_branch, 0);
      os << '}';
      close(0);
      return;
    }
    case Term::Kind::Pair:
      os << '<';
      print_term(os, m.as<Pair>().first, 0);
      os << ", ";
      print_term(os, m.as<Pair>().second, 0);
      os << '>';
      return;
    case Term::Kind::LetPair: {
      const auto& l = m.as<LetPair>();
      open(0);
      os << "let <" << l.first_name << ',' << l.second_name << "> = ";
      print_term(os, l.bound, 0);
      os << " in ";
      print_term(os, l.body, 0);
      close(0);
      return;
    }
    case Term::Kind::Lam: {
      const auto& l = m.as<Lam>();
      open(0);
      os << '\\' << l.param << ':';
      print_binder_type(os, l.param_type);
      os << ". ";
      print_term(os, l.body, 0);
      close(0);
      return;
    }
    case Term::Kind::App:
      open(1);
      print_term(os, m.as<App>().fn, 1);
      os << ' ';
      print_term(os, m.as<App>().arg, 2);
      close(1);
      return;
    case Term::Kind::Lift:
      open(2);
      os << "lift ";
      print_term(os, m.as<Lift>().body, 2);
      close(2);
      return;
    case Term::Kind::Force:
      open(2);
      os << "force ";
      print_term(os, m.as<Force>().body, 2);
      close(2);
      return;
    case Term::Kind::Rec: {
      const auto& r = m.as<Rec>();
      open(0);
      os << "rec " << r.self << ':';
      print_binder_type(os, r.self_type);
      os << ". ";
      print_term(os, r.body, 0);
      close(0);
      return;
    }
  }
}

}  // namespace

Type parse_type(const std::string& text) {
  Parser p(lex(text));
  Type t = p.type();
  p.finish();
  return t;
}

Term parse_term(const std::string& text) {
  Parser p(lex(text));
  Term m = p.term();
  p.finish();
  return m;
}

Program parse_program(const std::string& text) {
  Parser p(lex(text));
  auto calc = p.pragma();
  Term m = p.term();
  p.finish();
  return Program{calc, m};
}

std::string to_string(const Type& t) {
  std::ostringstream os;
  print_type(os, t, 0);
  return os.str();
}

std::string to_string(const Term& m) {
  std::ostringstream os;
  print_term(os, m, 0);
  return os.str();
}

}  // namespace slc
