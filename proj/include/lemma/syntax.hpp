#ifndef LEMMA_SYNTAX_HPP
#define LEMMA_SYNTAX_HPP

// Concrete syntax for terms and literals: reading and printing.
//
//   - lowercase-initial identifiers, quoted 'atoms' and integers are symbols
//   - uppercase or '_'-initial identifiers are variables; a lone '_' is
//     anonymous and fresh at every occurrence
//   - [a,b|T] is sugar for '.'(a,'.'(b,T)) and [] is the empty list
//   - infix '/' (priority 400) and '-' (priority 500), both left-associative

#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/term.hpp"

namespace lemma {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

inline constexpr std::string_view kConsFunctor = ".";
inline constexpr std::string_view kNilAtom = "[]";

struct Token {
  enum class Kind { atom, quoted, var, integer, punct, end_clause, neck, eof };
  Kind kind = Kind::eof;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Splits source text into tokens. `%` starts a comment running to end of line.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_')) {
        advance();
      }
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Token::Kind::var
                                                                        : Token::Kind::atom;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = Token::Kind::integer;
      return t;
    }
    if (c == '\'') {
      advance();
      std::string text;
      for (;;) {
        if (pos_ >= src_.size()) throw SyntaxError("unterminated quoted atom", t.line, t.column);
        char q = src_[pos_];
        advance();
        if (q == '\'') {
          if (pos_ < src_.size() && src_[pos_] == '\'') {
            text += '\'';
            advance();
            continue;
          }
          break;
        }
        if (q == '\\' && pos_ < src_.size()) {
          text += src_[pos_];
          advance();
          continue;
        }
        text += q;
      }
      t.text = std::move(text);
      t.kind = Token::Kind::quoted;
      return t;
    }
    if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
      advance();
      advance();
      t.kind = Token::Kind::neck;
      t.text = ":-";
      return t;
    }
    if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = Token::Kind::punct;
      t.text = "=>";
      return t;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = Token::Kind::punct;
      t.text = "->";
      return t;
    }
    if (c == '.') {
      advance();
      if (pos_ >= src_.size() || std::isspace(static_cast<unsigned char>(src_[pos_])) ||
          src_[pos_] == '%') {
        t.kind = Token::Kind::end_clause;
        t.text = ".";
        return t;
      }
      throw SyntaxError("unexpected '.'", t.line, t.column);
    }
    static constexpr std::string_view kPunct = "()[],|-/:";
    if (kPunct.find(c) != std::string_view::npos) {
      advance();
      t.kind = Token::Kind::punct;
      t.text = std::string(1, c);
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Recursive-descent reader for terms with the two infix operators.
///
/// Named variables are scoped per clause: call `reset_scope()` between
/// clauses. Ids come from the supplied FreshIds source.
class TermReader {
 public:
  TermReader(std::string_view src, FreshIds& ids) : lexer_(src), ids_(ids) { shift(); }

  const Token& peek() const { return tok_; }
  bool at_eof() const { return tok_.kind == Token::Kind::eof; }

  Token shift() {
    Token prev = std::move(tok_);
    tok_ = lexer_.next();
    return prev;
  }

  bool accept_punct(std::string_view p) {
    if (tok_.kind == Token::Kind::punct && tok_.text == p) {
      shift();
      return true;
    }
    return false;
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = tok_.kind == Token::Kind::eof ? "end of input" : "'" + tok_.text + "'";
    throw SyntaxError(msg + ", found " + found, tok_.line, tok_.column);
  }

  void reset_scope() { scope_.clear(); }
  const std::map<std::string, Term>& scope() const { return scope_; }

  Term read_term(int max_priority = 999) {
    Term left = read_primary();
    int left_priority = 0;
    for (;;) {
      if (tok_.kind != Token::Kind::punct) break;
      int p = infix_priority(tok_.text);
      if (p == 0 || p > max_priority || left_priority > p) break;
      std::string op = shift().text;
      Term right = read_term(p - 1);
      left = Term::compound(op, {left, right});
      left_priority = p;
    }
    return left;
  }

  Literal read_literal() {
    Token at = tok_;
    Term t = read_term();
    if (t.is_var()) throw SyntaxError("a literal cannot be a variable", at.line, at.column);
    return Literal(t);
  }

  static int infix_priority(std::string_view op) {
    if (op == "/") return 400;
    if (op == "-") return 500;
    return 0;
  }

 private:
  Term read_primary() {
    switch (tok_.kind) {
      case Token::Kind::var: {
        std::string name = shift().text;
        if (name == "_") return Term::var(ids_.next(), "_");
        auto it = scope_.find(name);
        if (it == scope_.end()) it = scope_.emplace(name, Term::var(ids_.next(), name)).first;
        return it->second;
      }
      case Token::Kind::integer:
        return Term::atom(shift().text);
      case Token::Kind::atom:
      case Token::Kind::quoted: {
        std::string name = shift().text;
        if (tok_.kind == Token::Kind::punct && tok_.text == "(") {
          shift();
          std::vector<Term> args;
          do {
            args.push_back(read_term(999));
          } while (accept_punct(","));
          expect_punct(")");
          return Term::compound(std::move(name), std::move(args));
        }
        return Term::atom(std::move(name));
      }
      case Token::Kind::punct:
        if (tok_.text == "(") {
          shift();
          Term t = read_term(1200);
          expect_punct(")");
          return t;
        }
        if (tok_.text == "[") {
          shift();
          if (accept_punct("]")) return Term::atom(std::string(kNilAtom));
          std::vector<Term> items;
          do {
            items.push_back(read_term(999));
          } while (accept_punct(","));
          Term tail = Term::atom(std::string(kNilAtom));
          if (accept_punct("|")) tail = read_term(999);
          expect_punct("]");
          for (auto it = items.rbegin(); it != items.rend(); ++it) {
            tail = Term::compound(std::string(kConsFunctor), {*it, tail});
          }
          return tail;
        }
        break;
      default:
        break;
    }
    fail("expected a term");
  }

  Lexer lexer_;
  FreshIds& ids_;
  Token tok_;
  std::map<std::string, Term> scope_;
};

/// Parses a comma-separated literal sequence with an optional final '.'.
inline std::vector<Literal> parse_literals(std::string_view src, FreshIds& ids) {
  TermReader r(src, ids);
  if (r.at_eof()) throw SyntaxError("empty literal sequence", 1, 1);
  std::vector<Literal> out;
  do {
    out.push_back(r.read_literal());
  } while (r.accept_punct(","));
  if (r.peek().kind == Token::Kind::end_clause) r.shift();
  if (!r.at_eof()) r.fail("expected ',' or end of input");
  return out;
}

inline Term parse_term(std::string_view src, FreshIds& ids) {
  TermReader r(src, ids);
  Term t = r.read_term(1200);
  if (!r.at_eof()) r.fail("expected end of input");
  return t;
}

// ---------------------------------------------------------------------------
// Printing

/// Maps variable ids to printed names.
using VarNamer = std::function<std::string(const Term&)>;

/// Prints variables as `_G<id>`, unique within a run.
inline std::string raw_var_name(const Term& v) { return "_G" + std::to_string(v.var_id()); }

/// Numbers variables by first occurrence: _0, _1, ... Reuse one instance
/// across several terms to keep the numbering consistent between them.
class CanonicalNamer {
 public:
  std::string operator()(const Term& v) {
    auto it = names_.find(v.var_id());
    if (it == names_.end()) {
      it = names_.emplace(v.var_id(), "_" + std::to_string(names_.size())).first;
    }
    return it->second;
  }

 private:
  std::map<VarId, std::string> names_;
};

namespace detail {

inline bool is_plain_atom(std::string_view s) {
  if (s.empty()) return false;
  if (s == kNilAtom) return true;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }
  if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

inline void write_atom(std::ostream& os, std::string_view s) {
  if (is_plain_atom(s)) {
    os << s;
    return;
  }
  os << '\'';
  for (char c : s) {
    if (c == '\'' || c == '\\') os << '\\';
    os << c;
  }
  os << '\'';
}

inline void write_term(std::ostream& os, const Term& t, int max_priority, const VarNamer& names) {
  if (t.is_var()) {
    os << names(t);
    return;
  }
  if (t.arity() == 2 && t.name() == kConsFunctor) {
    os << '[';
    write_term(os, t.arg(0), 999, names);
    Term tail = t.arg(1);
    while (tail.is_compound() && tail.arity() == 2 && tail.name() == kConsFunctor) {
      os << ',';
      write_term(os, tail.arg(0), 999, names);
      tail = tail.arg(1);
    }
    if (!(tail.is_atomic() && tail.name() == kNilAtom)) {
      os << '|';
      write_term(os, tail, 999, names);
    }
    os << ']';
    return;
  }
  if (int p = TermReader::infix_priority(t.name()); p != 0 && t.arity() == 2) {
    bool paren = p > max_priority;
    if (paren) os << '(';
    write_term(os, t.arg(0), p, names);
    os << t.name();
    write_term(os, t.arg(1), p - 1, names);
    if (paren) os << ')';
    return;
  }
  write_atom(os, t.name());
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    write_term(os, t.arg(i), 999, names);
  }
  os << ')';
}

}  // namespace detail

inline std::string to_string(const Term& t, const VarNamer& names = raw_var_name) {
  std::ostringstream os;
  detail::write_term(os, t, 1200, names);
  return os.str();
}

inline std::string to_string(const Literal& l, const VarNamer& names = raw_var_name) {
  return to_string(l.as_term(), names);
}

inline std::string to_string(std::span<const Literal> ls, const VarNamer& names = raw_var_name) {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ls[i], names);
  }
  return out;
}

inline std::string to_string(const Goal& g, const VarNamer& names = raw_var_name) {
  return to_string(g.literals(), names);
}

/// `head :- body.` or `head.`, with variables numbered jointly across both.
inline std::string clause_to_string(std::span<const Literal> head, std::span<const Literal> body) {
  CanonicalNamer namer;
  VarNamer names = std::ref(namer);
  std::string out = to_string(head, names);
  if (!body.empty()) out += " :- " + to_string(body, names);
  return out + ".";
}

inline std::string to_string(const GeneralizedClause& c) {
  return clause_to_string(c.head.literals(), c.body.literals());
}

}  // namespace lemma

#endif  // LEMMA_SYNTAX_HPP
