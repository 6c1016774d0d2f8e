#ifndef LEMMA_CFG_HPP
#define LEMMA_CFG_HPP

// Context-free grammars compiled into the parse/wf/y tree encoding:
//
//   parse(String, Tree) :- wf(Tree, s), y(Tree, String, []).
//   y(_-Word, [Word|Words], Words).
//   y(_/[Tree1], Words0, Words) :- y(Tree1, Words0, Words).
//   y(_/[Tree1,Tree2], Words0, Words) :- y(Tree1, Words0, Words1), y(Tree2, Words1, Words).
//
// plus one wf/2 clause per grammar rule.
//
// Grammar files hold rules `LHS -> RHS1 [RHS2]` or `LHS -> 'word'`, with `|`
// separating alternatives, `%` comments, and an optional `start: X` line.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/program.hpp"
#include "lemma/syntax.hpp"

namespace lemma {

struct CfgSymbol {
  bool terminal = false;
  std::string name;  // nonterminals as written (uppercase); terminals unquoted
  friend bool operator==(const CfgSymbol&, const CfgSymbol&) = default;
};

struct CfgRule {
  std::string lhs;
  std::vector<CfgSymbol> rhs;
  friend bool operator==(const CfgRule&, const CfgRule&) = default;
};

struct Cfg {
  std::string start;
  std::vector<CfgRule> rules;
};

/// Program symbol for a nonterminal: NP becomes np.
inline std::string category_symbol(std::string_view nonterminal) {
  std::string out(nonterminal);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline Cfg parse_cfg(std::string_view src) {
  Cfg g;
  std::string explicit_start;
  std::istringstream in{std::string(src)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Lexer lex(line);
    auto next = [&] {
      try {
        return lex.next();
      } catch (const SyntaxError& e) {
        std::string msg = e.what();
        throw SyntaxError(msg.substr(msg.find(": ") + 2), line_no, e.column());
      }
    };
    auto error = [&](const std::string& msg, const Token& t) {
      return SyntaxError(msg, line_no, t.column);
    };
    Token t = next();
    if (t.kind == Token::Kind::eof) continue;
    if (t.kind == Token::Kind::atom && t.text == "start") {
      Token colon = next();
      if (colon.kind != Token::Kind::punct || colon.text != ":") throw error("expected ':'", colon);
      Token sym = next();
      if (sym.kind != Token::Kind::var || sym.text[0] == '_') {
        throw error("expected a nonterminal after 'start:'", sym);
      }
      if (next().kind != Token::Kind::eof) throw error("unexpected text after start symbol", sym);
      explicit_start = sym.text;
      continue;
    }
    if (t.kind != Token::Kind::var || t.text[0] == '_') {
      throw error("expected a nonterminal (uppercase) on the left of '->'", t);
    }
    std::string lhs = t.text;
    Token arrow = next();
    if (arrow.kind != Token::Kind::punct || arrow.text != "->") throw error("expected '->'", arrow);
    for (;;) {
      CfgRule rule{lhs, {}};
      Token first_tok;
      Token s = next();
      first_tok = s;
      while (s.kind != Token::Kind::eof && !(s.kind == Token::Kind::punct && s.text == "|")) {
        if (s.kind == Token::Kind::quoted) {
          rule.rhs.push_back({true, s.text});
        } else if (s.kind == Token::Kind::var && s.text[0] != '_') {
          rule.rhs.push_back({false, s.text});
        } else {
          throw error("expected a nonterminal or a quoted word", s);
        }
        s = next();
      }
      if (rule.rhs.empty()) throw error("empty right-hand side (no epsilon rules)", first_tok);
      std::size_t terminals = 0;
      for (const auto& sym : rule.rhs) terminals += sym.terminal ? 1 : 0;
      if (terminals > 0 && rule.rhs.size() > 1) {
        throw error("mixed terminal/nonterminal right-hand side; use a pre-terminal rule", first_tok);
      }
      if (rule.rhs.size() > 2) {
        throw error("right-hand side longer than 2 nonterminals; binarize the grammar first",
                    first_tok);
      }
      g.rules.push_back(std::move(rule));
      if (s.kind == Token::Kind::eof) break;
    }
  }
  if (g.rules.empty()) throw SyntaxError("grammar has no rules", line_no > 0 ? line_no : 1, 1);
  g.start = explicit_start.empty() ? g.rules.front().lhs : explicit_start;
  return g;
}

/// The encoded program as source text, in the layout parse_program reads.
inline std::string encode_cfg_text(const Cfg& g) {
  std::ostringstream os;
  os << "parse(String, Tree) :- wf(Tree, " << category_symbol(g.start) << "), y(Tree, String, []).\n\n"
     << "y(_-Word, [Word|Words], Words).\n"
     << "y(_/[Tree1], Words0, Words) :- y(Tree1, Words0, Words).\n"
     << "y(_/[Tree1,Tree2], Words0, Words) :-\n"
     << "    y(Tree1, Words0, Words1), y(Tree2, Words1, Words).\n\n";
  auto word = [](const std::string& w) {
    std::ostringstream q;
    detail::write_atom(q, w);
    return q.str();
  };
  for (const auto& r : g.rules) {
    const std::string c = category_symbol(r.lhs);
    os << "% " << r.lhs << " ->";
    for (const auto& s : r.rhs) os << ' ' << (s.terminal ? "'" + s.name + "'" : s.name);
    os << '\n';
    if (r.rhs.front().terminal) {
      os << "wf(" << c << '-' << word(r.rhs.front().name) << ", " << c << ").\n";
    } else if (r.rhs.size() == 1) {
      os << "wf(" << c << "/[Tree1], " << c << ") :- wf(Tree1, " << category_symbol(r.rhs[0].name)
         << ").\n";
    } else {
      os << "wf(" << c << "/[Tree1, Tree2], " << c << ") :- wf(Tree1, "
         << category_symbol(r.rhs[0].name) << "), wf(Tree2, " << category_symbol(r.rhs[1].name)
         << ").\n";
    }
  }
  return os.str();
}

inline Program encode_cfg(const Cfg& g, FreshIds& ids) { return parse_program(encode_cfg_text(g), ids); }

inline Program encode_cfg(const Cfg& g) {
  FreshIds ids;
  return encode_cfg(g, ids);
}

}  // namespace lemma

#endif  // LEMMA_CFG_HPP
