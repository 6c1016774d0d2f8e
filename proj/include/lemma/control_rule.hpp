#ifndef LEMMA_CONTROL_RULE_HPP
#define LEMMA_CONTROL_RULE_HPP

// Declarative control rules: which tag an untagged lemma-tree node receives.
//
// Rule files hold one case per line:
//
//   if [root | nonroot,] [body empty,] <pattern>{, <pattern> | nonvar(V) | var(V)}
//      => program <k> | program <pattern> | table | solution
//
// Patterns are literal templates. Uppercase pattern variables shared between
// patterns must match identical subterms; a bare variable matches any
// literal. `body has <pattern>` is accepted as a spelling of `<pattern>`.
// Cases are tried in order. When none fires, a node with an empty body is a
// solution and anything else gets program(leftmost literal).

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/syntax.hpp"
#include "lemma/term.hpp"

namespace lemma {

/// Raised when a rule assigns a tag the proof procedure does not allow.
class ControlRuleViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RuleGuard {
  enum class Kind { nonvar, var };
  Kind kind;
  VarId var;
};

struct RuleCase {
  enum class Scope { any, root, nonroot };
  enum class Action { program, table, solution };

  Scope scope = Scope::any;
  bool body_empty = false;
  std::vector<Term> patterns;  // literal templates, or bare variables
  std::vector<RuleGuard> guards;
  Action action = Action::program;
  std::size_t program_index = 0;  // 0-based into patterns
  std::string source;             // the line as written, for diagnostics
};

struct ControlRuleSpec {
  std::string name;
  std::vector<RuleCase> cases;
};

/// The tag chosen by a control rule for one node.
struct RuleTag {
  enum class Kind { solution, program, table };
  Kind kind = Kind::solution;
  std::optional<Literal> selected;  // program
  std::vector<Literal> subgoal;     // table, in pattern order
};

namespace detail {

inline ControlRuleSpec parse_rule_text(std::string_view src, std::string name) {
  ControlRuleSpec spec;
  spec.name = std::move(name);
  FreshIds ids;
  std::istringstream in{std::string(src)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Offsets inside a single-line reader start at line 1; shift errors.
    auto rethrow = [&](const SyntaxError& e) -> SyntaxError {
      std::string msg = e.what();
      if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
      return SyntaxError(msg, line_no, e.column());
    };
    try {
      TermReader r(line, ids);
      if (r.at_eof()) continue;
      RuleCase rc;
      rc.source = line;
      if (r.peek().kind != Token::Kind::atom || r.peek().text != "if") r.fail("expected 'if'");
      r.shift();
      std::vector<std::pair<RuleGuard::Kind, std::string>> pending_guards;
      bool first = true;
      while (!(r.peek().kind == Token::Kind::punct && r.peek().text == "=>")) {
        if (!first) r.expect_punct(",");
        first = false;
        const Token& t = r.peek();
        if (t.kind == Token::Kind::atom && (t.text == "root" || t.text == "nonroot")) {
          rc.scope = t.text == "root" ? RuleCase::Scope::root : RuleCase::Scope::nonroot;
          r.shift();
          continue;
        }
        if (t.kind == Token::Kind::atom && t.text == "body") {
          r.shift();
          if (r.peek().kind == Token::Kind::atom && r.peek().text == "empty") {
            r.shift();
            rc.body_empty = true;
            continue;
          }
          if (r.peek().kind == Token::Kind::atom && r.peek().text == "has") {
            r.shift();
          } else {
            r.fail("expected 'empty' or 'has' after 'body'");
          }
        }
        Term item = r.read_term();
        if (item.is_compound() && item.arity() == 1 &&
            (item.name() == "nonvar" || item.name() == "var") && item.arg(0).is_var()) {
          if (item.arg(0).name() == "_") r.fail("guard on an anonymous variable");
          pending_guards.emplace_back(
              item.name() == "var" ? RuleGuard::Kind::var : RuleGuard::Kind::nonvar,
              item.arg(0).name());
          continue;
        }
        rc.patterns.push_back(item);
      }
      r.shift();  // =>
      const Token act = r.shift();
      if (act.kind != Token::Kind::atom) throw SyntaxError("expected an action", line_no, act.column);
      if (act.text == "solution") {
        rc.action = RuleCase::Action::solution;
        if (!rc.body_empty || !rc.patterns.empty() || !pending_guards.empty()) {
          throw SyntaxError("'solution' is only allowed with the 'body empty' condition alone",
                            line_no, act.column);
        }
      } else if (act.text == "table") {
        rc.action = RuleCase::Action::table;
        if (rc.patterns.empty()) throw SyntaxError("'table' needs at least one pattern", line_no, act.column);
      } else if (act.text == "program") {
        rc.action = RuleCase::Action::program;
        if (rc.patterns.empty()) {
          throw SyntaxError("'program' needs at least one pattern", line_no, act.column);
        }
        const Token at = r.peek();
        if (at.kind == Token::Kind::integer) {
          r.shift();
          std::size_t k = std::stoul(at.text);
          if (k < 1 || k > rc.patterns.size()) {
            throw SyntaxError("program index out of range", line_no, at.column);
          }
          rc.program_index = k - 1;
        } else {
          Term target = r.read_term();
          std::size_t i = 0;
          while (i < rc.patterns.size() && !(rc.patterns[i] == target)) ++i;
          if (i == rc.patterns.size()) {
            throw SyntaxError("program target is not one of the case's patterns", line_no,
                              at.column);
          }
          rc.program_index = i;
        }
      } else {
        throw SyntaxError("unknown action '" + act.text + "'", line_no, act.column);
      }
      if (rc.body_empty && !rc.patterns.empty()) {
        throw SyntaxError("'body empty' cannot be combined with patterns", line_no, 1);
      }
      if (!r.at_eof()) r.fail("unexpected text after action");
      for (const auto& [kind, var_name] : pending_guards) {
        auto it = r.scope().find(var_name);
        if (it == r.scope().end() || std::none_of(rc.patterns.begin(), rc.patterns.end(),
                                                  [&](const Term& p) {
                                                    return occurs_in(it->second.var_id(), p);
                                                  })) {
          throw SyntaxError("guard variable " + var_name + " does not occur in a pattern",
                            line_no, 1);
        }
        rc.guards.push_back({kind, it->second.var_id()});
      }
      spec.cases.push_back(std::move(rc));
    } catch (const SyntaxError& e) {
      if (e.line() == line_no) throw;
      throw rethrow(e);
    }
  }
  return spec;
}

}  // namespace detail

inline constexpr std::string_view kGrammarRuleText =
    "% program the yield literal at a lemma-tree root\n"
    "if root, y(T,S0,S) => program 1\n"
    "if body empty => solution\n"
    "% a well-formedness constraint whose tree is known\n"
    "if wf(T,C), nonvar(T) => program 1\n"
    "% a category paired with its yield from a known position\n"
    "if wf(T,C), y(T,S0,S), nonvar(S0) => table\n";

inline constexpr std::string_view kLeftmostRuleText = "if body empty => solution\n";

inline constexpr std::string_view kLeftmostTabledRuleText =
    "if body empty => solution\n"
    "if nonroot, L => table\n";

/// Parses a rule file. The names `builtin:grammar`, `builtin:leftmost` and
/// `builtin:leftmost-tabled` select the built-in rules without parsing a file.
inline ControlRuleSpec parse_rule_spec(std::string_view src) {
  if (src == "builtin:grammar") return detail::parse_rule_text(kGrammarRuleText, "builtin:grammar");
  if (src == "builtin:leftmost") {
    return detail::parse_rule_text(kLeftmostRuleText, "builtin:leftmost");
  }
  if (src == "builtin:leftmost-tabled") {
    return detail::parse_rule_text(kLeftmostTabledRuleText, "builtin:leftmost-tabled");
  }
  return detail::parse_rule_text(src, "file");
}

inline bool is_builtin_rule_name(std::string_view s) {
  return s == "builtin:grammar" || s == "builtin:leftmost" || s == "builtin:leftmost-tabled";
}

namespace detail {

inline bool match_pattern(const Term& pattern, const Literal& lit, Matcher& m) {
  if (pattern.is_var()) return m.match(pattern, lit.as_term());
  return m.match(Literal(pattern), lit);
}

inline bool guards_hold(const RuleCase& rc, const Matcher& m) {
  for (const auto& g : rc.guards) {
    const Term* t = m.lookup(g.var);
    bool bound = t && !t->is_var();
    if (g.kind == RuleGuard::Kind::nonvar ? !bound : bound) return false;
  }
  return true;
}

/// Leftmost-first assignment of distinct body literals to the patterns.
inline bool assign_patterns(const RuleCase& rc, std::span<const Literal> body, std::size_t i,
                            const Matcher& m, std::vector<std::size_t>& chosen) {
  if (i == rc.patterns.size()) return guards_hold(rc, m);
  for (std::size_t j = 0; j < body.size(); ++j) {
    if (std::find(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(i), j) !=
        chosen.begin() + static_cast<std::ptrdiff_t>(i)) {
      continue;
    }
    Matcher next = m;
    if (!match_pattern(rc.patterns[i], body[j], next)) continue;
    chosen[i] = j;
    if (assign_patterns(rc, body, i + 1, next, chosen)) return true;
  }
  return false;
}

inline void check_tag(const RuleTag& tag, const Goal& body, bool is_root, const std::string& why) {
  switch (tag.kind) {
    case RuleTag::Kind::solution:
      if (is_root) throw ControlRuleViolation("solution tag on a lemma-tree root (" + why + ")");
      if (!body.empty()) throw ControlRuleViolation("solution tag on a non-empty body (" + why + ")");
      break;
    case RuleTag::Kind::program:
      if (!tag.selected || !body.contains(*tag.selected)) {
        throw ControlRuleViolation("program tag selects a literal outside the body (" + why + ")");
      }
      break;
    case RuleTag::Kind::table:
      if (is_root) throw ControlRuleViolation("table tag on a lemma-tree root (" + why + ")");
      if (tag.subgoal.empty()) throw ControlRuleViolation("table tag with empty subgoal (" + why + ")");
      for (const auto& l : tag.subgoal) {
        if (!body.contains(l)) {
          throw ControlRuleViolation("table subgoal is not a subset of the body (" + why + ")");
        }
      }
      break;
  }
}

}  // namespace detail

/// Evaluates the rule on a node whose clause has body `body`.
inline RuleTag rule_select(const ControlRuleSpec& spec, const Goal& body, bool is_root) {
  for (const auto& rc : spec.cases) {
    if (rc.scope == RuleCase::Scope::root && !is_root) continue;
    if (rc.scope == RuleCase::Scope::nonroot && is_root) continue;
    RuleTag tag;
    if (rc.body_empty) {
      if (!body.empty()) continue;
      if (rc.action != RuleCase::Action::solution) {
        throw ControlRuleViolation("case fires on an empty body without a solution action: " +
                                   rc.source);
      }
      tag.kind = RuleTag::Kind::solution;
    } else {
      std::vector<std::size_t> chosen(rc.patterns.size());
      if (!detail::assign_patterns(rc, body.literals(), 0, Matcher{}, chosen)) continue;
      if (rc.action == RuleCase::Action::program) {
        tag.kind = RuleTag::Kind::program;
        tag.selected = body[chosen[rc.program_index]];
      } else {
        tag.kind = RuleTag::Kind::table;
        for (std::size_t j : chosen) tag.subgoal.push_back(body[j]);
      }
    }
    detail::check_tag(tag, body, is_root, rc.source);
    return tag;
  }
  RuleTag tag;
  if (body.empty()) {
    if (is_root) throw ControlRuleViolation("lemma-tree root with an empty body");
    tag.kind = RuleTag::Kind::solution;
  } else {
    tag.kind = RuleTag::Kind::program;
    tag.selected = body[0];
  }
  return tag;
}

inline RuleTag rule_select(const ControlRuleSpec& spec, const GeneralizedClause& c, bool is_root) {
  return rule_select(spec, c.body, is_root);
}

}  // namespace lemma

#endif  // LEMMA_CONTROL_RULE_HPP
