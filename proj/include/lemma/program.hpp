#ifndef LEMMA_PROGRAM_HPP
#define LEMMA_PROGRAM_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/syntax.hpp"
#include "lemma/term.hpp"

namespace lemma {

/// head :- body. Facts have an empty body.
struct ProgramClause {
  Literal head;
  std::vector<Literal> body;
};

/// A flat clause database in source order, indexed by predicate/arity.
class Program {
 public:
  Program() = default;

  explicit Program(std::vector<ProgramClause> clauses) : clauses_(std::move(clauses)) {
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (c.head.predicate() == kConsFunctor || c.head.predicate() == kNilAtom) {
        throw std::invalid_argument("reserved symbol used as a predicate: " + c.head.predicate());
      }
      index_[key_of(c.head)].push_back(i);
      max_var_ = std::max(max_var_, max_var_id(c.head.as_term()));
      for (const auto& b : c.body) max_var_ = std::max(max_var_, max_var_id(b.as_term()));
    }
  }

  std::span<const ProgramClause> clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  /// Largest variable id occurring in the program; fresh ids must exceed it.
  VarId max_var() const { return max_var_; }

  std::span<const std::size_t> positions(const PredicateKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return {};
    return it->second;
  }

  /// The clauses defining `key`, in source order, each renamed apart.
  std::vector<ProgramClause> clauses_for(const PredicateKey& key, FreshIds& ids) const {
    std::vector<ProgramClause> out;
    for (std::size_t pos : positions(key)) {
      const auto& c = clauses_[pos];
      Renamer r(ids);
      Literal head = r(c.head);
      out.push_back({std::move(head), r(c.body)});
    }
    return out;
  }

 private:
  std::vector<ProgramClause> clauses_;
  std::map<PredicateKey, std::vector<std::size_t>> index_;
  VarId max_var_ = 0;
};

/// Reads `head.` and `head :- b1, ..., bn.` clauses. Variable ids are drawn
/// from `ids`, which is left past the largest id used.
inline Program parse_program(std::string_view src, FreshIds& ids) {
  TermReader r(src, ids);
  std::vector<ProgramClause> clauses;
  while (!r.at_eof()) {
    r.reset_scope();
    Token at = r.peek();
    Literal head = r.read_literal();
    if (head.predicate() == kConsFunctor || head.predicate() == kNilAtom) {
      throw SyntaxError("reserved symbol used as a predicate", at.line, at.column);
    }
    std::vector<Literal> body;
    if (r.peek().kind == Token::Kind::neck) {
      r.shift();
      do {
        body.push_back(r.read_literal());
      } while (r.accept_punct(","));
    }
    if (r.peek().kind != Token::Kind::end_clause) r.fail("expected '.' at end of clause");
    r.shift();
    clauses.push_back({std::move(head), std::move(body)});
  }
  return Program(std::move(clauses));
}

inline Program parse_program(std::string_view src) {
  FreshIds ids;
  return parse_program(src, ids);
}

inline std::string to_string(const ProgramClause& c) {
  return clause_to_string(std::span<const Literal>(&c.head, 1), c.body);
}

/// One clause per line, reparseable by parse_program.
inline std::string to_string(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses()) out += to_string(c) + "\n";
  return out;
}

/// Clause-by-clause variant equality, heads and bodies renamed jointly.
inline bool variant_eq(const ProgramClause& a, const ProgramClause& b) {
  if (a.body.size() != b.body.size()) return false;
  std::vector<Term> ta{a.head.as_term()}, tb{b.head.as_term()};
  for (const auto& l : a.body) ta.push_back(l.as_term());
  for (const auto& l : b.body) tb.push_back(l.as_term());
  return variant_eq(Term::compound("clause", std::move(ta)), Term::compound("clause", std::move(tb)));
}

inline bool variant_eq(const Program& a, const Program& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!variant_eq(a.clauses()[i], b.clauses()[i])) return false;
  }
  return true;
}

}  // namespace lemma

#endif  // LEMMA_PROGRAM_HPP
