#ifndef LEMMA_SLD_HPP
#define LEMMA_SLD_HPP

// Plain depth-first SLD resolution with a fixed depth bound. This is the
// baseline the tabled engine is checked against, and on left-recursive
// programs it is expected to run into the bound.

#include <cstddef>
#include <optional>
#include <vector>

#include "lemma/program.hpp"
#include "lemma/term.hpp"

namespace lemma {

enum class SelectionRule {
  leftmost,
  /// Leftmost wf(T,C) with T bound, else leftmost y(T,S0,S) with S0 bound,
  /// else the leftmost literal.
  preference,
};

struct SldAnswer {
  Substitution subst;  // restricted to the query's variables
  std::size_t derivation_length = 0;
};

struct SldOutcome {
  enum class Status { exhausted, depth_limited, answer_limited };
  std::vector<SldAnswer> answers;
  Status status = Status::exhausted;
};

struct SldOptions {
  bool occurs_check = true;
  /// Stop after this many answers (0 = no limit).
  std::size_t max_answers = 0;
};

/// Index of the literal the rule selects; `goal` must be non-empty.
inline std::size_t select_literal(std::span<const Literal> goal, SelectionRule rule) {
  if (rule == SelectionRule::preference) {
    for (std::size_t i = 0; i < goal.size(); ++i) {
      const auto& l = goal[i];
      if (l.predicate() == "wf" && l.arity() == 2 && !l.args()[0].is_var()) return i;
    }
    for (std::size_t i = 0; i < goal.size(); ++i) {
      const auto& l = goal[i];
      if (l.predicate() == "y" && l.arity() == 3 && !l.args()[1].is_var()) return i;
    }
  }
  return 0;
}

namespace detail {

struct Resolvent {
  std::vector<Literal> goal;
  Substitution step;  // mgu of this step, for threading answer bindings
};

/// All resolvents of `goal` on its selected literal, in clause order. New body
/// literals go to the left of the remaining ones.
inline std::vector<Resolvent> resolve_step(const Program& p, std::span<const Literal> goal,
                                           std::size_t selected, FreshIds& ids, bool occurs_check) {
  std::vector<Resolvent> out;
  const Literal& lit = goal[selected];
  for (auto& clause : p.clauses_for(key_of(lit), ids)) {
    auto mgu = unify(lit, clause.head, occurs_check);
    if (!mgu) continue;
    std::vector<Literal> next;
    next.reserve(clause.body.size() + goal.size() - 1);
    for (const auto& b : clause.body) next.push_back(mgu->apply(b));
    for (std::size_t i = 0; i < goal.size(); ++i) {
      if (i != selected) next.push_back(mgu->apply(goal[i]));
    }
    out.push_back({std::move(next), std::move(*mgu)});
  }
  return out;
}

class SldSearch {
 public:
  SldSearch(const Program& p, SelectionRule rule, std::size_t max_depth, SldOptions opts,
            FreshIds& ids)
      : program_(p), rule_(rule), max_depth_(max_depth), opts_(opts), ids_(ids) {}

  /// Returns false when the answer limit stopped the search.
  bool search(const std::vector<Literal>& goal, std::vector<Term>& bindings, std::size_t depth) {
    if (goal.empty()) {
      Substitution::Map m;
      for (std::size_t i = 0; i < query_vars_.size(); ++i) m.emplace(query_vars_[i], bindings[i]);
      outcome_.answers.push_back({Substitution(std::move(m)), depth});
      if (opts_.max_answers && outcome_.answers.size() >= opts_.max_answers) {
        outcome_.status = SldOutcome::Status::answer_limited;
        return false;
      }
      return true;
    }
    if (depth >= max_depth_) {
      outcome_.status = SldOutcome::Status::depth_limited;
      return true;
    }
    std::size_t sel = select_literal(goal, rule_);
    for (auto& r : resolve_step(program_, goal, sel, ids_, opts_.occurs_check)) {
      std::vector<Term> next_bindings;
      next_bindings.reserve(bindings.size());
      for (const auto& b : bindings) next_bindings.push_back(r.step.apply(b));
      if (!search(r.goal, next_bindings, depth + 1)) return false;
    }
    return true;
  }

  SldOutcome run(std::span<const Literal> query) {
    std::set<VarId> seen;
    for (const auto& l : query) collect_vars(l.as_term(), query_vars_, seen);
    std::vector<Term> bindings;
    for (VarId v : query_vars_) bindings.push_back(Term::var(v));
    search(std::vector<Literal>(query.begin(), query.end()), bindings, 0);
    return std::move(outcome_);
  }

 private:
  const Program& program_;
  SelectionRule rule_;
  std::size_t max_depth_;
  SldOptions opts_;
  FreshIds& ids_;
  std::vector<VarId> query_vars_;
  SldOutcome outcome_;
};

inline VarId floor_for(const Program& p, std::span<const Literal> query) {
  VarId m = p.max_var();
  for (const auto& l : query) m = std::max(m, max_var_id(l.as_term()));
  return m + 1;
}

}  // namespace detail

/// Depth-first, clause-order SLD resolution. A branch is cut once it has made
/// `max_depth` resolution steps without succeeding.
inline SldOutcome sld_solve(const Program& p, std::span<const Literal> query, SelectionRule rule,
                            std::size_t max_depth, SldOptions opts = {}) {
  if (query.empty()) throw std::invalid_argument("sld_solve: empty query");
  if (max_depth == 0) throw std::invalid_argument("sld_solve: max_depth must be positive");
  FreshIds ids(detail::floor_for(p, query));
  return detail::SldSearch(p, rule, max_depth, opts, ids).run(query);
}

/// One row of a derivation: the goal and the literal selected in it.
struct DerivationStep {
  Literal selected;
  std::vector<Literal> goal;
};

struct TraceOptions {
  bool occurs_check = true;
  /// Depth used to decide whether a subtree runs on past any bound.
  std::size_t probe_depth = 40;
};

namespace detail {

/// True if the SLD subtree below `goal` has a branch still open after
/// `budget` further steps.
inline bool has_open_branch(const Program& p, const std::vector<Literal>& goal, SelectionRule rule,
                            std::size_t budget, FreshIds& ids, bool occurs_check) {
  if (goal.empty()) return false;
  if (budget == 0) return true;
  std::size_t sel = select_literal(goal, rule);
  for (auto& r : resolve_step(p, goal, sel, ids, occurs_check)) {
    if (has_open_branch(p, r.goal, rule, budget - 1, ids, occurs_check)) return true;
  }
  return false;
}

}  // namespace detail

/// The first `steps` rows of the leftmost non-terminating branch of the SLD
/// tree: at each step the first resolvent whose subtree is still open after
/// `probe_depth` further steps is followed, falling back to the first
/// resolvent when every subtree is finite. The sequence ends early when a
/// step has no resolvent or the goal becomes empty.
inline std::vector<DerivationStep> trace_derivation(const Program& p,
                                                    std::span<const Literal> query,
                                                    SelectionRule rule, std::size_t steps,
                                                    TraceOptions opts = {}) {
  if (steps == 0) throw std::invalid_argument("trace_derivation: steps must be at least 1");
  FreshIds ids(detail::floor_for(p, query));
  std::vector<DerivationStep> out;
  std::vector<Literal> goal(query.begin(), query.end());
  while (out.size() < steps && !goal.empty()) {
    std::size_t sel = select_literal(goal, rule);
    out.push_back({goal[sel], goal});
    auto children = detail::resolve_step(p, goal, sel, ids, opts.occurs_check);
    if (children.empty()) break;
    const detail::Resolvent* chosen = &children.front();
    for (const auto& c : children) {
      if (detail::has_open_branch(p, c.goal, rule, opts.probe_depth, ids, opts.occurs_check)) {
        chosen = &c;
        break;
      }
    }
    goal = chosen->goal;
  }
  return out;
}

}  // namespace lemma

#endif  // LEMMA_SLD_HPP
