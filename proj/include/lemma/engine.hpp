#ifndef LEMMA_ENGINE_HPP
#define LEMMA_ENGINE_HPP

// The lemma table proof procedure.
//
// A lemma table holds one entry per tabled goal G: a lemma tree whose root is
// the tautology ⟨G ← G⟩ and a solution list. Untagged nodes are tagged by the
// control rule (prediction); nodes tagged table(B′) consume solutions of the
// entry they point to, one per step (completion). Work items sit in a single
// FIFO queue, so every applicable operation is eventually performed and runs
// are deterministic.
//
// Clause heads inside the engine are literal sequences kept position-aligned
// with their entry's goal. That alignment is what lets completion pair the
// literals of a solution head with the subgoal literals they answer.

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lemma/control_rule.hpp"
#include "lemma/program.hpp"
#include "lemma/term.hpp"

namespace lemma {

/// A node clause label: head aligned with the entry goal, body as a set.
struct Label {
  std::vector<Literal> head;
  Goal body;

  GeneralizedClause to_clause() const { return {Goal(head), body}; }
};

struct NodeTag {
  RuleTag::Kind kind = RuleTag::Kind::solution;
  std::optional<Literal> selected;   // program
  std::vector<Literal> subgoal;      // table: B′ as chosen by the rule
  std::optional<std::size_t> entry;  // table: entry whose solutions are consumed
  std::size_t cursor = 0;            // table: next solution position
  /// table: for each literal of the entry goal, the B′ literal it maps onto.
  std::vector<Literal> paired;
};

struct LemmaNode {
  std::size_t id = 0;
  std::size_t entry = 0;
  std::optional<std::size_t> parent;
  Label clause;
  std::optional<NodeTag> tag;
  std::vector<std::size_t> children;
  bool completion_queued = false;
};

struct TableEntry {
  std::size_t index = 0;  // creation order
  Goal goal;
  std::size_t root = 0;
  std::vector<Label> solutions;
  std::vector<std::size_t> consumers;  // table-tagged nodes reading this list
};

struct EngineStats {
  std::size_t entries = 0;
  std::size_t nodes = 0;
  std::size_t predictions = 0;
  std::size_t completions = 0;
  std::size_t solutions = 0;  // across all entries
  std::size_t suppressed = 0;
  friend bool operator==(const EngineStats&, const EngineStats&) = default;
};

struct EngineResult {
  enum class Status { fixpoint, step_limited };
  std::vector<GeneralizedClause> solutions;
  Status status = Status::fixpoint;
  EngineStats stats;
};

struct EngineOptions {
  AbstractionOp abstraction = AbstractionOp::identity();
  std::size_t max_steps = 100000;
  bool answer_subsumption = true;
  bool occurs_check = true;
  /// Verify node/entry invariants after every step.
  bool check_invariants = false;
};

enum class AddOutcome { appended, suppressed };

/// Raised when an internal invariant fails; indicates an engine bug.
class EngineInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

/// Packs an aligned head and a body into one goal so clause subsumption can
/// reuse goal subsumption: head literals keep their position.
inline Goal clause_pair_goal(const Label& c) {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < c.head.size(); ++i) {
    out.emplace_back("$head", std::vector<Term>{Term::atom(std::to_string(i)), c.head[i].as_term()});
  }
  for (const auto& b : c.body) out.emplace_back("$body", std::vector<Term>{b.as_term()});
  return Goal(std::move(out));
}

inline bool head_is_instance(std::span<const Literal> goal, std::span<const Literal> head) {
  if (goal.size() != head.size()) return false;
  Matcher m;
  for (std::size_t i = 0; i < goal.size(); ++i) {
    if (!m.match(goal[i], head[i])) return false;
  }
  return true;
}

}  // namespace detail

/// A lemma table under construction for one top-level goal.
class LemmaTable {
 public:
  /// Creates the table with a single entry ⟨goal, ⟨goal ← goal⟩, []⟩ whose
  /// root node is queued for prediction.
  LemmaTable(const Program& program, const Goal& goal, ControlRuleSpec rule,
             EngineOptions opts = {})
      : program_(program), rule_(std::move(rule)), opts_(opts) {
    if (goal.empty()) throw std::invalid_argument("lemma table: the goal must be non-empty");
    VarId floor = program.max_var();
    for (const auto& l : goal) floor = std::max(floor, max_var_id(l.as_term()));
    ids_.raise_floor(floor + 1);
    new_entry(goal);
  }

  const Program& program() const { return program_; }
  const ControlRuleSpec& rule() const { return rule_; }
  const EngineOptions& options() const { return opts_; }
  std::span<const TableEntry> entries() const { return entries_; }
  std::span<const LemmaNode> nodes() const { return nodes_; }
  const TableEntry& entry(std::size_t i) const { return entries_.at(i); }
  const LemmaNode& node(std::size_t i) const { return nodes_.at(i); }
  const EngineStats& stats() const { return stats_; }
  std::size_t pending() const { return queue_.size(); }
  std::size_t steps_taken() const { return steps_; }
  bool is_root(std::size_t node) const { return entries_[nodes_[node].entry].root == node; }

  /// Performs the next queued operation. Returns false when none is left.
  bool step() {
    if (queue_.empty()) return false;
    Task t = queue_.front();
    queue_.pop_front();
    ++steps_;
    if (t.kind == Task::Kind::predict) {
      predict(t.node);
    } else {
      complete(t.node);
    }
    if (opts_.check_invariants) check_invariants();
    return true;
  }

  /// Runs until no operation applies or the step budget is spent.
  EngineResult run() {
    while (steps_ < opts_.max_steps && step()) {
    }
    return result();
  }

  EngineResult result() const {
    EngineResult r;
    for (const auto& s : entries_.front().solutions) r.solutions.push_back(s.to_clause());
    r.status = queue_.empty() ? EngineResult::Status::fixpoint : EngineResult::Status::step_limited;
    r.stats = stats_;
    return r;
  }

  /// Prediction: tags an untagged node with the control rule and performs the
  /// corresponding action.
  void predict(std::size_t node_id) {
    if (nodes_[node_id].tag) throw EngineInvariantError("prediction on a tagged node");
    ++stats_.predictions;
    const bool root = is_root(node_id);
    RuleTag rt = rule_select(rule_, nodes_[node_id].clause.body, root);
    if (root && rt.kind != RuleTag::Kind::program) {
      throw ControlRuleViolation("a lemma-tree root must be tagged program");
    }
    NodeTag tag;
    tag.kind = rt.kind;
    switch (rt.kind) {
      case RuleTag::Kind::solution: {
        nodes_[node_id].tag = std::move(tag);
        add_solution(nodes_[node_id].entry, nodes_[node_id].clause);
        break;
      }
      case RuleTag::Kind::program: {
        const Literal selected = *rt.selected;
        tag.selected = selected;
        nodes_[node_id].tag = std::move(tag);
        const Label parent = nodes_[node_id].clause;
        const Goal rest = parent.body.minus(std::span<const Literal>(&selected, 1));
        for (const auto& clause : program_.clauses_for(key_of(selected), ids_)) {
          auto mgu = unify(selected, clause.head, opts_.occurs_check);
          if (!mgu) continue;
          add_child(node_id, {mgu->apply(std::span<const Literal>(parent.head)),
                              mgu->apply(rest.united(clause.body))});
        }
        break;
      }
      case RuleTag::Kind::table: {
        tag.subgoal = rt.subgoal;
        const Goal subgoal(rt.subgoal);
        std::optional<std::size_t> found;
        std::optional<GoalMatch> match;
        for (const auto& e : entries_) {
          match = match_goal(e.goal.literals(), subgoal.literals());
          if (match) {
            found = e.index;
            break;
          }
        }
        if (!found) {
          Goal general = rename_apart(abstract(opts_.abstraction, subgoal, ids_), ids_);
          match = match_goal(general.literals(), subgoal.literals());
          if (!match) throw EngineInvariantError("abstraction does not subsume its goal");
          found = new_entry(general);
        }
        for (std::size_t j : match->assignment) tag.paired.push_back(subgoal[j]);
        tag.entry = *found;
        tag.cursor = 0;
        nodes_[node_id].tag = std::move(tag);
        entries_[*found].consumers.push_back(node_id);
        if (!entries_[*found].solutions.empty()) queue_completion(node_id);
        break;
      }
    }
  }

  /// Completion: advances a table node's cursor over one solution and, when
  /// the solution head unifies with the subgoal, adds the resolvent as a child.
  void complete(std::size_t node_id) {
    LemmaNode& n = nodes_[node_id];
    n.completion_queued = false;
    if (!n.tag || n.tag->kind != RuleTag::Kind::table || !n.tag->entry) {
      throw EngineInvariantError("completion on a node that is not table-tagged");
    }
    const TableEntry& e = entries_[*n.tag->entry];
    if (n.tag->cursor >= e.solutions.size()) {
      throw EngineInvariantError("completion with the cursor at the end of the solution list");
    }
    ++stats_.completions;
    const Label& sol = e.solutions[n.tag->cursor++];
    Renamer rename(ids_);
    std::vector<Literal> sol_head = rename(std::span<const Literal>(sol.head));
    std::vector<Literal> sol_body = rename(sol.body.literals());

    Unifier u(opts_.occurs_check);
    bool ok = true;
    for (std::size_t i = 0; ok && i < sol_head.size(); ++i) ok = u.unify(sol_head[i], n.tag->paired[i]);
    const bool more = n.tag->cursor < e.solutions.size();
    if (ok) {
      Substitution theta = u.solution();
      const Label parent = n.clause;
      const Goal rest = parent.body.minus(n.tag->subgoal);
      add_child(node_id, {theta.apply(std::span<const Literal>(parent.head)),
                          theta.apply(rest.united(sol_body))});
    }
    if (more) queue_completion(node_id);
  }

  /// Appends a solution to an entry unless (with answer subsumption on) an
  /// existing solution subsumes it.
  AddOutcome add_solution(std::size_t entry_id, const Label& c) {
    TableEntry& e = entries_[entry_id];
    if (!detail::head_is_instance(e.goal.literals(), c.head)) {
      throw EngineInvariantError("solution head is not an instance of the entry goal");
    }
    if (opts_.answer_subsumption) {
      const Goal candidate = detail::clause_pair_goal(c);
      for (const auto& s : e.solutions) {
        if (match_goal(detail::clause_pair_goal(s).literals(), candidate.literals())) {
          ++stats_.suppressed;
          return AddOutcome::suppressed;
        }
      }
    }
    e.solutions.push_back(c);
    ++stats_.solutions;
    for (std::size_t consumer : e.consumers) {
      if (!nodes_[consumer].completion_queued) queue_completion(consumer);
    }
    return AddOutcome::appended;
  }

  /// Throws EngineInvariantError if a structural invariant is broken.
  void check_invariants() const {
    for (const auto& n : nodes_) {
      const TableEntry& e = entries_[n.entry];
      if (!detail::head_is_instance(e.goal.literals(), n.clause.head)) {
        throw EngineInvariantError("node head is not an instance of its entry goal");
      }
      if (!n.tag && !n.children.empty()) throw EngineInvariantError("untagged node with children");
      if (e.root == n.id && n.tag && n.tag->kind != RuleTag::Kind::program) {
        throw EngineInvariantError("root node not tagged program");
      }
      if (n.tag && n.tag->kind == RuleTag::Kind::table && n.tag->entry) {
        const auto& target = entries_[*n.tag->entry];
        if (n.tag->cursor > target.solutions.size()) throw EngineInvariantError("cursor overrun");
        if (n.tag->cursor < target.solutions.size() && !n.completion_queued) {
          throw EngineInvariantError("cursor behind its list without a queued completion");
        }
      }
    }
  }

 private:
  struct Task {
    enum class Kind { predict, complete };
    Kind kind;
    std::size_t node;
  };

  std::size_t new_entry(const Goal& goal) {
    const std::size_t index = entries_.size();
    TableEntry e;
    e.index = index;
    e.goal = goal;
    e.root = nodes_.size();
    entries_.push_back(std::move(e));
    ++stats_.entries;
    LemmaNode root;
    root.id = nodes_.size();
    root.entry = index;
    root.clause = {std::vector<Literal>(goal.begin(), goal.end()), goal};
    nodes_.push_back(std::move(root));
    ++stats_.nodes;
    queue_.push_back({Task::Kind::predict, nodes_.back().id});
    return index;
  }

  void add_child(std::size_t parent, Label clause) {
    LemmaNode child;
    child.id = nodes_.size();
    child.entry = nodes_[parent].entry;
    child.parent = parent;
    child.clause = std::move(clause);
    nodes_[parent].children.push_back(child.id);
    nodes_.push_back(std::move(child));
    ++stats_.nodes;
    queue_.push_back({Task::Kind::predict, nodes_.back().id});
  }

  void queue_completion(std::size_t node_id) {
    nodes_[node_id].completion_queued = true;
    queue_.push_back({Task::Kind::complete, node_id});
  }

  const Program& program_;
  ControlRuleSpec rule_;
  EngineOptions opts_;
  FreshIds ids_;
  std::vector<TableEntry> entries_;
  std::vector<LemmaNode> nodes_;
  std::deque<Task> queue_;
  std::size_t steps_ = 0;
  EngineStats stats_;
};

/// Runs the lemma table procedure on `goal` and returns the top entry's
/// solution list.
inline EngineResult lt_run(const Program& program, const Goal& goal, const ControlRuleSpec& rule,
                           EngineOptions opts = {}) {
  if (opts.max_steps == 0) throw std::invalid_argument("lt_run: max_steps must be positive");
  LemmaTable table(program, goal, rule, opts);
  return table.run();
}

}  // namespace lemma

#endif  // LEMMA_ENGINE_HPP
