#ifndef LEMMA_TERM_HPP
#define LEMMA_TERM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lemma {

using VarId = std::int64_t;

/// Source of variable ids that have never been handed out before.
///
/// One instance per engine run. Ids below the floor are assumed to belong to
/// terms that already exist (parsed programs, queries).
class FreshIds {
 public:
  explicit FreshIds(VarId floor = 1) : next_(floor) {}
  VarId next() { return next_++; }
  VarId peek() const { return next_; }
  void raise_floor(VarId floor) {
    if (floor > next_) next_ = floor;
  }

 private:
  VarId next_;
};

/// A first-order term: either a variable or a compound f(t1..tn).
/// Atomic constants are compounds with no arguments. Terms are immutable and
/// share structure, so copies are cheap.
class Term {
 public:
  static Term var(VarId id, std::string name = {}) {
    return Term(std::make_shared<const Node>(Node{true, id, std::move(name), {}}));
  }
  static Term atom(std::string name) {
    return Term(std::make_shared<const Node>(Node{false, 0, std::move(name), {}}));
  }
  static Term compound(std::string functor, std::vector<Term> args) {
    return Term(std::make_shared<const Node>(
        Node{false, 0, std::move(functor), std::move(args)}));
  }

  bool is_var() const { return node_->is_var; }
  bool is_compound() const { return !node_->is_var; }
  bool is_atomic() const { return !node_->is_var && node_->args.empty(); }
  VarId var_id() const { return node_->id; }
  /// Functor for compounds, source name (possibly empty) for variables.
  const std::string& name() const { return node_->name; }
  std::size_t arity() const { return node_->args.size(); }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) return a.var_id() == b.var_id();
    if (a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (!(a.arg(i) == b.arg(i))) return false;
    }
    return true;
  }

 private:
  struct Node {
    bool is_var;
    VarId id;
    std::string name;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// An atom p(t1..tn). Stored as the compound term itself so unification and
/// matching treat literals and terms uniformly.
class Literal {
 public:
  Literal(std::string predicate, std::vector<Term> args)
      : term_(args.empty() ? Term::atom(std::move(predicate))
                           : Term::compound(std::move(predicate), std::move(args))) {}
  explicit Literal(Term t) : term_(std::move(t)) {
    if (term_.is_var()) throw std::invalid_argument("a literal cannot be a variable");
  }

  const std::string& predicate() const { return term_.name(); }
  std::size_t arity() const { return term_.arity(); }
  std::span<const Term> args() const { return term_.args(); }
  const Term& as_term() const { return term_; }

  friend bool operator==(const Literal& a, const Literal& b) { return a.term_ == b.term_; }

 private:
  Term term_;
};

struct PredicateKey {
  std::string name;
  std::size_t arity = 0;
  auto operator<=>(const PredicateKey&) const = default;
};

inline PredicateKey key_of(const Literal& l) { return {l.predicate(), l.arity()}; }

// ---------------------------------------------------------------------------
// Variable collection

inline void collect_vars(const Term& t, std::vector<VarId>& out, std::set<VarId>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.var_id()).second) out.push_back(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out, seen);
}

/// Variables of t in first-occurrence order.
inline std::vector<VarId> vars_of(const Term& t) {
  std::vector<VarId> out;
  std::set<VarId> seen;
  collect_vars(t, out, seen);
  return out;
}

inline bool occurs_in(VarId v, const Term& t) {
  if (t.is_var()) return t.var_id() == v;
  for (const auto& a : t.args()) {
    if (occurs_in(v, a)) return true;
  }
  return false;
}

inline bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const auto& a : t.args()) {
    if (!is_ground(a)) return false;
  }
  return true;
}

inline VarId max_var_id(const Term& t) {
  if (t.is_var()) return t.var_id();
  VarId m = 0;
  for (const auto& a : t.args()) m = std::max(m, max_var_id(a));
  return m;
}

// ---------------------------------------------------------------------------
// Canonical ordering

namespace detail {

/// Structural comparison with variables numbered by first occurrence. The
/// numbering maps are shared across calls so a whole literal sequence can be
/// compared with one numbering per side.
inline int compare_shape(const Term& a, const Term& b, std::map<VarId, int>& na,
                         std::map<VarId, int>& nb) {
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.is_var()) {
    int ia = na.try_emplace(a.var_id(), static_cast<int>(na.size())).first->second;
    int ib = nb.try_emplace(b.var_id(), static_cast<int>(nb.size())).first->second;
    return ia < ib ? -1 : (ia > ib ? 1 : 0);
  }
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (int c = compare_shape(a.arg(i), b.arg(i), na, nb); c != 0) return c;
  }
  return 0;
}

/// Plain structural order on raw variable ids; breaks ties between variants.
inline int compare_raw(const Term& a, const Term& b) {
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.is_var()) return a.var_id() < b.var_id() ? -1 : (a.var_id() > b.var_id() ? 1 : 0);
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (int c = compare_raw(a.arg(i), b.arg(i)); c != 0) return c;
  }
  return 0;
}

}  // namespace detail

/// Canonical literal order: predicate name, then arity, then argument
/// structure with each literal's variables numbered by first occurrence,
/// then raw variable ids.
inline bool canonical_less(const Literal& a, const Literal& b) {
  if (int c = a.predicate().compare(b.predicate()); c != 0) return c < 0;
  if (a.arity() != b.arity()) return a.arity() < b.arity();
  std::map<VarId, int> na, nb;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (int c = detail::compare_shape(a.args()[i], b.args()[i], na, nb); c != 0) return c < 0;
  }
  return detail::compare_raw(a.as_term(), b.as_term()) < 0;
}

/// A conjunctive set of literals held in canonical order with syntactic
/// duplicates removed.
class Goal {
 public:
  Goal() = default;
  explicit Goal(std::vector<Literal> lits) : lits_(std::move(lits)) { canonicalize(); }
  Goal(std::initializer_list<Literal> lits) : lits_(lits) { canonicalize(); }

  std::span<const Literal> literals() const { return lits_; }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  bool contains(const Literal& l) const {
    for (const auto& x : lits_) {
      if (x == l) return true;
    }
    return false;
  }

  /// Set difference by syntactic identity.
  Goal minus(std::span<const Literal> remove) const {
    std::vector<Literal> out;
    for (const auto& l : lits_) {
      bool drop = false;
      for (const auto& r : remove) {
        if (l == r) {
          drop = true;
          break;
        }
      }
      if (!drop) out.push_back(l);
    }
    return Goal(std::move(out));
  }

  Goal united(std::span<const Literal> more) const {
    std::vector<Literal> out(lits_.begin(), lits_.end());
    out.insert(out.end(), more.begin(), more.end());
    return Goal(std::move(out));
  }

  friend bool operator==(const Goal& a, const Goal& b) { return a.lits_ == b.lits_; }

 private:
  void canonicalize() {
    std::stable_sort(lits_.begin(), lits_.end(), canonical_less);
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  }
  std::vector<Literal> lits_;
};

/// ⟨head ← body⟩ over goals. Read as "if all of body hold, all of head hold".
struct GeneralizedClause {
  Goal head;
  Goal body;
  friend bool operator==(const GeneralizedClause&, const GeneralizedClause&) = default;
};

// ---------------------------------------------------------------------------
// Substitutions

/// Finite map from variable ids to terms, applied simultaneously.
class Substitution {
 public:
  using Map = std::map<VarId, Term>;

  Substitution() = default;
  explicit Substitution(Map m) : map_(std::move(m)) {
    for (auto it = map_.begin(); it != map_.end();) {
      if (it->second.is_var() && it->second.var_id() == it->first) {
        it = map_.erase(it);
      } else {
        ++it;
      }
    }
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& bindings() const { return map_; }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  const Term* lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }

  void bind(VarId v, Term t) {
    if (t.is_var() && t.var_id() == v) {
      map_.erase(v);
      return;
    }
    map_.insert_or_assign(v, std::move(t));
  }

  Term apply(const Term& t) const {
    if (map_.empty()) return t;
    if (t.is_var()) {
      const Term* b = lookup(t.var_id());
      return b ? *b : t;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(apply(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::compound(t.name(), std::move(args)) : t;
  }

  Literal apply(const Literal& l) const { return Literal(apply(l.as_term())); }

  std::vector<Literal> apply(std::span<const Literal> ls) const {
    std::vector<Literal> out;
    out.reserve(ls.size());
    for (const auto& l : ls) out.push_back(apply(l));
    return out;
  }

  Goal apply(const Goal& g) const { return Goal(apply(g.literals())); }

  GeneralizedClause apply(const GeneralizedClause& c) const {
    return {apply(c.head), apply(c.body)};
  }

  /// Keeps only the bindings of the listed variables.
  Substitution restricted(std::span<const VarId> vars) const {
    Map m;
    for (VarId v : vars) {
      if (const Term* b = lookup(v)) m.emplace(v, *b);
    }
    return Substitution(std::move(m));
  }

  bool is_idempotent() const {
    for (const auto& [v, t] : map_) {
      for (const auto& [w, _] : map_) {
        if (occurs_in(w, t)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.map_ == b.map_;
  }

 private:
  Map map_;
};

/// apply(t, compose(a, b)) == apply(apply(t, a), b).
inline Substitution compose_subst(const Substitution& first, const Substitution& second) {
  Substitution::Map m;
  for (const auto& [v, t] : first) m.emplace(v, second.apply(t));
  for (const auto& [v, t] : second) m.emplace(v, t);  // no-op where first binds v
  return Substitution(std::move(m));
}

// ---------------------------------------------------------------------------
// Unification

/// Incremental unifier over triangular bindings. Several pairs can be unified
/// into the same store; `solution()` resolves it into an idempotent mgu.
class Unifier {
 public:
  explicit Unifier(bool occurs_check = true) : occurs_check_(occurs_check) {}

  bool unify(const Term& a, const Term& b) {
    std::vector<std::pair<Term, Term>> stack{{a, b}};
    while (!stack.empty()) {
      auto [x, y] = std::move(stack.back());
      stack.pop_back();
      x = walk(x);
      y = walk(y);
      if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
      if (x.is_var()) {
        if (!bind(x.var_id(), y)) return false;
        continue;
      }
      if (y.is_var()) {
        if (!bind(y.var_id(), x)) return false;
        continue;
      }
      if (x.name() != y.name() || x.arity() != y.arity()) return false;
      for (std::size_t i = x.arity(); i-- > 0;) stack.emplace_back(x.arg(i), y.arg(i));
    }
    return true;
  }

  bool unify(const Literal& a, const Literal& b) {
    if (a.predicate() != b.predicate() || a.arity() != b.arity()) return false;
    return unify(a.as_term(), b.as_term());
  }

  Substitution solution() const {
    Substitution::Map m;
    for (const auto& [v, _] : bindings_) m.emplace(v, resolve(Term::var(v)));
    return Substitution(std::move(m));
  }

 private:
  Term walk(Term t) const {
    while (t.is_var()) {
      auto it = bindings_.find(t.var_id());
      if (it == bindings_.end()) break;
      t = it->second;
    }
    return t;
  }

  bool occurs(VarId v, const Term& t) const {
    Term w = walk(t);
    if (w.is_var()) return w.var_id() == v;
    for (const auto& a : w.args()) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  bool bind(VarId v, const Term& t) {
    if (occurs_check_ && occurs(v, t)) return false;
    bindings_.emplace(v, t);
    return true;
  }

  Term resolve(const Term& t, int depth = 0) const {
    Term w = walk(t);
    if (w.is_var() || w.arity() == 0) return w;
    // Without the occurs check a cyclic binding would recurse forever.
    if (!occurs_check_ && depth > 10000) throw std::runtime_error("cyclic term in unifier");
    std::vector<Term> args;
    args.reserve(w.arity());
    for (const auto& a : w.args()) args.push_back(resolve(a, depth + 1));
    return Term::compound(w.name(), std::move(args));
  }

  bool occurs_check_;
  std::map<VarId, Term> bindings_;
};

/// Most general unifier of two terms, or nullopt when none exists.
inline std::optional<Substitution> unify(const Term& a, const Term& b, bool occurs_check = true) {
  Unifier u(occurs_check);
  if (!u.unify(a, b)) return std::nullopt;
  return u.solution();
}

inline std::optional<Substitution> unify(const Literal& a, const Literal& b,
                                         bool occurs_check = true) {
  Unifier u(occurs_check);
  if (!u.unify(a, b)) return std::nullopt;
  return u.solution();
}

// ---------------------------------------------------------------------------
// Renaming

class Renamer {
 public:
  explicit Renamer(FreshIds& ids) : ids_(ids) {}

  Term operator()(const Term& t) {
    if (t.is_var()) {
      auto it = map_.find(t.var_id());
      if (it == map_.end()) it = map_.emplace(t.var_id(), Term::var(ids_.next(), t.name())).first;
      return it->second;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back((*this)(a));
    return Term::compound(t.name(), std::move(args));
  }

  Literal operator()(const Literal& l) { return Literal((*this)(l.as_term())); }

  std::vector<Literal> operator()(std::span<const Literal> ls) {
    std::vector<Literal> out;
    out.reserve(ls.size());
    for (const auto& l : ls) out.push_back((*this)(l));
    return out;
  }

  Goal operator()(const Goal& g) { return Goal((*this)(g.literals())); }

 private:
  FreshIds& ids_;
  std::map<VarId, Term> map_;
};

inline Goal rename_apart(const Goal& g, FreshIds& ids) { return Renamer(ids)(g); }

inline GeneralizedClause rename_apart(const GeneralizedClause& c, FreshIds& ids) {
  Renamer r(ids);
  Goal head = r(c.head);
  Goal body = r(c.body);
  return {std::move(head), std::move(body)};
}

// ---------------------------------------------------------------------------
// Matching and goal subsumption

/// One-way matching: binds variables of `pattern` so that it becomes `target`.
/// Variables of `target` are treated as constants. In variant mode, pattern
/// variables may only map to distinct target variables.
class Matcher {
 public:
  explicit Matcher(bool variant = false) : variant_(variant) {}

  bool match(const Term& pattern, const Term& target) {
    if (pattern.is_var()) {
      if (auto it = map_.find(pattern.var_id()); it != map_.end()) return it->second == target;
      if (variant_) {
        if (!target.is_var() || !images_.insert(target.var_id()).second) return false;
      }
      map_.emplace(pattern.var_id(), target);
      return true;
    }
    if (target.is_var()) return false;
    if (pattern.name() != target.name() || pattern.arity() != target.arity()) return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i) {
      if (!match(pattern.arg(i), target.arg(i))) return false;
    }
    return true;
  }

  bool match(const Literal& pattern, const Literal& target) {
    if (pattern.predicate() != target.predicate() || pattern.arity() != target.arity()) {
      return false;
    }
    return match(pattern.as_term(), target.as_term());
  }

  const Term* lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }

  Substitution substitution() const { return Substitution(Substitution::Map(map_.begin(), map_.end())); }

 private:
  bool variant_;
  std::map<VarId, Term> map_;
  std::set<VarId> images_;
};

/// Result of goal subsumption: the substitution plus, for each literal of the
/// general goal (in its order), the index of the literal of the specific goal
/// it was mapped onto.
struct GoalMatch {
  Substitution subst;
  std::vector<std::size_t> assignment;
};

namespace detail {

inline bool search_goal_match(std::span<const Literal> general, std::span<const Literal> specific,
                              std::size_t i, const Matcher& m, std::vector<std::size_t>& assign,
                              std::vector<int>& cover, std::size_t covered, bool bijective,
                              std::optional<GoalMatch>& out) {
  if (i == general.size()) {
    if (covered != specific.size()) return false;
    out = GoalMatch{m.substitution(), assign};
    return true;
  }
  // Every remaining uncovered target needs some remaining source literal.
  if (specific.size() - covered > general.size() - i) return false;
  for (std::size_t j = 0; j < specific.size(); ++j) {
    if (bijective && cover[j] > 0) continue;
    Matcher next = m;
    if (!next.match(general[i], specific[j])) continue;
    assign[i] = j;
    std::size_t now_covered = covered + (cover[j] == 0 ? 1 : 0);
    ++cover[j];
    if (search_goal_match(general, specific, i + 1, next, assign, cover, now_covered, bijective,
                          out)) {
      return true;
    }
    --cover[j];
  }
  return false;
}

}  // namespace detail

/// Finds θ with {general}θ = {specific} as sets. Literal correspondences are
/// searched in canonical order with backtracking; the first success wins.
inline std::optional<GoalMatch> match_goal(std::span<const Literal> general,
                                           std::span<const Literal> specific) {
  if (general.empty() || specific.empty()) {
    if (general.empty() && specific.empty()) return GoalMatch{};
    return std::nullopt;
  }
  std::vector<std::size_t> assign(general.size());
  std::vector<int> cover(specific.size(), 0);
  std::optional<GoalMatch> out;
  detail::search_goal_match(general, specific, 0, Matcher{}, assign, cover, 0, false, out);
  return out;
}

inline std::optional<Substitution> subsumes_goal(const Goal& general, const Goal& specific) {
  auto m = match_goal(general.literals(), specific.literals());
  if (!m) return std::nullopt;
  return std::move(m->subst);
}

/// True when the goals differ only by a bijective renaming of variables.
inline bool variant_eq(std::span<const Literal> a, std::span<const Literal> b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<std::size_t> assign(a.size());
  std::vector<int> cover(b.size(), 0);
  std::optional<GoalMatch> out;
  return detail::search_goal_match(a, b, 0, Matcher{true}, assign, cover, 0, true, out);
}

inline bool variant_eq(const Goal& a, const Goal& b) {
  return variant_eq(a.literals(), b.literals());
}

inline bool variant_eq(const Term& a, const Term& b) {
  Matcher m(true);
  return m.match(a, b);
}

// ---------------------------------------------------------------------------
// Abstraction

/// Goal generalization used when a new table entry is created.
struct AbstractionOp {
  enum class Kind { identity, depth };
  Kind kind = Kind::identity;
  int max_depth = 0;

  static AbstractionOp identity() { return {}; }
  static AbstractionOp depth(int d) {
    if (d < 1) throw std::invalid_argument("depth abstraction needs a positive depth");
    return {Kind::depth, d};
  }
  friend bool operator==(const AbstractionOp&, const AbstractionOp&) = default;
};

namespace detail {

// Term depth counts a constant or variable as 1 and f(args) as 1 + max(args).
// A subterm rooted at depth k survives if it fits in the remaining budget.
inline Term truncate_term(const Term& t, int level, int max_depth, FreshIds& ids) {
  if (t.is_var() || t.arity() == 0) return t;
  if (level >= max_depth) return Term::var(ids.next());
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(truncate_term(a, level + 1, max_depth, ids));
  return Term::compound(t.name(), std::move(args));
}

}  // namespace detail

inline Goal abstract(const AbstractionOp& alpha, const Goal& g, FreshIds& ids) {
  if (alpha.kind == AbstractionOp::Kind::identity) return g;
  std::vector<Literal> out;
  out.reserve(g.size());
  for (const auto& l : g) {
    std::vector<Term> args;
    for (const auto& a : l.args()) args.push_back(detail::truncate_term(a, 1, alpha.max_depth, ids));
    out.emplace_back(l.predicate(), std::move(args));
  }
  return Goal(std::move(out));
}

}  // namespace lemma

#endif  // LEMMA_TERM_HPP
