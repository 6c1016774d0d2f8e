#ifndef LEMMA_TESTS_ORACLES_HPP
#define LEMMA_TESTS_ORACLES_HPP

// Reference procedures used only by tests. None of them shares code paths
// with the engines they check beyond the term representation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lemma/lemma.hpp"

namespace lemma::testing {

// ---------------------------------------------------------------------------
// Binary trees and CFG derivations

/// Shapes of full binary trees with n leaves, built explicitly and counted.
inline std::vector<std::string> enumerate_binary_trees(int leaves) {
  if (leaves == 1) return {"a"};
  std::vector<std::string> out;
  for (int left = 1; left < leaves; ++left) {
    for (const auto& l : enumerate_binary_trees(left)) {
      for (const auto& r : enumerate_binary_trees(leaves - left)) out.push_back("(" + l + " " + r + ")");
    }
  }
  return out;
}

/// Every (string, tree) pair derivable from `symbol` with a yield of at most
/// `max_len` words. Trees are rendered in the wf/y term syntax so they can
/// be compared with engine output. Grammars must have no unary cycles.
class CfgDerivations {
 public:
  CfgDerivations(const Cfg& g, std::size_t max_len) : g_(g), max_len_(max_len) {}

  /// Derivations of `symbol` with a yield of exactly `len` words.
  const std::vector<std::pair<std::vector<std::string>, std::string>>& derive(const std::string& nt,
                                                                               std::size_t len) {
    auto key = std::make_pair(nt, len);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!in_progress_.insert(key).second) throw std::logic_error("unary cycle in test grammar");
    std::vector<std::pair<std::vector<std::string>, std::string>> out;
    const std::string c = category_symbol(nt);
    for (const auto& r : g_.rules) {
      if (r.lhs != nt) continue;
      if (r.rhs.front().terminal) {
        if (len == 1) out.push_back({{r.rhs[0].name}, c + "-" + r.rhs[0].name});
      } else if (r.rhs.size() == 1) {
        for (const auto& [s, t] : derive(r.rhs[0].name, len)) out.push_back({s, c + "/[" + t + "]"});
      } else {
        for (std::size_t k = 1; k < len; ++k) {
          const auto left = derive(r.rhs[0].name, k);
          const auto right = derive(r.rhs[1].name, len - k);
          for (const auto& [ls, lt] : left) {
            for (const auto& [rs, rt] : right) {
              std::vector<std::string> s = ls;
              s.insert(s.end(), rs.begin(), rs.end());
              out.push_back({s, c + "/[" + lt + "," + rt + "]"});
            }
          }
        }
      }
    }
    in_progress_.erase(key);
    return memo_[key] = std::move(out);
  }

  /// string -> set of trees, over all yields from length 1 to max_len.
  std::map<std::vector<std::string>, std::set<std::string>> language() {
    std::map<std::vector<std::string>, std::set<std::string>> out;
    for (std::size_t n = 1; n <= max_len_; ++n) {
      for (const auto& [s, t] : derive(g_.start, n)) out[s].insert(t);
    }
    return out;
  }

 private:
  const Cfg& g_;
  std::size_t max_len_;
  std::map<std::pair<std::string, std::size_t>,
           std::vector<std::pair<std::vector<std::string>, std::string>>>
      memo_;
  std::set<std::pair<std::string, std::size_t>> in_progress_;
};

// ---------------------------------------------------------------------------
// Datalog: naive bottom-up least model

using GroundAtom = std::string;  // printed ground literal

/// Least Herbrand model of a function-free, range-restricted program,
/// computed by naive iteration over all ground instances.
inline std::set<GroundAtom> least_model(const Program& p) {
  std::set<std::string> constants;
  for (const auto& c : p.clauses()) {
    auto visit = [&](const Literal& l) {
      for (const auto& a : l.args()) {
        if (!a.is_var()) constants.insert(a.name());
      }
    };
    visit(c.head);
    for (const auto& b : c.body) visit(b);
  }
  std::vector<std::string> universe(constants.begin(), constants.end());
  std::set<GroundAtom> model;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : p.clauses()) {
      std::vector<VarId> vars;
      std::set<VarId> seen;
      collect_vars(c.head.as_term(), vars, seen);
      for (const auto& b : c.body) collect_vars(b.as_term(), vars, seen);
      if (universe.empty() && !vars.empty()) continue;
      std::vector<std::size_t> pick(vars.size(), 0);
      for (;;) {
        Substitution::Map m;
        for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], Term::atom(universe[pick[i]]));
        Substitution s(std::move(m));
        bool holds = true;
        for (const auto& b : c.body) {
          if (!model.count(to_string(s.apply(b)))) {
            holds = false;
            break;
          }
        }
        if (holds && model.insert(to_string(s.apply(c.head))).second) changed = true;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == universe.size()) pick[i++] = 0;
        if (i == pick.size() || universe.empty()) break;
      }
    }
  }
  return model;
}

/// Ground instances of `query` over `universe` that hold in `model`.
inline std::set<std::string> ground_answers(std::span<const Literal> query,
                                            const std::set<GroundAtom>& model,
                                            const std::vector<std::string>& universe) {
  std::vector<VarId> vars;
  std::set<VarId> seen;
  for (const auto& l : query) collect_vars(l.as_term(), vars, seen);
  std::set<std::string> out;
  std::vector<std::size_t> pick(vars.size(), 0);
  for (;;) {
    Substitution::Map m;
    for (std::size_t i = 0; i < vars.size(); ++i) m.emplace(vars[i], Term::atom(universe[pick[i]]));
    Substitution s(std::move(m));
    bool holds = true;
    for (const auto& l : query) holds = holds && model.count(to_string(s.apply(l))) > 0;
    if (holds) out.insert(to_string(s.apply(query)));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == universe.size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

/// True if `goal` has an SLD refutation of length at most `max_depth`,
/// searched by iterative deepening with the leftmost rule.
inline bool sld_proves(const Program& p, std::span<const Literal> goal, std::size_t max_depth) {
  SldOptions opts;
  opts.max_answers = 1;
  for (std::size_t d = 1; d <= max_depth; ++d) {
    auto out = sld_solve(p, goal, SelectionRule::leftmost, d, opts);
    if (!out.answers.empty()) return true;
    if (out.status == SldOutcome::Status::exhausted) return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Random programs

/// Programs over predicates p/2, q/2, r/1 and constants a, b, c. Rule bodies
/// only use predicates lower in the order p > q > r; recursive programs add
/// one left- or right-recursive p rule.
inline std::string random_datalog(std::uint32_t seed, bool recursive) {
  std::mt19937 rng(seed);
  const std::vector<std::string> consts{"a", "b", "c"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  std::string src;
  for (const auto& c : consts) {
    if (coin(0.6)) src += "r(" + c + ").\n";
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (coin(0.7)) src += "q(" + consts[pick(3)] + "," + consts[pick(3)] + ").\n";
  }
  src += "q(X,Y) :- r(X), r(Y).\n";
  if (coin(0.5)) src += "q(X,X) :- r(X).\n";
  for (std::size_t i = 0; i < 2; ++i) {
    if (coin(0.6)) src += "p(" + consts[pick(3)] + "," + consts[pick(3)] + ").\n";
  }
  const std::vector<std::string> p_rules{
      "p(X,Y) :- q(X,Y).",
      "p(X,Y) :- q(X,Z), q(Z,Y).",
      "p(X,Y) :- q(Y,X), r(X).",
      "p(X,c) :- r(X).",
      "p(X,Y) :- q(X,Y), r(Y).",
  };
  for (const auto& r : p_rules) {
    if (coin(0.5)) src += r + "\n";
  }
  if (recursive) {
    src += coin(0.5) ? "p(X,Y) :- q(X,Z), p(Z,Y).\n" : "p(X,Y) :- p(X,Z), q(Z,Y).\n";
  }
  return src;
}

inline std::vector<std::string> random_queries(std::uint32_t seed) {
  std::mt19937 rng(seed * 7919u + 13u);
  const std::vector<std::string> pool{"p(X,Y)", "p(a,Y)", "p(X,c)", "q(X,Y)", "q(X,X)",
                                      "r(X)",   "p(X,Y), r(Y)", "q(X,Y), p(Y,Z)", "p(b,b)"};
  std::vector<std::string> out;
  for (int i = 0; i < 3; ++i) out.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  return out;
}

/// Hand-written terminating Datalog programs with a representative query each.
struct CorpusCase {
  std::string name;
  std::string program;
  std::string query;
};

inline std::vector<CorpusCase> handwritten_datalog() {
  return {
      {"facts", "p(a). p(b). q(b).", "p(X), q(X)"},
      {"join", "q(a). q(b). r(b).", "q(X), r(X)"},
      {"chain-right",
       "e(a,b). e(b,c). e(c,d).\npath(X,Y) :- e(X,Y).\npath(X,Y) :- e(X,Z), path(Z,Y).",
       "path(a,Y)"},
      {"chain-left",
       "e(a,b). e(b,c). e(c,d).\npath(X,Y) :- e(X,Y).\npath(X,Y) :- path(X,Z), e(Z,Y).",
       "path(X,d)"},
      {"cycle",
       "e(a,b). e(b,a). e(b,c).\npath(X,Y) :- e(X,Y).\npath(X,Y) :- path(X,Z), e(Z,Y).",
       "path(a,Y)"},
      {"double-recursion",
       "e(a,b). e(b,c).\nt(X,Y) :- e(X,Y).\nt(X,Y) :- t(X,Z), t(Z,Y).", "t(X,Y)"},
      {"same-generation",
       "par(b,a). par(c,a). par(d,b). par(e,c).\nsg(X,X) :- par(X,_).\nsg(X,Y) :- par(X,P), sg(P,Q), par(Y,Q).",
       "sg(d,Y)"},
      {"siblings", "par(b,a). par(c,a).\nsib(X,Y) :- par(X,P), par(Y,P).", "sib(b,Y)"},
      {"grandparent", "par(a,b). par(b,c). par(b,d).\ngp(X,Z) :- par(X,Y), par(Y,Z).", "gp(a,Z)"},
      {"no-answers", "p(a). q(b).", "p(X), q(X)"},
      {"ground-query",
       "e(a,b). e(b,c).\npath(X,Y) :- e(X,Y).\npath(X,Y) :- e(X,Z), path(Z,Y).", "path(a,c)"},
      {"mutual",
       "e(a,b). e(b,c). e(c,a).\neven(X,X) :- e(X,_).\neven(X,Y) :- e(X,Z), odd(Z,Y).\nodd(X,Y) :- e(X,Z), even(Z,Y).",
       "odd(a,Y)"},
  };
}

}  // namespace lemma::testing

#endif  // LEMMA_TESTS_ORACLES_HPP
