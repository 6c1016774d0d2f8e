#ifndef LEMMA_DOT_HPP
#define LEMMA_DOT_HPP

// Graphviz rendering of a lemma table: one cluster per entry, tree edges
// solid, and a dashed edge from every table-tagged node to the root of the
// entry it reads solutions from.

#include <sstream>
#include <string>

#include "lemma/engine.hpp"
#include "lemma/syntax.hpp"

namespace lemma {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string node_label(const LemmaTable& t, const LemmaNode& n) {
  std::string text = clause_to_string(n.clause.head, n.clause.body.literals());
  text.pop_back();  // trailing '.'
  text = dot_escape(text);
  if (!n.tag) return text + "\\n[untagged]";
  switch (n.tag->kind) {
    case RuleTag::Kind::solution:
      return text + "\\n[solution]";
    case RuleTag::Kind::program: {
      CanonicalNamer namer;
      // Name the selected literal consistently with the clause text.
      for (const auto& l : n.clause.head) to_string(l, std::ref(namer));
      for (const auto& l : n.clause.body) to_string(l, std::ref(namer));
      return text + "\\n[program " + dot_escape(to_string(*n.tag->selected, std::ref(namer))) + "]";
    }
    case RuleTag::Kind::table:
      return text + "\\n[table -> entry " + std::to_string(*n.tag->entry) + ", " +
             std::to_string(n.tag->cursor) + "/" +
             std::to_string(t.entry(*n.tag->entry).solutions.size()) + "]";
  }
  return text;
}

}  // namespace detail

inline std::string export_dot(const LemmaTable& t) {
  std::ostringstream os;
  os << "digraph lemma_table {\n"
     << "  compound=true;\n"
     << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& e : t.entries()) {
    os << "  subgraph cluster_e" << e.index << " {\n"
       << "    label=\"entry " << e.index << ": "
       << detail::dot_escape(clause_to_string(e.goal.literals(), {})) << "\";\n";
    for (const auto& n : t.nodes()) {
      if (n.entry != e.index) continue;
      os << "    n" << n.id << " [label=\"" << detail::node_label(t, n) << "\"";
      if (n.id == e.root) os << ", fontname=\"Helvetica-Bold\", penwidth=2";
      if (n.tag && n.tag->kind == RuleTag::Kind::solution) {
        os << ", fontname=\"Helvetica-Oblique\", style=rounded";
      }
      os << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& n : t.nodes()) {
    for (std::size_t c : n.children) os << "  n" << n.id << " -> n" << c << ";\n";
  }
  for (const auto& n : t.nodes()) {
    if (n.tag && n.tag->kind == RuleTag::Kind::table && n.tag->entry) {
      const auto& target = t.entry(*n.tag->entry);
      os << "  n" << n.id << " -> n" << target.root << " [style=dashed, lhead=cluster_e"
         << target.index << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace lemma

#endif  // LEMMA_DOT_HPP
