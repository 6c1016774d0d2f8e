#ifndef LEMMA_TESTS_TEST_UTIL_HPP
#define LEMMA_TESTS_TEST_UTIL_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/lemma.hpp"

namespace lemma::testing {

/// Literals read in one variable scope, with access to the variables by name.
struct Parsed {
  std::vector<Literal> lits;
  std::map<std::string, Term> vars;

  const Term& var(const std::string& name) const { return vars.at(name); }
  Goal goal() const { return Goal(lits); }
  Goal goal(std::size_t from, std::size_t to) const {
    return Goal(std::vector<Literal>(lits.begin() + from, lits.begin() + to));
  }
};

inline Parsed parse(std::string_view src, FreshIds& ids) {
  TermReader r(src, ids);
  Parsed p;
  if (r.at_eof()) return p;
  do {
    p.lits.push_back(r.read_literal());
  } while (r.accept_punct(","));
  if (!r.at_eof()) r.fail("trailing input in test literal list");
  p.vars = r.scope();
  return p;
}

inline Term term(std::string_view src, FreshIds& ids) { return parse_term(src, ids); }

inline std::string str(const Term& t) { return to_string(t); }

/// Canonical text of a goal or clause, independent of variable ids.
inline std::string canon(std::span<const Literal> ls) {
  CanonicalNamer n;
  return to_string(ls, std::ref(n));
}
inline std::string canon(const Goal& g) { return canon(g.literals()); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(LEMMA_DATA_DIR) + "/" + name; }

inline Program kim_program(FreshIds& ids) { return parse_program(read_text(data_path("kim.lp")), ids); }

}  // namespace lemma::testing

#endif  // LEMMA_TESTS_TEST_UTIL_HPP
