#include <set>

#include <gtest/gtest.h>

#include "support/test_util.hpp"

using namespace lemma;
using lemma::testing::kim_program;

TEST(ParseProgram, PreTerminalFact) {
  Program p = parse_program("wf(np-kim, np).");
  ASSERT_EQ(p.size(), 1u);
  const Literal& h = p.clauses()[0].head;
  EXPECT_EQ(h.predicate(), "wf");
  ASSERT_EQ(h.arity(), 2u);
  const Term& t = h.args()[0];
  EXPECT_EQ(t.name(), "-");
  ASSERT_EQ(t.arity(), 2u);
  EXPECT_EQ(t.arg(0).name(), "np");
  EXPECT_EQ(t.arg(1).name(), "kim");
  EXPECT_TRUE(p.clauses()[0].body.empty());
}

TEST(ParseProgram, ListSugarAndAnonymous) {
  Program p = parse_program("y(_-Word, [Word|Words], Words).");
  ASSERT_EQ(p.size(), 1u);
  auto args = p.clauses()[0].head.args();
  ASSERT_EQ(args[0].name(), "-");
  EXPECT_TRUE(args[0].arg(0).is_var());
  EXPECT_TRUE(args[0].arg(1).is_var());
  const Term word = args[0].arg(1);
  EXPECT_EQ(args[1].name(), ".");
  EXPECT_EQ(args[1].arg(0), word);
  EXPECT_EQ(args[1].arg(1), args[2]);
  EXPECT_NE(args[0].arg(0), word);
}

TEST(ParseProgram, OperatorPrecedence) {
  FreshIds ids;
  // '/' binds tighter than '-', both left-associative.
  Term t = parse_term("a-b/c-d", ids);
  EXPECT_EQ(t.name(), "-");
  EXPECT_EQ(t.arg(1).name(), "d");
  EXPECT_EQ(t.arg(0).name(), "-");
  EXPECT_EQ(t.arg(0).arg(1).name(), "/");
  Term u = parse_term("a/b/c", ids);
  EXPECT_EQ(u.arg(0).name(), "/");
  EXPECT_EQ(u.arg(1).name(), "c");
}

TEST(ParseProgram, Empty) {
  EXPECT_TRUE(parse_program("").empty());
  EXPECT_TRUE(parse_program("% only a comment\n").empty());
}

TEST(ParseProgram, ErrorsCarryPosition) {
  try {
    parse_program("p(a).\nq(b) :- r(c\n");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  try {
    parse_program("p(a).\n  q(b) r.\n");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 8);
  }
  EXPECT_THROW(parse_program("p(a)"), SyntaxError);
  EXPECT_THROW(parse_program("X."), SyntaxError);
  EXPECT_THROW(parse_program("[](a)."), SyntaxError);
}

TEST(ParseProgram, SourceOrderAndArityKeys) {
  Program p = parse_program("p(a). p(a,b). p(c).");
  ASSERT_EQ(p.size(), 3u);
  FreshIds ids(100);
  auto one = p.clauses_for({"p", 1}, ids);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(to_string(one[0].head), "p(a)");
  EXPECT_EQ(to_string(one[1].head), "p(c)");
  EXPECT_EQ(p.clauses_for({"p", 2}, ids).size(), 1u);
}

TEST(ClausesFor, KimGrammarCounts) {
  FreshIds ids;
  Program p = kim_program(ids);
  EXPECT_EQ(p.clauses_for({"wf", 2}, ids).size(), 6u);
  EXPECT_EQ(p.clauses_for({"y", 3}, ids).size(), 3u);
  EXPECT_EQ(p.clauses_for({"parse", 2}, ids).size(), 1u);
  EXPECT_TRUE(p.clauses_for({"unknown", 0}, ids).empty());
}

TEST(ClausesFor, NoSharedVariables) {
  FreshIds ids;
  Program p = kim_program(ids);
  for (const PredicateKey& key : {PredicateKey{"wf", 2}, PredicateKey{"y", 3}}) {
    auto cs = p.clauses_for(key, ids);
    auto again = p.clauses_for(key, ids);
    cs.insert(cs.end(), again.begin(), again.end());
    std::set<VarId> seen;
    for (const auto& c : cs) {
      std::set<VarId> mine;
      for (VarId v : vars_of(c.head.as_term())) mine.insert(v);
      for (const auto& b : c.body) {
        for (VarId v : vars_of(b.as_term())) mine.insert(v);
      }
      for (VarId v : mine) {
        EXPECT_TRUE(seen.insert(v).second) << "variable shared between renamed clauses";
        EXPECT_GT(v, p.max_var());
      }
    }
  }
}

TEST(ProgramRoundTrip, KimGrammar) {
  FreshIds ids;
  Program p = kim_program(ids);
  Program again = parse_program(to_string(p));
  EXPECT_TRUE(variant_eq(p, again));
  EXPECT_EQ(to_string(again), to_string(p));
}

TEST(ProgramRoundTrip, QuotedAtomsAndLists) {
  const char* src =
      "q('Hello world', [a,b|T], T).\n"
      "r([], '[]', 'it''s', 'a-b').\n"
      "s(X) :- q(X, [], []), r(_, _, _, _).\n";
  Program p = parse_program(src);
  Program again = parse_program(to_string(p));
  EXPECT_TRUE(variant_eq(p, again)) << to_string(p);
}

TEST(ProgramRoundTrip, VariantEqDetectsChange) {
  Program a = parse_program("p(X,Y) :- q(X), r(Y).");
  Program b = parse_program("p(X,X) :- q(X), r(X).");
  Program c = parse_program("p(A,B) :- q(A), r(B).");
  EXPECT_FALSE(variant_eq(a, b));
  EXPECT_TRUE(variant_eq(a, c));
}
