#include <gtest/gtest.h>

#include "support.hpp"

using namespace trics;
using tptp::Formula;
using K = Formula::Kind;

TEST(TptpRoundTrip, ThousandGeneratedUnits) {
  fixture::FormulaGenerator gen(2024);
  std::vector<tptp::FofUnit> units;
  for (std::size_t i = 0; i < 1000; ++i) units.push_back(gen.unit(i));
  std::string text = tptp::serialize(units);
  auto back = tptp::parse(text);
  ASSERT_EQ(back.size(), units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    EXPECT_EQ(back[i], units[i]) << tptp::serialize(units[i]);
  }
  EXPECT_EQ(tptp::serialize(back), text);
}

TEST(TptpRoundTrip, EveryKbRule) {
  auto kb = standard_kb();
  for (const auto& r : kb.rules()) {
    auto units = tptp::parse(tptp::serialize(tptp::rule_unit(r)));
    ASSERT_EQ(units.size(), 1u);
    auto back = tptp::formula_to_rule(units[0].name, units[0].formula);
    EXPECT_EQ(back.universals, r.universals) << r.name;
    EXPECT_EQ(back.premises, r.premises) << r.name;
    ASSERT_EQ(back.conclusions.size(), r.conclusions.size()) << r.name;
    for (std::size_t b = 0; b < r.conclusions.size(); ++b) {
      EXPECT_EQ(back.conclusions[b].existentials, r.conclusions[b].existentials) << r.name;
      EXPECT_EQ(back.conclusions[b].atoms, r.conclusions[b].atoms) << r.name;
    }
  }
}

TEST(TptpPrint, ExistentialLine) {
  Formula f = Formula::quantified(K::Exists, {"L"}, Formula::atomic(make_atom(Predicate::Line, {"pA", "pB", "L"})));
  EXPECT_EQ(tptp::serialize(tptp::FofUnit{"x", tptp::Role::Axiom, f}), "fof(x, axiom, ? [L] : line(pA,pB,L)).");
}

TEST(TptpParse, ExistentialLine) {
  auto units = tptp::parse("fof(x, axiom, ? [L] : line(pA,pB,L)).");
  ASSERT_EQ(units.size(), 1u);
  EXPECT_EQ(units[0].formula.kind, K::Exists);
  EXPECT_EQ(units[0].formula.vars, std::vector<std::string>{"L"});
  EXPECT_EQ(units[0].formula.args[0].atom, make_atom(Predicate::Line, {"pA", "pB", "L"}));
}

TEST(TptpParse, CommentsAndEqualityForms) {
  auto units = tptp::parse(R"(% a comment
fof(a, axiom, pA = pB).
fof(b, conjecture, ~ (pA != pB) | $false).
)");
  ASSERT_EQ(units.size(), 2u);
  EXPECT_EQ(units[0].formula.atom, eq("pA", "pB"));
  EXPECT_EQ(units[1].role, tptp::Role::Conjecture);
  EXPECT_EQ(units[1].formula.kind, K::Or);
  EXPECT_EQ(units[1].formula.args[0].args[0].atom, neq("pA", "pB"));
}

TEST(TptpParse, ErrorsCarryPosition) {
  try {
    tptp::parse("fof(a, axiom, inc(pA, bc).\n");
    FAIL() << "expected ParseError";
  } catch (const tptp::ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_GT(e.col(), 1u);
  }
  EXPECT_THROW(tptp::parse("fof(a, lemma, inc(pA,bc))."), tptp::ParseError);
  EXPECT_THROW(tptp::parse("fof(a, axiom, inc(pA))."), std::exception);
  EXPECT_THROW(tptp::parse("fof(a, axiom, frob(pA,bc))."), std::exception);
}

TEST(TptpRules, NonCoherentFormulaUnsupported) {
  auto f = tptp::parse_formula("! [X] : (inc(X,bc) => ~ inc(X,ha))");
  EXPECT_THROW(tptp::formula_to_rule("neg", f), tptp::UnsupportedConstruct);
}

TEST(TptpAtom, BothSpellings) {
  EXPECT_EQ(tptp::parse_atom("line(pOc1, pMa1, bisa)"), make_atom(Predicate::Line, {"pOc1", "pMa1", "bisa"}));
  EXPECT_EQ(tptp::parse_atom("pOc1=pOc"), eq("pOc1", "pOc"));
  EXPECT_THROW(tptp::parse_atom("inc(pA,bc) & inc(pB,bc)"), tptp::ParseError);
}
