#include <gtest/gtest.h>

#include "support.hpp"

using namespace trics;

namespace {

Atom A(Predicate p, std::initializer_list<std::string_view> names) { return make_atom(p, names); }

const KnowledgeBase& kb() {
  static const KnowledgeBase k = standard_kb();
  return k;
}

}  // namespace

TEST(StandardKb, DefinitionalFacts) {
  using P = Predicate;
  for (const auto& f : {A(P::Inc, {"pB", "bc"}), A(P::Inc, {"pC", "bc"}), A(P::Inc, {"pA", "ha"}),
                        A(P::Perp, {"ha", "bc"}), A(P::IncC, {"pA", "cc"}), A(P::IncC, {"pB", "cc"}),
                        A(P::IncC, {"pC", "cc"}), A(P::Center, {"pOc", "cc"}), A(P::Inc, {"pMa", "bc"}),
                        A(P::Inc, {"pMa", "bisa"}), A(P::Inc, {"pOc", "bisa"}), A(P::Perp, {"bisa", "bc"}),
                        A(P::Inc, {"pH", "ha"}), A(P::Ratio23, {"pA", "pG", "pA", "pMa"}),
                        A(P::Ratio13, {"pOc", "pG", "pOc", "pH"}), A(P::Inc, {"pA", "ca"}), A(P::Inc, {"pB", "hb"}),
                        A(P::Perp, {"hc", "ab"}), A(P::Ratio23, {"pC", "pG", "pC", "pMc"})}) {
    EXPECT_TRUE(kb().has_fact(f)) << to_string(f);
  }
}

TEST(StandardKb, NamedRulesPresent) {
  for (const char* name : {"bc_unique", "haA", "pHa_def", "cc_unique", "center_unique", "perp_unique",
                           "pMa_is_interect_bisa_bc", "ratio23_Ma_Gsat0", "ca_unique", "hbB", "inc_line", "ex_line",
                           "perp_para", "ratio21_para", "eq_refl", "eq_sym", "eqnativeEqSub0", "incEqSub0",
                           "ratio23EqSub3", "lineEqSub2"}) {
    EXPECT_NE(kb().find_rule(name), nullptr) << name;
  }
}

TEST(StandardKb, CentroidUniquenessShape) {
  const auto* r = kb().find_rule("ratio23_Ma_Gsat0");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->universals, std::vector<std::string>{"X"});
  ASSERT_EQ(r->premises.size(), 1u);
  EXPECT_EQ(r->premises[0], A(Predicate::Ratio23, {"pA", "X", "pA", "pMa"}));
  ASSERT_EQ(r->conclusions.size(), 1u);
  EXPECT_EQ(r->conclusions[0].atoms, std::vector<Atom>{eq("pG", "X")});
}

TEST(StandardKb, ExLineIsTheExistentialRule) {
  const auto* r = kb().find_rule("ex_line");
  ASSERT_NE(r, nullptr);
  EXPECT_TRUE(r->premises.empty());
  ASSERT_EQ(r->conclusions.size(), 1u);
  EXPECT_EQ(r->conclusions[0].existentials, std::vector<std::string>{"L"});
  EXPECT_EQ(r->conclusions[0].atoms, std::vector<Atom>{A(Predicate::Line, {"P1", "P2", "L"})});
}

TEST(StandardKb, EveryRuleWellFormed) {
  for (const auto& r : kb().rules()) EXPECT_FALSE(rule_error(r).has_value()) << r.name;
}

TEST(CongruenceRules, OnePerArgumentPosition) {
  auto rules = congruence_rules({Predicate::Inc, Predicate::Line});
  // 2 + 3 substitution rules, plus eqnativeEqSub0 and eq_sym
  ASSERT_EQ(rules.size(), 7u);
  EXPECT_EQ(rules[0].name, "incEqSub0");
  EXPECT_EQ(rules[4].name, "lineEqSub2");
  EXPECT_EQ(rules[4].premises[1], eq("C", "X"));
  EXPECT_EQ(rules[4].conclusions[0].atoms[0], A(Predicate::Line, {"A", "B", "X"}));
}

TEST(KnowledgeBase, RejectsIllFormedRules) {
  KnowledgeBase k;
  k.add_object({"pA", Sort::Point, ObjectKind::SignificantConstant});
  // premise variable not quantified
  EXPECT_THROW(k.add_rule(detail::horn("bad1", {"X"}, {A(Predicate::Inc, {"X", "L"})}, {eq("X", "pA")})), RuleError);
  // one variable used as a point and as a line
  EXPECT_THROW(k.add_rule(detail::horn("bad2", {"X"}, {A(Predicate::Inc, {"X", "X"})}, {eq("X", "X")})), RuleError);
  // undeclared constant
  EXPECT_THROW(k.add_rule(detail::horn("bad3", {"X"}, {A(Predicate::Inc, {"X", "zz"})}, {eq("X", "pA")})), RuleError);
  k.add_rule(detail::horn("ok", {"X"}, {}, {eq("X", "X")}));
  EXPECT_THROW(k.add_rule(detail::horn("ok", {"X"}, {}, {eq("X", "X")})), RuleError);
  EXPECT_THROW(k.add_fact(A(Predicate::Inc, {"pA", "pA"})), RuleError);
}

TEST(ValidateKb, StandardKbHasNoFailures) {
  auto rep = validate_kb(kb(), 20, 17);
  EXPECT_EQ(rep.failures(), 0u) << rep.table();
  EXPECT_EQ(rep.rules.size(), kb().rules().size());
  // uniqueness lemmas must actually be exercised, not pass vacuously
  for (const char* name : {"bc_unique", "haA", "pHa_def", "center_unique", "ratio23_Ma_Gsat0"}) {
    const auto* r = rep.find(name);
    ASSERT_NE(r, nullptr) << name;
    EXPECT_GT(r->instances, 0u) << name;
  }
}

TEST(ValidateKb, SpuriousRuleIsCaught) {
  KnowledgeBase k = standard_kb();
  // "perpendicular lines are parallel" is false on every triangle
  k.add_rule(detail::horn("spurious", {"L", "M"}, {A(Predicate::Perp, {"L", "M"})}, {A(Predicate::Para, {"L", "M"})}));
  auto rep = validate_kb(k, 5, 1);
  const auto* r = rep.find("spurious");
  ASSERT_NE(r, nullptr);
  EXPECT_FALSE(r->passed);
  ASSERT_TRUE(r->counterexample.has_value());
  // the counterexample is reproducible from its seed
  Diagram d = sample_triangle(r->counterexample->seed);
  const auto& rule = *k.find_rule("spurious");
  EXPECT_TRUE(eval_atom(substitute(rule.premises[0], r->counterexample->binding), d));
  EXPECT_FALSE(eval_atom(substitute(rule.conclusions[0].atoms[0], r->counterexample->binding), d));
  EXPECT_EQ(rep.failures(), 1u);
}

TEST(ValidateKb, FalseFactIsCaught) {
  KnowledgeBase k = standard_kb();
  k.add_fact(A(Predicate::Inc, {"pA", "bc"}));
  auto rep = validate_kb(k, 3, 1);
  ASSERT_EQ(rep.false_facts.size(), 1u);
  EXPECT_EQ(rep.false_facts[0], "inc(pA, bc)");
}

TEST(ValidateKb, ZeroTrialsRejected) { EXPECT_THROW(validate_kb(kb(), 0, 1), std::invalid_argument); }

TEST(KbText, DumpLoadRoundTrip) {
  std::string text = tptp::dump_kb(kb());
  KnowledgeBase back = tptp::load_kb(text);
  EXPECT_EQ(back.facts(), kb().facts());
  ASSERT_EQ(back.rules().size(), kb().rules().size());
  for (std::size_t i = 0; i < back.rules().size(); ++i) {
    EXPECT_EQ(back.rules()[i].name, kb().rules()[i].name);
    EXPECT_EQ(tptp::rule_to_formula(back.rules()[i]), tptp::rule_to_formula(kb().rules()[i]));
  }
  EXPECT_EQ(tptp::dump_kb(back), text);
}
