#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace trics;

namespace {

const KnowledgeBase& kb() {
  static const KnowledgeBase k = standard_kb();
  return k;
}

std::vector<ProofTask> a_ha_o_tasks() {
  auto c = conjecture_from_plan(fixture::solved({"A", "Ha", "O"}, kb()), kb());
  return split_goals(c, kb());
}

std::set<Atom> derived(const Proof& p) {
  std::set<Atom> out;
  for (const auto& s : p.steps) {
    if (s.kind != ProofStepKind::Qed) out.insert(s.atom);
  }
  return out;
}

bool has_either(const std::set<Atom>& s, const char* a, const char* b) {
  return s.count(eq(a, b)) || s.count(eq(b, a));
}

// A hand-made task over a few point constants.
ProofTask small_task(std::vector<Atom> hyps, Atom goal, std::vector<CoherentRule> rules) {
  ProofTask t;
  t.name = "small";
  t.hypotheses = std::move(hyps);
  t.goal = std::move(goal);
  t.axioms = std::move(rules);
  for (const char* p : {"pa", "pb", "pc", "pd"}) t.constants[p] = Sort::Point;
  return t;
}

CoherentRule sym() { return *kb().find_rule("eq_sym"); }
CoherentRule trans() { return *kb().find_rule("eqnativeEqSub0"); }

}  // namespace

TEST(Prove, FootOfAltitudeFromAHaO) {
  auto t = a_ha_o_tasks()[0];
  Proof p = prove(t);
  ASSERT_TRUE(p.proved()) << failure_reason_name(p.reason) << " " << p.detail;
  auto d = derived(p);
  EXPECT_TRUE(has_either(d, "a1", "bc"));
  EXPECT_TRUE(has_either(d, "ha", "ha1"));
  EXPECT_TRUE(has_either(d, "pHa1", "pHa"));
  EXPECT_NEAR(static_cast<double>(p.steps.size()), 9.0, 3.0);
  auto check = check_proof(p);
  EXPECT_TRUE(check.valid) << check.step << ": " << check.reason;
}

TEST(Prove, CircumcenterFromAHaO) {
  auto t = a_ha_o_tasks()[1];
  Proof p = prove(t);
  ASSERT_TRUE(p.proved());
  auto d = derived(p);
  EXPECT_TRUE(has_either(d, "cc1", "cc"));
  EXPECT_TRUE(has_either(d, "pOc", "pOc1"));
  EXPECT_NEAR(static_cast<double>(p.steps.size()), 5.0, 3.0);
  EXPECT_TRUE(check_proof(p).valid);
  EXPECT_EQ(p.steps.back().kind, ProofStepKind::Qed);
}

TEST(Prove, RenderedTranscriptShape) {
  Proof p = prove(a_ha_o_tasks()[1]);
  std::string text = render(p);
  EXPECT_NE(text.find("using axiom center_unique"), std::string::npos) << text;
  EXPECT_NE(text.find("instantiation: "), std::string::npos);
  EXPECT_NE(text.find(". Proved by assumption! (by QEDas)"), std::string::npos);
}

TEST(Prove, ReflexiveGoalIsTwoSteps) {
  auto t = small_task({}, eq("pa", "pa"), {});
  Proof p = prove(t);
  ASSERT_TRUE(p.proved());
  ASSERT_EQ(p.steps.size(), 2u);
  EXPECT_EQ(p.steps[0].rule, "eq_refl");
  EXPECT_TRUE(check_proof(p).valid);
}

TEST(Prove, GoalAmongHypotheses) {
  auto t = small_task({eq("pa", "pb")}, eq("pa", "pb"), {sym()});
  Proof p = prove(t);
  ASSERT_TRUE(p.proved());
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].premises[0].kind, StepRef::Kind::Hyp);
  EXPECT_TRUE(check_proof(p).valid);
}

TEST(Prove, EqualityChain) {
  auto t = small_task({eq("pa", "pb"), eq("pb", "pc"), eq("pc", "pd")}, eq("pd", "pa"), {sym(), trans()});
  Proof p = prove(t);
  ASSERT_TRUE(p.proved());
  auto check = check_proof(p);
  EXPECT_TRUE(check.valid) << check.reason << "\n" << render(p);
}

TEST(Prove, FixpointWithoutGoal) {
  auto t = small_task({eq("pa", "pb")}, eq("pa", "pc"), {sym(), trans()});
  Proof p = prove(t);
  EXPECT_FALSE(p.proved());
  EXPECT_EQ(p.reason, FailureReason::Fixpoint);
  EXPECT_TRUE(p.steps.empty());
}

TEST(Prove, ContradictionIsReported) {
  auto t = small_task({eq("pa", "pb"), neq("pb", "pa")}, eq("pa", "pc"), {sym()});
  EXPECT_THROW(prove(t), InconsistencyDetected);
}

TEST(Prove, DisjunctiveRuleUnsupported) {
  CoherentRule split{"split", {"X", "Y"}, {make_atom(Predicate::Eq, {"X", "Y"})}, {}};
  split.conclusions.push_back(Branch{{}, {eq("X", "pc")}});
  split.conclusions.push_back(Branch{{}, {eq("Y", "pc")}});
  auto t = small_task({eq("pa", "pb")}, eq("pa", "pd"), {split});
  Proof p = prove(t);
  EXPECT_FALSE(p.proved());
  EXPECT_EQ(p.reason, FailureReason::Unsupported);
}

TEST(Prove, RoundLimit) {
  auto t = a_ha_o_tasks()[0];
  ProverLimits lim;
  lim.max_rounds = 1;
  Proof p = prove(t, lim);
  EXPECT_FALSE(p.proved());
  EXPECT_EQ(p.reason, FailureReason::RoundLimit);
}

TEST(Prove, Deterministic) {
  for (const auto& t : a_ha_o_tasks()) {
    EXPECT_EQ(write_certificate(prove(t)), write_certificate(prove(t)));
  }
}

TEST(Staged, FiveLemmasForAOG) {
  auto c = conjecture_from_plan(fixture::solved({"A", "O", "G"}, kb()), kb());
  auto stages = parse_stages(fixture::data_file("th_A_O_G.stages"));
  ASSERT_EQ(stages.size(), 5u);
  EXPECT_EQ(stages[3].name, "lm_A_O_G_4");
  EXPECT_EQ(stages[3].goal, make_atom(Predicate::Line, {"pOc1", "pMa1", "bisa"}));
  auto results = prove_staged(c, kb(), stages);
  ASSERT_EQ(results.size(), 5u);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    EXPECT_TRUE(r.proof.proved()) << r.spec.name;
    auto check = check_proof(r.proof);
    EXPECT_TRUE(check.valid) << r.spec.name << " step " << check.step << ": " << check.reason;
    // earlier conclusions are exported as hypotheses
    for (std::size_t j = 0; j < i; ++j) {
      const auto& h = r.proof.task.hypotheses;
      EXPECT_NE(std::find(h.begin(), h.end(), stages[j].goal), h.end());
    }
  }
  std::size_t witnesses = 0;
  for (const auto& s : results[3].proof.steps) {
    if (s.kind == ProofStepKind::Witness) {
      ++witnesses;
      EXPECT_EQ(s.rule, "ex_line");
    }
  }
  EXPECT_EQ(witnesses, 1u);
}

TEST(Staged, FailingStageNamed) {
  auto c = conjecture_from_plan(fixture::solved({"A", "O", "G"}, kb()), kb());
  auto stages = parse_stages("bad : pA = pB\n");
  try {
    prove_staged(c, kb(), stages);
    FAIL() << "expected StageFailed";
  } catch (const StageFailed& e) {
    EXPECT_EQ(e.stage, "bad");
  }
}

TEST(Staged, MalformedStageFile) {
  EXPECT_THROW(parse_stages("no colon here\n"), PlanError);
  EXPECT_THROW(parse_stages("x : inc(pA\n"), PlanError);
  EXPECT_EQ(parse_stages("# only a comment\n\n").size(), 0u);
}

TEST(Checker, QedAtomMustBeGoal) {
  Proof p = prove(a_ha_o_tasks()[1]);
  ASSERT_TRUE(p.proved());
  p.steps.back().atom = eq("pOc1", "pOc");
  auto r = check_proof(p);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.step, p.steps.size());
}

TEST(Checker, RejectsUnprovedAndEmpty) {
  Proof p;
  p.status = ProofStatus::Failed;
  EXPECT_FALSE(check_proof(p).valid);
  p.status = ProofStatus::Proved;
  EXPECT_FALSE(check_proof(p).valid);
}

TEST(Checker, ForwardReference) {
  Proof p = prove(a_ha_o_tasks()[0]);
  ASSERT_GE(p.steps.size(), 3u);
  for (auto& s : p.steps) {
    for (auto& r : s.premises) {
      if (r.kind == StepRef::Kind::Step) {
        r.index = p.steps.size() - 1;
        auto res = check_proof(p);
        EXPECT_FALSE(res.valid);
        return;
      }
    }
  }
  FAIL() << "no step-to-step citation";
}

TEST(Checker, EveryMutationOfGoldenProofsRejected) {
  std::size_t total = 0;
  for (const auto& p : fixture::golden_proofs(kb())) {
    ASSERT_TRUE(check_proof(p).valid) << p.task.name;
    for (const auto& [what, m] : fixture::mutations(p)) {
      ++total;
      EXPECT_FALSE(check_proof(m).valid) << p.task.name << " " << what << " survived";
    }
  }
  EXPECT_GT(total, 100u);
}

TEST(Soundness, GoldenProofStepsHoldNumerically) {
  auto proofs = fixture::golden_proofs(kb());
  auto plan1 = fixture::solved({"A", "Ha", "O"}, kb());
  auto plan2 = fixture::solved({"A", "O", "G"}, kb());
  for (std::size_t i = 0; i < 100; ++i) {
    std::uint64_t seed = trial_seed(31, i);
    for (const auto& p : proofs) {
      const auto& plan = p.task.name.rfind("th_A_Ha_O", 0) == 0 ? plan1 : plan2;
      Diagram d = fixture::hypothesis_diagram(plan, seed);
      fixture::bind_witnesses(p, d);
      for (const auto& h : p.task.hypotheses) ASSERT_TRUE(eval_atom(h, d)) << p.task.name << " hyp " << to_string(h);
      for (const auto& s : p.steps) {
        ASSERT_TRUE(eval_atom(s.atom, d)) << p.task.name << " " << to_string(s.atom) << " seed " << seed;
      }
    }
  }
}

TEST(Certificate, RoundTripAndTamper) {
  for (const auto& t : a_ha_o_tasks()) {
    Proof p = prove(t);
    std::string cert = write_certificate(p);
    Proof back = read_certificate(cert, t);
    EXPECT_EQ(write_certificate(back), cert);
    EXPECT_TRUE(check_certificate(cert, t).valid);

    std::string wrong_rule = cert;
    auto at = wrong_rule.find("using axiom ");
    ASSERT_NE(at, std::string::npos);
    wrong_rule.insert(at + 12, "x");
    EXPECT_FALSE(check_certificate(wrong_rule, t).valid);

    std::string wrong_task = cert;
    wrong_task.replace(wrong_task.find(t.name), t.name.size(), "other");
    EXPECT_FALSE(check_certificate(wrong_task, t).valid);

    ProofTask fewer = t;
    fewer.axioms.pop_back();
    EXPECT_FALSE(check_certificate(cert, fewer).valid);  // axiom digest changes
  }
}

TEST(Certificate, UnreadableLines) {
  auto t = a_ha_o_tasks()[1];
  std::string cert = write_certificate(prove(t));
  std::string broken = cert + "7 no dot\n";
  EXPECT_THROW(read_certificate(broken, t), CertificateError);
  std::string header_only = cert.substr(0, cert.find("1. "));
  EXPECT_FALSE(check_certificate(header_only, t).valid);
}
