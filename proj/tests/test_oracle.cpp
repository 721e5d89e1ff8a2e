#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace trics;
using trics::fixture::Reference;

namespace {

void expect_point(Vec2 got, Vec2 want, double tol = 1e-12) {
  EXPECT_NEAR(got.x, want.x, tol);
  EXPECT_NEAR(got.y, want.y, tol);
}

ConstructionPlan plan_of(const char* text) { return parse_plan(text); }

// Partial plans skip the vertex-output check that parse_plan applies.
ConstructionPlan partial(std::vector<std::pair<std::string, std::string>> given, std::vector<ConstructionStep> steps) {
  ConstructionPlan p;
  p.given = std::move(given);
  p.steps = std::move(steps);
  return p;
}

ConstructionStep step(StepKind k, std::vector<std::string> in, std::vector<std::string> out, int num = 0, int den = 0) {
  ConstructionStep s;
  s.kind = k;
  s.inputs = std::move(in);
  s.outputs = std::move(out);
  s.num = num;
  s.den = den;
  return s;
}

const char* kFromAHaO = R"(
given A=pA Ha=pHa O=pOc
l1 = LineThrough(A, Ha)
l2 = PerpThrough(l1, Ha)
c = CircleCentered(O, A)
B,C = IntersectLineCircle(l2, c)
outputs A=pA B=pB C=pC
)";

}  // namespace

TEST(TriangleDiagram, ReferenceTriangleSignificantPoints) {
  Reference r;
  Diagram d = triangle_diagram(r.a, r.b, r.c);
  expect_point(d.points.at("pOc"), r.o);
  expect_point(d.points.at("pG"), r.g);
  expect_point(d.points.at("pH"), r.h);
  expect_point(d.points.at("pMa"), r.ma);
  expect_point(d.points.at("pHa"), r.ha);
}

TEST(TriangleDiagram, CircumcircleThroughVertices) {
  Reference r;
  Diagram d = triangle_diagram(r.a, r.b, r.c);
  EXPECT_NEAR(d.circles.at("cc").r, std::sqrt(5.0), 1e-12);
  for (const char* v : {"pA", "pB", "pC"}) EXPECT_TRUE(eval_atom(make_atom(Predicate::IncC, {v, "cc"}), d));
}

TEST(ExecutePlan, FromAHaOOnReferenceTriangle) {
  Reference r;
  Diagram d = execute_plan(plan_of(kFromAHaO), {{"A", r.a}, {"Ha", r.ha}, {"O", r.o}});
  // l1: x - y = 0, l2: x + y - 4 = 0, up to the normalization scale
  const auto& l1 = d.lines.at("l1");
  const auto& l2 = d.lines.at("l2");
  EXPECT_NEAR(l1.a + l1.b, 0, 1e-12);
  EXPECT_NEAR(l1.c, 0, 1e-12);
  EXPECT_NEAR(l2.a - l2.b, 0, 1e-12);
  EXPECT_NEAR(l2.c / l2.a, -4, 1e-12);
  EXPECT_NEAR(d.circles.at("c").r, std::sqrt(5.0), 1e-12);
  Vec2 b = d.points.at("B"), c = d.points.at("C");
  bool direct = (b - r.b).norm() < 1e-9 && (c - r.c).norm() < 1e-9;
  bool swapped = (b - r.c).norm() < 1e-9 && (c - r.b).norm() < 1e-9;
  EXPECT_TRUE(direct || swapped);
}

TEST(ExecutePlan, RatioPointScalesFromFirstInput) {
  Reference r;
  auto plan = partial({{"A", "pA"}, {"G", "pG"}}, {step(StepKind::RatioPoint, {"A", "G"}, {"P"}, 2, 3)});
  Diagram d = execute_plan(plan, {{"A", r.a}, {"G", r.g}});
  expect_point(d.points.at("P"), r.ma);
}

TEST(ExecutePlan, CircleWithCoincidentInputs) {
  Reference r;
  auto plan = partial({{"O", "pOc"}}, {step(StepKind::CircleCentered, {"O", "O"}, {"c"})});
  try {
    execute_plan(plan, {{"O", r.o}});
    FAIL() << "expected ExecutionFailure";
  } catch (const ExecutionFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::CoincidentInputs);
    EXPECT_EQ(e.step(), 0u);
  }
}

TEST(ExecutePlan, ParallelLinesDoNotMeet) {
  auto plan = partial({{"A", "pA"}, {"B", "pB"}, {"C", "pC"}, {"D", "pG"}},
                      {step(StepKind::LineThrough, {"A", "B"}, {"l"}), step(StepKind::LineThrough, {"C", "D"}, {"m"}),
                       step(StepKind::IntersectLines, {"l", "m"}, {"X"})});
  try {
    execute_plan(plan, {{"A", {0, 0}}, {"B", {1, 0}}, {"C", {0, 1}}, {"D", {2, 1}}});
    FAIL() << "expected ExecutionFailure";
  } catch (const ExecutionFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::NoIntersection);
  }
}

TEST(ExecutePlan, LineMissingCircle) {
  auto plan = partial({{"A", "pA"}, {"B", "pB"}, {"O", "pOc"}, {"R", "pG"}},
                      {step(StepKind::LineThrough, {"A", "B"}, {"l"}), step(StepKind::CircleCentered, {"O", "R"}, {"c"}),
                       step(StepKind::IntersectLineCircle, {"l", "c"}, {"X", "Y"})});
  try {
    execute_plan(plan, {{"A", {0, 5}}, {"B", {1, 5}}, {"O", {0, 0}}, {"R", {1, 0}}});
    FAIL() << "expected ExecutionFailure";
  } catch (const ExecutionFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::NoIntersection);
  }
}

TEST(ExecutePlan, MissingGivenIsUnbound) {
  EXPECT_THROW(execute_plan(plan_of(kFromAHaO), {{"A", {0, 0}}}), UnboundConstant);
}

TEST(EvalAtom, VertexOffOppositeSide) {
  Reference r;
  Diagram d = triangle_diagram(r.a, r.b, r.c);
  EXPECT_FALSE(eval_atom(make_atom(Predicate::Inc, {"pA", "bc"}), d));
  EXPECT_TRUE(eval_atom(make_atom(Predicate::Inc, {"pB", "bc"}), d));
  EXPECT_TRUE(eval_atom(make_atom(Predicate::Perp, {"ha", "bc"}), d));
  EXPECT_TRUE(eval_atom(make_atom(Predicate::Ratio23, {"pA", "pG", "pA", "pMa"}), d));
  EXPECT_FALSE(eval_atom(make_atom(Predicate::Ratio23, {"pA", "pMa", "pA", "pG"}), d));
  EXPECT_TRUE(eval_atom(make_atom(Predicate::Ratio13, {"pOc", "pG", "pOc", "pH"}), d));
}

TEST(EvalAtom, UnboundConstantThrows) {
  Diagram d = triangle_diagram({0, 0}, {4, 0}, {1, 3});
  EXPECT_THROW(eval_atom(make_atom(Predicate::Inc, {"pZ", "bc"}), d), UnboundConstant);
}

TEST(EvalAtom, LineEqualityIgnoresRepresentation) {
  Diagram d;
  d.lines["l"] = geom::through({0, 0}, {1, 1});
  d.lines["m"] = geom::through({5, 5}, {-3, -3});
  d.lines["n"] = geom::through({0, 0}, {1, 2});
  EXPECT_TRUE(eval_atom(eq("l", "m"), d));
  EXPECT_FALSE(eval_atom(eq("l", "n"), d));
  EXPECT_TRUE(eval_atom(neq("l", "n"), d));
}

TEST(Sampling, AllKnowledgeBaseFactsHold) {
  auto kb = standard_kb();
  for (std::size_t i = 0; i < 100; ++i) {
    Diagram d = sample_triangle(trial_seed(7, i));
    for (const auto& f : kb.facts()) ASSERT_TRUE(eval_atom(f, d)) << to_string(f) << " trial " << i;
  }
}

TEST(Sampling, DeterministicPerSeed) {
  auto a = sample_triangle(42), b = sample_triangle(42);
  EXPECT_EQ(a.points.at("pA").x, b.points.at("pA").x);
  EXPECT_EQ(a.points.at("pC").y, b.points.at("pC").y);
}

TEST(VerifyPlan, FromAHaOPassesAndIsDeterministic) {
  auto plan = plan_of(kFromAHaO);
  auto r1 = verify_plan(plan, 100, 1e-9, 3);
  auto r2 = verify_plan(plan, 100, 1e-9, 3);
  EXPECT_TRUE(r1.ok());
  EXPECT_EQ(r1.table(), r2.table());
}

TEST(VerifyPlan, WrongPlanFailsWithReplayableSeeds) {
  // Perpendicular through A instead of Ha: the line misses B and C.
  auto plan = plan_of(R"(
given A=pA Ha=pHa O=pOc
l1 = LineThrough(A, Ha)
l2 = PerpThrough(l1, A)
c = CircleCentered(O, A)
B,C = IntersectLineCircle(l2, c)
outputs A=pA B=pB C=pC
)");
  auto rep = verify_plan(plan, 20, 1e-9, 3);
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.failures.empty());
  const auto& f = rep.failures.front();
  EXPECT_EQ(f.seed, trial_seed(3, f.trial));
  auto again = verify_trial(plan, f.seed, 1e-9);
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(*again, f.reason);
  EXPECT_NE(rep.table().find("seed " + std::to_string(f.seed)), std::string::npos);
}

TEST(Svg, OneElementPerPlanObject) {
  auto plan = plan_of(kFromAHaO);
  std::string svg = render_svg(plan, 11);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  std::size_t groups = 0;
  for (std::size_t at = svg.find("<g class=\"object\""); at != std::string::npos;
       at = svg.find("<g class=\"object\"", at + 1)) {
    ++groups;
  }
  EXPECT_EQ(groups, 8u);  // A, Ha, O, l1, l2, c, B, C
  for (const char* id : {"A", "Ha", "O", "l1", "l2", "c", "B", "C"}) {
    EXPECT_NE(svg.find(std::string("id=\"") + id + "\""), std::string::npos) << id;
  }
  EXPECT_NE(svg.find("class=\"triangle\""), std::string::npos);
}

TEST(Svg, WellFormedNesting) {
  std::string svg = render_svg(plan_of(kFromAHaO), 5);
  // Every opened element is closed: a small stack walk over the tags.
  std::vector<std::string> stack;
  for (std::size_t at = svg.find('<'); at != std::string::npos; at = svg.find('<', at + 1)) {
    auto end = svg.find('>', at);
    ASSERT_NE(end, std::string::npos);
    std::string tag = svg.substr(at + 1, end - at - 1);
    if (tag.front() == '?') continue;
    if (tag.front() == '/') {
      ASSERT_FALSE(stack.empty());
      EXPECT_EQ(stack.back(), tag.substr(1));
      stack.pop_back();
    } else if (tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  EXPECT_TRUE(stack.empty());
}
