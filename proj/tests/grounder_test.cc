#include <gtest/gtest.h>

#include <algorithm>

#include "causalplan/domains.h"
#include "causalplan/grounder.h"
#include "testing.h"

namespace causalplan {
namespace {

int CountLaws(const GroundDomain& g, const std::string& text) {
  return static_cast<int>(std::count_if(g.laws.begin(), g.laws.end(), [&](const GroundLaw& l) {
    return g.LawLabel(l).find(text) != std::string::npos;
  }));
}

TEST(Ground, SignatureOfTheSmallestRobotDomain) {
  const GroundDomain g = Ground(BuildRobotBoxes(2, 1).domain, {});
  int fluents = 0;
  int actions = 0;
  for (const GroundAtom& a : g.SignatureAtoms()) (g.IsAction(a.constant) ? actions : fluents)++;
  EXPECT_EQ(fluents, 5);
  EXPECT_EQ(actions, 4);
  std::vector<std::string> labels;
  for (const GroundAtom& a : g.SignatureAtoms()) labels.push_back(g.AtomLabel(a));
  EXPECT_EQ(labels, (std::vector<std::string>{"atRobo=L1", "atRobo=L2", "atObj(B1)=L1",
                                              "atObj(B1)=L2", "holding(B1)", "goto(L1)",
                                              "goto(L2)", "pickup(B1)", "putdown(B1)"}));
}

TEST(Ground, RamificationCountIsBoxesTimesLocations) {
  for (auto [m, n] : {std::pair(2, 1), std::pair(3, 2), std::pair(4, 3)}) {
    const GroundDomain g = Ground(BuildRobotBoxes(m, n).domain, {});
    EXPECT_EQ(CountLaws(g, "caused atObj("), m * n);
  }
}

TEST(Ground, CartesianExpansion) {
  const GroundDomain g = testing::GroundText(R"(
:sorts Location Box
:objects L1, L2, L3 :: Location; B1, B2 :: Box;
:constants atRobo :: inertialFluent(Location); atObj(Box) :: inertialFluent(Location);
  holding(Box) :: inertialFluent;
:laws
  vars b::Box y::Location;
  caused atObj(b)=y if holding(b) & atRobo=y;
)");
  EXPECT_EQ(g.laws.size(), 6u);
  EXPECT_EQ(g.LawLabel(g.laws[0]), "caused atObj(B1)=L1 if holding(B1) & atRobo=L1;");
}

TEST(Ground, ExternalPredicatesAreClosed) {
  const GridWorld world = GridWorld::Parse("A#B\n");
  ExternalRegistry registry;
  RegisterGridExternals(world, registry);
  const GroundDomain g = testing::GroundText(R"(
:sorts Location
:objects L1, L2 :: Location;
:constants atRobo :: inertialFluent(Location); goto(Location) :: action;
:externals pathExists/2;
:laws
  vars x::Location y::Location;
  nonexecutable goto(y) if atRobo=x & ~@pathExists(x, y);
)", registry);
  std::vector<std::string> labels;
  for (const GroundLaw& l : g.laws) labels.push_back(g.LawLabel(l));
  EXPECT_EQ(labels, (std::vector<std::string>{"nonexecutable goto(L2) if atRobo=L1;",
                                              "nonexecutable goto(L1) if atRobo=L2;"}));
}

TEST(Ground, LawWithoutVariablesIsUnchanged) {
  const GroundDomain g = testing::GroundText(testing::kToggleDomain);
  ASSERT_EQ(g.laws.size(), 2u);
  EXPECT_EQ(g.LawLabel(g.laws[0]), "toggle causes f if ~f;");
}

TEST(Ground, UnregisteredExternalIsAnError) {
  EXPECT_THROW(Ground(BuildRobotBoxes(3, 1, GridWorld::Parse("ABC\n")).domain, {}),
               GroundingError);
}

TEST(Ground, EvaluatorFailureNamesTheCallSite) {
  ExternalRegistry registry;
  registry.RegisterPredicate("boom", 1, [](std::span<const std::string>) -> bool {
    throw std::runtime_error("no geometry");
  });
  try {
    testing::GroundText(R"(
:sorts S
:objects o :: S;
:constants f :: inertialFluent;
:externals boom/1;
:laws
  constraint f | @boom(o);
)", registry);
    FAIL() << "expected GroundingError";
  } catch (const GroundingError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("boom"), std::string::npos);
    EXPECT_NE(what.find(":7:"), std::string::npos) << what;
    EXPECT_NE(what.find("no geometry"), std::string::npos);
  }
}

TEST(Ground, ExternalsAreMemoized) {
  int calls = 0;
  ExternalRegistry registry;
  registry.RegisterPredicate("near", 2, [&](std::span<const std::string> args) {
    ++calls;
    return args[0] == args[1];
  });
  const GroundDomain g = testing::GroundText(R"(
:sorts L
:objects A, B, C :: L;
:constants at :: inertialFluent(L); go(L) :: action;
:externals near/2;
:laws
  vars x::L y::L;
  nonexecutable go(y) if at=x & @near(x, y);
  caused false if at=x & go(y) & @near(x, y);
)", registry);
  EXPECT_EQ(calls, 9);
  EXPECT_FALSE(g.laws.empty());
}

TEST(Ground, FalseBodiedLawsAreDroppedOnlyWhenAsked) {
  const char* text = R"(
:sorts S
:objects o, p :: S;
:constants f(S) :: inertialFluent; a(S) :: action;
:laws
  vars x::S y::S;
  a(x) causes f(y) if x = y;
)";
  EXPECT_EQ(testing::GroundText(text).laws.size(), 2u);
  EXPECT_EQ(testing::GroundText(text, {}, {.drop_false_laws = false}).laws.size(), 4u);
}

TEST(Ground, NoVariablesOrExternalsRemain) {
  for (const testing::Instance& in : testing::SmallInstances()) {
    for (const GroundLaw& l : in.ground.laws) {
      const std::string label = in.ground.LawLabel(l);
      EXPECT_EQ(label.find('@'), std::string::npos) << label;
    }
  }
}

TEST(Ground, DeterministicAcrossRuns) {
  const DomainBundle b = BuildRobotBoxes(3, 2, GridWorld::Parse("A.#C\n..#.\nB.#.\n"));
  const GroundDomain g1 = Ground(b.domain, BundleRegistry(b));
  const GroundDomain g2 = Ground(b.domain, BundleRegistry(b));
  ASSERT_EQ(g1.laws.size(), g2.laws.size());
  for (std::size_t i = 0; i < g1.laws.size(); ++i) {
    EXPECT_EQ(g1.LawLabel(g1.laws[i]), g2.LawLabel(g2.laws[i]));
  }
}

TEST(Ground, LabelsRoundTrip) {
  const GroundDomain g = Ground(BuildRobotBoxes(3, 2).domain, {});
  for (int c = 0; c < g.num_constants(); ++c) {
    EXPECT_EQ(g.FindConstant(g.constants[c].Label()), c);
  }
  EXPECT_FALSE(g.FindConstant("atObj(B9)").has_value());
  const int holding = *g.FindConstant("holding(B1)");
  EXPECT_EQ(g.AtomLabel({holding, 0}), "holding(B1)");
  EXPECT_EQ(g.AtomLabel({holding, 1}), "holding(B1)=false");
}

TEST(Ground, CostBindings) {
  const DomainBundle b = BuildRobotBoxes(3, 1, GridWorld::Parse("A.B.C\n"));
  const GroundDomain g = Ground(b.domain, BundleRegistry(b));
  EXPECT_EQ(g.costs.size(), 3u);
  for (const auto& [action, cost] : g.costs) {
    EXPECT_EQ(g.constants[action].name, "goto");
    EXPECT_EQ(cost.external, "timeEstimate");
    ASSERT_EQ(cost.args.size(), 2u);
    EXPECT_EQ(g.constants[cost.args[0].fluent].name, "atRobo");
    EXPECT_EQ(cost.args[1].object, g.constants[action].args[0]);
  }
}

TEST(GroundProblem, ClosedFormulas) {
  const DomainBundle b = BuildRobotBoxes(3, 1);
  const GroundDomain g = Ground(b.domain, {});
  const GroundProblem p = GroundPlanningProblem(g, b.problem, {});
  EXPECT_EQ(g.FormulaLabel(p.goal), "atObj(B1)=L3 & ~holding(B1)");
  EXPECT_TRUE(p.noconcurrency);
  EXPECT_EQ(p.max_horizon, 10);
}

}  // namespace
}  // namespace causalplan
