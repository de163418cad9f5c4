#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "causalplan/domains.h"
#include "causalplan/parser.h"
#include "causalplan/planner.h"
#include "testing.h"

namespace causalplan {
namespace {

using testing::Grounded;
using testing::GroundBundle;

std::vector<DomainBundle> AllBundles() {
  return {BuildRobotBoxes(2, 1), BuildRobotBoxes(3, 2), BuildRobotBoxes(5, 3),
          BuildRobotBoxes(3, 1, GridWorld::Parse(testing::kWalledWorld)),
          BuildRobotBoxes(3, 1, GridWorld::Parse(testing::kDeliveryWorld)),
          BuildTowerOfHanoi(1), BuildTowerOfHanoi(2), BuildTowerOfHanoi(3),
          BuildTowerOfHanoi(4),
          BuildMapp(GridWorld::Parse("..\n..\n"), {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}),
          BuildMapp(GridWorld::Parse("..\n..\n"), {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}, true),
          BuildMapp(GridWorld::Parse("...\n"), {{0, 0}}, {{2, 0}}),
          BuildMapp(GridWorld::Parse("....\n.#..\n....\n"), {{0, 0}, {3, 0}, {0, 2}},
                    {{3, 2}, {0, 2}, {3, 0}})};
}

TEST(Bundles, ValidateGroundAndAreConsistent) {
  for (const DomainBundle& b : AllBundles()) {
    EXPECT_TRUE(ValidateSignature(b.domain).empty()) << b.name;
    EXPECT_TRUE(ValidateProblem(b.problem, b.domain).empty()) << b.name;
    const Grounded g = GroundBundle(b);
    EXPECT_EQ(CheckConsistency(g.ground).outcome, Outcome::kConsistent) << b.name;
  }
}

TEST(Bundles, PlansMatchExpectedMakespans) {
  for (const DomainBundle& b : AllBundles()) {
    if (!b.expected) continue;
    const Grounded g = GroundBundle(b);
    const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
    ASSERT_EQ(r.outcome, Outcome::kPlanFound) << b.name;
    EXPECT_EQ(r.plan->horizon(), *b.expected) << b.name;
  }
}

TEST(RobotBoxes, Preconditions) {
  EXPECT_THROW(BuildRobotBoxes(1, 1), std::invalid_argument);
  EXPECT_THROW(BuildRobotBoxes(3, 0), std::invalid_argument);
  EXPECT_THROW(BuildRobotBoxes(2, 3), std::invalid_argument);
  EXPECT_THROW(BuildRobotBoxes(3, 1, GridWorld::Parse("AB\n")), std::invalid_argument);
}

TEST(RobotBoxes, ExpectedOnlyWhenTheGoalIsFree) {
  EXPECT_EQ(BuildRobotBoxes(3, 1).expected, 4);
  EXPECT_EQ(BuildRobotBoxes(4, 3).expected, 4);
  // With as many boxes as locations, some box starts on L3.
  EXPECT_EQ(BuildRobotBoxes(3, 3).expected, std::nullopt);
}

TEST(RobotBoxes, WalledWorldBlocksGoto) {
  const DomainBundle b = BuildRobotBoxes(3, 1, GridWorld::Parse(testing::kWalledWorld));
  const Grounded g = GroundBundle(b);
  EXPECT_EQ(FindPlan(g.ground, g.problem, g.registry).outcome, Outcome::kNoPlanUpTo);
}

TEST(TowerOfHanoi, Preconditions) {
  EXPECT_THROW(BuildTowerOfHanoi(0), std::invalid_argument);
  EXPECT_THROW(BuildTowerOfHanoi(7), std::invalid_argument);
  EXPECT_EQ(BuildTowerOfHanoi(1).expected, 1);
  EXPECT_EQ(BuildTowerOfHanoi(2).expected, 3);
  EXPECT_EQ(BuildTowerOfHanoi(3).expected, 7);
  EXPECT_EQ(testing::TowerOfHanoiMoves(3), 7);
}

TEST(TowerOfHanoi, LegalStatesMatchPegAssignments) {
  // Every legal state is a peg assignment of the disks: 3^n of them.
  for (int n = 1; n <= 2; ++n) {
    const Grounded g = GroundBundle(BuildTowerOfHanoi(n));
    EXPECT_EQ(OracleStates(g.ground).size(), n == 1 ? 3u : 9u);
  }
  const Grounded g3 = GroundBundle(BuildTowerOfHanoi(3));
  PlannerOptions options;
  options.max_trajectories = 100;
  EXPECT_EQ(EnumerateTrajectories(g3.ground, 0, {}, false, options).size(), 27u);
}

TEST(Mapp, Preconditions) {
  const GridWorld w = GridWorld::Parse("..#\n...\n");
  EXPECT_THROW(BuildMapp(w, {{0, 0}, {0, 0}}, {{1, 0}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(BuildMapp(w, {{0, 0}}, {{2, 0}}), std::invalid_argument);
  EXPECT_THROW(BuildMapp(w, {{0, 0}}, {{1, 0}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(BuildMapp(w, {{0, 0}, {1, 0}}, {{1, 1}, {1, 1}}), std::invalid_argument);
}

TEST(Mapp, ExpectedMakespans) {
  const GridWorld square = GridWorld::Parse("..\n..\n");
  EXPECT_EQ(BuildMapp(square, {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}).expected, 2);
  EXPECT_EQ(BuildMapp(square, {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}, true).expected, 4);
  EXPECT_EQ(BuildMapp(GridWorld::Parse("....\n"), {{0, 0}}, {{3, 0}}).expected, 3);
  // Two robots in a corridor cannot pass each other.
  EXPECT_EQ(BuildMapp(GridWorld::Parse("...\n"), {{0, 0}, {2, 0}}, {{2, 0}, {0, 0}}).expected,
            std::nullopt);
}

TEST(Mapp, PlansAreSafe) {
  for (const DomainBundle& b : AllBundles()) {
    if (b.name.rfind("mapp", 0) != 0) continue;
    const Grounded g = GroundBundle(b);
    const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
    ASSERT_EQ(r.outcome, Outcome::kPlanFound) << b.name;
    const Trajectory& t = r.plan->trajectory;
    std::vector<int> robots;
    for (int c = 0; c < g.ground.num_fluents; ++c) robots.push_back(c);
    for (int k = 0; k <= t.horizon(); ++k) {
      for (int a : robots) {
        for (int b2 : robots) {
          if (a >= b2) continue;
          const auto cell = [&](int r, int step) {
            return g.ground.constants[r].values[t.states[step][r]];
          };
          EXPECT_NE(cell(a, k), cell(b2, k)) << b.name << " step " << k;
          if (k > 0) {
            EXPECT_FALSE(cell(a, k) == cell(b2, k - 1) && cell(b2, k) == cell(a, k - 1))
                << b.name << " swap at step " << k;
          }
        }
      }
    }
  }
}

TEST(Mapp, ConcurrencyIsUsed) {
  const Grounded g = GroundBundle(
      BuildMapp(GridWorld::Parse("..\n..\n"), {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}));
  const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
  ASSERT_EQ(r.outcome, Outcome::kPlanFound);
  for (const auto& step : r.plan->trajectory.actions) EXPECT_EQ(step.size(), 2u);
}

std::string ReadSample(const std::string& name) {
  std::ifstream in(std::string(CAUSALPLAN_SAMPLES_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Samples, MatchTheGenerators) {
  const GridWorld square = GridWorld::Parse("..\n..\n");
  const std::vector<DomainBundle> bundles = {
      BuildTowerOfHanoi(3), BuildRobotBoxes(3, 2),
      BuildMapp(square, {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}})};
  for (const DomainBundle& b : bundles) {
    EXPECT_EQ(ReadSample(b.name + ".domain"), b.domain_text) << b.name;
    EXPECT_EQ(ReadSample(b.name + ".problem"), b.problem_text) << b.name;
    if (b.world) EXPECT_EQ(ReadSample(b.name + ".world"), b.world->ToText());
  }
  DomainBundle delivery = BuildRobotBoxes(3, 1, GridWorld::Parse(testing::kDeliveryWorld));
  EXPECT_EQ(ReadSample("delivery.domain"), delivery.domain_text);
  EXPECT_EQ(ReadSample("delivery.world"), delivery.world->ToText());
  const DomainDescription d = testing::MustParseDomain(ReadSample("delivery.domain"));
  const PlanningProblem p = testing::MustParseProblem(ReadSample("delivery.problem"), d);
  EXPECT_EQ(p.max_cost, 6);
  const DomainDescription walled = testing::MustParseDomain(ReadSample("walled.domain"));
  EXPECT_EQ(ReadSample("walled.world"), std::string(testing::kWalledWorld));
  testing::MustParseProblem(ReadSample("walled.problem"), walled);
}

}  // namespace
}  // namespace causalplan
