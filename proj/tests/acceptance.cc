// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "causalplan/compiler.h"
#include "causalplan/domains.h"
#include "causalplan/grid.h"
#include "causalplan/planner.h"
#include "causalplan/sat.h"
#include "testing.h"

namespace causalplan {
namespace {

namespace fs = std::filesystem;
using testing::Grounded;
using testing::GroundBundle;

// Thrown by Require; its message becomes the failure detail.
struct Failure {
  std::string message;
};

void Require(bool condition, const std::string& message) {
  if (!condition) throw Failure{message};
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void RequireWithin(std::chrono::steady_clock::time_point since, double limit,
                   const std::string& what) {
  const double s = Seconds(since);
  std::ostringstream m;
  m << what << " took " << s << "s (limit " << limit << "s)";
  Require(s < limit, m.str());
}

constexpr int kEnumerationCap = 200000;

std::vector<Trajectory> Enumerate(const GroundDomain& ground, int h,
                                  const std::vector<GroundTimedConstraint>& constraints,
                                  bool noconcurrency) {
  PlannerOptions options;
  options.max_trajectories = kEnumerationCap;
  std::vector<Trajectory> out = EnumerateTrajectories(ground, h, constraints, noconcurrency, options);
  Require(static_cast<int>(out.size()) < kEnumerationCap, "enumeration hit its cap");
  return out;
}

void CompletionMatchesOracle() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<testing::Instance> instances = testing::SmallInstances();
  Require(instances.size() >= 10, "fewer than ten instances");
  int compared = 0;
  for (const testing::Instance& in : instances) {
    for (int h = 0; h <= 2; ++h) {
      std::vector<Trajectory> sat = Enumerate(in.ground, h, {}, in.noconcurrency);
      std::vector<Trajectory> oracle = OracleTrajectories(in.ground, h, in.noconcurrency);
      std::sort(sat.begin(), sat.end());
      std::sort(oracle.begin(), oracle.end());
      std::ostringstream m;
      m << in.name << " h=" << h << ": " << sat.size() << " models vs " << oracle.size()
        << " oracle trajectories";
      Require(sat == oracle, m.str());
      compared += static_cast<int>(oracle.size());
    }
  }
  Require(compared > 0, "no trajectories compared");
  RequireWithin(start, 10, "equivalence");
}

int PlannedMakespan(const DomainBundle& bundle) {
  const auto start = std::chrono::steady_clock::now();
  const Grounded g = GroundBundle(bundle);
  const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
  Require(r.outcome == Outcome::kPlanFound, bundle.name + ": no plan");
  Require(ValidatePlan(g.ground, g.problem, *r.plan, g.registry).valid,
          bundle.name + ": plan does not validate");
  RequireWithin(start, 5, bundle.name);
  return r.plan->horizon();
}

void RequireMakespan(const DomainBundle& bundle, int oracle, int expected) {
  const int got = PlannedMakespan(bundle);
  std::ostringstream m;
  m << bundle.name << ": makespan " << got << ", oracle " << oracle << ", expected "
    << expected;
  Require(got == oracle && oracle == expected, m.str());
}

void MakespansAreOptimal() {
  const int moves[] = {1, 3, 7};
  for (int n = 1; n <= 3; ++n) {
    RequireMakespan(BuildTowerOfHanoi(n), testing::TowerOfHanoiMoves(n), moves[n - 1]);
  }
  const DomainBundle delivery = BuildRobotBoxes(3, 1);
  const Grounded g = GroundBundle(delivery);
  const std::optional<int> oracle = OracleShortestPlan(g.ground, g.problem, 10);
  Require(oracle.has_value(), "delivery: oracle finds no plan");
  RequireMakespan(delivery, *oracle, 4);
  const GridWorld square = GridWorld::Parse("..\n..\n");
  for (bool sequential : {false, true}) {
    const DomainBundle mapp = BuildMapp(square, {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}, sequential);
    Require(mapp.expected.has_value(), mapp.name + ": no BFS makespan");
    RequireMakespan(mapp, *mapp.expected, sequential ? 4 : 2);
  }
}

void HeldBoxMovesWithRobot() {
  const GroundDomain g = Ground(BuildRobotBoxes(2, 1).domain, {});
  PartialState init(g.num_fluents, -1);
  init[*g.FindConstant("atRobo")] = *g.FindValue(*g.FindConstant("atRobo"), "L1");
  init[*g.FindConstant("holding(B1)")] = 0;
  const QueryResult r = Predict(g, init, {{*g.FindConstant("goto(L2)")}});
  Require(r.trajectories.size() == 1,
          std::to_string(r.trajectories.size()) + " successors, expected 1");
  const State& next = r.trajectories[0].states[1];
  Require(testing::ValueOf(g, next, "atObj(B1)") == "L2", "box did not move");
  Require(testing::ValueOf(g, next, "atRobo") == "L2", "robot did not move");
}

void BoxesNeverCollide() {
  for (const DomainBundle& b : {BuildRobotBoxes(3, 2), BuildRobotBoxes(4, 3)}) {
    const Grounded g = GroundBundle(b);
    if (static_cast<int>(g.ground.SignatureAtoms().size()) <= kOracleAtomLimit) {
      const std::vector<State> states = OracleStates(g.ground);
      Require(!states.empty(), b.name + ": no legal states");
      for (const State& s : states) {
        Require(!testing::BoxesCollide(g.ground, s), b.name + ": oracle state collides");
      }
    }
    for (const Trajectory& t : Enumerate(g.ground, 0, {}, false)) {
      Require(!testing::BoxesCollide(g.ground, t.states[0]), b.name + ": legal state collides");
    }
    const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
    Require(r.outcome == Outcome::kPlanFound, b.name + ": no plan");
    for (const State& s : r.plan->trajectory.states) {
      Require(!testing::BoxesCollide(g.ground, s), b.name + ": planned state collides");
    }
  }
  Grounded g = GroundBundle(BuildRobotBoxes(3, 2));
  g.problem.goal = GroundClosedFormula(
      g.ground,
      testing::MustParseProblem(
          ":init atRobo=L1; :goal atObj(B1)=L2 & atObj(B2)=L2 & ~holding(B1) & ~holding(B2);",
          g.bundle.domain)
          .goal,
      g.registry);
  g.problem.max_horizon = 8;
  const QueryResult r = FindPlan(g.ground, g.problem, g.registry);
  Require(r.outcome == Outcome::kNoPlanUpTo && r.max_horizon == 8,
          std::string("colliding goal: ") + OutcomeName(r.outcome));
}

// Executions of goto between landmarks with no path, checked on the world
// directly rather than through the registry.
int Crossings(const GroundDomain& g, const GridWorld& world, const Trajectory& t) {
  int crossings = 0;
  for (int k = 0; k < t.horizon(); ++k) {
    for (int a : t.actions[k]) {
      const GroundConstant& c = g.constants[a];
      if (c.name != "goto") continue;
      if (!world.PathExists(testing::ValueOf(g, t.states[k], "atRobo"), c.args[0])) ++crossings;
    }
  }
  return crossings;
}

void WallsBlockPlans() {
  const GridWorld walled = GridWorld::Parse(testing::kWalledWorld);
  const Grounded g = GroundBundle(BuildRobotBoxes(3, 1, walled));
  Require(!walled.PathExists("L1", "L3") && walled.PathExists("L1", "L2"),
          "world is not walled as expected");
  for (const Transition& tr : OracleTransitions(g.ground)) {
    Require(Crossings(g.ground, walled,
                      {{std::get<0>(tr), std::get<2>(tr)}, {std::get<1>(tr)}}) == 0,
            "oracle transition crosses the wall");
  }
  int checked = 0;
  for (int h = 0; h <= 8; ++h) {
    GroundProblem fixed = g.problem;
    fixed.min_horizon = fixed.max_horizon = h;
    const QueryResult r = FindPlan(g.ground, fixed, g.registry);
    Require(r.outcome == Outcome::kNoPlanUpTo,
            "walled world has a plan at horizon " + std::to_string(h));
    // Every execution from the initial state: a superset of every plan for
    // any goal.
    for (const Trajectory& t :
         Enumerate(g.ground, h, {{0, g.problem.init}}, g.problem.noconcurrency)) {
      Require(Crossings(g.ground, walled, t) == 0, "an execution crosses the wall");
      ++checked;
    }
  }
  Require(checked > 0, "no executions enumerated");
  const GridWorld open = GridWorld::Parse(testing::kOpenWorld);
  const Grounded o = GroundBundle(BuildRobotBoxes(3, 1, open));
  const QueryResult r = FindPlan(o.ground, o.problem, o.registry);
  Require(r.outcome == Outcome::kPlanFound, "open world has no plan");
  Require(ValidatePlan(o.ground, o.problem, *r.plan, o.registry).valid,
          "open-world plan does not validate");
}

std::int64_t TravelTime(const GroundDomain& g, const GridWorld& world, const Trajectory& t) {
  std::int64_t total = 0;
  for (int k = 0; k < t.horizon(); ++k) {
    for (int a : t.actions[k]) {
      if (g.constants[a].name != "goto") continue;
      const std::optional<int> d =
          world.TimeEstimate(testing::ValueOf(g, t.states[k], "atRobo"), g.constants[a].args[0]);
      Require(d.has_value(), "plan uses an unreachable goto");
      total += *d;
    }
  }
  return total;
}

void DeadlineIsEnforced() {
  const GridWorld world = GridWorld::Parse(testing::kDeliveryWorld);
  Grounded g = GroundBundle(BuildRobotBoxes(3, 1, world));
  g.problem.max_horizon = 8;
  g.problem.max_cost = 6;
  QueryResult r = FindPlan(g.ground, g.problem, g.registry);
  Require(r.outcome == Outcome::kPlanFound, "no plan under deadline 6");
  const std::int64_t recomputed = TravelTime(g.ground, world, r.plan->trajectory);
  Require(r.plan->cost == 6 && recomputed == 6,
          "cost " + std::to_string(r.plan->cost.value_or(-1)) + ", recomputed " +
              std::to_string(recomputed));
  g.problem.max_cost = 5;
  r = FindPlan(g.ground, g.problem, g.registry);
  Require(r.outcome == Outcome::kNoPlanUpTo && r.max_horizon == 8,
          std::string("deadline 5: ") + OutcomeName(r.outcome));
}

bool BruteForceSat(const CnfFormula& cnf) {
  std::vector<bool> model(cnf.num_vars + 1);
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    for (int v = 1; v <= cnf.num_vars; ++v) model[v] = mask & (1u << (v - 1));
    if (cnf.Satisfies(model)) return true;
  }
  return false;
}

void SolverAgreesWithEnumeration() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    CnfFormula cnf;
    cnf.num_vars = std::uniform_int_distribution<int>(1, 16)(rng);
    const int clauses = std::uniform_int_distribution<int>(0, 60)(rng);
    for (int c = 0; c < clauses; ++c) {
      std::vector<int> clause;
      const int width = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < width; ++k) {
        const int v = std::uniform_int_distribution<int>(1, cnf.num_vars)(rng);
        clause.push_back(rng() % 2 ? v : -v);
      }
      cnf.clauses.push_back(clause);
    }
    Solver solver(cnf);
    const SolveResult r = solver.Solve();
    Require(r.sat() == BruteForceSat(cnf), "disagreement on instance " + std::to_string(i));
    if (r.sat()) Require(cnf.Satisfies(*r.model), "bad model on instance " + std::to_string(i));
  }
  for (int n = 1; n <= 4; ++n) {
    CnfFormula php;
    const auto var = [&](int p, int h) { return p * n + h + 1; };
    php.num_vars = (n + 1) * n;
    for (int p = 0; p <= n; ++p) {
      std::vector<int> some;
      for (int h = 0; h < n; ++h) some.push_back(var(p, h));
      php.clauses.push_back(some);
    }
    for (int h = 0; h < n; ++h) {
      for (int p = 0; p <= n; ++p) {
        for (int q = p + 1; q <= n; ++q) php.clauses.push_back({-var(p, h), -var(q, h)});
      }
    }
    Solver solver(php);
    Require(!solver.Solve().sat(), "PHP(" + std::to_string(n + 1) + "," + std::to_string(n) +
                                       ") reported satisfiable");
  }
  RequireWithin(start, 30, "SAT corpus");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void CliIsDeterministic() {
  const fs::path dir = fs::temp_directory_path() / "causalplan_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (int run = 1; run <= 2; ++run) {
    const std::string n = std::to_string(run);
    const std::string command = std::string("\"") + CAUSALPLAN_CLI_PATH +
                                "\" demo toh --disks 3 --seed 0 --plan-out \"" +
                                (dir / ("plan" + n)).string() + "\" --dimacs-out \"" +
                                (dir / ("cnf" + n)).string() + "\" > \"" +
                                (dir / ("out" + n)).string() + "\"";
    Require(std::system(command.c_str()) == 0, "cli run " + n + " failed");
  }
  const std::string plan = ReadFile(dir / "plan1");
  const std::string cnf = ReadFile(dir / "cnf1");
  Require(!plan.empty() && !cnf.empty(), "empty output files");
  Require(plan == ReadFile(dir / "plan2"), "plan files differ");
  Require(cnf == ReadFile(dir / "cnf2"), "DIMACS files differ");
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> run;
};

}  // namespace
}  // namespace causalplan

int main() {
  using causalplan::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "completion matches the oracle on small domains", causalplan::CompletionMatchesOracle},
      {2, "plan makespans are optimal", causalplan::MakespansAreOptimal},
      {3, "a held box moves with the robot", causalplan::HeldBoxMovesWithRobot},
      {4, "boxes never share a location", causalplan::BoxesNeverCollide},
      {5, "plans never cross a wall", causalplan::WallsBlockPlans},
      {6, "cost deadline is enforced", causalplan::DeadlineIsEnforced},
      {7, "SAT engine agrees with enumeration", causalplan::SolverAgreesWithEnumeration},
      {8, "demo runs are byte-identical", causalplan::CliIsDeterministic},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.run();
    } catch (const causalplan::Failure& f) {
      ok = false;
      detail = f.message;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                causalplan::Seconds(start), ok ? "" : ": ", detail.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
