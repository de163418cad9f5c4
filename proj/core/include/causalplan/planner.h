// Reasoning queries over a ground domain: consistency, planning with horizon
// deepening and cost deadlines, prediction, plan validation. Also the
// brute-force transition oracle and the plan file format.

#ifndef CAUSALPLAN_PLANNER_H_
#define CAUSALPLAN_PLANNER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "causalplan/compiler.h"
#include "causalplan/grounder.h"
#include "causalplan/sat.h"

namespace causalplan {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Plan {
  Trajectory trajectory;
  std::optional<std::int64_t> cost;

  int horizon() const { return trajectory.horizon(); }
};

enum class Outcome { kPlanFound, kNoPlanUpTo, kInconsistent, kConsistent, kPredicted };

const char* OutcomeName(Outcome outcome);

struct QueryResult {
  Outcome outcome = Outcome::kConsistent;
  // kPlanFound.
  std::optional<Plan> plan;
  // kNoPlanUpTo.
  int max_horizon = 0;
  // kInconsistent: "h=0 ..." or "h=1 ...".
  std::string failed_check;
  // kPredicted.
  std::vector<Trajectory> trajectories;
  // Solver calls made while answering.
  int solver_calls = 0;
};

struct PlannerOptions {
  SolverOptions solver;
  SolverLimits limits;
  // Upper bound on trajectories returned by enumeration queries.
  int max_trajectories = 1000;
};

// The full encoding of one horizon: completion, init at 0, goal at the
// horizon, and the timed constraints. A constraint for a step beyond the
// horizon makes the encoding unsatisfiable.
Encoding EncodeProblem(const GroundDomain& ground, const GroundProblem& problem,
                       int horizon);
// The completion alone.
Encoding EncodeTheory(const GroundDomain& ground, int horizon,
                      bool noconcurrency = false);

// Consistent iff a legal state (h=0) and a transition (h=1) both exist.
QueryResult CheckConsistency(const GroundDomain& ground,
                             const PlannerOptions& options = {});

// Tries horizons min..max in order and returns the first plan found whose cost
// meets the deadline, if one is set.
QueryResult FindPlan(const GroundDomain& ground, const GroundProblem& problem,
                     const ExternalRegistry& registry,
                     const PlannerOptions& options = {});

// Sum of the cost externals of the executed actions; nullopt if one of them
// is undefined (e.g. unreachable). Throws PlanningError if a cost external
// is not registered.
std::optional<std::int64_t> PlanCost(const GroundDomain& ground,
                                     const Trajectory& trajectory,
                                     const ExternalRegistry& registry);

// Per fluent: a value index, or -1 if unknown.
using PartialState = std::vector<int>;

// All trajectories whose initial state agrees with `init` and whose action
// sets are exactly `actions`.
QueryResult Predict(const GroundDomain& ground, const PartialState& init,
                    const std::vector<std::vector<int>>& actions,
                    const PlannerOptions& options = {});

// All trajectories of length `horizon` satisfying the timed constraints
// (nullopt step: the final step).
std::vector<Trajectory> EnumerateTrajectories(
    const GroundDomain& ground, int horizon,
    const std::vector<GroundTimedConstraint>& constraints = {},
    bool noconcurrency = false, const PlannerOptions& options = {});

struct PlanCheck {
  bool valid = false;
  std::vector<std::string> diagnostics;
};

PlanCheck ValidatePlan(const GroundDomain& ground, const GroundProblem& problem,
                       const Plan& plan, const ExternalRegistry& registry);

// Brute-force oracle. Enumerates assignments step by step and keeps those
// that satisfy the causal-model definition directly: no FALSE-headed rule
// fires, every caused literal holds, and every timed constant's value is
// caused. Throws PlanningError above kOracleAtomLimit atoms per step.
inline constexpr int kOracleAtomLimit = 22;

std::vector<Trajectory> OracleTrajectories(const GroundDomain& ground,
                                           const std::vector<CausalRule>& rules,
                                           int horizon);
std::vector<Trajectory> OracleTrajectories(const GroundDomain& ground,
                                           int horizon,
                                           bool noconcurrency = false);
std::vector<State> OracleStates(const GroundDomain& ground);

using Transition = std::tuple<State, std::vector<int>, State>;
std::vector<Transition> OracleTransitions(const GroundDomain& ground);

// Breadth-first shortest makespan over OracleTransitions from the states
// satisfying problem.init to a state satisfying problem.goal, honoring
// problem.noconcurrency. Timed constraints and costs are ignored.
std::optional<int> OracleShortestPlan(const GroundDomain& ground,
                                      const GroundProblem& problem,
                                      int max_horizon);

// Plan files:
//
//   horizon 2
//   cost 4
//   step 0: goto(L2)
//   step 1: pickup(B1), goto(L1)
//   state 0: atRobo=L1 atObj(B1)=L2 holding(B1)=false
//   ...
//
// `cost` is optional. Prediction inputs use the same syntax with a possibly
// partial `state 0:` line and one `step` line per step.
std::string WritePlan(const GroundDomain& ground, const Plan& plan);
Plan ReadPlan(const GroundDomain& ground, std::string_view text);

struct PredictionInput {
  PartialState init;
  std::vector<std::vector<int>> actions;
};
PredictionInput ReadPredictionInput(const GroundDomain& ground,
                                    std::string_view text);

// "atRobo=L1 holding(B1)=false ..."
std::string StateText(const GroundDomain& ground, const State& state);

}  // namespace causalplan

#endif  // CAUSALPLAN_PLANNER_H_
