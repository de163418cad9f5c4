#include <algorithm>
#include <cstdlib>

#include "causalplan/planner.h"

namespace causalplan {
namespace {

// Truth of a ground formula at `step` of a trajectory; atoms outside the
// horizon are false.
bool HoldsAt(const GroundDomain& ground, const Trajectory& trajectory,
             const GroundFormula& formula, int step) {
  return Stamp(ground, formula, step, trajectory.horizon())
      .Evaluate([&](const TimedAtom& atom) {
        return Holds(trajectory, atom, ground);
      });
}

struct CostTerm {
  int step = 0;
  int action = 0;
  std::optional<std::int64_t> cost;
  // The literals the cost depends on: the action and the fluent values read.
  std::vector<TimedAtom> support;
};

CostTerm ActionCost(const GroundDomain& ground, const Trajectory& trajectory,
                    int step, int action, const ExternalRegistry& registry) {
  CostTerm term;
  term.step = step;
  term.action = action;
  term.cost = 0;
  term.support.push_back({{action, 0}, step});
  auto it = ground.costs.find(action);
  if (it == ground.costs.end()) return term;
  const GroundCost& binding = it->second;
  const int arity = static_cast<int>(binding.args.size());
  const ExternalRegistry::Function* fn =
      registry.FindFunction(binding.external, arity);
  if (fn == nullptr) {
    throw PlanningError("cost external '" + binding.external + "/" +
                        std::to_string(arity) + "' is not registered");
  }
  std::vector<std::string> args;
  for (const GroundCostArg& arg : binding.args) {
    if (arg.object) {
      args.push_back(*arg.object);
      continue;
    }
    const int value = trajectory.states.at(step).at(arg.fluent);
    args.push_back(ground.constants[arg.fluent].values.at(value));
    term.support.push_back({{arg.fluent, value}, step});
  }
  try {
    term.cost = (*fn)(args);
  } catch (const std::exception& e) {
    throw PlanningError("cost external '" + binding.external + "' failed on " +
                        ground.constants[action].Label() + ": " + e.what());
  }
  if (term.cost && *term.cost < 0) {
    throw PlanningError("cost external '" + binding.external +
                        "' returned a negative cost");
  }
  return term;
}

std::vector<CostTerm> CostTerms(const GroundDomain& ground,
                                const Trajectory& trajectory,
                                const ExternalRegistry& registry) {
  std::vector<CostTerm> terms;
  for (int t = 0; t < trajectory.horizon(); ++t) {
    for (int a : trajectory.actions[t]) {
      terms.push_back(ActionCost(ground, trajectory, t, a, registry));
    }
  }
  return terms;
}

bool CostsRegistered(const GroundDomain& ground,
                     const ExternalRegistry& registry) {
  for (const auto& [action, binding] : ground.costs) {
    if (registry.FindFunction(binding.external,
                              static_cast<int>(binding.args.size())) == nullptr) {
      return false;
    }
  }
  return true;
}

// Negation of a set of cost terms whose summed cost exceeds `deadline`,
// taking the most expensive terms first.
std::vector<int> CostCoreClause(const Encoding& encoding,
                                std::vector<CostTerm> terms,
                                std::int64_t deadline) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const CostTerm& a, const CostTerm& b) {
                     if (a.cost.has_value() != b.cost.has_value()) {
                       return !a.cost.has_value();
                     }
                     return a.cost.value_or(0) > b.cost.value_or(0);
                   });
  std::vector<int> clause;
  std::int64_t sum = 0;
  for (const CostTerm& term : terms) {
    for (const TimedAtom& atom : term.support) {
      clause.push_back(-encoding.Literal(atom));
    }
    if (!term.cost) break;
    sum += *term.cost;
    if (sum > deadline) break;
  }
  return clause;
}

std::vector<bool> SolveOrEmpty(Solver& solver, const std::vector<int>& assumptions,
                               const PlannerOptions& options, int& calls) {
  ++calls;
  SolveResult result = solver.Solve(assumptions, options.limits);
  if (!result.sat()) return {};
  return std::move(*result.model);
}

}  // namespace

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPlanFound:
      return "PlanFound";
    case Outcome::kNoPlanUpTo:
      return "NoPlanUpTo";
    case Outcome::kInconsistent:
      return "Inconsistent";
    case Outcome::kConsistent:
      return "Consistent";
    case Outcome::kPredicted:
      return "Predicted";
  }
  return "?";
}

Encoding EncodeTheory(const GroundDomain& ground, int horizon,
                      bool noconcurrency) {
  const std::vector<CausalRule> rules =
      Unroll(ground, Desugar(ground), {horizon, noconcurrency});
  Encoding encoding(ground, horizon);
  encoding.AddCompletion(Complete(ground, rules, horizon));
  return encoding;
}

Encoding EncodeProblem(const GroundDomain& ground, const GroundProblem& problem,
                       int horizon) {
  Encoding encoding = EncodeTheory(ground, horizon, problem.noconcurrency);
  encoding.Assert(Stamp(ground, problem.init, 0, horizon));
  encoding.Assert(Stamp(ground, problem.goal, horizon, horizon));
  for (const GroundTimedConstraint& c : problem.constraints) {
    const int step = c.step.value_or(horizon);
    if (step > horizon) {
      encoding.Assert(TimedFormula::False());
      continue;
    }
    encoding.Assert(Stamp(ground, c.formula, step, horizon));
  }
  return encoding;
}

QueryResult CheckConsistency(const GroundDomain& ground,
                             const PlannerOptions& options) {
  QueryResult result;
  const char* checks[] = {"h=0: no legal state exists",
                          "h=1: no transition exists"};
  for (int h = 0; h <= 1; ++h) {
    Encoding encoding = EncodeTheory(ground, h);
    Solver solver(encoding.cnf(), options.solver);
    if (SolveOrEmpty(solver, {}, options, result.solver_calls).empty()) {
      result.outcome = Outcome::kInconsistent;
      result.failed_check = checks[h];
      return result;
    }
  }
  result.outcome = Outcome::kConsistent;
  return result;
}

std::optional<std::int64_t> PlanCost(const GroundDomain& ground,
                                     const Trajectory& trajectory,
                                     const ExternalRegistry& registry) {
  std::int64_t sum = 0;
  for (const CostTerm& term : CostTerms(ground, trajectory, registry)) {
    if (!term.cost) return std::nullopt;
    sum += *term.cost;
  }
  return sum;
}

QueryResult FindPlan(const GroundDomain& ground, const GroundProblem& problem,
                     const ExternalRegistry& registry,
                     const PlannerOptions& options) {
  QueryResult result;
  const bool deadline = problem.max_cost.has_value();
  for (const auto& [action, binding] : ground.costs) {
    const int arity = static_cast<int>(binding.args.size());
    if (deadline && registry.FindFunction(binding.external, arity) == nullptr) {
      throw PlanningError("cost external '" + binding.external + "/" +
                          std::to_string(arity) + "' is not registered");
    }
  }
  const bool costed =
      deadline || (!ground.costs.empty() && CostsRegistered(ground, registry));
  const int first = std::max(problem.min_horizon, 0);
  for (int h = first; h <= problem.max_horizon; ++h) {
    Encoding encoding = EncodeProblem(ground, problem, h);
    Solver solver(encoding.cnf(), options.solver);
    while (true) {
      std::vector<bool> model =
          SolveOrEmpty(solver, {}, options, result.solver_calls);
      if (model.empty()) break;
      Plan plan;
      plan.trajectory = encoding.Decode(model);
      if (costed) plan.cost = PlanCost(ground, plan.trajectory, registry);
      if (!deadline || (plan.cost && *plan.cost <= *problem.max_cost)) {
        result.outcome = Outcome::kPlanFound;
        result.plan = std::move(plan);
        return result;
      }
      solver.AddClause(CostCoreClause(
          encoding, CostTerms(ground, plan.trajectory, registry),
          *problem.max_cost));
    }
  }
  result.outcome = Outcome::kNoPlanUpTo;
  result.max_horizon = problem.max_horizon;
  return result;
}

QueryResult Predict(const GroundDomain& ground, const PartialState& init,
                    const std::vector<std::vector<int>>& actions,
                    const PlannerOptions& options) {
  if (static_cast<int>(init.size()) != ground.num_fluents) {
    throw PlanningError("initial state has the wrong number of fluents");
  }
  const int h = static_cast<int>(actions.size());
  Encoding encoding = EncodeTheory(ground, h);
  std::vector<int> assumptions;
  for (int c = 0; c < ground.num_fluents; ++c) {
    if (init[c] < 0) continue;
    if (init[c] >= static_cast<int>(ground.constants[c].values.size())) {
      throw PlanningError("bad value for " + ground.constants[c].Label());
    }
    assumptions.push_back(encoding.Literal({{c, init[c]}, 0}));
  }
  for (int t = 0; t < h; ++t) {
    for (int a : actions[t]) {
      if (a < ground.num_fluents || a >= ground.num_constants()) {
        throw PlanningError("step " + std::to_string(t) +
                            " names a constant that is not an action");
      }
    }
    for (int a = ground.num_fluents; a < ground.num_constants(); ++a) {
      const bool executed =
          std::find(actions[t].begin(), actions[t].end(), a) != actions[t].end();
      assumptions.push_back(encoding.Literal({{a, executed ? 0 : 1}, t}));
    }
  }
  QueryResult result;
  result.outcome = Outcome::kPredicted;
  Solver solver(encoding.cnf(), options.solver);
  while (static_cast<int>(result.trajectories.size()) <
         options.max_trajectories) {
    std::vector<bool> model =
        SolveOrEmpty(solver, assumptions, options, result.solver_calls);
    if (model.empty()) break;
    Trajectory trajectory = encoding.Decode(model);
    std::vector<int> block;
    for (int t = 0; t <= h; ++t) {
      for (int c = 0; c < ground.num_fluents; ++c) {
        block.push_back(-encoding.Literal({{c, trajectory.states[t][c]}, t}));
      }
    }
    result.trajectories.push_back(std::move(trajectory));
    solver.AddClause(block);
  }
  std::sort(result.trajectories.begin(), result.trajectories.end());
  return result;
}

std::vector<Trajectory> EnumerateTrajectories(
    const GroundDomain& ground, int horizon,
    const std::vector<GroundTimedConstraint>& constraints, bool noconcurrency,
    const PlannerOptions& options) {
  Encoding encoding = EncodeTheory(ground, horizon, noconcurrency);
  for (const GroundTimedConstraint& c : constraints) {
    const int step = c.step.value_or(horizon);
    encoding.Assert(step > horizon ? TimedFormula::False()
                                   : Stamp(ground, c.formula, step, horizon));
  }
  Solver solver(encoding.cnf(), options.solver);
  std::vector<Trajectory> out;
  int calls = 0;
  while (static_cast<int>(out.size()) < options.max_trajectories) {
    std::vector<bool> model = SolveOrEmpty(solver, {}, options, calls);
    if (model.empty()) break;
    std::vector<int> block;
    for (int v = 1; v <= encoding.num_atom_vars(); ++v) {
      block.push_back(model[v] ? -v : v);
    }
    out.push_back(encoding.Decode(model));
    solver.AddClause(block);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlanCheck ValidatePlan(const GroundDomain& ground, const GroundProblem& problem,
                       const Plan& plan, const ExternalRegistry& registry) {
  PlanCheck check;
  const Trajectory& traj = plan.trajectory;
  const int h = traj.horizon();
  auto fail = [&](std::string message) {
    check.diagnostics.push_back(std::move(message));
  };
  if (static_cast<int>(traj.states.size()) != h + 1) {
    fail("plan has " + std::to_string(traj.states.size()) + " states for " +
         std::to_string(h) + " steps");
    return check;
  }
  for (int t = 0; t < h; ++t) {
    for (int a : traj.actions[t]) {
      if (a < ground.num_fluents || a >= ground.num_constants()) {
        fail("step " + std::to_string(t) + " names a non-action");
        return check;
      }
    }
    if (!std::is_sorted(traj.actions[t].begin(), traj.actions[t].end())) {
      fail("step " + std::to_string(t) + " actions are not in canonical order");
      return check;
    }
  }
  const Completion completion =
      Complete(ground, Unroll(ground, Desugar(ground), {h, problem.noconcurrency}),
               h);
  if (std::optional<CompletionViolation> v =
          FindViolation(ground, completion, traj)) {
    fail(v->message);
    return check;
  }
  if (!HoldsAt(ground, traj, problem.init, 0)) {
    fail("initial condition fails at step 0: " +
         ground.FormulaLabel(problem.init));
  }
  if (!HoldsAt(ground, traj, problem.goal, h)) {
    fail("goal fails at step " + std::to_string(h) + ": " +
         ground.FormulaLabel(problem.goal));
  }
  for (const GroundTimedConstraint& c : problem.constraints) {
    const int step = c.step.value_or(h);
    if (step > h || !HoldsAt(ground, traj, c.formula, step)) {
      fail("constraint fails at step " + std::to_string(step) + ": " +
           ground.FormulaLabel(c.formula));
    }
  }
  if (problem.max_cost || plan.cost) {
    const std::optional<std::int64_t> cost = PlanCost(ground, traj, registry);
    if (plan.cost && plan.cost != cost) {
      fail("recorded cost " + std::to_string(*plan.cost) +
           " differs from the recomputed cost " +
           (cost ? std::to_string(*cost) : std::string("undefined")));
    }
    if (problem.max_cost && (!cost || *cost > *problem.max_cost)) {
      fail("cost deadline: plan cost " +
           (cost ? std::to_string(*cost) : std::string("undefined")) +
           " exceeds " + std::to_string(*problem.max_cost));
    }
  }
  check.valid = check.diagnostics.empty();
  return check;
}

}  // namespace causalplan
