#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "causalplan/compiler.h"
#include "causalplan/dimacs.h"
#include "causalplan/domains.h"
#include "causalplan/grid.h"
#include "causalplan/grounder.h"
#include "causalplan/parser.h"
#include "causalplan/planner.h"

namespace causalplan {
namespace {

// Carries an exit status out of a subcommand.
struct CliExit {
  int code;
  std::string message;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliExit{kExitError, "cannot read '" + path + "'"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw CliExit{kExitError, "cannot write '" + path + "'"};
}

template <typename T>
T Unwrap(ParseResult<T> result, std::ostream& err) {
  if (result.ok()) return std::move(*result.value);
  for (const Diagnostic& d : result.diagnostics) err << d.ToString() << "\n";
  throw CliExit{kExitInvalid, ""};
}

// Everything a subcommand needs, loaded from files.
struct Workspace {
  std::optional<GridWorld> world;
  ExternalRegistry registry;
  GroundDomain ground;
  PlanningProblem problem;
  GroundProblem ground_problem;
};

Workspace Load(const std::string& domain_path, const std::string& problem_path,
               const std::string& world_path, std::ostream& err) {
  Workspace ws;
  if (!world_path.empty()) {
    ws.world = GridWorld::Parse(ReadFile(world_path));
    RegisterGridExternals(*ws.world, ws.registry);
  }
  DomainDescription domain =
      Unwrap(ParseDomain(ReadFile(domain_path), domain_path), err);
  if (!problem_path.empty()) {
    ws.problem = Unwrap(ParseProblem(ReadFile(problem_path), domain, problem_path), err);
  }
  ws.ground = Ground(domain, ws.registry);
  if (!problem_path.empty()) {
    ws.ground_problem = GroundPlanningProblem(ws.ground, ws.problem, ws.registry);
  }
  return ws;
}

Workspace FromBundle(const DomainBundle& bundle) {
  Workspace ws;
  ws.world = bundle.world;
  ws.registry = BundleRegistry(bundle);
  ws.problem = bundle.problem;
  ws.ground = Ground(bundle.domain, ws.registry);
  ws.ground_problem = GroundPlanningProblem(ws.ground, ws.problem, ws.registry);
  return ws;
}

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CAUSALPLAN_SEED")) {
    try {
      std::size_t used = 0;
      const std::uint64_t seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::logic_error&) {
    }
    throw CliExit{kExitError, "CAUSALPLAN_SEED is not a number"};
  }
  return 0;
}

std::string ActionList(const GroundDomain& ground, const std::vector<int>& acts) {
  if (acts.empty()) return "(wait)";
  std::string out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (i > 0) out += ", ";
    out += ground.constants[acts[i]].Label();
  }
  return out;
}

// The initial state in full, then per step the actions and the fluents that
// changed.
void PrintTrace(const GroundDomain& ground, const Trajectory& t, std::ostream& out) {
  out << "  state 0: " << StateText(ground, t.states[0]) << "\n";
  for (int k = 0; k < t.horizon(); ++k) {
    out << "  step " << k << ": " << ActionList(ground, t.actions[k]);
    std::string changed;
    for (int c = 0; c < ground.num_fluents; ++c) {
      if (t.states[k + 1][c] == t.states[k][c]) continue;
      changed += " " + ground.constants[c].Label() + "=" +
                 ground.constants[c].values[t.states[k + 1][c]];
    }
    out << " =>" << (changed.empty() ? " (no change)" : changed) << "\n";
  }
}

void PrintPlan(const GroundDomain& ground, const Plan& plan, std::ostream& out) {
  out << "plan found: horizon " << plan.horizon();
  if (plan.cost) out << ", cost " << *plan.cost;
  out << "\n";
  PrintTrace(ground, plan.trajectory, out);
}

// Writes the plan, reads it back and validates it.
int WriteValidatedPlan(const Workspace& ws, const Plan& plan,
                       const std::string& path, std::ostream& err) {
  WriteFile(path, WritePlan(ws.ground, plan));
  const Plan reread = ReadPlan(ws.ground, ReadFile(path));
  const PlanCheck check = ValidatePlan(ws.ground, ws.ground_problem, reread, ws.registry);
  if (check.valid) return kExitOk;
  err << "written plan does not validate:\n";
  for (const std::string& d : check.diagnostics) err << "  " << d << "\n";
  return kExitInvalid;
}

int ReportPlan(const Workspace& ws, const QueryResult& result,
               const std::string& plan_out, std::ostream& out,
               std::ostream& err) {
  if (result.outcome != Outcome::kPlanFound) {
    out << "no plan up to horizon " << result.max_horizon << "\n";
    return kExitNoPlan;
  }
  PrintPlan(ws.ground, *result.plan, out);
  if (plan_out.empty()) return kExitOk;
  return WriteValidatedPlan(ws, *result.plan, plan_out, err);
}

void WriteDimacs(const Encoding& encoding, const std::string& path,
                 std::ostream& out) {
  WriteFile(path, EmitDimacs(encoding.cnf()));
  out << "wrote CNF for horizon " << encoding.horizon() << " ("
      << encoding.cnf().num_vars << " variables, "
      << encoding.cnf().clauses.size() << " clauses) to " << path << "\n";
}

std::string RuleText(const GroundDomain& ground, const CausalRule& rule) {
  std::string head = rule.head ? TimedAtomLabel(ground, *rule.head) : "false";
  return "caused " + head + " if " + TimedFormulaLabel(ground, rule.body) +
         "  % " + rule.origin;
}

struct CommonOptions {
  std::string world;
  std::optional<std::uint64_t> seed;
  std::string plan_out;
};

PlannerOptions MakePlannerOptions(const CommonOptions& common) {
  PlannerOptions options;
  options.solver.seed = ResolveSeed(common.seed);
  return options;
}

Cell ParseCell(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw CliExit{kExitError, "expected a cell 'x,y', got '" + text + "'"};
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Causal action-language planner", "causalplan"};
  app.require_subcommand(1);
  CommonOptions common;
  const auto add_world = [&](CLI::App* cmd) {
    cmd->add_option("--world", common.world, "Grid world file for pathExists/timeEstimate");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "Solver seed (default: $CAUSALPLAN_SEED or 0)");
  };

  std::string domain_path;
  std::string problem_path;
  std::string input_path;

  CLI::App* check = app.add_subcommand("check", "Check a domain for consistency");
  check->add_option("domain", domain_path)->required();
  add_world(check);
  add_seed(check);

  std::string emit = "theory";
  std::optional<int> horizon;
  bool noconcurrency = false;
  CLI::App* ground = app.add_subcommand("ground", "Print the ground theory or its CNF");
  ground->add_option("domain", domain_path)->required();
  add_world(ground);
  ground->add_option("--emit", emit)->check(CLI::IsMember({"theory", "cnf"}));
  ground->add_option("--horizon", horizon, "Unroll to this horizon");
  ground->add_flag("--noconcurrency", noconcurrency);

  std::vector<std::string> solver = {"internal"};
  std::optional<std::int64_t> max_cost;
  CLI::App* plan = app.add_subcommand("plan", "Find a shortest plan");
  plan->add_option("domain", domain_path)->required();
  plan->add_option("problem", problem_path)->required();
  add_world(plan);
  add_seed(plan);
  plan->add_option("--solver", solver, "internal | dimacs-out FILE")->expected(1, 2);
  plan->add_option("--horizon", horizon, "Search this horizon only");
  plan->add_option("--max-cost", max_cost, "Cost deadline");
  plan->add_flag("--noconcurrency", noconcurrency);
  plan->add_option("--plan-out", common.plan_out, "Write the plan file here");

  CLI::App* predict = app.add_subcommand("predict", "Predict the outcome of actions");
  predict->add_option("domain", domain_path)->required();
  predict->add_option("input", input_path, "state 0 and step lines")->required();
  add_world(predict);
  add_seed(predict);

  bool solver_output = false;
  CLI::App* validate = app.add_subcommand("validate", "Validate a plan file");
  validate->add_option("domain", domain_path)->required();
  validate->add_option("problem", problem_path)->required();
  validate->add_option("plan", input_path)->required();
  add_world(validate);
  validate->add_flag("--solver-output", solver_output,
                     "The file is a SAT solver's output for `plan --solver dimacs-out`");
  validate->add_option("--horizon", horizon, "Horizon of that CNF");
  validate->add_option("--plan-out", common.plan_out, "Write the decoded plan here");

  CLI::App* demo = app.add_subcommand("demo", "Plan in a bundled domain");
  demo->require_subcommand(1);
  std::string dimacs_out;
  std::string export_dir;
  int disks = 3;
  int locations = 3;
  int boxes = 2;
  std::vector<std::string> starts;
  std::vector<std::string> goals;
  const auto add_demo_options = [&](CLI::App* cmd) {
    add_seed(cmd);
    cmd->add_option("--plan-out", common.plan_out, "Write the plan file here");
    cmd->add_option("--dimacs-out", dimacs_out, "Write the CNF of the plan's horizon here");
    cmd->add_option("--export", export_dir, "Write the domain, problem and world files here");
  };
  CLI::App* toh = demo->add_subcommand("toh", "Tower of Hanoi");
  toh->add_option("--disks", disks)->check(CLI::Range(1, 6));
  add_demo_options(toh);
  CLI::App* box = demo->add_subcommand("boxes", "Robot moving boxes");
  box->add_option("--locations", locations)->check(CLI::Range(2, 26));
  box->add_option("--boxes", boxes)->check(CLI::PositiveNumber);
  add_world(box);
  add_demo_options(box);
  CLI::App* mapp = demo->add_subcommand("mapp", "Multi-agent path planning");
  add_world(mapp);
  mapp->add_option("--start", starts, "Robot start cell x,y (repeat per robot)");
  mapp->add_option("--goal", goals, "Robot goal cell x,y (repeat per robot)");
  mapp->add_flag("--noconcurrency", noconcurrency);
  add_demo_options(mapp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    const PlannerOptions options = MakePlannerOptions(common);

    if (*check) {
      const Workspace ws = Load(domain_path, "", common.world, err);
      const QueryResult result = CheckConsistency(ws.ground, options);
      if (result.outcome == Outcome::kConsistent) {
        out << "consistent\n";
        return kExitOk;
      }
      out << "inconsistent: " << result.failed_check << "\n";
      return kExitInvalid;
    }

    if (*ground) {
      const Workspace ws = Load(domain_path, "", common.world, err);
      if (emit == "cnf") {
        out << EmitDimacs(EncodeTheory(ws.ground, horizon.value_or(1), noconcurrency).cnf());
        return kExitOk;
      }
      int fluent_atoms = 0;
      for (const GroundAtom& a : ws.ground.SignatureAtoms()) {
        if (!ws.ground.IsAction(a.constant)) ++fluent_atoms;
      }
      const int atoms = static_cast<int>(ws.ground.SignatureAtoms().size());
      out << "% " << fluent_atoms << " fluent atoms, " << atoms - fluent_atoms
          << " action atoms\n";
      if (!horizon) {
        for (const GroundLaw& law : ws.ground.laws) {
          out << ws.ground.LawLabel(law) << "\n";
        }
        return kExitOk;
      }
      for (const CausalRule& rule :
           Unroll(ws.ground, Desugar(ws.ground), {*horizon, noconcurrency})) {
        out << RuleText(ws.ground, rule) << "\n";
      }
      return kExitOk;
    }

    if (*plan) {
      Workspace ws = Load(domain_path, problem_path, common.world, err);
      GroundProblem& problem = ws.ground_problem;
      if (noconcurrency) problem.noconcurrency = true;
      if (max_cost) problem.max_cost = *max_cost;
      if (horizon) problem.min_horizon = problem.max_horizon = *horizon;
      if (solver.front() == "dimacs-out") {
        if (solver.size() != 2) throw CliExit{kExitError, "--solver dimacs-out needs a FILE"};
        WriteDimacs(EncodeProblem(ws.ground, problem, problem.max_horizon),
                    solver[1], out);
        return kExitOk;
      }
      if (solver.front() != "internal" || solver.size() != 1) {
        throw CliExit{kExitError, "--solver must be 'internal' or 'dimacs-out FILE'"};
      }
      return ReportPlan(ws, FindPlan(ws.ground, problem, ws.registry, options),
                        common.plan_out, out, err);
    }

    if (*predict) {
      const Workspace ws = Load(domain_path, "", common.world, err);
      const PredictionInput input = ReadPredictionInput(ws.ground, ReadFile(input_path));
      const QueryResult result = Predict(ws.ground, input.init, input.actions, options);
      if (result.trajectories.empty()) {
        out << "no trajectory: the actions are not executable from that state\n";
        return kExitInvalid;
      }
      out << result.trajectories.size() << " trajectories\n";
      for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
        out << "trajectory " << i + 1 << ":\n";
        PrintTrace(ws.ground, result.trajectories[i], out);
      }
      return kExitOk;
    }

    if (*validate) {
      const Workspace ws = Load(domain_path, problem_path, common.world, err);
      Plan candidate;
      if (solver_output) {
        const int h = horizon.value_or(ws.ground_problem.max_horizon);
        const Encoding encoding = EncodeProblem(ws.ground, ws.ground_problem, h);
        const SolveResult result = ReadDimacsModel(ReadFile(input_path), encoding.cnf());
        if (!result.sat()) {
          out << "solver reports no plan at horizon " << h << "\n";
          return kExitNoPlan;
        }
        candidate.trajectory = encoding.Decode(*result.model);
        if (!ws.ground.costs.empty()) {
          candidate.cost = PlanCost(ws.ground, candidate.trajectory, ws.registry);
        }
      } else {
        candidate = ReadPlan(ws.ground, ReadFile(input_path));
      }
      const PlanCheck check = ValidatePlan(ws.ground, ws.ground_problem, candidate, ws.registry);
      if (!check.valid) {
        out << "invalid plan:\n";
        for (const std::string& d : check.diagnostics) out << "  " << d << "\n";
        return kExitInvalid;
      }
      out << "valid ";
      PrintPlan(ws.ground, candidate, out);
      if (common.plan_out.empty()) return kExitOk;
      return WriteValidatedPlan(ws, candidate, common.plan_out, err);
    }

    DomainBundle bundle;
    if (*toh) {
      bundle = BuildTowerOfHanoi(disks);
    } else if (*box) {
      std::optional<GridWorld> world;
      if (!common.world.empty()) world = GridWorld::Parse(ReadFile(common.world));
      bundle = BuildRobotBoxes(locations, boxes, world);
    } else {
      GridWorld world = GridWorld::Parse("..\n..\n");
      std::vector<Cell> start_cells = {{0, 0}, {1, 1}};
      std::vector<Cell> goal_cells = {{1, 1}, {0, 0}};
      if (!common.world.empty()) world = GridWorld::Parse(ReadFile(common.world));
      if (!starts.empty() || !goals.empty()) {
        start_cells.clear();
        goal_cells.clear();
        for (const std::string& s : starts) start_cells.push_back(ParseCell(s));
        for (const std::string& g : goals) goal_cells.push_back(ParseCell(g));
      }
      bundle = BuildMapp(world, start_cells, goal_cells, noconcurrency);
    }
    if (!export_dir.empty()) {
      std::filesystem::create_directories(export_dir);
      const std::filesystem::path dir(export_dir);
      WriteFile((dir / (bundle.name + ".domain")).string(), bundle.domain_text);
      WriteFile((dir / (bundle.name + ".problem")).string(), bundle.problem_text);
      if (bundle.world) {
        WriteFile((dir / (bundle.name + ".world")).string(), bundle.world->ToText());
      }
    }
    const Workspace ws = FromBundle(bundle);
    const QueryResult result = FindPlan(ws.ground, ws.ground_problem, ws.registry, options);
    out << bundle.name;
    if (bundle.expected) out << " (optimal makespan " << *bundle.expected << ")";
    out << "\n";
    if (!dimacs_out.empty()) {
      const int h = result.plan ? result.plan->horizon() : result.max_horizon;
      WriteDimacs(EncodeProblem(ws.ground, ws.ground_problem, h), dimacs_out, out);
    }
    return ReportPlan(ws, result, common.plan_out, out, err);
  } catch (const CliExit& e) {
    if (!e.message.empty()) err << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace causalplan
