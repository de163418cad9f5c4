#include "testing.h"

#include <array>
#include <deque>
#include <map>
#include <stdexcept>

#include "causalplan/parser.h"

namespace causalplan::testing {

const char kPqDomain[] = R"(
:sorts S
:objects o :: S;
:constants p :: simpleFluent; q :: simpleFluent;
:laws
  caused p if q;
  caused q if q;
  caused q=false if ~q;
)";

const char kToggleDomain[] = R"(
:sorts S
:objects o :: S;
:constants f :: inertialFluent; toggle :: action;
:laws
  toggle causes f if ~f;
  toggle causes f=false if f;
)";

const char kContradictionDomain[] = R"(
:sorts S
:objects o :: S;
:constants p :: inertialFluent;
:laws
  constraint p;
  constraint ~p;
)";

const char kDeadActionDomain[] = R"(
:sorts S
:objects o :: S;
:constants f :: inertialFluent; a :: action;
:laws
  a causes f;
  nonexecutable a;
)";

const char kLightsDomain[] = R"(
:sorts S
:objects o :: S;
:constants
  s1 :: inertialFluent; s2 :: inertialFluent; light :: simpleFluent;
  flip1 :: action; flip2 :: action;
:laws
  caused light if s1 & s2;
  caused light=false if ~s1 | ~s2;
  flip1 causes s1 if ~s1;
  flip1 causes s1=false if s1;
  flip2 causes s2 if ~s2;
  flip2 causes s2=false if s2;
)";

const char kLevelDomain[] = R"(
:sorts Level
:objects Lo, Mid, Hi :: Level;
:constants
  n :: inertialFluent(Level); mode :: simpleFluent(Level);
  noise :: simpleFluent; up :: action; reset :: action;
:laws
  vars x::Level;
  caused mode=x if n=x;
  exogenous noise;
  up causes n=Mid if n=Lo;
  up causes n=Hi if n=Mid;
  nonexecutable up if n=Hi;
  reset causes n=Lo;
  constraint ~(noise & n=Hi);
)";

const char kConflictDomain[] = R"(
:sorts S
:objects o :: S;
:constants f :: inertialFluent; g :: inertialFluent; a :: action; b :: action;
:laws
  a causes f;
  b causes f=false;
  b causes g if f;
)";

const char kWalledWorld[] = "A.#C\n..#.\nB.#.\n";
const char kOpenWorld[] = "A..C\n....\nB...\n";
const char kDeliveryWorld[] = "A..B..C\n";

DomainDescription MustParseDomain(std::string_view text) {
  ParseResult<DomainDescription> r = ParseDomain(text);
  if (!r.ok()) {
    std::string message = "domain does not parse:";
    for (const Diagnostic& d : r.diagnostics) message += "\n" + d.ToString();
    throw std::runtime_error(message);
  }
  return *r.value;
}

PlanningProblem MustParseProblem(std::string_view text,
                                 const DomainDescription& domain) {
  ParseResult<PlanningProblem> r = ParseProblem(text, domain);
  if (!r.ok()) {
    std::string message = "problem does not parse:";
    for (const Diagnostic& d : r.diagnostics) message += "\n" + d.ToString();
    throw std::runtime_error(message);
  }
  return *r.value;
}

GroundDomain GroundText(std::string_view text, const ExternalRegistry& registry,
                        const GroundOptions& options) {
  return Ground(MustParseDomain(text), registry, options);
}

std::vector<Instance> SmallInstances(const GroundOptions& options) {
  std::vector<Instance> out;
  const auto add_text = [&](std::string name, const char* text, bool nc = false) {
    out.push_back({std::move(name), GroundText(text, {}, options), nc});
  };
  const auto add_bundle = [&](std::string name, const DomainBundle& bundle) {
    out.push_back({std::move(name),
                   Ground(bundle.domain, BundleRegistry(bundle), options),
                   bundle.problem.noconcurrency});
  };
  add_text("pq", kPqDomain);
  add_text("toggle", kToggleDomain);
  add_text("contradiction", kContradictionDomain);
  add_text("dead_action", kDeadActionDomain);
  add_text("lights", kLightsDomain);
  add_text("lights_sequential", kLightsDomain, true);
  add_text("level", kLevelDomain);
  add_text("conflict", kConflictDomain);
  add_bundle("boxes_2_1", BuildRobotBoxes(2, 1));
  add_bundle("boxes_3_2", BuildRobotBoxes(3, 2));
  add_bundle("boxes_walled", BuildRobotBoxes(3, 1, GridWorld::Parse(kWalledWorld)));
  add_bundle("toh_1", BuildTowerOfHanoi(1));
  add_bundle("toh_2", BuildTowerOfHanoi(2));
  const GridWorld square = GridWorld::Parse("..\n..\n");
  add_bundle("mapp_square", BuildMapp(square, {{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}));
  add_bundle("mapp_corridor",
             BuildMapp(GridWorld::Parse("...\n"), {{0, 0}, {2, 0}}, {{1, 0}, {2, 0}}));
  return out;
}

Grounded GroundBundle(DomainBundle bundle) {
  Grounded g;
  g.registry = BundleRegistry(bundle);
  g.ground = Ground(bundle.domain, g.registry);
  g.problem = GroundPlanningProblem(g.ground, bundle.problem, g.registry);
  g.bundle = std::move(bundle);
  return g;
}

std::string ValueOf(const GroundDomain& ground, const State& state,
                    const std::string& label) {
  const std::optional<int> c = ground.FindConstant(label);
  if (!c || ground.IsAction(*c)) throw std::invalid_argument("no fluent " + label);
  return ground.constants[*c].values.at(state.at(*c));
}

bool BoxesCollide(const GroundDomain& ground, const State& state) {
  std::map<std::string, int> unheld_at;
  for (int c = 0; c < ground.num_fluents; ++c) {
    const GroundConstant& k = ground.constants[c];
    if (k.name != "atObj") continue;
    const std::string box = k.args.at(0);
    if (ValueOf(ground, state, "holding(" + box + ")") == "true") continue;
    if (++unheld_at[k.values[state[c]]] > 1) return true;
  }
  return false;
}

int TowerOfHanoiMoves(int disks) {
  // pegs[i] is the peg of disk i (0 smallest).
  using Pegs = std::vector<int>;
  const Pegs start(disks, 0);
  const Pegs goal(disks, 2);
  std::map<Pegs, int> dist = {{start, 0}};
  std::deque<Pegs> queue = {start};
  while (!queue.empty()) {
    const Pegs s = queue.front();
    queue.pop_front();
    if (s == goal) return dist[s];
    std::array<int, 3> top = {disks, disks, disks};
    for (int i = disks - 1; i >= 0; --i) top[s[i]] = i;
    for (int from = 0; from < 3; ++from) {
      if (top[from] == disks) continue;
      for (int to = 0; to < 3; ++to) {
        if (to == from || top[to] < top[from]) continue;
        Pegs n = s;
        n[top[from]] = to;
        if (dist.emplace(n, dist[s] + 1).second) queue.push_back(n);
      }
    }
  }
  return -1;
}

}  // namespace causalplan::testing
