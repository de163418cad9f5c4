#include "causalplan/domains.h"

#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "causalplan/parser.h"

namespace causalplan {
namespace {

std::string Join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> Numbered(const char* prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void Finish(DomainBundle& bundle) {
  ParseResult<DomainDescription> domain =
      ParseDomain(bundle.domain_text, bundle.name + ".domain");
  if (!domain.ok()) {
    throw std::logic_error("generated domain does not parse: " +
                           domain.diagnostics.front().ToString());
  }
  ParseResult<PlanningProblem> problem =
      ParseProblem(bundle.problem_text, *domain.value, bundle.name + ".problem");
  if (!problem.ok()) {
    throw std::logic_error("generated problem does not parse: " +
                           problem.diagnostics.front().ToString());
  }
  bundle.domain = std::move(*domain.value);
  bundle.problem = std::move(*problem.value);
}

const Cell kSteps[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
const char* const kDirNames[] = {"N", "E", "S", "W"};

// Joint-state breadth-first search for the optimal makespan; nullopt if the
// goal is unreachable or the state space is too large to search.
std::optional<int> MappMakespan(const GridWorld& world,
                                const std::vector<Cell>& starts,
                                const std::vector<Cell>& goals,
                                bool noconcurrency) {
  using Joint = std::vector<Cell>;
  constexpr std::size_t kLimit = 200000;
  std::map<Joint, int> dist = {{starts, 0}};
  std::deque<Joint> queue = {starts};
  while (!queue.empty()) {
    const Joint state = queue.front();
    queue.pop_front();
    const int d = dist[state];
    if (state == goals) return d;
    // Each robot stays (-1) or moves in one of four directions.
    std::vector<int> choice(state.size(), -1);
    while (true) {
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == 4) choice[k++] = -1;
      if (k == choice.size()) break;
      int moving = 0;
      bool ok = true;
      Joint next = state;
      for (std::size_t r = 0; r < state.size() && ok; ++r) {
        if (choice[r] < 0) continue;
        ++moving;
        next[r] = {state[r].x + kSteps[choice[r]].x,
                   state[r].y + kSteps[choice[r]].y};
        ok = !world.IsBlocked(next[r]);
      }
      if (!ok || (noconcurrency && moving > 1)) continue;
      for (std::size_t a = 0; a < next.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < next.size() && ok; ++b) {
          if (next[a] == next[b]) ok = false;
          if (next[a] == state[b] && next[b] == state[a]) ok = false;
        }
      }
      if (!ok || dist.count(next)) continue;
      if (dist.size() >= kLimit) return std::nullopt;
      dist[next] = d + 1;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace

std::string CellName(Cell c) {
  return "C" + std::to_string(c.x) + "_" + std::to_string(c.y);
}

DomainBundle BuildRobotBoxes(int num_locations, int num_boxes,
                             const std::optional<GridWorld>& world) {
  if (num_locations < 2 || num_boxes < 1 || num_boxes > num_locations) {
    throw std::invalid_argument(
        "robot-boxes needs 2 <= locations and 1 <= boxes <= locations");
  }
  const std::vector<std::string> locations = Numbered("L", num_locations);
  const std::vector<std::string> boxes = Numbered("B", num_boxes);
  if (world) {
    for (const std::string& l : locations) {
      if (!world->landmarks().count(l)) {
        throw std::invalid_argument("world has no landmark for " + l);
      }
    }
  }
  DomainBundle bundle;
  bundle.name = "boxes_" + std::to_string(num_locations) + "_" +
                std::to_string(num_boxes);
  bundle.world = world;

  std::ostringstream d;
  d << "% Robot moving boxes between locations.\n"
    << ":sorts Location Box\n"
    << ":objects\n"
    << "  " << Join(locations, ", ") << " :: Location;\n"
    << "  " << Join(boxes, ", ") << " :: Box;\n"
    << ":constants\n"
    << "  atRobo :: inertialFluent(Location);\n"
    << "  atObj(Box) :: inertialFluent(Location);\n"
    << "  holding(Box) :: inertialFluent;\n"
    << "  goto(Location) :: action;\n"
    << "  pickup(Box) :: action;\n"
    << "  putdown(Box) :: action;\n";
  if (world) d << ":externals\n  pathExists/2;\n  timeEstimate/2;\n";
  d << ":laws\n"
    << "  vars x::Location y::Location b::Box b2::Box;\n"
    << "  goto(y) causes atRobo=y;\n"
    << "  nonexecutable goto(y) if atRobo=y;\n";
  if (world) d << "  nonexecutable goto(y) if atRobo=x & ~@pathExists(x, y);\n";
  d << "  % A held box moves with the robot.\n"
    << "  caused atObj(b)=y if holding(b) & atRobo=y;\n"
    << "  pickup(b) causes holding(b);\n"
    << "  nonexecutable pickup(b) if holding(b2);\n"
    << "  nonexecutable pickup(b) if pickup(b2) & b != b2;\n"
    << "  nonexecutable pickup(b) if atRobo=x & atObj(b)=y & x != y;\n"
    << "  putdown(b) causes holding(b)=false;\n"
    << "  nonexecutable putdown(b) if ~holding(b);\n"
    << "  % Two boxes cannot be at the same location unless one is held.\n"
    << "  caused false if atObj(b)=y & atObj(b2)=y & ~holding(b) & "
       "~holding(b2) & b != b2;\n";
  if (world) d << ":costs\n  goto(y) = @timeEstimate(atRobo, y);\n";
  bundle.domain_text = d.str();

  // B1 at L2, the rest on the remaining locations with L1 and L3 last.
  std::vector<std::string> spots = {"L2"};
  for (int i = 4; i <= num_locations; ++i) spots.push_back("L" + std::to_string(i));
  spots.push_back("L1");
  if (num_locations >= 3) spots.push_back("L3");
  const std::string goal = num_locations >= 3 ? "L3" : "L1";
  std::vector<std::string> init = {"atRobo=L1"};
  bool goal_free = true;
  for (int i = 0; i < num_boxes; ++i) {
    init.push_back("atObj(" + boxes[i] + ")=" + spots[i]);
    init.push_back("~holding(" + boxes[i] + ")");
    if (i > 0 && spots[i] == goal) goal_free = false;
  }
  std::ostringstream p;
  p << ":init " << Join(init, " & ") << ";\n"
    << ":goal atObj(B1)=" << goal << " & ~holding(B1);\n"
    << ":horizon 0..10;\n"
    << ":noconcurrency;\n";
  bundle.problem_text = p.str();
  if (goal_free && !world) bundle.expected = 4;
  Finish(bundle);
  return bundle;
}

DomainBundle BuildTowerOfHanoi(int num_disks) {
  if (num_disks < 1 || num_disks > 6) {
    throw std::invalid_argument("tower of hanoi needs 1 to 6 disks");
  }
  const std::vector<std::string> disks = Numbered("D", num_disks);
  std::vector<std::string> places = {"A", "B", "C"};
  places.insert(places.end(), disks.begin(), disks.end());
  DomainBundle bundle;
  bundle.name = "toh_" + std::to_string(num_disks);
  std::ostringstream d;
  d << "% Tower of Hanoi. D1 is the smallest disk; on(d) is the peg or the\n"
    << "% disk directly below d.\n"
    << ":sorts Disk Place\n"
    << ":objects\n"
    << "  " << Join(disks, ", ") << " :: Disk;\n"
    << "  " << Join(places, ", ") << " :: Place;\n"
    << ":constants\n"
    << "  on(Disk) :: inertialFluent(Place);\n"
    << "  move(Disk, Place) :: action;\n"
    << ":laws\n"
    << "  vars d::Disk d2::Disk p::Place;\n"
    << "  move(d, p) causes on(d)=p;\n"
    << "  % Only a clear disk moves, and only onto a clear place.\n"
    << "  nonexecutable move(d, p) if on(d2)=d;\n"
    << "  nonexecutable move(d, p) if on(d2)=p;\n"
    << "  caused false if on(d)=p & on(d2)=p & d != d2;\n";
  for (int j = 1; j <= num_disks; ++j) {
    for (int i = 1; i <= j; ++i) {
      d << "  constraint ~on(D" << j << ")=D" << i << ";\n";
    }
  }
  bundle.domain_text = d.str();
  std::vector<std::string> init;
  std::vector<std::string> goal;
  for (int i = 1; i <= num_disks; ++i) {
    const std::string below =
        i == num_disks ? std::string() : "D" + std::to_string(i + 1);
    init.push_back("on(D" + std::to_string(i) + ")=" + (below.empty() ? "A" : below));
    goal.push_back("on(D" + std::to_string(i) + ")=" + (below.empty() ? "C" : below));
  }
  const int expected = (1 << num_disks) - 1;
  std::ostringstream p;
  p << ":init " << Join(init, " & ") << ";\n"
    << ":goal " << Join(goal, " & ") << ";\n"
    << ":horizon 0.." << expected << ";\n"
    << ":noconcurrency;\n";
  bundle.problem_text = p.str();
  bundle.expected = expected;
  Finish(bundle);
  return bundle;
}

DomainBundle BuildMapp(const GridWorld& world, const std::vector<Cell>& starts,
                       const std::vector<Cell>& goals, bool noconcurrency) {
  if (starts.empty() || starts.size() != goals.size()) {
    throw std::invalid_argument("mapp needs one goal per robot");
  }
  for (const auto* cells : {&starts, &goals}) {
    std::set<Cell> seen;
    for (Cell c : *cells) {
      if (world.IsBlocked(c)) {
        throw std::invalid_argument(CellName(c) + " is not a free cell");
      }
      if (!seen.insert(c).second) {
        throw std::invalid_argument("two robots share " + CellName(c));
      }
    }
  }
  const int num_robots = static_cast<int>(starts.size());
  const std::vector<std::string> robots = Numbered("R", num_robots);
  std::vector<Cell> free;
  std::vector<std::string> cell_names;
  for (int y = 0; y < world.height(); ++y) {
    for (int x = 0; x < world.width(); ++x) {
      if (world.IsBlocked({x, y})) continue;
      free.push_back({x, y});
      cell_names.push_back(CellName({x, y}));
    }
  }
  DomainBundle bundle;
  bundle.name = "mapp_" + std::to_string(num_robots);
  bundle.world = world;
  std::ostringstream d;
  d << "% Multi-agent path planning on a grid.\n"
    << ":sorts Robot Cell Dir\n"
    << ":objects\n"
    << "  " << Join(robots, ", ") << " :: Robot;\n"
    << "  " << Join(cell_names, ", ") << " :: Cell;\n"
    << "  N, E, S, W :: Dir;\n"
    << ":constants\n"
    << "  at(Robot) :: inertialFluent(Cell);\n"
    << "  move(Robot, Dir) :: action;\n"
    << ":laws\n"
    << "  vars r::Robot r2::Robot c::Cell c2::Cell d::Dir d2::Dir;\n";
  for (Cell c : free) {
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + kSteps[k].x, c.y + kSteps[k].y};
      if (world.IsBlocked(n)) {
        d << "  nonexecutable move(r, " << kDirNames[k] << ") if at(r)="
          << CellName(c) << ";\n";
      } else {
        d << "  move(r, " << kDirNames[k] << ") causes at(r)=" << CellName(n)
          << " if at(r)=" << CellName(c) << ";\n";
      }
    }
  }
  d << "  nonexecutable move(r, d) if move(r, d2) & d != d2;\n"
    << "  caused false if at(r)=c & at(r2)=c & r != r2;\n"
    << "  caused false if at(r)=c2 & at(r2)=c after at(r)=c & at(r2)=c2 & "
       "r != r2;\n";
  bundle.domain_text = d.str();
  std::vector<std::string> init;
  std::vector<std::string> goal;
  for (int r = 0; r < num_robots; ++r) {
    init.push_back("at(" + robots[r] + ")=" + CellName(starts[r]));
    goal.push_back("at(" + robots[r] + ")=" + CellName(goals[r]));
  }
  std::ostringstream p;
  p << ":init " << Join(init, " & ") << ";\n"
    << ":goal " << Join(goal, " & ") << ";\n"
    << ":horizon 0.." << 2 * static_cast<int>(free.size()) * num_robots << ";\n";
  if (noconcurrency) p << ":noconcurrency;\n";
  bundle.problem_text = p.str();
  bundle.expected = MappMakespan(world, starts, goals, noconcurrency);
  Finish(bundle);
  return bundle;
}

ExternalRegistry BundleRegistry(const DomainBundle& bundle) {
  ExternalRegistry registry;
  if (bundle.world) RegisterGridExternals(*bundle.world, registry);
  return registry;
}

}  // namespace causalplan
