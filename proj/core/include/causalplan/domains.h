// Generators for the bundled sample domains. Each builds domain and problem
// text in the domain language and parses it.

#ifndef CAUSALPLAN_DOMAINS_H_
#define CAUSALPLAN_DOMAINS_H_

#include <optional>
#include <string>
#include <vector>

#include "causalplan/grid.h"
#include "causalplan/grounder.h"
#include "causalplan/model.h"

namespace causalplan {

struct DomainBundle {
  std::string name;
  DomainDescription domain;
  PlanningProblem problem;
  std::optional<GridWorld> world;
  // Known optimal makespan, when the construction fixes it.
  std::optional<int> expected;
  std::string domain_text;
  std::string problem_text;
};

// Robot at L1, box B1 at L2 and the other boxes spread over the remaining
// locations; goal: B1 put down at L3 (L1 when there are two locations).
// Boxes may not share a location unless one is held. With a world, goto
// also requires @pathExists and costs @timeEstimate. Requires
// 2 <= num_locations, 1 <= num_boxes <= num_locations.
DomainBundle BuildRobotBoxes(int num_locations, int num_boxes,
                             const std::optional<GridWorld>& world = {});

// Three pegs A, B, C; on(d) is a peg or a larger disk. Moves all disks from
// A to C. Requires 1 <= num_disks <= 6.
DomainBundle BuildTowerOfHanoi(int num_disks);

// Robots R1.. move N/E/S/W between free cells (named C<x>_<y>). No two
// robots share a cell and no two robots swap cells in one step.
DomainBundle BuildMapp(const GridWorld& world, const std::vector<Cell>& starts,
                       const std::vector<Cell>& goals,
                       bool noconcurrency = false);

std::string CellName(Cell c);

// pathExists/timeEstimate over the bundle's world, if it has one.
ExternalRegistry BundleRegistry(const DomainBundle& bundle);

}  // namespace causalplan

#endif  // CAUSALPLAN_DOMAINS_H_
