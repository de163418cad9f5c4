#include <benchmark/benchmark.h>

#include "causalplan/domains.h"
#include "causalplan/planner.h"

namespace causalplan {
namespace {

struct Loaded {
  ExternalRegistry registry;
  GroundDomain ground;
  GroundProblem problem;
};

Loaded Load(const DomainBundle& bundle) {
  Loaded l;
  l.registry = BundleRegistry(bundle);
  l.ground = Ground(bundle.domain, l.registry);
  l.problem = GroundPlanningProblem(l.ground, bundle.problem, l.registry);
  return l;
}

void BM_TowerOfHanoiPlan(benchmark::State& state) {
  const Loaded l = Load(BuildTowerOfHanoi(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FindPlan(l.ground, l.problem, l.registry).outcome);
  }
}
BENCHMARK(BM_TowerOfHanoiPlan)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_TowerOfHanoiEncode(benchmark::State& state) {
  const int disks = static_cast<int>(state.range(0));
  const Loaded l = Load(BuildTowerOfHanoi(disks));
  const int horizon = (1 << disks) - 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EncodeProblem(l.ground, l.problem, horizon).cnf().num_vars);
  }
}
BENCHMARK(BM_TowerOfHanoiEncode)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_RobotBoxesPlan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Loaded l = Load(BuildRobotBoxes(n, n - 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FindPlan(l.ground, l.problem, l.registry).outcome);
  }
}
BENCHMARK(BM_RobotBoxesPlan)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_MappPlan(benchmark::State& state) {
  const Loaded l = Load(BuildMapp(GridWorld::Parse("....\n.#..\n....\n"),
                                  {{0, 0}, {3, 0}, {0, 2}}, {{3, 2}, {0, 2}, {3, 0}}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FindPlan(l.ground, l.problem, l.registry).outcome);
  }
}
BENCHMARK(BM_MappPlan)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace causalplan
