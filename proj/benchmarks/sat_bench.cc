#include <benchmark/benchmark.h>

#include <random>

#include "causalplan/sat.h"

namespace causalplan {
namespace {

CnfFormula Pigeonhole(int holes) {
  const auto var = [&](int p, int h) { return p * holes + h + 1; };
  CnfFormula cnf;
  cnf.num_vars = (holes + 1) * holes;
  for (int p = 0; p <= holes; ++p) {
    std::vector<int> some;
    for (int h = 0; h < holes; ++h) some.push_back(var(p, h));
    cnf.clauses.push_back(some);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p <= holes; ++p) {
      for (int q = p + 1; q <= holes; ++q) cnf.clauses.push_back({-var(p, h), -var(q, h)});
    }
  }
  return cnf;
}

// Uniform random 3-SAT near the phase transition (ratio 4.26).
CnfFormula Random3Sat(int vars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CnfFormula cnf;
  cnf.num_vars = vars;
  const int clauses = static_cast<int>(vars * 4.26);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (int k = 0; k < 3; ++k) {
      const int v = 1 + static_cast<int>(rng() % vars);
      clause.push_back(rng() % 2 ? v : -v);
    }
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

void BM_Pigeonhole(benchmark::State& state) {
  const CnfFormula cnf = Pigeonhole(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Solver solver(cnf);
    benchmark::DoNotOptimize(solver.Solve().sat());
  }
}
BENCHMARK(BM_Pigeonhole)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

void BM_Random3Sat(benchmark::State& state) {
  const CnfFormula cnf = Random3Sat(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    Solver solver(cnf);
    benchmark::DoNotOptimize(solver.Solve().sat());
  }
}
BENCHMARK(BM_Random3Sat)->Arg(50)->Arg(100)->Arg(150)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace causalplan
