#include <gtest/gtest.h>

#include <random>

#include "causalplan/sat.h"

namespace causalplan {
namespace {

CnfFormula MakeRandomCnf(std::mt19937_64& rng) {
  CnfFormula cnf;
  cnf.num_vars = std::uniform_int_distribution<int>(1, 16)(rng);
  const int clauses = std::uniform_int_distribution<int>(0, 60)(rng);
  for (int i = 0; i < clauses; ++i) {
    const int width = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<int> clause;
    for (int k = 0; k < width; ++k) {
      const int v = std::uniform_int_distribution<int>(1, cnf.num_vars)(rng);
      clause.push_back(rng() % 2 ? v : -v);
    }
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

bool BruteForceSat(const CnfFormula& cnf) {
  std::vector<bool> model(cnf.num_vars + 1);
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    for (int v = 1; v <= cnf.num_vars; ++v) model[v] = mask & (1u << (v - 1));
    if (cnf.Satisfies(model)) return true;
  }
  return false;
}

CnfFormula Pigeonhole(int holes) {
  const int pigeons = holes + 1;
  const auto var = [&](int p, int h) { return p * holes + h + 1; };
  CnfFormula cnf;
  cnf.num_vars = pigeons * holes;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> some;
    for (int h = 0; h < holes; ++h) some.push_back(var(p, h));
    cnf.clauses.push_back(some);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) cnf.clauses.push_back({-var(p, h), -var(q, h)});
    }
  }
  return cnf;
}

TEST(Solver, EmptyFormulaIsSat) {
  Solver s(3);
  const SolveResult r = s.Solve();
  ASSERT_TRUE(r.sat());
  EXPECT_EQ(r.model->size(), 4u);
}

TEST(Solver, DirectContradiction) {
  Solver s(1);
  s.AddClause({1});
  s.AddClause({-1});
  EXPECT_FALSE(s.Solve().sat());
}

TEST(Solver, EmptyClauseIsUnsat) {
  Solver s(2);
  s.AddClause({});
  EXPECT_FALSE(s.Solve().sat());
}

TEST(Solver, AgreesWithEnumerationOnRandomCnfs) {
  std::mt19937_64 rng(2024);
  int sat = 0;
  for (int i = 0; i < 1000; ++i) {
    const CnfFormula cnf = MakeRandomCnf(rng);
    Solver solver(cnf, {.seed = static_cast<std::uint64_t>(i)});
    const SolveResult r = solver.Solve();
    ASSERT_EQ(r.sat(), BruteForceSat(cnf)) << "instance " << i;
    if (r.sat()) {
      ++sat;
      EXPECT_TRUE(cnf.Satisfies(*r.model));
    }
  }
  // Both outcomes are exercised.
  EXPECT_GT(sat, 100);
  EXPECT_LT(sat, 900);
}

TEST(Solver, PigeonholeIsUnsat) {
  for (int n = 1; n <= 4; ++n) {
    Solver s(Pigeonhole(n));
    EXPECT_FALSE(s.Solve().sat()) << "PHP(" << n + 1 << "," << n << ")";
  }
}

TEST(Solver, PigeonholeWithEnoughHolesIsSat) {
  CnfFormula cnf = Pigeonhole(4);
  // Drop pigeon 5's at-least-one clause: now 4 pigeons fit.
  cnf.clauses.erase(cnf.clauses.begin() + 4);
  Solver s(cnf);
  const SolveResult r = s.Solve();
  ASSERT_TRUE(r.sat());
  EXPECT_TRUE(cnf.Satisfies(*r.model));
}

TEST(Solver, AssumptionsAreTemporary) {
  Solver s(3);
  s.AddClause({1, 2});
  s.AddClause({-1, 3});
  EXPECT_FALSE(s.Solve({1, -3}).sat());
  const SolveResult r = s.Solve({-2});
  ASSERT_TRUE(r.sat());
  EXPECT_TRUE((*r.model)[1]);
  EXPECT_TRUE((*r.model)[3]);
  EXPECT_TRUE(s.Solve().sat());
}

TEST(Solver, AssumptionsAgreeWithEnumeration) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const CnfFormula cnf = MakeRandomCnf(rng);
    Solver solver(cnf);
    for (int q = 0; q < 3; ++q) {
      std::vector<int> assumptions;
      CnfFormula extended = cnf;
      for (int k = 0; k < 2; ++k) {
        const int v = std::uniform_int_distribution<int>(1, cnf.num_vars)(rng);
        const int lit = rng() % 2 ? v : -v;
        assumptions.push_back(lit);
        extended.clauses.push_back({lit});
      }
      EXPECT_EQ(solver.Solve(assumptions).sat(), BruteForceSat(extended));
    }
  }
}

TEST(Solver, IncrementalClauses) {
  Solver s(2);
  EXPECT_TRUE(s.Solve().sat());
  s.AddClause({1});
  s.AddClause({-1, 2});
  SolveResult r = s.Solve();
  ASSERT_TRUE(r.sat());
  EXPECT_TRUE((*r.model)[2]);
  s.Reserve(3);
  s.AddClause({-2, 3});
  r = s.Solve();
  ASSERT_TRUE(r.sat());
  EXPECT_TRUE((*r.model)[3]);
  s.AddClause({-3});
  EXPECT_FALSE(s.Solve().sat());
}

TEST(Solver, ConflictLimitIsAResourceError) {
  Solver s(Pigeonhole(7));
  EXPECT_THROW(s.Solve({}, {.max_conflicts = 10}), ResourceLimitError);
}

TEST(Solver, DeterministicForFixedSeed) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const CnfFormula cnf = MakeRandomCnf(rng);
    Solver a(cnf, {.seed = 3});
    Solver b(cnf, {.seed = 3});
    const SolveResult ra = a.Solve();
    const SolveResult rb = b.Solve();
    EXPECT_EQ(ra.model, rb.model);
    EXPECT_EQ(ra.stats.decisions, rb.stats.decisions);
    EXPECT_EQ(ra.stats.conflicts, rb.stats.conflicts);
  }
}

TEST(Solver, StatsAreCounted) {
  Solver s(Pigeonhole(4));
  const SolveResult r = s.Solve();
  EXPECT_FALSE(r.sat());
  EXPECT_GT(r.stats.conflicts, 0);
  EXPECT_GT(r.stats.propagations, 0);
}

}  // namespace
}  // namespace causalplan
