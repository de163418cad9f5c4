// Clause sets and a conflict-driven clause-learning satisfiability solver.

#ifndef CAUSALPLAN_SAT_H_
#define CAUSALPLAN_SAT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalplan {

// Literals are nonzero DIMACS integers: v or -v for variable v in 1..n.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  // atom_labels[v - 1] names the timed atom of variable v; empty marks an
  // auxiliary (definition) variable. May be shorter than num_vars.
  std::vector<std::string> atom_labels;

  bool IsAuxiliary(int var) const;
  // `model[v]` is the value of variable v (index 0 unused).
  bool Satisfies(const std::vector<bool>& model) const;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelVerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  std::uint64_t seed = 0;
};

struct SolverLimits {
  std::optional<std::int64_t> max_conflicts;
  std::optional<double> max_seconds;
};

struct SolverStats {
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t conflicts = 0;
  std::int64_t restarts = 0;
  double seconds = 0.0;
};

enum class SolveStatus { kSat, kUnsat };

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsat;
  // Present iff status is kSat; index 0 unused.
  std::optional<std::vector<bool>> model;
  SolverStats stats;

  bool sat() const { return status == SolveStatus::kSat; }
};

// Two-watched-literal propagation, first-UIP learning with clause
// minimization, activity-based branching with phase saving, and Luby
// restarts. Clauses may be added between calls to Solve.
class Solver {
 public:
  explicit Solver(int num_vars = 0, SolverOptions options = {});
  explicit Solver(const CnfFormula& cnf, SolverOptions options = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int num_vars() const;
  // Grows the variable set to at least `num_vars`.
  void Reserve(int num_vars);
  void AddClause(const std::vector<int>& clause);

  // Throws ResourceLimitError when a limit is reached. Every returned model
  // has been checked against all added clauses.
  SolveResult Solve(const std::vector<int>& assumptions = {},
                    const SolverLimits& limits = {});

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace causalplan

#endif  // CAUSALPLAN_SAT_H_
