// Translation of a ground domain into clauses: desugaring into basic causal
// rules, unrolling over a horizon, literal completion, and clausification.

#ifndef CAUSALPLAN_COMPILER_H_
#define CAUSALPLAN_COMPILER_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalplan/grounder.h"
#include "causalplan/prop_formula.h"
#include "causalplan/sat.h"

namespace causalplan {

// caused head if condition [after after]. An empty head means FALSE.
struct BasicRule {
  std::optional<GroundAtom> head;
  GroundFormula condition;
  std::optional<GroundFormula> after;
  // "inertia", "exogeneity", or the ground law it came from.
  std::string origin;

  bool IsDynamic() const { return after.has_value(); }
};

// Includes the implicit inertia of every inertialFluent constant. Duplicate
// rules are removed; the first origin wins.
std::vector<BasicRule> Desugar(const GroundDomain& ground);

struct TimedAtom {
  GroundAtom atom;
  int step = 0;
  friend auto operator<=>(const TimedAtom&, const TimedAtom&) = default;
};

using TimedFormula = PropFormula<TimedAtom>;

// A definite rule of the unrolled theory.
struct CausalRule {
  std::optional<TimedAtom> head;
  TimedFormula body;
  std::string origin;
};

struct UnrollOptions {
  int horizon = 0;
  bool noconcurrency = false;
};

// Fluent atoms range over steps 0..h, action atoms over 0..h-1; a stamped
// rule mentioning an atom outside its range is dropped.
std::vector<CausalRule> Unroll(const GroundDomain& ground,
                               const std::vector<BasicRule>& rules,
                               const UnrollOptions& options);

bool InRange(const GroundDomain& ground, const TimedAtom& atom, int horizon);

// Stamps every atom of `formula` with `step`; atoms outside the horizon
// become FALSE.
TimedFormula Stamp(const GroundDomain& ground, const GroundFormula& formula,
                   int step, int horizon);

std::string TimedAtomLabel(const GroundDomain& ground, const TimedAtom& atom);
std::string TimedFormulaLabel(const GroundDomain& ground,
                              const TimedFormula& formula);

// head <-> bodies[0] | ... | bodies[k-1].
struct Definition {
  TimedAtom head;
  std::vector<TimedFormula> bodies;
  std::vector<std::string> origins;
};

// A formula that must hold, from a FALSE-headed rule.
struct Assertion {
  TimedFormula formula;
  std::string origin;
  int step = 0;
};

struct Completion {
  int horizon = 0;
  std::vector<Definition> definitions;
  std::vector<Assertion> constraints;
  // Exactly one of each group holds.
  std::vector<std::vector<TimedAtom>> exactly_one;
};

// One definition per timed atom (both polarities of Boolean constants), in
// variable order.
Completion Complete(const GroundDomain& ground,
                    const std::vector<CausalRule>& rules, int horizon);

// A complete state: the value index of every fluent constant.
using State = std::vector<int>;

struct Trajectory {
  std::vector<State> states;                // h + 1 entries
  std::vector<std::vector<int>> actions;    // h entries, sorted constants

  int horizon() const { return static_cast<int>(actions.size()); }
  friend auto operator<=>(const Trajectory&, const Trajectory&) = default;
};

bool Holds(const Trajectory& trajectory, const TimedAtom& atom,
           const GroundDomain& ground);

struct CompletionViolation {
  int step = 0;
  std::string message;
};

// Direct evaluation of every completion formula on `trajectory`.
std::optional<CompletionViolation> FindViolation(
    const GroundDomain& ground, const Completion& completion,
    const Trajectory& trajectory);

// Clause-level encoding of one horizon. Variables for timed atoms are
// numbered 1-based, step-major, fluents before actions within a step; this
// makes the numbering of step t independent of the horizon. Auxiliary
// variables come after all atom variables.
class Encoding {
 public:
  Encoding(const GroundDomain& ground, int horizon);

  int horizon() const { return horizon_; }
  int num_atom_vars() const { return num_atom_vars_; }
  const CnfFormula& cnf() const { return cnf_; }
  const GroundDomain& ground() const { return *ground_; }

  // Signed DIMACS literal; the `false` value of a Boolean constant is the
  // negation of its variable.
  int Literal(const TimedAtom& atom) const;

  void AddCompletion(const Completion& completion);
  void Assert(const TimedFormula& formula);
  // A literal equivalent to `formula`, defining auxiliaries as needed.
  int LiteralFor(const TimedFormula& formula);
  void AddClause(std::vector<int> clause);

  // `model[v]` is the value of variable v (index 0 unused).
  Trajectory Decode(const std::vector<bool>& model) const;

 private:
  int NewAux();
  int Define(bool conjunction, std::vector<int> literals);
  void AddDefinition(const Definition& definition);

  const GroundDomain* ground_;
  int horizon_;
  int num_atom_vars_ = 0;
  // First variable of each step.
  std::vector<int> step_base_;
  // Offset of each constant's first variable within a step.
  std::vector<int> constant_offset_;
  int fluent_block_ = 0;
  CnfFormula cnf_;
  // Auxiliary fixed to true, created on demand.
  int true_var_ = 0;
  std::map<std::vector<int>, int> and_cache_;
  std::map<std::vector<int>, int> or_cache_;
  std::set<std::vector<int>> clause_set_;
};

}  // namespace causalplan

#endif  // CAUSALPLAN_COMPILER_H_
