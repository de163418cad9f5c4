// Instantiation of causal-law schemas over finite sorts, with external
// predicates evaluated (and memoized) at grounding time.

#ifndef CAUSALPLAN_GROUNDER_H_
#define CAUSALPLAN_GROUNDER_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalplan/model.h"
#include "causalplan/prop_formula.h"

namespace causalplan {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binds external names to code. Predicates return a truth value; functions
// return a nonnegative integer or nothing (undefined, e.g. unreachable).
class ExternalRegistry {
 public:
  using Predicate = std::function<bool(std::span<const std::string>)>;
  using Function =
      std::function<std::optional<std::int64_t>(std::span<const std::string>)>;

  void RegisterPredicate(std::string name, int arity, Predicate fn);
  void RegisterFunction(std::string name, int arity, Function fn);

  const Predicate* FindPredicate(const std::string& name, int arity) const;
  const Function* FindFunction(const std::string& name, int arity) const;
  bool Contains(const std::string& name, int arity) const;

 private:
  std::map<std::pair<std::string, int>, Predicate> predicates_;
  std::map<std::pair<std::string, int>, Function> functions_;
};

// One instance c(args) of a declared constant.
struct GroundConstant {
  std::string name;
  std::vector<std::string> args;
  ConstantKind kind = ConstantKind::kInertialFluent;
  // {"true", "false"} for Boolean constants.
  std::vector<std::string> values;
  bool boolean = false;

  bool IsAction() const { return kind == ConstantKind::kAction; }
  // "name" or "name(a,b)".
  std::string Label() const;
};

// c(args) = values[value]. For a Boolean constant, value 1 ("false") is the
// negation of value 0.
struct GroundAtom {
  int constant = 0;
  int value = 0;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

using GroundFormula = PropFormula<GroundAtom>;

struct GroundLaw {
  LawForm form = LawForm::kCaused;
  std::optional<GroundAtom> head;
  std::optional<GroundAtom> action;
  GroundFormula condition;
  std::optional<GroundFormula> after;
  // kInertial, kExogenous.
  int constant = -1;
  SourceSpan span;
};

struct GroundCostArg {
  std::optional<std::string> object;
  // Ground fluent constant read at the action's step when `object` is empty.
  int fluent = -1;
};

struct GroundCost {
  std::string external;
  std::vector<GroundCostArg> args;
};

class GroundDomain {
 public:
  DomainDescription domain;
  // Fluent constants first, then actions; each group in declaration order.
  std::vector<GroundConstant> constants;
  int num_fluents = 0;
  std::vector<GroundLaw> laws;
  // Keyed by action constant index.
  std::map<int, GroundCost> costs;

  int num_constants() const { return static_cast<int>(constants.size()); }
  int num_actions() const { return num_constants() - num_fluents; }
  bool IsAction(int constant) const { return constant >= num_fluents; }

  std::optional<int> FindConstant(const std::string& name,
                                  const std::vector<std::string>& args) const;
  // Accepts a label as printed by GroundConstant::Label.
  std::optional<int> FindConstant(const std::string& label) const;
  std::optional<int> FindValue(int constant, const std::string& value) const;

  // "atRobo=L1", "holding(B1)" and "holding(B1)=false".
  std::string AtomLabel(const GroundAtom& atom) const;
  std::string FormulaLabel(const GroundFormula& formula) const;
  std::string LawLabel(const GroundLaw& law) const;

  // Deterministic, duplicate-free: one atom per Boolean constant, one per
  // value otherwise.
  std::vector<GroundAtom> SignatureAtoms() const;

 private:
  friend class Grounder;
  std::map<std::string, int> by_label_;
};

struct GroundOptions {
  // Laws whose body simplifies to FALSE contribute nothing to the theory.
  bool drop_false_laws = true;
};

// Precondition: ValidateSignature(domain) is empty. Throws GroundingError for
// an external declared but not registered, or one that fails when evaluated.
GroundDomain Ground(const DomainDescription& domain,
                    const ExternalRegistry& registry,
                    const GroundOptions& options = {});

struct GroundTimedConstraint {
  std::optional<int> step;  // empty: final step
  GroundFormula formula;
};

struct GroundProblem {
  GroundFormula init;
  GroundFormula goal;
  std::vector<GroundTimedConstraint> constraints;
  int min_horizon = kDefaultMinHorizon;
  int max_horizon = kDefaultMaxHorizon;
  std::optional<std::int64_t> max_cost;
  bool noconcurrency = false;
};

// Precondition: ValidateProblem(problem, ground.domain) is empty.
GroundProblem GroundPlanningProblem(const GroundDomain& ground,
                                    const PlanningProblem& problem,
                                    const ExternalRegistry& registry);

// Grounds a variable-free formula (e.g. from a problem file).
GroundFormula GroundClosedFormula(const GroundDomain& ground,
                                  const Formula& formula,
                                  const ExternalRegistry& registry);

}  // namespace causalplan

#endif  // CAUSALPLAN_GROUNDER_H_
