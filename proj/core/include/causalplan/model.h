// Abstract syntax of the action language: sorts, constants, atoms, formulas,
// causal-law schemas, and planning problems.
//
// All types are plain values. Source spans are carried for diagnostics but
// never participate in structural equality.

#ifndef CAUSALPLAN_MODEL_H_
#define CAUSALPLAN_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace causalplan {

struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  std::string ToString() const;

  // Spans never participate in structural equality.
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

struct Diagnostic {
  SourceSpan span;
  std::string message;

  // "file:line:col: message"
  std::string ToString() const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct Sort {
  std::string name;
  std::vector<std::string> members;
  SourceSpan span;

  bool Contains(const std::string& object) const;
  friend bool operator==(const Sort&, const Sort&) = default;
};

enum class ConstantKind { kInertialFluent, kSimpleFluent, kAction };

const char* ConstantKindName(ConstantKind kind);

struct ConstantDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  ConstantKind kind = ConstantKind::kInertialFluent;
  // Empty for Boolean-valued constants.
  std::optional<std::string> value_sort;
  SourceSpan span;

  bool IsBoolean() const { return !value_sort.has_value(); }
  bool IsAction() const { return kind == ConstantKind::kAction; }
  bool IsFluent() const { return kind != ConstantKind::kAction; }
  std::size_t arity() const { return arg_sorts.size(); }
  friend bool operator==(const ConstantDecl&, const ConstantDecl&) = default;
};

// An object constant or a schema variable.
struct Term {
  std::string name;
  bool is_variable = false;

  static Term Object(std::string name) { return Term{std::move(name), false}; }
  static Term Variable(std::string name) { return Term{std::move(name), true}; }
  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

inline constexpr char kTrueValue[] = "true";
inline constexpr char kFalseValue[] = "false";

// `constant(args) = value`. Boolean constants carry the objects "true" or
// "false" as their value.
struct Atom {
  std::string constant;
  std::vector<Term> args;
  Term value = Term::Object(kTrueValue);
  SourceSpan span;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// `@name(args)`: a predicate evaluated outside the theory during grounding.
struct ExternalCall {
  std::string name;
  std::vector<Term> args;
  SourceSpan span;

  friend bool operator==(const ExternalCall&, const ExternalCall&) = default;
};

// `lhs = rhs` or `lhs != rhs` between terms; closed during grounding.
struct TermComparison {
  Term lhs;
  Term rhs;
  bool equal = true;
  SourceSpan span;

  friend bool operator==(const TermComparison&, const TermComparison&) =
      default;
};

struct Formula {
  enum class Kind { kTrue, kFalse, kAtom, kExternal, kCompare, kNot, kAnd, kOr };

  Kind kind = Kind::kTrue;
  std::variant<std::monostate, Atom, ExternalCall, TermComparison> leaf;
  std::vector<Formula> children;

  static Formula True() { return Formula{}; }
  static Formula False();
  static Formula FromAtom(Atom atom);
  static Formula External(ExternalCall call);
  static Formula Compare(TermComparison cmp);
  static Formula Not(Formula f);
  static Formula And(std::vector<Formula> parts);
  static Formula Or(std::vector<Formula> parts);

  const Atom& atom() const { return std::get<Atom>(leaf); }
  const ExternalCall& call() const { return std::get<ExternalCall>(leaf); }
  const TermComparison& comparison() const {
    return std::get<TermComparison>(leaf);
  }
  bool IsTrue() const { return kind == Kind::kTrue; }

  friend bool operator==(const Formula&, const Formula&) = default;
};

struct VarBinding {
  std::string name;
  std::string sort;
  friend bool operator==(const VarBinding&, const VarBinding&) = default;
};

enum class LawForm {
  kCaused,         // caused H if G [after A]
  kCauses,         // a causes F if G
  kNonexecutable,  // nonexecutable a if G
  kConstraint,     // constraint G
  kInertial,       // inertial c
  kExogenous,      // exogenous c
};

struct CausalLaw {
  LawForm form = LawForm::kCaused;
  // kCaused: the head (empty means FALSE). kCauses: the effect.
  std::optional<Atom> head;
  // kCauses, kNonexecutable.
  std::optional<Atom> action;
  // The `if` part; for kConstraint, the constrained formula.
  Formula condition = Formula::True();
  // kCaused only.
  std::optional<Formula> after;
  // kInertial, kExogenous.
  std::string constant;
  // Variables occurring in the law, sorted by name.
  std::vector<VarBinding> vars;
  SourceSpan span;

  friend bool operator==(const CausalLaw&, const CausalLaw&) = default;
};

struct ExternalDecl {
  std::string name;
  int arity = 0;
  SourceSpan span;
  friend bool operator==(const ExternalDecl&, const ExternalDecl&) = default;
};

// An argument to a cost external: a term, or a fluent constant whose value is
// read off the state at the step the action executes.
struct CostArg {
  std::optional<Term> term;
  std::string fluent;
  std::vector<Term> fluent_args;

  bool IsFluent() const { return !term.has_value(); }
  friend bool operator==(const CostArg&, const CostArg&) = default;
};

// `action(args) = @external(cost args);`
struct CostBinding {
  Atom action;
  std::string external;
  std::vector<CostArg> args;
  std::vector<VarBinding> vars;
  SourceSpan span;
  friend bool operator==(const CostBinding&, const CostBinding&) = default;
};

struct DomainDescription {
  std::vector<Sort> sorts;
  std::vector<ConstantDecl> constants;
  std::vector<ExternalDecl> externals;
  std::vector<CausalLaw> laws;
  std::vector<CostBinding> costs;

  const Sort* FindSort(const std::string& name) const;
  const ConstantDecl* FindConstant(const std::string& name,
                                   std::size_t arity) const;
  bool HasConstantNamed(const std::string& name) const;
  const ExternalDecl* FindExternal(const std::string& name, int arity) const;
  bool IsObject(const std::string& name) const;

  friend bool operator==(const DomainDescription&,
                         const DomainDescription&) = default;
};

struct TimedConstraint {
  // Empty means the final step of the horizon.
  std::optional<int> step;
  Formula formula;
  SourceSpan span;
  friend bool operator==(const TimedConstraint&, const TimedConstraint&) =
      default;
};

inline constexpr int kDefaultMinHorizon = 0;
inline constexpr int kDefaultMaxHorizon = 20;

struct PlanningProblem {
  Formula init = Formula::True();
  Formula goal = Formula::True();
  std::vector<TimedConstraint> constraints;
  int min_horizon = kDefaultMinHorizon;
  int max_horizon = kDefaultMaxHorizon;
  std::optional<std::int64_t> max_cost;
  bool noconcurrency = false;

  friend bool operator==(const PlanningProblem&, const PlanningProblem&) =
      default;
};

// Checks sort references, arities, value sorts, variable declarations, and
// the law-class rules. An empty result means the domain is well formed.
std::vector<Diagnostic> ValidateSignature(const DomainDescription& domain);

// Checks that the problem's formulas mention only declared constants and
// objects, contain no variables, and that the horizon range is sane.
std::vector<Diagnostic> ValidateProblem(const PlanningProblem& problem,
                                        const DomainDescription& domain);

// Stable, idempotent normal form: laws and cost bindings sorted by their
// printed text, variable lists sorted by name.
DomainDescription Canonicalize(DomainDescription domain);

}  // namespace causalplan

#endif  // CAUSALPLAN_MODEL_H_
