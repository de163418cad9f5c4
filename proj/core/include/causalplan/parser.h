// Textual domain and problem languages: parsing and canonical printing.
//
// Domain files:
//
//   :sorts Location Box
//   :objects L1, L2 :: Location; B1 :: Box;
//   :constants atRobo :: inertialFluent(Location);
//              holding(Box) :: inertialFluent;
//              goto(Location) :: action;
//   :externals pathExists/2;
//   :laws
//     vars y::Location;
//     goto(y) causes atRobo=y;
//     nonexecutable goto(y) if atRobo=y;
//   :costs
//     goto(y) = @timeEstimate(atRobo, y);
//
// Problem files:
//
//   :init atRobo=L1; :goal atObj(B1)=L3; :at 2 ~holding(B1);
//   :horizon 0..10; :maxcost 6; :noconcurrency;
//
// `%` starts a comment that runs to the end of the line.

#ifndef CAUSALPLAN_PARSER_H_
#define CAUSALPLAN_PARSER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalplan/model.h"

namespace causalplan {

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value() && diagnostics.empty(); }
};

// On success the returned domain satisfies ValidateSignature.
ParseResult<DomainDescription> ParseDomain(std::string_view text,
                                           std::string file = "<domain>");

// Names are resolved against `domain`. The horizon defaults to 0..20.
ParseResult<PlanningProblem> ParseProblem(std::string_view text,
                                          const DomainDescription& domain,
                                          std::string file = "<problem>");

// Canonical text; ParseDomain(PrettyPrint(d)) reproduces d.
std::string PrettyPrint(const DomainDescription& domain);
std::string PrettyPrint(const PlanningProblem& problem);

std::string PrintTerm(const Term& term);
std::string PrintAtom(const Atom& atom);
std::string PrintFormula(const Formula& formula);
// One law without its `vars` declaration, terminated by ';'.
std::string PrintLaw(const CausalLaw& law);
std::string PrintCostBinding(const CostBinding& binding);

}  // namespace causalplan

#endif  // CAUSALPLAN_PARSER_H_
