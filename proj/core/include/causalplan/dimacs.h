// DIMACS CNF text and solver-output exchange.

#ifndef CAUSALPLAN_DIMACS_H_
#define CAUSALPLAN_DIMACS_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "causalplan/sat.h"

namespace causalplan {

class DimacsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `c atom <var> <label>` comments for labelled variables, then the
// `p cnf <vars> <clauses>` header and one 0-terminated clause per line.
std::string EmitDimacs(const CnfFormula& cnf);

// Reads `c atom` comments back into atom_labels.
CnfFormula ParseDimacs(std::string_view text);

// Accepts `SAT`/`UNSAT`, `s SATISFIABLE`/`s UNSATISFIABLE`, and literals on
// `v` lines or bare lines. Unmentioned variables default to false. Throws
// DimacsError for malformed text and ModelVerificationError when the model
// falsifies a clause of `cnf`.
SolveResult ReadDimacsModel(std::string_view text, const CnfFormula& cnf);

}  // namespace causalplan

#endif  // CAUSALPLAN_DIMACS_H_
