#include "causalplan/dimacs.h"

#include <cstdlib>
#include <sstream>

namespace causalplan {
namespace {

bool ParseInt(const std::string& token, long long& value) {
  if (token.empty()) return false;
  char* end = nullptr;
  value = std::strtoll(token.c_str(), &end, 10);
  return end == token.c_str() + token.size();
}

}  // namespace

std::string EmitDimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cnf.atom_labels.size(); ++i) {
    if (cnf.atom_labels[i].empty()) continue;
    out << "c atom " << i + 1 << " " << cnf.atom_labels[i] << "\n";
  }
  out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const std::vector<int>& clause : cnf.clauses) {
    for (int l : clause) out << l << " ";
    out << "0\n";
  }
  return out.str();
}

CnfFormula ParseDimacs(std::string_view text) {
  CnfFormula cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  long long expected_clauses = 0;
  std::vector<int> clause;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    if (first == "c") {
      std::string tag;
      long long var = 0;
      std::string label;
      if (words >> tag && tag == "atom" && words >> var >> label && var > 0) {
        if (static_cast<long long>(cnf.atom_labels.size()) < var) {
          cnf.atom_labels.resize(var);
        }
        cnf.atom_labels[var - 1] = label;
      }
      continue;
    }
    if (first == "p") {
      std::string format;
      long long vars = 0;
      if (header || !(words >> format >> vars >> expected_clauses) ||
          format != "cnf" || vars < 0 || expected_clauses < 0) {
        throw DimacsError("line " + std::to_string(line_no) +
                          ": malformed problem line");
      }
      cnf.num_vars = static_cast<int>(vars);
      header = true;
      continue;
    }
    if (!header) {
      throw DimacsError("line " + std::to_string(line_no) +
                        ": clause before problem line");
    }
    std::string token = first;
    do {
      long long lit = 0;
      if (!ParseInt(token, lit) || std::llabs(lit) > cnf.num_vars) {
        throw DimacsError("line " + std::to_string(line_no) + ": bad literal '" +
                          token + "'");
      }
      if (lit == 0) {
        cnf.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        clause.push_back(static_cast<int>(lit));
      }
    } while (words >> token);
  }
  if (!header) throw DimacsError("missing problem line");
  if (!clause.empty()) throw DimacsError("unterminated clause");
  if (static_cast<long long>(cnf.clauses.size()) != expected_clauses) {
    throw DimacsError("clause count does not match problem line");
  }
  return cnf;
}

SolveResult ReadDimacsModel(std::string_view text, const CnfFormula& cnf) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<SolveStatus> status;
  std::vector<bool> model(cnf.num_vars + 1, false);
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    if (first == "c") continue;
    if (first == "s") words >> first;
    if (first == "SAT" || first == "SATISFIABLE") {
      status = SolveStatus::kSat;
      continue;
    }
    if (first == "UNSAT" || first == "UNSATISFIABLE") {
      status = SolveStatus::kUnsat;
      continue;
    }
    if (!status) {
      throw DimacsError("line " + std::to_string(line_no) +
                        ": expected a SAT or UNSAT status line");
    }
    std::string token = first;
    if (token == "v" && !(words >> token)) continue;
    do {
      long long lit = 0;
      if (!ParseInt(token, lit) || std::llabs(lit) > cnf.num_vars) {
        throw DimacsError("line " + std::to_string(line_no) + ": bad literal '" +
                          token + "'");
      }
      if (lit != 0) model[std::llabs(lit)] = lit > 0;
    } while (words >> token && token != "v");
  }
  if (!status) throw DimacsError("no SAT or UNSAT status line");
  SolveResult result;
  result.status = *status;
  if (*status == SolveStatus::kSat) {
    if (!cnf.Satisfies(model)) {
      throw ModelVerificationError("solver model falsifies a clause");
    }
    result.model = std::move(model);
  }
  return result;
}

}  // namespace causalplan
