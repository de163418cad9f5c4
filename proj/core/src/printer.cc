#include <map>
#include <sstream>

#include "causalplan/parser.h"

namespace causalplan {
namespace {

int Precedence(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::kOr:
      return 1;
    case Formula::Kind::kAnd:
      return 2;
    case Formula::Kind::kNot:
      return 3;
    default:
      return 4;
  }
}

void PrintTerms(std::ostream& out, const std::vector<Term>& terms) {
  out << "(";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out << ",";
    out << terms[i].name;
  }
  out << ")";
}

void PrintFormulaTo(std::ostream& out, const Formula& f);

// Same-kind children keep their parentheses so that the n-ary structure
// survives a reparse.
void PrintChild(std::ostream& out, const Formula& child, const Formula& parent) {
  const bool parens = Precedence(child) <= Precedence(parent) &&
                      parent.kind != Formula::Kind::kNot;
  const bool not_parens =
      parent.kind == Formula::Kind::kNot && Precedence(child) < 3;
  if (parens || not_parens) {
    out << "(";
    PrintFormulaTo(out, child);
    out << ")";
  } else {
    PrintFormulaTo(out, child);
  }
}

void PrintFormulaTo(std::ostream& out, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::kTrue:
      out << "true";
      return;
    case Formula::Kind::kFalse:
      out << "false";
      return;
    case Formula::Kind::kAtom:
      out << PrintAtom(f.atom());
      return;
    case Formula::Kind::kExternal:
      out << "@" << f.call().name;
      PrintTerms(out, f.call().args);
      return;
    case Formula::Kind::kCompare:
      out << f.comparison().lhs.name << (f.comparison().equal ? " = " : " != ")
          << f.comparison().rhs.name;
      return;
    case Formula::Kind::kNot:
      out << "~";
      PrintChild(out, f.children.front(), f);
      return;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr: {
      const char* op = f.kind == Formula::Kind::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i > 0) out << op;
        PrintChild(out, f.children[i], f);
      }
      return;
    }
  }
}

// Emits a `vars` line when some binding of the next item differs from the
// scope accumulated so far.
void PrintVarsIfNeeded(std::ostream& out,
                       const std::vector<VarBinding>& vars,
                       std::map<std::string, std::string>& scope) {
  std::vector<VarBinding> missing;
  for (const VarBinding& v : vars) {
    auto it = scope.find(v.name);
    if (it == scope.end() || it->second != v.sort) missing.push_back(v);
  }
  if (missing.empty()) return;
  out << "  vars";
  for (const VarBinding& v : missing) {
    out << " " << v.name << "::" << v.sort;
    scope[v.name] = v.sort;
  }
  out << ";\n";
}

}  // namespace

std::string PrintTerm(const Term& term) { return term.name; }

std::string PrintAtom(const Atom& atom) {
  std::ostringstream out;
  out << atom.constant;
  if (!atom.args.empty()) PrintTerms(out, atom.args);
  if (atom.value.is_variable || atom.value.name != kTrueValue) {
    out << "=" << atom.value.name;
  }
  return out.str();
}

std::string PrintFormula(const Formula& formula) {
  std::ostringstream out;
  PrintFormulaTo(out, formula);
  return out.str();
}

std::string PrintLaw(const CausalLaw& law) {
  std::ostringstream out;
  auto print_if = [&] {
    if (!law.condition.IsTrue()) out << " if " << PrintFormula(law.condition);
  };
  switch (law.form) {
    case LawForm::kCaused:
      out << "caused " << (law.head ? PrintAtom(*law.head) : "false");
      print_if();
      if (law.after) out << " after " << PrintFormula(*law.after);
      break;
    case LawForm::kCauses:
      out << PrintAtom(*law.action) << " causes " << PrintAtom(*law.head);
      print_if();
      break;
    case LawForm::kNonexecutable:
      out << "nonexecutable " << PrintAtom(*law.action);
      print_if();
      break;
    case LawForm::kConstraint:
      out << "constraint " << PrintFormula(law.condition);
      break;
    case LawForm::kInertial:
      out << "inertial " << law.constant;
      break;
    case LawForm::kExogenous:
      out << "exogenous " << law.constant;
      break;
  }
  out << ";";
  return out.str();
}

std::string PrintCostBinding(const CostBinding& binding) {
  std::ostringstream out;
  out << PrintAtom(binding.action) << " = @" << binding.external << "(";
  for (std::size_t i = 0; i < binding.args.size(); ++i) {
    if (i > 0) out << ", ";
    const CostArg& arg = binding.args[i];
    if (arg.IsFluent()) {
      out << arg.fluent;
      if (!arg.fluent_args.empty()) PrintTerms(out, arg.fluent_args);
    } else {
      out << arg.term->name;
    }
  }
  out << ");";
  return out.str();
}

std::string PrettyPrint(const DomainDescription& domain) {
  std::ostringstream out;
  out << ":sorts";
  for (const Sort& s : domain.sorts) out << " " << s.name;
  out << "\n:objects\n";
  for (const Sort& s : domain.sorts) {
    if (s.members.empty()) continue;
    out << "  ";
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      if (i > 0) out << ", ";
      out << s.members[i];
    }
    out << " :: " << s.name << ";\n";
  }
  out << ":constants\n";
  for (const ConstantDecl& c : domain.constants) {
    out << "  " << c.name;
    if (!c.arg_sorts.empty()) {
      out << "(";
      for (std::size_t i = 0; i < c.arg_sorts.size(); ++i) {
        if (i > 0) out << ", ";
        out << c.arg_sorts[i];
      }
      out << ")";
    }
    out << " :: " << ConstantKindName(c.kind);
    if (c.value_sort) out << "(" << *c.value_sort << ")";
    out << ";\n";
  }
  if (!domain.externals.empty()) {
    out << ":externals\n";
    for (const ExternalDecl& e : domain.externals) {
      out << "  " << e.name << "/" << e.arity << ";\n";
    }
  }
  out << ":laws\n";
  std::map<std::string, std::string> scope;
  for (const CausalLaw& law : domain.laws) {
    PrintVarsIfNeeded(out, law.vars, scope);
    out << "  " << PrintLaw(law) << "\n";
  }
  if (!domain.costs.empty()) {
    out << ":costs\n";
    for (const CostBinding& cost : domain.costs) {
      PrintVarsIfNeeded(out, cost.vars, scope);
      out << "  " << PrintCostBinding(cost) << "\n";
    }
  }
  return out.str();
}

std::string PrettyPrint(const PlanningProblem& problem) {
  std::ostringstream out;
  out << ":init " << PrintFormula(problem.init) << ";\n";
  out << ":goal " << PrintFormula(problem.goal) << ";\n";
  for (const TimedConstraint& c : problem.constraints) {
    out << ":at ";
    if (c.step) {
      out << *c.step;
    } else {
      out << "final";
    }
    out << " " << PrintFormula(c.formula) << ";\n";
  }
  out << ":horizon " << problem.min_horizon << ".." << problem.max_horizon
      << ";\n";
  if (problem.max_cost) out << ":maxcost " << *problem.max_cost << ";\n";
  if (problem.noconcurrency) out << ":noconcurrency;\n";
  return out.str();
}

}  // namespace causalplan
