#include "causalplan/model.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "causalplan/parser.h"

namespace causalplan {

std::string SourceSpan::ToString() const {
  std::ostringstream out;
  out << file << ":" << start_line << ":" << start_col;
  return out.str();
}

std::string Diagnostic::ToString() const {
  return span.ToString() + ": " + message;
}

bool Sort::Contains(const std::string& object) const {
  return std::find(members.begin(), members.end(), object) != members.end();
}

const char* ConstantKindName(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::kInertialFluent:
      return "inertialFluent";
    case ConstantKind::kSimpleFluent:
      return "simpleFluent";
    case ConstantKind::kAction:
      return "action";
  }
  return "?";
}

Formula Formula::False() {
  Formula f;
  f.kind = Kind::kFalse;
  return f;
}

Formula Formula::FromAtom(Atom atom) {
  Formula f;
  f.kind = Kind::kAtom;
  f.leaf = std::move(atom);
  return f;
}

Formula Formula::External(ExternalCall call) {
  Formula f;
  f.kind = Kind::kExternal;
  f.leaf = std::move(call);
  return f;
}

Formula Formula::Compare(TermComparison cmp) {
  Formula f;
  f.kind = Kind::kCompare;
  f.leaf = std::move(cmp);
  return f;
}

Formula Formula::Not(Formula inner) {
  Formula f;
  f.kind = Kind::kNot;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::And(std::vector<Formula> parts) {
  if (parts.empty()) return True();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::kAnd;
  f.children = std::move(parts);
  return f;
}

Formula Formula::Or(std::vector<Formula> parts) {
  if (parts.empty()) return False();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::kOr;
  f.children = std::move(parts);
  return f;
}

const Sort* DomainDescription::FindSort(const std::string& name) const {
  for (const Sort& s : sorts) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ConstantDecl* DomainDescription::FindConstant(const std::string& name,
                                                    std::size_t arity) const {
  for (const ConstantDecl& c : constants) {
    if (c.name == name && c.arity() == arity) return &c;
  }
  return nullptr;
}

bool DomainDescription::HasConstantNamed(const std::string& name) const {
  return std::any_of(constants.begin(), constants.end(),
                     [&](const ConstantDecl& c) { return c.name == name; });
}

const ExternalDecl* DomainDescription::FindExternal(const std::string& name,
                                                    int arity) const {
  for (const ExternalDecl& e : externals) {
    if (e.name == name && e.arity == arity) return &e;
  }
  return nullptr;
}

bool DomainDescription::IsObject(const std::string& name) const {
  return std::any_of(sorts.begin(), sorts.end(),
                     [&](const Sort& s) { return s.Contains(name); });
}

namespace {

bool IsSubsort(const Sort& sub, const Sort& super) {
  return std::all_of(sub.members.begin(), sub.members.end(),
                     [&](const std::string& m) { return super.Contains(m); });
}

// Shared checks for formulas appearing in laws (with variables) and in
// problems (ground).
class Checker {
 public:
  Checker(const DomainDescription& domain, std::vector<Diagnostic>& out,
          bool ground_only)
      : domain_(domain), out_(out), ground_only_(ground_only) {}

  void SetVars(const std::vector<VarBinding>& vars) {
    vars_.clear();
    for (const VarBinding& v : vars) vars_[v.name] = v.sort;
  }

  void Report(const SourceSpan& span, std::string message) {
    out_.push_back(Diagnostic{span, std::move(message)});
  }

  // Checks that `term` may stand in a position of sort `sort_name`.
  void CheckTerm(const Term& term, const std::string& sort_name,
                 const SourceSpan& span, bool value_position) {
    const Sort* sort = domain_.FindSort(sort_name);
    if (sort == nullptr) return;  // reported on the declaration
    const std::string mismatch =
        value_position ? "value-sort mismatch: " : "sort mismatch: ";
    if (term.is_variable) {
      if (ground_only_) {
        Report(span, "variable '" + term.name + "' in a ground formula");
        return;
      }
      auto it = vars_.find(term.name);
      if (it == vars_.end()) {
        Report(span, "undeclared variable '" + term.name + "'");
        return;
      }
      const Sort* var_sort = domain_.FindSort(it->second);
      if (var_sort != nullptr && !IsSubsort(*var_sort, *sort)) {
        Report(span, mismatch + "variable '" + term.name + "' ranges over " +
                         var_sort->name + ", expected " + sort->name);
      }
      return;
    }
    if (!domain_.IsObject(term.name)) {
      Report(span, "unknown object '" + term.name + "'");
      return;
    }
    if (!sort->Contains(term.name)) {
      Report(span, mismatch + "'" + term.name + "' is not a " + sort->name);
    }
  }

  void CheckFreeTerm(const Term& term, const SourceSpan& span) {
    if (term.is_variable) {
      if (ground_only_) {
        Report(span, "variable '" + term.name + "' in a ground formula");
      } else if (!vars_.contains(term.name)) {
        Report(span, "undeclared variable '" + term.name + "'");
      }
    } else if (!domain_.IsObject(term.name)) {
      Report(span, "unknown object '" + term.name + "'");
    }
  }

  const ConstantDecl* CheckAtom(const Atom& atom) {
    const ConstantDecl* decl =
        domain_.FindConstant(atom.constant, atom.args.size());
    if (decl == nullptr) {
      Report(atom.span, "unknown constant '" + atom.constant + "/" +
                            std::to_string(atom.args.size()) + "'");
      return nullptr;
    }
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      CheckTerm(atom.args[i], decl->arg_sorts[i], atom.span, false);
    }
    if (decl->IsBoolean()) {
      if (atom.value.is_variable || (atom.value.name != kTrueValue &&
                                     atom.value.name != kFalseValue)) {
        Report(atom.span, "value-sort mismatch: '" + atom.constant +
                              "' is Boolean, got '" + atom.value.name + "'");
      }
    } else if (!atom.value.is_variable && (atom.value.name == kTrueValue ||
                                           atom.value.name == kFalseValue)) {
      Report(atom.span, "value-sort mismatch: '" + atom.constant +
                            "' ranges over " + *decl->value_sort);
    } else {
      CheckTerm(atom.value, *decl->value_sort, atom.span, true);
    }
    return decl;
  }

  void CheckFormula(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::kTrue:
      case Formula::Kind::kFalse:
        return;
      case Formula::Kind::kAtom:
        CheckAtom(f.atom());
        return;
      case Formula::Kind::kExternal: {
        const ExternalCall& call = f.call();
        if (domain_.FindExternal(call.name, static_cast<int>(call.args.size())) ==
            nullptr) {
          Report(call.span, "undeclared external '" + call.name + "/" +
                                std::to_string(call.args.size()) + "'");
        }
        for (const Term& t : call.args) CheckFreeTerm(t, call.span);
        return;
      }
      case Formula::Kind::kCompare:
        CheckFreeTerm(f.comparison().lhs, f.comparison().span);
        CheckFreeTerm(f.comparison().rhs, f.comparison().span);
        return;
      case Formula::Kind::kNot:
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
        for (const Formula& c : f.children) CheckFormula(c);
        return;
    }
  }

  bool MentionsAction(const Formula& f) const {
    if (f.kind == Formula::Kind::kAtom) {
      const ConstantDecl* decl =
          domain_.FindConstant(f.atom().constant, f.atom().args.size());
      return decl != nullptr && decl->IsAction();
    }
    return std::any_of(f.children.begin(), f.children.end(),
                       [&](const Formula& c) { return MentionsAction(c); });
  }

 private:
  const DomainDescription& domain_;
  std::vector<Diagnostic>& out_;
  bool ground_only_;
  std::map<std::string, std::string> vars_;
};

void CheckLawClass(const CausalLaw& law, const ConstantDecl* head_decl,
                   Checker& checker) {
  const SourceSpan& span = law.span;
  switch (law.form) {
    case LawForm::kCaused:
      if (law.after.has_value()) {
        if (head_decl != nullptr && head_decl->IsAction()) {
          checker.Report(span, "action atom in the head of a dynamic law");
        }
        if (head_decl != nullptr &&
            head_decl->kind == ConstantKind::kSimpleFluent) {
          checker.Report(span, "simpleFluent '" + head_decl->name +
                                   "' may not head a dynamic law");
        }
        if (checker.MentionsAction(law.condition)) {
          checker.Report(span,
                         "the 'if' part of a dynamic law may not mention "
                         "actions; use 'after'");
        }
      } else if (head_decl != nullptr && head_decl->IsFluent() &&
                 checker.MentionsAction(law.condition)) {
        checker.Report(span,
                       "a static law with a fluent head may not mention "
                       "actions");
      }
      return;
    case LawForm::kCauses:
      if (head_decl != nullptr) {
        if (head_decl->IsAction()) {
          checker.Report(span, "the effect of 'causes' must be a fluent");
        } else if (head_decl->kind == ConstantKind::kSimpleFluent) {
          checker.Report(span, "simpleFluent '" + head_decl->name +
                                   "' may not be a direct effect");
        }
      }
      return;
    default:
      return;
  }
}

void CheckVarBindings(const std::vector<VarBinding>& vars,
                      const SourceSpan& span, const DomainDescription& domain,
                      Checker& checker) {
  std::set<std::string> seen;
  for (const VarBinding& v : vars) {
    if (!seen.insert(v.name).second) {
      checker.Report(span, "variable '" + v.name + "' declared twice");
    }
    const Sort* sort = domain.FindSort(v.sort);
    if (sort == nullptr) {
      checker.Report(span, "unknown sort '" + v.sort + "'");
    } else if (sort->members.empty()) {
      checker.Report(span, "sort '" + v.sort + "' has no members");
    }
  }
}

}  // namespace

std::vector<Diagnostic> ValidateSignature(const DomainDescription& domain) {
  std::vector<Diagnostic> out;
  Checker checker(domain, out, /*ground_only=*/false);

  std::set<std::string> sort_names;
  for (const Sort& s : domain.sorts) {
    if (!sort_names.insert(s.name).second) {
      checker.Report(s.span, "duplicate sort '" + s.name + "'");
    }
    std::set<std::string> members;
    for (const std::string& m : s.members) {
      if (!members.insert(m).second) {
        checker.Report(s.span, "duplicate member '" + m + "' in sort '" +
                                   s.name + "'");
      }
      if (m == kTrueValue || m == kFalseValue) {
        checker.Report(s.span, "'" + m + "' is reserved");
      }
    }
  }

  auto check_sort_use = [&](const std::string& name, const SourceSpan& span) {
    const Sort* sort = domain.FindSort(name);
    if (sort == nullptr) {
      checker.Report(span, "unknown sort '" + name + "'");
    } else if (sort->members.empty()) {
      checker.Report(span, "sort '" + name + "' has no members");
    }
  };

  std::set<std::pair<std::string, std::size_t>> constant_keys;
  for (const ConstantDecl& c : domain.constants) {
    if (!constant_keys.insert({c.name, c.arity()}).second) {
      checker.Report(c.span, "duplicate constant '" + c.name + "/" +
                                 std::to_string(c.arity()) + "'");
    }
    for (const std::string& s : c.arg_sorts) check_sort_use(s, c.span);
    if (c.value_sort.has_value()) check_sort_use(*c.value_sort, c.span);
    if (c.IsAction() && !c.IsBoolean()) {
      checker.Report(c.span, "action '" + c.name + "' must be Boolean");
    }
  }

  std::set<std::pair<std::string, int>> external_keys;
  for (const ExternalDecl& e : domain.externals) {
    if (!external_keys.insert({e.name, e.arity}).second) {
      checker.Report(e.span, "duplicate external '" + e.name + "/" +
                                 std::to_string(e.arity) + "'");
    }
  }

  for (const CausalLaw& law : domain.laws) {
    CheckVarBindings(law.vars, law.span, domain, checker);
    checker.SetVars(law.vars);

    const ConstantDecl* head_decl = nullptr;
    if (law.head.has_value()) {
      head_decl = checker.CheckAtom(*law.head);
    }
    if (law.action.has_value()) {
      const ConstantDecl* action = checker.CheckAtom(*law.action);
      if (action != nullptr && !action->IsAction()) {
        checker.Report(law.action->span,
                       "'" + action->name + "' is not an action");
      }
    }
    checker.CheckFormula(law.condition);
    if (law.after.has_value()) checker.CheckFormula(*law.after);
    if (law.form == LawForm::kInertial || law.form == LawForm::kExogenous) {
      bool found = false;
      for (const ConstantDecl& c : domain.constants) {
        if (c.name != law.constant) continue;
        found = true;
        if (law.form == LawForm::kInertial && !c.IsFluent()) {
          checker.Report(law.span, "'" + c.name + "' is an action; only "
                                                  "fluents can be inertial");
        } else if (law.form == LawForm::kInertial &&
                   c.kind == ConstantKind::kSimpleFluent) {
          checker.Report(law.span, "simpleFluent '" + c.name +
                                       "' cannot be inertial");
        }
      }
      if (!found) {
        checker.Report(law.span, "unknown constant '" + law.constant + "'");
      }
    }
    CheckLawClass(law, head_decl, checker);
  }

  for (const CostBinding& cost : domain.costs) {
    CheckVarBindings(cost.vars, cost.span, domain, checker);
    checker.SetVars(cost.vars);
    const ConstantDecl* action = checker.CheckAtom(cost.action);
    if (action != nullptr && !action->IsAction()) {
      checker.Report(cost.span, "'" + action->name + "' is not an action");
    }
    if (domain.FindExternal(cost.external, static_cast<int>(cost.args.size())) ==
        nullptr) {
      checker.Report(cost.span, "undeclared external '" + cost.external + "/" +
                                    std::to_string(cost.args.size()) + "'");
    }
    for (const CostArg& arg : cost.args) {
      if (!arg.IsFluent()) {
        checker.CheckFreeTerm(*arg.term, cost.span);
        continue;
      }
      const ConstantDecl* fluent =
          domain.FindConstant(arg.fluent, arg.fluent_args.size());
      if (fluent == nullptr || !fluent->IsFluent()) {
        checker.Report(cost.span, "unknown fluent '" + arg.fluent + "'");
        continue;
      }
      for (std::size_t i = 0; i < arg.fluent_args.size(); ++i) {
        checker.CheckTerm(arg.fluent_args[i], fluent->arg_sorts[i], cost.span,
                          false);
      }
    }
  }
  std::set<std::pair<std::string, std::size_t>> costed;
  for (const CostBinding& cost : domain.costs) {
    if (!costed.insert({cost.action.constant, cost.action.args.size()}).second) {
      checker.Report(cost.span, "second cost binding for '" +
                                    cost.action.constant + "'");
    }
  }
  return out;
}

std::vector<Diagnostic> ValidateProblem(const PlanningProblem& problem,
                                        const DomainDescription& domain) {
  std::vector<Diagnostic> out;
  Checker checker(domain, out, /*ground_only=*/true);
  checker.CheckFormula(problem.init);
  checker.CheckFormula(problem.goal);
  if (checker.MentionsAction(problem.goal)) {
    checker.Report(SourceSpan{}, "the goal may not mention actions");
  }
  for (const TimedConstraint& c : problem.constraints) {
    checker.CheckFormula(c.formula);
    if (c.step.has_value() && *c.step < 0) {
      checker.Report(c.span, "negative step in ':at'");
    }
  }
  if (problem.min_horizon < 0 || problem.max_horizon < problem.min_horizon) {
    checker.Report(SourceSpan{}, "malformed horizon " +
                                     std::to_string(problem.min_horizon) +
                                     ".." + std::to_string(problem.max_horizon));
  }
  if (problem.max_cost.has_value() && *problem.max_cost < 0) {
    checker.Report(SourceSpan{}, "negative :maxcost");
  }
  return out;
}

DomainDescription Canonicalize(DomainDescription domain) {
  for (CausalLaw& law : domain.laws) {
    std::sort(law.vars.begin(), law.vars.end(),
              [](const VarBinding& a, const VarBinding& b) {
                return a.name < b.name;
              });
  }
  for (CostBinding& cost : domain.costs) {
    std::sort(cost.vars.begin(), cost.vars.end(),
              [](const VarBinding& a, const VarBinding& b) {
                return a.name < b.name;
              });
  }
  std::stable_sort(domain.laws.begin(), domain.laws.end(),
                   [](const CausalLaw& a, const CausalLaw& b) {
                     return PrintLaw(a) < PrintLaw(b);
                   });
  std::stable_sort(domain.costs.begin(), domain.costs.end(),
                   [](const CostBinding& a, const CostBinding& b) {
                     return PrintCostBinding(a) < PrintCostBinding(b);
                   });
  return domain;
}

}  // namespace causalplan
