#include "causalplan/grounder.h"

#include <sstream>
#include <utility>

namespace causalplan {

void ExternalRegistry::RegisterPredicate(std::string name, int arity,
                                         Predicate fn) {
  predicates_[{std::move(name), arity}] = std::move(fn);
}

void ExternalRegistry::RegisterFunction(std::string name, int arity,
                                        Function fn) {
  functions_[{std::move(name), arity}] = std::move(fn);
}

const ExternalRegistry::Predicate* ExternalRegistry::FindPredicate(
    const std::string& name, int arity) const {
  auto it = predicates_.find({name, arity});
  return it == predicates_.end() ? nullptr : &it->second;
}

const ExternalRegistry::Function* ExternalRegistry::FindFunction(
    const std::string& name, int arity) const {
  auto it = functions_.find({name, arity});
  return it == functions_.end() ? nullptr : &it->second;
}

bool ExternalRegistry::Contains(const std::string& name, int arity) const {
  return FindPredicate(name, arity) != nullptr ||
         FindFunction(name, arity) != nullptr;
}

namespace {

std::string MakeLabel(const std::string& name,
                      const std::vector<std::string>& args) {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ",";
    out += args[i];
  }
  return out + ")";
}

// Calls fn(choice) for every tuple in the Cartesian product of `domains`,
// first position outermost.
template <typename Fn>
void ForEachTuple(const std::vector<const std::vector<std::string>*>& domains,
                  const Fn& fn) {
  for (const auto* d : domains) {
    if (d->empty()) return;
  }
  std::vector<std::size_t> index(domains.size(), 0);
  std::vector<std::string> tuple(domains.size());
  while (true) {
    for (std::size_t i = 0; i < domains.size(); ++i) {
      tuple[i] = (*domains[i])[index[i]];
    }
    fn(tuple);
    std::size_t pos = domains.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < domains[pos]->size()) break;
      index[pos] = 0;
      if (pos == 0) return;
    }
    if (domains.empty()) return;
  }
}

using Substitution = std::map<std::string, std::string>;

}  // namespace

std::string GroundConstant::Label() const { return MakeLabel(name, args); }

std::optional<int> GroundDomain::FindConstant(
    const std::string& name, const std::vector<std::string>& args) const {
  return FindConstant(MakeLabel(name, args));
}

std::optional<int> GroundDomain::FindConstant(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> GroundDomain::FindValue(int constant,
                                           const std::string& value) const {
  const std::vector<std::string>& values = constants[constant].values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string GroundDomain::AtomLabel(const GroundAtom& atom) const {
  const GroundConstant& c = constants[atom.constant];
  if (c.boolean) return atom.value == 0 ? c.Label() : c.Label() + "=false";
  return c.Label() + "=" + c.values[atom.value];
}

std::string GroundDomain::FormulaLabel(const GroundFormula& formula) const {
  return formula.Print([this](const GroundAtom& a) { return AtomLabel(a); });
}

std::string GroundDomain::LawLabel(const GroundLaw& law) const {
  std::ostringstream out;
  auto print_if = [&] {
    if (!law.condition.IsTrue()) out << " if " << FormulaLabel(law.condition);
  };
  switch (law.form) {
    case LawForm::kCaused:
      out << "caused " << (law.head ? AtomLabel(*law.head) : "false");
      print_if();
      if (law.after) out << " after " << FormulaLabel(*law.after);
      break;
    case LawForm::kCauses:
      out << AtomLabel(*law.action) << " causes " << AtomLabel(*law.head);
      print_if();
      break;
    case LawForm::kNonexecutable:
      out << "nonexecutable " << AtomLabel(*law.action);
      print_if();
      break;
    case LawForm::kConstraint:
      out << "constraint " << FormulaLabel(law.condition);
      break;
    case LawForm::kInertial:
      out << "inertial " << constants[law.constant].Label();
      break;
    case LawForm::kExogenous:
      out << "exogenous " << constants[law.constant].Label();
      break;
  }
  out << ";";
  return out.str();
}

std::vector<GroundAtom> GroundDomain::SignatureAtoms() const {
  std::vector<GroundAtom> atoms;
  for (int c = 0; c < num_constants(); ++c) {
    if (constants[c].boolean) {
      atoms.push_back({c, 0});
      continue;
    }
    for (int v = 0; v < static_cast<int>(constants[c].values.size()); ++v) {
      atoms.push_back({c, v});
    }
  }
  return atoms;
}

class Grounder {
 public:
  // `out` is the domain being built; null when only grounding formulas.
  Grounder(const GroundDomain& ground, const ExternalRegistry& registry,
           GroundDomain* out = nullptr)
      : ground_(ground), out_(out), registry_(registry) {}

  void BuildSignature() {
    const DomainDescription& domain = ground_.domain;
    for (int pass = 0; pass < 2; ++pass) {
      for (const ConstantDecl& decl : domain.constants) {
        if (decl.IsAction() != (pass == 1)) continue;
        std::vector<const std::vector<std::string>*> sorts;
        for (const std::string& s : decl.arg_sorts) {
          sorts.push_back(&domain.FindSort(s)->members);
        }
        std::vector<std::string> values = {kTrueValue, kFalseValue};
        if (!decl.IsBoolean()) values = domain.FindSort(*decl.value_sort)->members;
        ForEachTuple(sorts, [&](const std::vector<std::string>& args) {
          GroundConstant c;
          c.name = decl.name;
          c.args = args;
          c.kind = decl.kind;
          c.values = values;
          c.boolean = decl.IsBoolean();
          out_->by_label_[c.Label()] = ground_.num_constants();
          out_->constants.push_back(std::move(c));
        });
      }
      if (pass == 0) out_->num_fluents = ground_.num_constants();
    }
  }

  void CheckRegistry() {
    for (const ExternalDecl& e : ground_.domain.externals) {
      if (!registry_.Contains(e.name, e.arity)) {
        throw GroundingError(e.span.ToString() + ": external '" + e.name +
                             "/" + std::to_string(e.arity) +
                             "' is not registered");
      }
    }
  }

  void GroundLaws(const GroundOptions& options) {
    for (const CausalLaw& law : ground_.domain.laws) {
      ForEachBinding(law.vars, [&](const Substitution& sub) {
        GroundOne(law, sub, options);
      });
    }
  }

  void GroundCosts() {
    for (const CostBinding& cost : ground_.domain.costs) {
      ForEachBinding(cost.vars, [&](const Substitution& sub) {
        GroundAtom action = Atom(cost.action, sub);
        GroundCost g;
        g.external = cost.external;
        for (const CostArg& arg : cost.args) {
          GroundCostArg a;
          if (arg.IsFluent()) {
            std::vector<std::string> args;
            for (const Term& t : arg.fluent_args) args.push_back(Name(t, sub));
            a.fluent = Constant(arg.fluent, args, cost.span);
          } else {
            a.object = Name(*arg.term, sub);
          }
          g.args.push_back(std::move(a));
        }
        out_->costs[action.constant] = std::move(g);
      });
    }
  }

  GroundFormula Formula(const causalplan::Formula& f, const Substitution& sub) {
    using K = causalplan::Formula::Kind;
    switch (f.kind) {
      case K::kTrue:
        return GroundFormula::True();
      case K::kFalse:
        return GroundFormula::False();
      case K::kAtom:
        return GroundFormula::Of(Atom(f.atom(), sub));
      case K::kExternal:
        return GroundFormula::Constant(Evaluate(f.call(), sub));
      case K::kCompare: {
        const TermComparison& cmp = f.comparison();
        const bool same = Name(cmp.lhs, sub) == Name(cmp.rhs, sub);
        return GroundFormula::Constant(same == cmp.equal);
      }
      case K::kNot:
        return GroundFormula::Not(Formula(f.children.front(), sub));
      case K::kAnd:
      case K::kOr: {
        std::vector<GroundFormula> parts;
        for (const causalplan::Formula& c : f.children) {
          parts.push_back(Formula(c, sub));
        }
        return f.kind == K::kAnd ? GroundFormula::And(std::move(parts))
                                 : GroundFormula::Or(std::move(parts));
      }
    }
    return GroundFormula::True();
  }

 private:
  template <typename Fn>
  void ForEachBinding(const std::vector<VarBinding>& vars, const Fn& fn) {
    std::vector<const std::vector<std::string>*> sorts;
    for (const VarBinding& v : vars) {
      sorts.push_back(&ground_.domain.FindSort(v.sort)->members);
    }
    ForEachTuple(sorts, [&](const std::vector<std::string>& tuple) {
      Substitution sub;
      for (std::size_t i = 0; i < vars.size(); ++i) sub[vars[i].name] = tuple[i];
      fn(sub);
    });
  }

  void GroundOne(const CausalLaw& law, const Substitution& sub,
                 const GroundOptions& options) {
    if (law.form == LawForm::kInertial || law.form == LawForm::kExogenous) {
      for (int c = 0; c < ground_.num_constants(); ++c) {
        if (ground_.constants[c].name != law.constant) continue;
        GroundLaw g;
        g.form = law.form;
        g.constant = c;
        g.span = law.span;
        out_->laws.push_back(std::move(g));
      }
      return;
    }
    GroundLaw g;
    g.form = law.form;
    g.span = law.span;
    if (law.head) g.head = Atom(*law.head, sub);
    if (law.action) g.action = Atom(*law.action, sub);
    g.condition = Formula(law.condition, sub);
    if (law.after) g.after = Formula(*law.after, sub);
    if (options.drop_false_laws) {
      if (law.form == LawForm::kConstraint) {
        if (g.condition.IsTrue()) return;
      } else if (g.condition.IsFalse() || (g.after && g.after->IsFalse())) {
        return;
      }
    }
    out_->laws.push_back(std::move(g));
  }

  std::string Name(const Term& t, const Substitution& sub) const {
    if (!t.is_variable) return t.name;
    auto it = sub.find(t.name);
    if (it == sub.end()) {
      throw GroundingError("unbound variable '" + t.name + "'");
    }
    return it->second;
  }

  int Constant(const std::string& name, const std::vector<std::string>& args,
               const SourceSpan& span) const {
    std::optional<int> c = ground_.FindConstant(name, args);
    if (!c) {
      throw GroundingError(span.ToString() + ": no ground constant '" +
                           MakeLabel(name, args) + "'");
    }
    return *c;
  }

  GroundAtom Atom(const causalplan::Atom& atom, const Substitution& sub) const {
    std::vector<std::string> args;
    for (const Term& t : atom.args) args.push_back(Name(t, sub));
    const int c = Constant(atom.constant, args, atom.span);
    const std::string value = Name(atom.value, sub);
    std::optional<int> v = ground_.FindValue(c, value);
    if (!v) {
      throw GroundingError(atom.span.ToString() + ": '" + value +
                           "' is not a value of '" +
                           ground_.constants[c].Label() + "'");
    }
    return GroundAtom{c, *v};
  }

  bool Evaluate(const ExternalCall& call, const Substitution& sub) {
    std::vector<std::string> args;
    for (const Term& t : call.args) args.push_back(Name(t, sub));
    auto key = std::make_pair(call.name, args);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const int arity = static_cast<int>(args.size());
    const std::string site =
        call.span.ToString() + ": @" + MakeLabel(call.name, args);
    const ExternalRegistry::Predicate* fn =
        registry_.FindPredicate(call.name, arity);
    if (fn == nullptr) {
      throw GroundingError(site + ": no predicate '" + call.name + "/" +
                           std::to_string(arity) + "' is registered");
    }
    bool value = false;
    try {
      value = (*fn)(args);
    } catch (const std::exception& e) {
      throw GroundingError(site + " failed: " + e.what());
    }
    memo_.emplace(std::move(key), value);
    return value;
  }

  const GroundDomain& ground_;
  GroundDomain* out_;
  const ExternalRegistry& registry_;
  std::map<std::pair<std::string, std::vector<std::string>>, bool> memo_;
};

GroundDomain Ground(const DomainDescription& domain,
                    const ExternalRegistry& registry,
                    const GroundOptions& options) {
  GroundDomain out;
  out.domain = domain;
  Grounder grounder(out, registry, &out);
  grounder.CheckRegistry();
  grounder.BuildSignature();
  grounder.GroundLaws(options);
  grounder.GroundCosts();
  return out;
}

GroundFormula GroundClosedFormula(const GroundDomain& ground,
                                  const Formula& formula,
                                  const ExternalRegistry& registry) {
  Grounder grounder(ground, registry);
  return grounder.Formula(formula, {});
}

GroundProblem GroundPlanningProblem(const GroundDomain& ground,
                                    const PlanningProblem& problem,
                                    const ExternalRegistry& registry) {
  Grounder grounder(ground, registry);
  GroundProblem out;
  out.init = grounder.Formula(problem.init, {});
  out.goal = grounder.Formula(problem.goal, {});
  for (const TimedConstraint& c : problem.constraints) {
    out.constraints.push_back({c.step, grounder.Formula(c.formula, {})});
  }
  out.min_horizon = problem.min_horizon;
  out.max_horizon = problem.max_horizon;
  out.max_cost = problem.max_cost;
  out.noconcurrency = problem.noconcurrency;
  return out;
}

}  // namespace causalplan
