#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "causalplan/compiler.h"

namespace causalplan {
namespace {

constexpr char kInertiaOrigin[] = "inertia";
constexpr char kExogeneityOrigin[] = "exogeneity";
constexpr char kNoconcurrencyOrigin[] = "noconcurrency";

std::vector<int> ValueIndices(const GroundConstant& c) {
  std::vector<int> values;
  for (int v = 0; v < static_cast<int>(c.values.size()); ++v) values.push_back(v);
  return values;
}

// Stamps `formula`; nullopt if some atom falls outside the horizon.
std::optional<TimedFormula> StampInRange(const GroundDomain& ground,
                                         const GroundFormula& formula,
                                         int step, int horizon) {
  bool in_range = true;
  formula.ForEachLeaf([&](const GroundAtom& atom) {
    if (!InRange(ground, TimedAtom{atom, step}, horizon)) in_range = false;
  });
  if (!in_range) return std::nullopt;
  return formula.Map(
      [&](const GroundAtom& atom) { return TimedFormula::Of({atom, step}); });
}

int MaxStep(const TimedFormula& formula) {
  int step = 0;
  formula.ForEachLeaf(
      [&](const TimedAtom& atom) { step = std::max(step, atom.step); });
  return step;
}

std::string JoinOrigins(const std::vector<std::string>& origins) {
  std::set<std::string> seen;
  std::string out;
  for (const std::string& o : origins) {
    if (!seen.insert(o).second) continue;
    if (!out.empty()) out += "; ";
    out += o;
  }
  return out.empty() ? "none" : out;
}

}  // namespace

std::vector<BasicRule> Desugar(const GroundDomain& ground) {
  std::vector<BasicRule> rules;
  std::set<std::string> seen;
  auto add = [&](BasicRule rule) {
    auto label = [&](const GroundFormula& f) { return ground.FormulaLabel(f); };
    std::string key = rule.head ? ground.AtomLabel(*rule.head) : "false";
    key += " if " + label(rule.condition);
    if (rule.after) key += " after " + label(*rule.after);
    if (seen.insert(key).second) rules.push_back(std::move(rule));
  };
  auto inertia = [&](int c) {
    for (int v : ValueIndices(ground.constants[c])) {
      const GroundFormula f = GroundFormula::Of({c, v});
      add({GroundAtom{c, v}, f, f, kInertiaOrigin});
    }
  };
  for (const GroundLaw& law : ground.laws) {
    const std::string origin = ground.LawLabel(law);
    switch (law.form) {
      case LawForm::kCaused:
        add({law.head, law.condition, law.after, origin});
        break;
      case LawForm::kCauses:
        add({law.head, GroundFormula::True(),
             GroundFormula::And(GroundFormula::Of(*law.action), law.condition),
             origin});
        break;
      case LawForm::kNonexecutable:
        add({std::nullopt, GroundFormula::True(),
             GroundFormula::And(GroundFormula::Of(*law.action), law.condition),
             origin});
        break;
      case LawForm::kConstraint:
        add({std::nullopt, GroundFormula::Not(law.condition), std::nullopt,
             origin});
        break;
      case LawForm::kInertial:
        inertia(law.constant);
        break;
      case LawForm::kExogenous:
        if (ground.IsAction(law.constant)) break;
        for (int v : ValueIndices(ground.constants[law.constant])) {
          const GroundFormula f = GroundFormula::Of({law.constant, v});
          add({GroundAtom{law.constant, v}, f, std::nullopt, kExogeneityOrigin});
        }
        break;
    }
  }
  for (int c = 0; c < ground.num_fluents; ++c) {
    if (ground.constants[c].kind == ConstantKind::kInertialFluent) inertia(c);
  }
  return rules;
}

bool InRange(const GroundDomain& ground, const TimedAtom& atom, int horizon) {
  if (atom.step < 0) return false;
  if (ground.IsAction(atom.atom.constant)) return atom.step < horizon;
  return atom.step <= horizon;
}

TimedFormula Stamp(const GroundDomain& ground, const GroundFormula& formula,
                   int step, int horizon) {
  return formula.Map([&](const GroundAtom& atom) {
    const TimedAtom timed{atom, step};
    if (!InRange(ground, timed, horizon)) return TimedFormula::False();
    return TimedFormula::Of(timed);
  });
}

std::vector<CausalRule> Unroll(const GroundDomain& ground,
                               const std::vector<BasicRule>& rules,
                               const UnrollOptions& options) {
  const int h = options.horizon;
  if (h < 0) throw std::invalid_argument("negative horizon");
  std::vector<CausalRule> out;
  for (const BasicRule& rule : rules) {
    const int first = rule.IsDynamic() ? 1 : 0;
    for (int t = first; t <= h; ++t) {
      std::optional<TimedAtom> head;
      if (rule.head) {
        head = TimedAtom{*rule.head, t};
        if (!InRange(ground, *head, h)) continue;
      }
      std::optional<TimedFormula> body =
          StampInRange(ground, rule.condition, t, h);
      if (!body) continue;
      if (rule.after) {
        std::optional<TimedFormula> after =
            StampInRange(ground, *rule.after, t - 1, h);
        if (!after) continue;
        body = TimedFormula::And(std::move(*after), std::move(*body));
      }
      out.push_back({head, std::move(*body), rule.origin});
    }
  }
  for (int t = 0; t < h; ++t) {
    for (int a = ground.num_fluents; a < ground.num_constants(); ++a) {
      for (int v : ValueIndices(ground.constants[a])) {
        const TimedAtom atom{{a, v}, t};
        out.push_back({atom, TimedFormula::Of(atom), kExogeneityOrigin});
      }
    }
  }
  for (int c = 0; c < ground.num_fluents; ++c) {
    if (ground.constants[c].kind != ConstantKind::kInertialFluent) continue;
    for (int v : ValueIndices(ground.constants[c])) {
      const TimedAtom atom{{c, v}, 0};
      out.push_back({atom, TimedFormula::Of(atom), kExogeneityOrigin});
    }
  }
  if (options.noconcurrency) {
    for (int t = 0; t < h; ++t) {
      for (int a = ground.num_fluents; a < ground.num_constants(); ++a) {
        for (int b = a + 1; b < ground.num_constants(); ++b) {
          out.push_back({std::nullopt,
                         TimedFormula::And(TimedFormula::Of({{a, 0}, t}),
                                           TimedFormula::Of({{b, 0}, t})),
                         kNoconcurrencyOrigin});
        }
      }
    }
  }
  return out;
}

std::string TimedAtomLabel(const GroundDomain& ground, const TimedAtom& atom) {
  return ground.AtomLabel(atom.atom) + "@" + std::to_string(atom.step);
}

std::string TimedFormulaLabel(const GroundDomain& ground,
                              const TimedFormula& formula) {
  return formula.Print(
      [&](const TimedAtom& atom) { return TimedAtomLabel(ground, atom); });
}

Completion Complete(const GroundDomain& ground,
                    const std::vector<CausalRule>& rules, int horizon) {
  Completion out;
  out.horizon = horizon;
  std::map<TimedAtom, std::size_t> index;
  for (int t = 0; t <= horizon; ++t) {
    for (int c = 0; c < ground.num_constants(); ++c) {
      if (!InRange(ground, TimedAtom{{c, 0}, t}, horizon)) continue;
      const GroundConstant& constant = ground.constants[c];
      std::vector<TimedAtom> group;
      for (int v : ValueIndices(constant)) {
        const TimedAtom atom{{c, v}, t};
        index[atom] = out.definitions.size();
        out.definitions.push_back({atom, {}, {}});
        group.push_back(atom);
      }
      if (!constant.boolean) out.exactly_one.push_back(std::move(group));
    }
  }
  for (const CausalRule& rule : rules) {
    if (!rule.head) {
      out.constraints.push_back(
          {TimedFormula::Not(rule.body), rule.origin, MaxStep(rule.body)});
      continue;
    }
    auto it = index.find(*rule.head);
    if (it == index.end()) {
      throw std::logic_error("rule head outside the horizon");
    }
    Definition& def = out.definitions[it->second];
    def.bodies.push_back(rule.body);
    def.origins.push_back(rule.origin);
  }
  return out;
}

bool Holds(const Trajectory& trajectory, const TimedAtom& atom,
           const GroundDomain& ground) {
  const int c = atom.atom.constant;
  if (ground.IsAction(c)) {
    const std::vector<int>& acts = trajectory.actions.at(atom.step);
    const bool executed = std::binary_search(acts.begin(), acts.end(), c);
    return executed == (atom.atom.value == 0);
  }
  return trajectory.states.at(atom.step).at(c) == atom.atom.value;
}

std::optional<CompletionViolation> FindViolation(
    const GroundDomain& ground, const Completion& completion,
    const Trajectory& trajectory) {
  const int h = completion.horizon;
  if (trajectory.horizon() != h ||
      static_cast<int>(trajectory.states.size()) != h + 1) {
    return CompletionViolation{0, "trajectory length does not match horizon " +
                                      std::to_string(h)};
  }
  for (int t = 0; t <= h; ++t) {
    const State& s = trajectory.states[t];
    if (static_cast<int>(s.size()) != ground.num_fluents) {
      return CompletionViolation{t, "state " + std::to_string(t) +
                                        " does not assign every fluent"};
    }
    for (int c = 0; c < ground.num_fluents; ++c) {
      if (s[c] < 0 || s[c] >= static_cast<int>(ground.constants[c].values.size())) {
        return CompletionViolation{
            t, "state " + std::to_string(t) + " assigns no value to " +
                   ground.constants[c].Label()};
      }
    }
  }
  auto holds = [&](const TimedAtom& atom) {
    return Holds(trajectory, atom, ground);
  };
  std::optional<CompletionViolation> first;
  auto report = [&](int step, std::string message) {
    if (!first || step < first->step) {
      first = CompletionViolation{step, std::move(message)};
    }
  };
  for (const Definition& def : completion.definitions) {
    const bool lhs = holds(def.head);
    std::optional<std::size_t> firing;
    for (std::size_t i = 0; i < def.bodies.size() && !firing; ++i) {
      if (def.bodies[i].Evaluate(holds)) firing = i;
    }
    const std::string atom = ground.AtomLabel(def.head.atom);
    const std::string at = " at step " + std::to_string(def.head.step);
    if (lhs && !firing) {
      report(def.head.step, "completion of " + atom + at +
                                " violated: it holds but no rule causes it "
                                "(rules: " +
                                JoinOrigins(def.origins) + ")");
    } else if (!lhs && firing) {
      report(def.head.step, "completion of " + atom + at + " violated: " +
                                def.origins[*firing] +
                                " causes it but it does not hold");
    }
  }
  for (const Assertion& a : completion.constraints) {
    if (!a.formula.Evaluate(holds)) {
      report(a.step, "constraint violated at step " + std::to_string(a.step) +
                         ": " + a.origin);
    }
  }
  return first;
}

}  // namespace causalplan
