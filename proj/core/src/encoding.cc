#include <algorithm>
#include <cstdlib>

#include "causalplan/compiler.h"

namespace causalplan {

Encoding::Encoding(const GroundDomain& ground, int horizon)
    : ground_(&ground), horizon_(horizon) {
  int offset = 0;
  for (int c = 0; c < ground.num_constants(); ++c) {
    if (c == ground.num_fluents) fluent_block_ = offset;
    constant_offset_.push_back(offset);
    const GroundConstant& constant = ground.constants[c];
    offset += constant.boolean ? 1 : static_cast<int>(constant.values.size());
  }
  if (ground.num_fluents == ground.num_constants()) fluent_block_ = offset;
  const int step_width = offset;
  for (int t = 0; t <= horizon; ++t) {
    step_base_.push_back(1 + t * step_width);
  }
  num_atom_vars_ = horizon * step_width + fluent_block_;
  cnf_.num_vars = num_atom_vars_;
  cnf_.atom_labels.resize(num_atom_vars_);
  for (int t = 0; t <= horizon; ++t) {
    for (int c = 0; c < ground.num_constants(); ++c) {
      const GroundConstant& constant = ground.constants[c];
      if (!InRange(ground, TimedAtom{{c, 0}, t}, horizon)) continue;
      const int n = constant.boolean ? 1 : static_cast<int>(constant.values.size());
      for (int v = 0; v < n; ++v) {
        const TimedAtom atom{{c, v}, t};
        cnf_.atom_labels[std::abs(Literal(atom)) - 1] =
            TimedAtomLabel(ground, atom);
      }
    }
  }
}

int Encoding::Literal(const TimedAtom& atom) const {
  const GroundConstant& c = ground_->constants[atom.atom.constant];
  const int var = step_base_.at(atom.step) +
                  constant_offset_[atom.atom.constant] +
                  (c.boolean ? 0 : atom.atom.value);
  return c.boolean && atom.atom.value == 1 ? -var : var;
}

int Encoding::NewAux() {
  ++cnf_.num_vars;
  return cnf_.num_vars;
}

void Encoding::AddClause(std::vector<int> clause) {
  std::sort(clause.begin(), clause.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    if (clause[i] == -clause[i - 1]) return;
  }
  if (clause.empty()) {
    // The empty clause, kept as a pair of complementary units.
    const int x = NewAux();
    AddClause({x});
    AddClause({-x});
    return;
  }
  if (!clause_set_.insert(clause).second) return;
  cnf_.clauses.push_back(std::move(clause));
}

int Encoding::Define(bool conjunction, std::vector<int> literals) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  for (int l : literals) {
    if (std::binary_search(literals.begin(), literals.end(), -l)) {
      return LiteralFor(TimedFormula::Constant(!conjunction));
    }
  }
  if (literals.empty()) return LiteralFor(TimedFormula::Constant(conjunction));
  if (literals.size() == 1) return literals.front();
  auto& cache = conjunction ? and_cache_ : or_cache_;
  auto it = cache.find(literals);
  if (it != cache.end()) return it->second;
  const int x = NewAux();
  cache.emplace(literals, x);
  const int sign = conjunction ? 1 : -1;
  std::vector<int> back = {sign * x};
  for (int l : literals) {
    AddClause({-sign * x, sign * l});
    back.push_back(-sign * l);
  }
  AddClause(std::move(back));
  return x;
}

int Encoding::LiteralFor(const TimedFormula& formula) {
  using Kind = TimedFormula::Kind;
  switch (formula.kind) {
    case Kind::kTrue:
    case Kind::kFalse: {
      if (true_var_ == 0) {
        true_var_ = NewAux();
        AddClause({true_var_});
      }
      const int x = true_var_;
      return formula.kind == Kind::kTrue ? x : -x;
    }
    case Kind::kLeaf:
      return Literal(formula.leaf);
    case Kind::kNot:
      return -LiteralFor(formula.children.front());
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<int> literals;
      for (const TimedFormula& c : formula.children) {
        literals.push_back(LiteralFor(c));
      }
      return Define(formula.kind == Kind::kAnd, std::move(literals));
    }
  }
  return 0;
}

void Encoding::Assert(const TimedFormula& formula) {
  using Kind = TimedFormula::Kind;
  switch (formula.kind) {
    case Kind::kTrue:
      return;
    case Kind::kFalse:
      AddClause({});
      return;
    case Kind::kLeaf:
    case Kind::kOr: {
      std::vector<int> clause;
      if (formula.kind == Kind::kLeaf) {
        clause.push_back(Literal(formula.leaf));
      } else {
        for (const TimedFormula& c : formula.children) {
          clause.push_back(LiteralFor(c));
        }
      }
      AddClause(std::move(clause));
      return;
    }
    case Kind::kAnd:
      for (const TimedFormula& c : formula.children) Assert(c);
      return;
    case Kind::kNot: {
      const TimedFormula& g = formula.children.front();
      if (g.kind == Kind::kOr) {
        for (const TimedFormula& c : g.children) {
          Assert(TimedFormula::Not(c));
        }
        return;
      }
      std::vector<int> clause;
      if (g.kind == Kind::kAnd) {
        for (const TimedFormula& c : g.children) clause.push_back(-LiteralFor(c));
      } else {
        clause.push_back(-LiteralFor(g));
      }
      AddClause(std::move(clause));
      return;
    }
  }
}

void Encoding::AddDefinition(const Definition& definition) {
  using Kind = TimedFormula::Kind;
  const int head = Literal(definition.head);
  std::vector<const TimedFormula*> bodies;
  for (const TimedFormula& b : definition.bodies) {
    if (b.IsTrue()) {
      AddClause({head});
      return;
    }
    if (!b.IsFalse()) bodies.push_back(&b);
  }
  if (bodies.empty()) {
    AddClause({-head});
    return;
  }
  if (bodies.size() == 1) {
    const TimedFormula& b = *bodies.front();
    if (b.kind == Kind::kAnd) {
      std::vector<int> back = {head};
      for (const TimedFormula& c : b.children) {
        const int l = LiteralFor(c);
        AddClause({-head, l});
        back.push_back(-l);
      }
      AddClause(std::move(back));
    } else if (b.kind == Kind::kOr) {
      std::vector<int> forth = {-head};
      for (const TimedFormula& c : b.children) {
        const int l = LiteralFor(c);
        AddClause({-l, head});
        forth.push_back(l);
      }
      AddClause(std::move(forth));
    } else {
      const int l = LiteralFor(b);
      AddClause({-head, l});
      AddClause({-l, head});
    }
    return;
  }
  std::vector<int> forth = {-head};
  for (const TimedFormula* b : bodies) {
    const int l = LiteralFor(*b);
    AddClause({-l, head});
    forth.push_back(l);
  }
  AddClause(std::move(forth));
}

void Encoding::AddCompletion(const Completion& completion) {
  for (const Definition& def : completion.definitions) AddDefinition(def);
  for (const Assertion& a : completion.constraints) Assert(a.formula);
  for (const std::vector<TimedAtom>& group : completion.exactly_one) {
    std::vector<int> literals;
    for (const TimedAtom& atom : group) literals.push_back(Literal(atom));
    AddClause(literals);
    for (std::size_t i = 0; i < literals.size(); ++i) {
      for (std::size_t j = i + 1; j < literals.size(); ++j) {
        AddClause({-literals[i], -literals[j]});
      }
    }
  }
}

Trajectory Encoding::Decode(const std::vector<bool>& model) const {
  auto holds = [&](const TimedAtom& atom) {
    const int l = Literal(atom);
    return model.at(std::abs(l)) == (l > 0);
  };
  Trajectory out;
  for (int t = 0; t <= horizon_; ++t) {
    State state(ground_->num_fluents, -1);
    for (int c = 0; c < ground_->num_fluents; ++c) {
      const int n = static_cast<int>(ground_->constants[c].values.size());
      for (int v = 0; v < n; ++v) {
        if (holds({{c, v}, t})) {
          state[c] = v;
          break;
        }
      }
    }
    out.states.push_back(std::move(state));
    if (t == horizon_) break;
    std::vector<int> actions;
    for (int a = ground_->num_fluents; a < ground_->num_constants(); ++a) {
      if (holds({{a, 0}, t})) actions.push_back(a);
    }
    out.actions.push_back(std::move(actions));
  }
  return out;
}

}  // namespace causalplan
