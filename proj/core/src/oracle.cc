#include <algorithm>
#include <map>
#include <set>

#include "causalplan/planner.h"

namespace causalplan {
namespace {

class OracleSearch {
 public:
  OracleSearch(const GroundDomain& ground, const std::vector<CausalRule>& rules,
               int horizon)
      : ground_(ground), rules_(rules), horizon_(horizon),
        width_(ground.num_constants()) {
    const int atoms = static_cast<int>(ground.SignatureAtoms().size());
    if (atoms > kOracleAtomLimit) {
      throw PlanningError("oracle limit exceeded: " + std::to_string(atoms) +
                          " atoms per step");
    }
    const int stages = 2 * horizon + 1;
    stage_constants_.resize(stages);
    rules_at_.resize(stages);
    caused_at_.resize(stages);
    for (int t = 0; t <= horizon; ++t) {
      for (int c = 0; c < width_; ++c) {
        if (ground.IsAction(c) && t == horizon) continue;
        stage_constants_[Stage(c, t)].push_back(Slot(c, t));
      }
    }
    // A constant's value can be judged once every rule for it is decidable.
    std::map<int, int> caused_ready;
    for (const auto& slots : stage_constants_) {
      for (int slot : slots) caused_ready[slot] = StageOfSlot(slot);
    }
    for (int i = 0; i < static_cast<int>(rules.size()); ++i) {
      int ready = 0;
      rules[i].body.ForEachLeaf([&](const TimedAtom& a) {
        ready = std::max(ready, Stage(a.atom.constant, a.step));
      });
      if (rules[i].head) {
        const TimedAtom& h = *rules[i].head;
        ready = std::max(ready, Stage(h.atom.constant, h.step));
        const int slot = Slot(h.atom.constant, h.step);
        heads_[slot].push_back(i);
        caused_ready[slot] = std::max(caused_ready[slot], ready);
      }
      rules_at_[ready].push_back(i);
    }
    for (const auto& [slot, stage] : caused_ready) {
      caused_at_[stage].push_back(slot);
    }
    value_.assign((horizon + 1) * width_, -1);
  }

  std::vector<Trajectory> Run() {
    Search(0);
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  int Slot(int c, int t) const { return t * width_ + c; }
  int StageOfSlot(int slot) const { return Stage(slot % width_, slot / width_); }
  int Stage(int c, int t) const {
    return 2 * t + (ground_.IsAction(c) ? 1 : 0);
  }
  int NumValues(int slot) const {
    return static_cast<int>(ground_.constants[slot % width_].values.size());
  }

  bool Holds(const TimedAtom& a) const {
    return value_[Slot(a.atom.constant, a.step)] == a.atom.value;
  }

  bool Check(int stage) const {
    auto holds = [this](const TimedAtom& a) { return Holds(a); };
    for (int i : rules_at_[stage]) {
      const CausalRule& rule = rules_[i];
      if (!rule.body.Evaluate(holds)) continue;
      if (!rule.head || !Holds(*rule.head)) return false;
    }
    for (int slot : caused_at_[stage]) {
      bool caused = false;
      auto it = heads_.find(slot);
      if (it != heads_.end()) {
        for (int i : it->second) {
          const CausalRule& rule = rules_[i];
          if (Holds(*rule.head) && rule.body.Evaluate(holds)) {
            caused = true;
            break;
          }
        }
      }
      if (!caused) return false;
    }
    return true;
  }

  void Search(int stage) {
    if (stage == static_cast<int>(stage_constants_.size())) {
      Record();
      return;
    }
    const std::vector<int>& slots = stage_constants_[stage];
    for (int slot : slots) value_[slot] = 0;
    while (true) {
      if (Check(stage)) Search(stage + 1);
      std::size_t k = 0;
      while (k < slots.size()) {
        if (++value_[slots[k]] < NumValues(slots[k])) break;
        value_[slots[k]] = 0;
        ++k;
      }
      if (k == slots.size()) break;
    }
    for (int slot : slots) value_[slot] = -1;
  }

  void Record() {
    Trajectory t;
    for (int step = 0; step <= horizon_; ++step) {
      State s(value_.begin() + step * width_,
              value_.begin() + step * width_ + ground_.num_fluents);
      t.states.push_back(std::move(s));
      if (step == horizon_) break;
      std::vector<int> acts;
      for (int a = ground_.num_fluents; a < width_; ++a) {
        if (value_[Slot(a, step)] == 0) acts.push_back(a);
      }
      t.actions.push_back(std::move(acts));
    }
    found_.push_back(std::move(t));
  }

  const GroundDomain& ground_;
  const std::vector<CausalRule>& rules_;
  int horizon_;
  int width_;
  std::vector<std::vector<int>> stage_constants_;
  std::vector<std::vector<int>> rules_at_;
  std::vector<std::vector<int>> caused_at_;
  std::map<int, std::vector<int>> heads_;
  std::vector<int> value_;
  std::vector<Trajectory> found_;
};

}  // namespace

std::vector<Trajectory> OracleTrajectories(const GroundDomain& ground,
                                           const std::vector<CausalRule>& rules,
                                           int horizon) {
  return OracleSearch(ground, rules, horizon).Run();
}

std::vector<Trajectory> OracleTrajectories(const GroundDomain& ground,
                                           int horizon, bool noconcurrency) {
  const std::vector<CausalRule> rules =
      Unroll(ground, Desugar(ground), {horizon, noconcurrency});
  return OracleTrajectories(ground, rules, horizon);
}

std::vector<State> OracleStates(const GroundDomain& ground) {
  std::vector<State> states;
  for (Trajectory& t : OracleTrajectories(ground, 0)) {
    states.push_back(std::move(t.states.front()));
  }
  return states;
}

std::vector<Transition> OracleTransitions(const GroundDomain& ground) {
  std::vector<Transition> out;
  for (Trajectory& t : OracleTrajectories(ground, 1)) {
    out.emplace_back(std::move(t.states[0]), std::move(t.actions[0]),
                     std::move(t.states[1]));
  }
  return out;
}

std::optional<int> OracleShortestPlan(const GroundDomain& ground,
                                      const GroundProblem& problem,
                                      int max_horizon) {
  auto satisfies = [&](const State& s, const GroundFormula& f) {
    return f.Evaluate([&](const GroundAtom& a) {
      return !ground.IsAction(a.constant) && s[a.constant] == a.value;
    });
  };
  std::map<State, std::vector<State>> next;
  for (const auto& [from, actions, to] : OracleTransitions(ground)) {
    if (problem.noconcurrency && actions.size() > 1) continue;
    next[from].push_back(to);
  }
  std::set<State> visited;
  std::vector<State> frontier;
  for (const State& s : OracleStates(ground)) {
    if (satisfies(s, problem.init) && visited.insert(s).second) {
      frontier.push_back(s);
    }
  }
  for (int depth = 0; depth <= max_horizon && !frontier.empty(); ++depth) {
    for (const State& s : frontier) {
      if (satisfies(s, problem.goal)) return depth;
    }
    std::vector<State> following;
    for (const State& s : frontier) {
      for (const State& n : next[s]) {
        if (visited.insert(n).second) following.push_back(n);
      }
    }
    frontier = std::move(following);
  }
  return std::nullopt;
}

}  // namespace causalplan
