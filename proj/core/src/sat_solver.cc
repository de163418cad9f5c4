#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>

#include "causalplan/sat.h"

namespace causalplan {

bool CnfFormula::IsAuxiliary(int var) const {
  return var > static_cast<int>(atom_labels.size()) ||
         atom_labels[var - 1].empty();
}

bool CnfFormula::Satisfies(const std::vector<bool>& model) const {
  for (const std::vector<int>& clause : clauses) {
    bool sat = false;
    for (int l : clause) {
      const std::size_t v = std::abs(l);
      if (v < model.size() && model[v] == (l > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

// Internal literals: 2 * var + (negative ? 1 : 0), var 0-based.
int FromDimacs(int lit) { return 2 * (std::abs(lit) - 1) + (lit < 0 ? 1 : 0); }
int VarOf(int lit) { return lit >> 1; }
int Negate(int lit) { return lit ^ 1; }

// The Luby sequence 1 1 2 1 1 2 4 ...
double Luby(int i) {
  int size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return static_cast<double>(1 << seq);
}

constexpr int kNoReason = -1;
constexpr int kRestartUnit = 100;
constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;

}  // namespace

class Solver::Impl {
 public:
  Impl(int num_vars, SolverOptions options) : rng_(options.seed) {
    Reserve(num_vars);
  }

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  void Reserve(int n) {
    std::uniform_real_distribution<double> jitter(0.0, 1e-5);
    while (num_vars() < n) {
      const int v = num_vars();
      assigns_.push_back(0);
      level_.push_back(0);
      reason_.push_back(kNoReason);
      activity_.push_back(jitter(rng_));
      phase_.push_back(true);
      seen_.push_back(0);
      heap_index_.push_back(-1);
      watches_.emplace_back();
      watches_.emplace_back();
      HeapInsert(v);
    }
  }

  void AddClause(const std::vector<int>& dimacs) {
    int max_var = 0;
    for (int l : dimacs) max_var = std::max(max_var, std::abs(l));
    Reserve(max_var);
    original_.push_back(dimacs);
    if (!ok_) return;
    std::vector<int> lits;
    for (int l : dimacs) lits.push_back(FromDimacs(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == Negate(lits[i])) return;
      const int value = Value(lits[i]);
      if (value > 0) return;
      if (value == 0) kept.push_back(lits[i]);
    }
    if (kept.empty()) {
      ok_ = false;
      return;
    }
    if (kept.size() == 1) {
      Enqueue(kept.front(), kNoReason);
      if (Propagate() != kNoReason) ok_ = false;
      return;
    }
    Attach(NewClause(std::move(kept), false));
  }

  SolveResult Solve(const std::vector<int>& dimacs_assumptions,
                    const SolverLimits& limits) {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    const SolverStats before = stats_;
    auto finish = [&](SolveStatus status) {
      Backtrack(0);
      result.status = status;
      result.stats = stats_;
      result.stats.decisions -= before.decisions;
      result.stats.propagations -= before.propagations;
      result.stats.conflicts -= before.conflicts;
      result.stats.restarts -= before.restarts;
      result.stats.seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      return result;
    };
    if (!ok_) return finish(SolveStatus::kUnsat);
    std::vector<int> assumptions;
    for (int l : dimacs_assumptions) {
      Reserve(std::abs(l));
      assumptions.push_back(FromDimacs(l));
    }
    if (max_learnts_ == 0) {
      max_learnts_ = std::max<double>(2000.0, original_.size() / 3.0);
    }
    std::int64_t conflicts = 0;
    int restart_index = 0;
    std::int64_t restart_budget = static_cast<std::int64_t>(Luby(0) * kRestartUnit);
    std::int64_t since_restart = 0;
    while (true) {
      const int conflict = Propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts;
        ++since_restart;
        if (DecisionLevel() == 0) {
          ok_ = false;
          return finish(SolveStatus::kUnsat);
        }
        int backtrack_level = 0;
        std::vector<int> learnt = Analyze(conflict, backtrack_level);
        Backtrack(backtrack_level);
        if (learnt.size() == 1) {
          Enqueue(learnt.front(), kNoReason);
        } else {
          const int cref = NewClause(std::move(learnt), true);
          Attach(cref);
          BumpClause(cref);
          Enqueue(clauses_[cref].lits.front(), cref);
        }
        var_inc_ /= kVarDecay;
        clause_inc_ /= kClauseDecay;
        if (limits.max_conflicts && conflicts >= *limits.max_conflicts) {
          Backtrack(0);
          throw ResourceLimitError("conflict limit reached");
        }
        if (limits.max_seconds && (conflicts & 63) == 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                    .count() > *limits.max_seconds) {
          Backtrack(0);
          throw ResourceLimitError("time limit reached");
        }
        continue;
      }
      if (since_restart >= restart_budget) {
        ++stats_.restarts;
        since_restart = 0;
        restart_budget =
            static_cast<std::int64_t>(Luby(++restart_index) * kRestartUnit);
        Backtrack(0);
        continue;
      }
      if (static_cast<double>(num_learnts_) >=
          max_learnts_ + static_cast<double>(trail_.size())) {
        ReduceLearnts();
        max_learnts_ *= 1.1;
      }
      int next = -1;
      while (DecisionLevel() < static_cast<int>(assumptions.size())) {
        const int p = assumptions[DecisionLevel()];
        const int value = Value(p);
        if (value > 0) {
          NewDecisionLevel();
        } else if (value < 0) {
          return finish(SolveStatus::kUnsat);
        } else {
          next = p;
          break;
        }
      }
      if (next < 0) {
        next = PickBranchLiteral();
        if (next < 0) {
          result.model = Model();
          Verify(*result.model);
          return finish(SolveStatus::kSat);
        }
        ++stats_.decisions;
      }
      NewDecisionLevel();
      Enqueue(next, kNoReason);
    }
  }

 private:
  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
  };
  struct Watcher {
    int cref;
    int blocker;
  };

  // 1 true, -1 false, 0 unassigned.
  int Value(int lit) const {
    const int v = assigns_[VarOf(lit)];
    return (lit & 1) ? -v : v;
  }
  int DecisionLevel() const { return static_cast<int>(trail_lim_.size()); }
  void NewDecisionLevel() { trail_lim_.push_back(static_cast<int>(trail_.size())); }

  void Enqueue(int lit, int reason) {
    const int v = VarOf(lit);
    assigns_[v] = (lit & 1) ? -1 : 1;
    level_[v] = DecisionLevel();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  int NewClause(std::vector<int> lits, bool learnt) {
    Clause c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    clauses_.push_back(std::move(c));
    if (learnt) ++num_learnts_;
    return static_cast<int>(clauses_.size()) - 1;
  }

  void Attach(int cref) {
    const Clause& c = clauses_[cref];
    watches_[c.lits[0]].push_back({cref, c.lits[1]});
    watches_[c.lits[1]].push_back({cref, c.lits[0]});
  }

  // Returns the conflicting clause or kNoReason.
  int Propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const int false_lit = Negate(trail_[qhead_++]);
      ++stats_.propagations;
      std::vector<Watcher>& ws = watches_[false_lit];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i++];
        if (Value(w.blocker) > 0) {
          ws[j++] = w;
          continue;
        }
        Clause& c = clauses_[w.cref];
        if (c.deleted) continue;
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        const int first = c.lits[0];
        if (first != w.blocker && Value(first) > 0) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (Value(c.lits[k]) >= 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[c.lits[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (Value(first) < 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          Enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  std::vector<int> Analyze(int conflict, int& backtrack_level) {
    std::vector<int> learnt = {-1};
    int path = 0;
    int p = -1;
    int index = static_cast<int>(trail_.size()) - 1;
    do {
      Clause& c = clauses_[conflict];
      if (c.learnt) BumpClause(conflict);
      for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
        const int q = c.lits[k];
        const int v = VarOf(q);
        if (seen_[v] || level_[v] == 0) continue;
        BumpVar(v);
        seen_[v] = 1;
        if (level_[v] >= DecisionLevel()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[VarOf(trail_[index])]) --index;
      p = trail_[index--];
      conflict = reason_[VarOf(p)];
      seen_[VarOf(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = Negate(p);

    // Drop literals implied by the rest of the clause through their reason.
    std::vector<int> all(learnt.begin() + 1, learnt.end());
    std::size_t out = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const int v = VarOf(learnt[k]);
      bool redundant = reason_[v] != kNoReason;
      if (redundant) {
        const Clause& r = clauses_[reason_[v]];
        for (std::size_t m = 1; m < r.lits.size(); ++m) {
          const int u = VarOf(r.lits[m]);
          if (!seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[out++] = learnt[k];
    }
    learnt.resize(out);
    for (int l : all) seen_[VarOf(l)] = 0;

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[VarOf(learnt[k])] > level_[VarOf(learnt[max_i])]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[VarOf(learnt[1])];
    }
    return learnt;
  }

  void Backtrack(int level) {
    if (DecisionLevel() <= level) return;
    for (int k = static_cast<int>(trail_.size()) - 1; k >= trail_lim_[level];
         --k) {
      const int v = VarOf(trail_[k]);
      assigns_[v] = 0;
      reason_[v] = kNoReason;
      phase_[v] = (trail_[k] & 1) != 0;
      if (heap_index_[v] < 0) HeapInsert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  int PickBranchLiteral() {
    while (!heap_.empty()) {
      const int v = HeapPop();
      if (assigns_[v] == 0) return 2 * v + (phase_[v] ? 1 : 0);
    }
    return -1;
  }

  void BumpVar(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) HeapUp(heap_index_[v]);
  }

  void BumpClause(int cref) {
    Clause& c = clauses_[cref];
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
      for (Clause& d : clauses_) {
        if (d.learnt) d.activity *= 1e-20;
      }
      clause_inc_ *= 1e-20;
    }
  }

  bool Locked(int cref) const {
    const Clause& c = clauses_[cref];
    const int v = VarOf(c.lits[0]);
    return reason_[v] == cref && Value(c.lits[0]) > 0;
  }

  void ReduceLearnts() {
    std::vector<int> learnts;
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i) {
      if (clauses_[i].learnt && !clauses_[i].deleted) learnts.push_back(i);
    }
    std::stable_sort(learnts.begin(), learnts.end(), [&](int a, int b) {
      return clauses_[a].activity < clauses_[b].activity;
    });
    const std::size_t target = learnts.size() / 2;
    std::size_t removed = 0;
    for (int cref : learnts) {
      if (removed >= target) break;
      Clause& c = clauses_[cref];
      if (c.lits.size() <= 2 || Locked(cref)) continue;
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      --num_learnts_;
      ++removed;
    }
    for (std::vector<Watcher>& ws : watches_) {
      std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    }
  }

  std::vector<bool> Model() const {
    std::vector<bool> model(num_vars() + 1, false);
    for (int v = 0; v < num_vars(); ++v) model[v + 1] = assigns_[v] > 0;
    return model;
  }

  void Verify(const std::vector<bool>& model) const {
    for (const std::vector<int>& clause : original_) {
      bool sat = false;
      for (int l : clause) {
        if (model[std::abs(l)] == (l > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) throw ModelVerificationError("solver model falsifies a clause");
    }
  }

  // Max-heap on activity.
  bool HeapLess(int a, int b) const { return activity_[a] > activity_[b]; }
  void HeapInsert(int v) {
    heap_index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    HeapUp(heap_index_[v]);
  }
  void HeapUp(int i) {
    const int v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!HeapLess(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }
  void HeapDown(int i) {
    const int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int child = 2 * i + 1;
      if (child + 1 < n && HeapLess(heap_[child + 1], heap_[child])) ++child;
      if (!HeapLess(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }
  int HeapPop() {
    const int top = heap_.front();
    heap_index_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      HeapDown(0);
    }
    return top;
  }

  std::mt19937_64 rng_;
  bool ok_ = true;
  std::vector<std::vector<int>> original_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<bool> phase_;
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0.0;
  std::int64_t num_learnts_ = 0;
  SolverStats stats_;
};

Solver::Solver(int num_vars, SolverOptions options)
    : impl_(std::make_unique<Impl>(num_vars, options)) {}

Solver::Solver(const CnfFormula& cnf, SolverOptions options)
    : Solver(cnf.num_vars, options) {
  for (const std::vector<int>& clause : cnf.clauses) AddClause(clause);
}

Solver::~Solver() = default;

int Solver::num_vars() const { return impl_->num_vars(); }
void Solver::Reserve(int num_vars) { impl_->Reserve(num_vars); }
void Solver::AddClause(const std::vector<int>& clause) {
  impl_->AddClause(clause);
}
SolveResult Solver::Solve(const std::vector<int>& assumptions,
                          const SolverLimits& limits) {
  return impl_->Solve(assumptions, limits);
}

}  // namespace causalplan
