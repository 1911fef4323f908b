#pragma once

// Small incremental CDCL solver: two watched literals, first-UIP learning,
// assumptions. Sized for the hitting-set problems in this library (one
// variable per feature), so it skips restarts and clause deletion. Learnt
// clauses are implied by the clause database, which only grows, so they stay
// valid across calls.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ffa::sat {

/// Literal encoding: 2*var for the positive literal, 2*var+1 for its negation.
using Lit = std::uint32_t;

constexpr Lit pos_lit(std::size_t var) { return static_cast<Lit>(2 * var); }
constexpr Lit neg_lit(std::size_t var) { return static_cast<Lit>(2 * var + 1); }
constexpr std::size_t var_of(Lit l) { return l >> 1; }
constexpr bool is_negated(Lit l) { return (l & 1U) != 0; }
constexpr Lit negate(Lit l) { return l ^ 1U; }

class Solver {
 public:
  explicit Solver(std::size_t num_vars)
      : assigns_(num_vars, kUndef), level_(num_vars, 0), reason_(num_vars, kNoReason),
        seen_(num_vars, 0), watches_(2 * num_vars) {}

  std::size_t num_vars() const { return assigns_.size(); }
  bool inconsistent() const { return inconsistent_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  std::size_t num_learnts() const { return num_learnts_; }
  std::size_t num_conflicts() const { return conflicts_; }

  /// Polarity tried first on decisions. Decisions visit unassigned variables
  /// from the highest index down.
  void set_preferred_value(bool v) { preferred_ = v; }
  bool preferred_value() const { return preferred_; }

  /// Adds a permanent clause. Returns false once the database is unsatisfiable.
  bool add_clause(std::vector<Lit> lits) {
    if (inconsistent_) return false;
    cancel_until(0);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<Lit> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return true;  // tautology
      const auto v = value(lits[i]);
      if (v == kTrue) return true;
      if (v == kUndef) kept.push_back(lits[i]);
    }
    if (kept.empty()) {
      inconsistent_ = true;
      return false;
    }
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      if (propagate() != kNoReason) inconsistent_ = true;
      return !inconsistent_;
    }
    attach(std::move(kept), false);
    return true;
  }

  /// Searches for a model extending the assumptions. The model is available
  /// through model() after a true result. Leaves the solver at level 0.
  bool solve(std::span<const Lit> assumptions = {}) {
    if (inconsistent_) return false;
    cancel_until(0);
    for (;;) {
      const std::size_t confl = propagate();
      if (confl != kNoReason) {
        ++conflicts_;
        if (decision_level() == 0) {
          inconsistent_ = true;
          return false;
        }
        auto [learnt, back_level] = analyze(confl);
        cancel_until(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const Lit asserting = learnt[0];
          const std::size_t ci = attach(std::move(learnt), true);
          enqueue(asserting, ci);
        }
        continue;
      }
      if (decision_level() < assumptions.size()) {
        const Lit a = assumptions[decision_level()];
        const auto v = value(a);
        if (v == kFalse) {
          cancel_until(0);
          return false;
        }
        trail_lim_.push_back(trail_.size());
        if (v == kUndef) enqueue(a, kNoReason);
        continue;
      }
      std::size_t next = kNoVar;
      for (std::size_t x = num_vars(); x-- > 0;) {
        if (assigns_[x] == kUndef) {
          next = x;
          break;
        }
      }
      if (next == kNoVar) {
        model_.assign(num_vars(), false);
        for (std::size_t x = 0; x < num_vars(); ++x) model_[x] = assigns_[x] == kTrue;
        cancel_until(0);
        return true;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(preferred_ ? pos_lit(next) : neg_lit(next), kNoReason);
    }
  }

  const std::vector<bool>& model() const { return model_; }

 private:
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;
  static constexpr std::int8_t kUndef = 2;
  static constexpr std::size_t kNoReason = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kNoVar = std::numeric_limits<std::size_t>::max();

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
  };

  std::int8_t value(Lit l) const {
    const auto a = assigns_[var_of(l)];
    if (a == kUndef) return kUndef;
    return static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(is_negated(l)));
  }

  std::size_t decision_level() const { return trail_lim_.size(); }

  void enqueue(Lit l, std::size_t reason) {
    const auto x = var_of(l);
    assigns_[x] = is_negated(l) ? kFalse : kTrue;
    level_[x] = decision_level();
    reason_[x] = reason;
    trail_.push_back(l);
  }

  std::size_t attach(std::vector<Lit> lits, bool learnt) {
    const std::size_t ci = clauses_.size();
    watches_[lits[0]].push_back(ci);
    watches_[lits[1]].push_back(ci);
    clauses_.push_back(Clause{std::move(lits), learnt});
    if (learnt) ++num_learnts_;
    return ci;
  }

  void cancel_until(std::size_t lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
      const auto x = var_of(trail_[i]);
      assigns_[x] = kUndef;
      reason_[x] = kNoReason;
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = std::min(qhead_, trail_.size());
  }

  // Returns the index of a conflicting clause, or kNoReason.
  std::size_t propagate() {
    while (qhead_ < trail_.size()) {
      const Lit false_lit = negate(trail_[qhead_++]);
      auto& ws = watches_[false_lit];
      std::size_t keep = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const std::size_t ci = ws[k];
        auto& c = clauses_[ci].lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value(c[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (value(c[j]) != kFalse) {
            std::swap(c[1], c[j]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (value(c[0]) == kFalse) {
          for (std::size_t r = k + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(keep);
    }
    return kNoReason;
  }

  // First-UIP conflict analysis. Returns the learnt clause (asserting literal
  // first, highest remaining level second) and the backjump level.
  std::pair<std::vector<Lit>, std::size_t> analyze(std::size_t confl) {
    std::vector<Lit> learnt{0};
    std::size_t path = 0;
    Lit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();
    do {
      const auto& c = clauses_[confl].lits;
      for (std::size_t j = have_p ? 1 : 0; j < c.size(); ++j) {
        const Lit q = c[j];
        const auto x = var_of(q);
        if (seen_[x] || level_[x] == 0) continue;
        seen_[x] = 1;
        if (level_[x] == decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      have_p = true;
      confl = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = negate(p);

    std::size_t back_level = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var_of(learnt[i])] > level_[var_of(learnt[best])]) best = i;
      std::swap(learnt[1], learnt[best]);
      back_level = level_[var_of(learnt[1])];
    }
    for (std::size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
    return {std::move(learnt), back_level};
  }

  std::vector<std::int8_t> assigns_;
  std::vector<std::size_t> level_;
  std::vector<std::size_t> reason_;
  std::vector<char> seen_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<Clause> clauses_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<bool> model_;
  bool preferred_ = false;
  bool inconsistent_ = false;
  std::size_t num_learnts_ = 0;
  std::size_t conflicts_ = 0;
};

}  // namespace ffa::sat
