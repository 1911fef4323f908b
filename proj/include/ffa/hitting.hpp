#pragma once

// Incremental dual minimal-hitting-set enumerator.
//
// One solver variable s_i per feature. A recorded AXp X becomes the positive
// clause (OR_{i in X} s_i) and a recorded CXp Y the negative clause
// (OR_{i in Y} !s_i). In the CXp phase a candidate is the set of true
// variables of a minimal model: a minimal hitting set of the AXps that
// contains no recorded CXp. In the AXp phase a candidate is the set of false
// variables of a maximal model: a minimal hitting set of the CXps that
// contains no recorded AXp. Flipping the phase only changes which kind of
// model is requested, so clauses and learnt state carry over.

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/sat.hpp"

namespace ffa {

enum class Phase {
  target_cxp = 0,  // candidates hit the AXps
  target_axp = 1,  // candidates hit the CXps
};

class DualHittingState {
 public:
  explicit DualHittingState(std::size_t m) : m_(m), solver_(m) {
    if (m > kMaxFeatures) throw CapExceededError("at most 64 features are supported");
  }

  std::size_t num_features() const { return m_; }
  Phase phase() const { return phase_; }
  const Family& axps() const { return axps_; }
  const Family& cxps() const { return cxps_; }
  const sat::Solver& solver() const { return solver_; }

  void flip_phase() { phase_ = phase_ == Phase::target_cxp ? Phase::target_axp : Phase::target_cxp; }

  void add_axp(FeatureSet x) {
    check_clause(x);
    if (!seen_axps_.insert(x).second) return;
    axps_.push_back(x);
    std::vector<sat::Lit> c;
    for (auto i : x.indices()) c.push_back(sat::pos_lit(i));
    solver_.add_clause(std::move(c));
  }

  void add_cxp(FeatureSet y) {
    check_clause(y);
    if (!seen_cxps_.insert(y).second) return;
    cxps_.push_back(y);
    std::vector<sat::Lit> c;
    for (auto i : y.indices()) c.push_back(sat::neg_lit(i));
    solver_.add_clause(std::move(c));
  }

  /// Records an explanation of the kind the current phase targets.
  void add_target(FeatureSet s) { phase_ == Phase::target_cxp ? add_cxp(s) : add_axp(s); }

  /// Records an explanation of the kind dual to the current phase.
  void add_dual(FeatureSet s) { phase_ == Phase::target_cxp ? add_axp(s) : add_cxp(s); }

  /// Next candidate for the current phase, or nullopt when none is left.
  /// Deterministic for a given history of calls.
  std::optional<FeatureSet> minimal_hs() {
    const bool minimal = phase_ == Phase::target_cxp;
    solver_.set_preferred_value(!minimal);
    if (!solver_.solve()) return std::nullopt;
    FeatureSet cand = read_candidate(minimal);

    // Shrink the candidate one feature at a time, ascending: everything
    // outside it stays out, feature i is forced out too.
    for (auto i : cand.indices()) {
      if (!cand.contains(i)) continue;
      std::vector<sat::Lit> assume;
      for (std::size_t j = 0; j < m_; ++j) {
        if (cand.contains(j) && j != i) continue;
        assume.push_back(minimal ? sat::neg_lit(j) : sat::pos_lit(j));
      }
      if (solver_.solve(assume)) cand = read_candidate(minimal);
    }
    return cand;
  }

 private:
  void check_clause(FeatureSet s) const {
    if (s.empty()) throw DegenerateClauseError("cannot block on an empty explanation");
    if (!s.subset_of(FeatureSet::all(m_))) throw DomainError("explanation " + s.to_string() + " exceeds feature range");
  }

  FeatureSet read_candidate(bool minimal) const {
    FeatureSet s;
    const auto& model = solver_.model();
    for (std::size_t i = 0; i < m_; ++i)
      if (model[i] == minimal) s.insert(i);
    return s;
  }

  std::size_t m_;
  sat::Solver solver_;
  Phase phase_ = Phase::target_cxp;
  Family axps_;
  Family cxps_;
  std::set<FeatureSet> seen_axps_;
  std::set<FeatureSet> seen_cxps_;
};

}  // namespace ffa
