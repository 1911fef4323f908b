#pragma once

// Decision procedures for the abductive predicate ("fixing these features
// entails the prediction") and the contrastive predicate ("freeing these
// features permits another class"), and deletion-based extraction of
// subset-minimal explanations.

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>

#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/model.hpp"

namespace ffa {

enum class XpKind { axp, cxp };

inline const char* to_string(XpKind k) { return k == XpKind::axp ? "AXp" : "CXp"; }

struct Explanation {
  FeatureSet features;
  XpKind kind = XpKind::axp;
  friend bool operator==(const Explanation&, const Explanation&) = default;
};

/// Anything that decides whether fixing a feature set entails the instance's class.
template <class T>
concept EntailmentOracle = requires(const T& o, FeatureSet s) {
  { o.num_features() } -> std::convertible_to<std::size_t>;
  { o.entails(s) } -> std::same_as<bool>;
  { o.calls() } -> std::convertible_to<std::size_t>;
};

/// Reference oracle: enumerates every point agreeing with the instance on
/// the fixed features. Works for any classifier within the space cap.
class BruteForceOracle {
 public:
  BruteForceOracle(const Classifier& model, Instance instance) : model_(&model), instance_(std::move(instance)) {
    model.space().check_point(instance_.point);
  }

  std::size_t num_features() const { return model_->num_features(); }
  const Instance& instance() const { return instance_; }
  std::size_t calls() const { return calls_; }

  bool entails(FeatureSet fixed) const { return !counterexample(fixed).has_value(); }

  /// First point (lexicographic order) agreeing on `fixed` whose class differs.
  std::optional<Point> counterexample(FeatureSet fixed) const {
    ++calls_;
    auto stream = enumerate_points(model_->space(), model_->space().restrict(instance_.point, fixed));
    Point p;
    while (stream.next(p))
      if (model_->classify_unchecked(p) != instance_.label) return p;
    return std::nullopt;
  }

 private:
  const Classifier* model_;
  Instance instance_;
  mutable std::size_t calls_ = 0;
};

/// Structural oracle for decision trees: walks every root-to-leaf path that
/// is consistent with the fixed features.
class TreeOracle {
 public:
  TreeOracle(const Classifier& model, Instance instance) : model_(&model), instance_(std::move(instance)) {
    if (model.tree() == nullptr) throw PreconditionError("TreeOracle requires a decision-tree classifier");
    model.space().check_point(instance_.point);
  }

  std::size_t num_features() const { return model_->num_features(); }
  const Instance& instance() const { return instance_; }
  std::size_t calls() const { return calls_; }

  bool entails(FeatureSet fixed) const { return !counterexample(fixed).has_value(); }

  /// Some point agreeing on `fixed` with a different class (not necessarily
  /// the lexicographically first one).
  std::optional<Point> counterexample(FeatureSet fixed) const {
    ++calls_;
    Point p = instance_.point;
    if (search(model_->tree()->root(), fixed, p)) return p;
    return std::nullopt;
  }

 private:
  bool search(std::size_t n, FeatureSet fixed, Point& p) const {
    const auto& nd = model_->tree()->node(n);
    if (nd.leaf) return nd.label != instance_.label;
    if (fixed.contains(nd.feature)) return search(nd.children[p[nd.feature]], fixed, p);
    const Value saved = p[nd.feature];
    for (Value v = 0; v < nd.children.size(); ++v) {
      p[nd.feature] = v;
      if (search(nd.children[v], fixed, p)) return true;
    }
    p[nd.feature] = saved;
    return false;
  }

  const Classifier* model_;
  Instance instance_;
  mutable std::size_t calls_ = 0;
};

/// True iff every point sharing the instance's values on `fixed` gets the
/// instance's class (weak AXp test).
inline bool holds_axp_predicate(const Classifier& model, const Instance& instance, FeatureSet fixed) {
  return BruteForceOracle(model, instance).entails(fixed);
}

/// A point agreeing with the instance outside `freed` whose class differs,
/// chosen first in enumeration order.
inline std::optional<Point> has_cxp_witness(const Classifier& model, const Instance& instance, FeatureSet freed) {
  BruteForceOracle o(model, instance);
  return o.counterexample(freed.complement(model.num_features()));
}

/// Shrinks a weak AXp to a subset-minimal one, trying to drop features in
/// ascending index order.
template <EntailmentOracle Oracle>
Explanation extract_axp(FeatureSet seed, const Oracle& oracle) {
  if (!oracle.entails(seed)) throw InvalidSeedError("seed " + seed.to_string() + " does not entail the prediction");
  FeatureSet x = seed;
  for (auto i : seed.indices())
    if (oracle.entails(x.without(i))) x.erase(i);
  return {x, XpKind::axp};
}

/// Shrinks a weak CXp (a set whose release admits another class) to a
/// subset-minimal one, ascending deletion order.
template <EntailmentOracle Oracle>
Explanation extract_cxp(FeatureSet seed, const Oracle& oracle) {
  const std::size_t m = oracle.num_features();
  if (oracle.entails(seed.complement(m)))
    throw InvalidSeedError("seed " + seed.to_string() + " admits no counterexample");
  FeatureSet y = seed;
  for (auto i : seed.indices())
    if (!oracle.entails(y.without(i).complement(m))) y.erase(i);
  return {y, XpKind::cxp};
}

inline Explanation extract_axp(FeatureSet seed, const Classifier& model, const Instance& instance) {
  return extract_axp(seed, BruteForceOracle(model, instance));
}

inline Explanation extract_cxp(FeatureSet seed, const Classifier& model, const Instance& instance) {
  return extract_cxp(seed, BruteForceOracle(model, instance));
}

}  // namespace ffa
