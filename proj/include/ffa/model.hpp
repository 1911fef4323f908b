#pragma once

// Finite-domain classification problems: feature spaces, instances, and the
// two classifier representations (explicit truth table, decision tree).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"

namespace ffa {

/// Index of a value inside its feature's domain.
using Value = std::size_t;
using Point = std::vector<Value>;
using ClassId = std::size_t;
/// One entry per feature; nullopt marks a free feature.
using PartialAssignment = std::vector<std::optional<Value>>;

inline constexpr std::uint64_t kDefaultSpaceCap = std::uint64_t{1} << 24;

struct Feature {
  std::string name;
  std::vector<std::string> domain;
};

class FeatureSpace {
 public:
  explicit FeatureSpace(std::vector<Feature> features, std::uint64_t cap = kDefaultSpaceCap)
      : features_(std::move(features)) {
    if (features_.empty()) throw DomainError("feature space needs at least one feature");
    if (features_.size() > kMaxFeatures) throw CapExceededError("at most 64 features are supported");
    size_ = 1;
    for (const auto& f : features_) {
      if (f.domain.empty()) throw DomainError("feature '" + f.name + "' has an empty domain");
      if (size_ > cap / f.domain.size()) throw CapExceededError("feature space exceeds the configured cap");
      size_ *= f.domain.size();
    }
    if (size_ > cap) throw CapExceededError("feature space exceeds the configured cap");
  }

  /// m boolean features named x1..xm with domain {0,1}.
  static FeatureSpace boolean(std::size_t m) { return uniform(m, 2); }

  /// m features x1..xm, each with domain {0..k-1}.
  static FeatureSpace uniform(std::size_t m, std::size_t k) {
    std::vector<Feature> fs;
    for (std::size_t i = 0; i < m; ++i) {
      Feature f{"x" + std::to_string(i + 1), {}};
      for (std::size_t v = 0; v < k; ++v) f.domain.push_back(std::to_string(v));
      fs.push_back(std::move(f));
    }
    return FeatureSpace(std::move(fs));
  }

  std::size_t num_features() const { return features_.size(); }
  const Feature& feature(std::size_t i) const { return features_.at(i); }
  const std::vector<Feature>& features() const { return features_; }
  std::size_t domain_size(std::size_t i) const { return features_.at(i).domain.size(); }
  std::uint64_t size() const { return size_; }
  FeatureSet all_features() const { return FeatureSet::all(num_features()); }

  std::optional<Value> find_value(std::size_t i, const std::string& text) const {
    const auto& d = features_.at(i).domain;
    for (std::size_t v = 0; v < d.size(); ++v)
      if (d[v] == text) return v;
    return std::nullopt;
  }

  void check_point(const Point& p) const {
    if (p.size() != num_features())
      throw DomainError("point has " + std::to_string(p.size()) + " values, expected " +
                        std::to_string(num_features()));
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] >= domain_size(i))
        throw DomainError("value index " + std::to_string(p[i]) + " outside domain of feature " +
                          std::to_string(i + 1));
  }

  /// Lexicographic rank of a point: feature 1 is the most significant digit.
  std::uint64_t index_of(const Point& p) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < p.size(); ++i) idx = idx * domain_size(i) + p[i];
    return idx;
  }

  Point point_at(std::uint64_t idx) const {
    Point p(num_features());
    for (std::size_t i = num_features(); i-- > 0;) {
      p[i] = static_cast<Value>(idx % domain_size(i));
      idx /= domain_size(i);
    }
    return p;
  }

  /// Partial assignment fixing the features in `fixed` to their values in `p`.
  PartialAssignment restrict(const Point& p, FeatureSet fixed) const {
    PartialAssignment a(num_features());
    for (std::size_t i = 0; i < num_features(); ++i)
      if (fixed.contains(i)) a[i] = p.at(i);
    return a;
  }

 private:
  std::vector<Feature> features_;
  std::uint64_t size_ = 0;
};

/// Single-consumer stream over the points of a space agreeing with a partial
/// assignment, in lexicographic order.
class PointStream {
 public:
  PointStream(const FeatureSpace& space, PartialAssignment fixed) : space_(&space), fixed_(std::move(fixed)) {
    if (fixed_.size() != space.num_features()) throw DomainError("partial assignment has wrong arity");
    current_.assign(space.num_features(), 0);
    for (std::size_t i = 0; i < fixed_.size(); ++i) {
      if (fixed_[i]) {
        if (*fixed_[i] >= space.domain_size(i)) throw DomainError("fixed value outside domain");
        current_[i] = *fixed_[i];
      }
    }
  }

  /// Writes the next point into `out`; false when exhausted.
  bool next(Point& out) {
    if (done_) return false;
    out = current_;
    advance();
    return true;
  }

 private:
  void advance() {
    for (std::size_t i = current_.size(); i-- > 0;) {
      if (fixed_[i]) continue;
      if (++current_[i] < space_->domain_size(i)) return;
      current_[i] = 0;
    }
    done_ = true;
  }

  const FeatureSpace* space_;
  PartialAssignment fixed_;
  Point current_;
  bool done_ = false;
};

inline PointStream enumerate_points(const FeatureSpace& space, PartialAssignment fixed) {
  return PointStream(space, std::move(fixed));
}

/// Explicit map from every point (by lexicographic rank) to a class.
struct TruthTable {
  std::vector<ClassId> outputs;
};

/// Multiway decision tree. Each internal node tests one feature and has one
/// child per domain value, which covers both "feature = value" and
/// "feature in subset" splits. Children are stored before their parents and
/// the root is the last node.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    ClassId label = 0;
    std::size_t feature = 0;
    std::vector<std::size_t> children;
  };

  std::size_t add_leaf(ClassId label) {
    nodes_.push_back(Node{true, label, 0, {}});
    return nodes_.size() - 1;
  }

  std::size_t add_split(std::size_t feature, std::vector<std::size_t> children) {
    for (auto c : children)
      if (c >= nodes_.size()) throw PreconditionError("tree children must be created before their parent");
    nodes_.push_back(Node{false, 0, feature, std::move(children)});
    return nodes_.size() - 1;
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t root() const { return nodes_.size() - 1; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }

  ClassId evaluate(const Point& p) const {
    std::size_t n = root();
    while (!nodes_[n].leaf) n = nodes_[n].children[p[nodes_[n].feature]];
    return nodes_[n].label;
  }

  /// Checks arity of every split against the space, class ids against
  /// `num_classes`, and that no path tests a feature twice.
  void validate(const FeatureSpace& space, std::size_t num_classes) const {
    if (nodes_.empty()) throw PreconditionError("decision tree has no nodes");
    std::vector<bool> on_path(space.num_features(), false);
    validate_from(root(), space, num_classes, on_path);
  }

 private:
  void validate_from(std::size_t n, const FeatureSpace& space, std::size_t num_classes,
                     std::vector<bool>& on_path) const {
    const Node& nd = nodes_[n];
    if (nd.leaf) {
      if (nd.label >= num_classes) throw PreconditionError("leaf class out of range");
      return;
    }
    if (nd.feature >= space.num_features()) throw PreconditionError("split on unknown feature");
    if (nd.children.size() != space.domain_size(nd.feature))
      throw PreconditionError("split on feature " + std::to_string(nd.feature + 1) +
                              " must have one child per domain value");
    if (on_path[nd.feature])
      throw PreconditionError("feature " + std::to_string(nd.feature + 1) + " tested twice on one path");
    on_path[nd.feature] = true;
    for (auto c : nd.children) validate_from(c, space, num_classes, on_path);
    on_path[nd.feature] = false;
  }

  std::vector<Node> nodes_;
};

/// A total function from the feature space to a class set of size >= 2.
/// Immutable after construction.
class Classifier {
 public:
  using Representation = std::variant<TruthTable, DecisionTree>;

  Classifier(FeatureSpace space, std::vector<std::string> classes, Representation repr)
      : space_(std::move(space)), classes_(std::move(classes)), repr_(std::move(repr)) {
    if (classes_.size() < 2) throw PreconditionError("a classifier needs at least two classes");
    if (auto* t = std::get_if<TruthTable>(&repr_)) {
      if (t->outputs.size() != space_.size())
        throw PreconditionError("truth table must list one class per point of the space");
      for (auto c : t->outputs)
        if (c >= classes_.size()) throw PreconditionError("truth table class out of range");
    } else {
      std::get<DecisionTree>(repr_).validate(space_, classes_.size());
    }
  }

  /// Boolean truth table with classes {"0","1"}; `outputs` indexed by rank.
  static Classifier boolean_table(std::size_t m, std::vector<ClassId> outputs) {
    return Classifier(FeatureSpace::boolean(m), {"0", "1"}, TruthTable{std::move(outputs)});
  }

  const FeatureSpace& space() const { return space_; }
  std::size_t num_features() const { return space_.num_features(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const Representation& representation() const { return repr_; }
  const DecisionTree* tree() const { return std::get_if<DecisionTree>(&repr_); }

  ClassId classify(const Point& p) const {
    space_.check_point(p);
    return classify_unchecked(p);
  }

  ClassId classify_unchecked(const Point& p) const {
    if (auto* t = std::get_if<TruthTable>(&repr_)) return t->outputs[space_.index_of(p)];
    return std::get<DecisionTree>(repr_).evaluate(p);
  }

  TruthTable to_truth_table() const {
    TruthTable t;
    t.outputs.reserve(space_.size());
    for (std::uint64_t i = 0; i < space_.size(); ++i) t.outputs.push_back(classify_unchecked(space_.point_at(i)));
    return t;
  }

 private:
  FeatureSpace space_;
  std::vector<std::string> classes_;
  Representation repr_;
};

/// A concrete point together with the class the model assigns to it.
struct Instance {
  Point point;
  ClassId label = 0;
};

inline Instance make_instance(const Classifier& model, Point point) {
  ClassId c = model.classify(point);
  return Instance{std::move(point), c};
}

}  // namespace ffa
