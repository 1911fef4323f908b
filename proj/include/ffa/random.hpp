#pragma once

// Seeded generators for classifiers and instances. Only raw mt19937_64
// output is used, so sequences match across standard libraries.

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ffa/model.hpp"

namespace ffa {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + uniform_index(rng, hi - lo + 1);
}

struct RandomTreeParams {
  std::size_t min_features = 6;
  std::size_t max_features = 8;
  std::size_t min_domain = 2;
  std::size_t max_domain = 3;
  std::size_t num_classes = 2;
  std::size_t max_depth = 6;
  /// Percent chance of stopping early at each depth below max_depth.
  std::size_t leaf_percent = 15;
};

inline FeatureSpace random_space(Rng& rng, std::size_t m, std::size_t min_domain, std::size_t max_domain) {
  std::vector<Feature> fs;
  for (std::size_t i = 0; i < m; ++i) {
    Feature f{"x" + std::to_string(i + 1), {}};
    const auto k = uniform_between(rng, min_domain, max_domain);
    for (std::size_t v = 0; v < k; ++v) f.domain.push_back(std::to_string(v));
    fs.push_back(std::move(f));
  }
  return FeatureSpace(std::move(fs));
}

inline std::vector<std::string> class_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < k; ++c) out.push_back(std::to_string(c));
  return out;
}

namespace detail {

inline std::size_t grow_tree(Rng& rng, const FeatureSpace& space, const RandomTreeParams& p, std::size_t depth,
                             FeatureSet available, DecisionTree& tree, std::set<ClassId>& leaves) {
  if (depth >= p.max_depth || available.empty() || (depth > 0 && uniform_index(rng, 100) < p.leaf_percent)) {
    const ClassId c = uniform_index(rng, p.num_classes);
    leaves.insert(c);
    return tree.add_leaf(c);
  }
  const auto ids = available.indices();
  const auto f = ids[uniform_index(rng, ids.size())];
  std::vector<std::size_t> kids;
  for (std::size_t v = 0; v < space.domain_size(f); ++v)
    kids.push_back(grow_tree(rng, space, p, depth + 1, available.without(f), tree, leaves));
  return tree.add_split(f, std::move(kids));
}

}  // namespace detail

/// Random multiway decision tree over a random space; space and tree are
/// redrawn until at least two classes appear at the leaves.
inline Classifier random_tree_classifier(Rng& rng, const RandomTreeParams& p = {}) {
  if (p.num_classes < 2 || p.max_domain < 2 || p.max_depth == 0)
    throw PreconditionError("random trees need two classes, a splittable domain and depth >= 1");
  for (;;) {
    const auto m = uniform_between(rng, p.min_features, p.max_features);
    FeatureSpace space = random_space(rng, m, p.min_domain, p.max_domain);
    DecisionTree tree;
    std::set<ClassId> leaves;
    detail::grow_tree(rng, space, p, 0, space.all_features(), tree, leaves);
    if (leaves.size() >= 2) return Classifier(space, class_names(p.num_classes), std::move(tree));
  }
}

/// Uniformly random truth table over `space`.
inline Classifier random_table_classifier(Rng& rng, const FeatureSpace& space, std::size_t num_classes) {
  TruthTable t;
  for (std::uint64_t i = 0; i < space.size(); ++i) t.outputs.push_back(uniform_index(rng, num_classes));
  return Classifier(space, class_names(num_classes), std::move(t));
}

inline Point random_point(Rng& rng, const FeatureSpace& space) {
  Point p(space.num_features());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = uniform_index(rng, space.domain_size(i));
  return p;
}

}  // namespace ffa
