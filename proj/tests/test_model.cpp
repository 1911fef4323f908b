#include <gtest/gtest.h>

#include <set>

#include "ffa/model.hpp"
#include "ffa/random.hpp"

using namespace ffa;

namespace {

Classifier and2() { return Classifier::boolean_table(2, {0, 0, 0, 1}); }

// x1 OR x2 as a tree: test x1; if 0 test x2.
Classifier or2_tree() {
  DecisionTree t;
  const auto l0 = t.add_leaf(0);
  const auto l1 = t.add_leaf(1);
  const auto inner = t.add_split(1, {l0, l1});
  const auto l1b = t.add_leaf(1);
  t.add_split(0, {inner, l1b});
  return Classifier(FeatureSpace::boolean(2), {"0", "1"}, std::move(t));
}

std::vector<Point> drain(PointStream s) {
  std::vector<Point> out;
  Point p;
  while (s.next(p)) out.push_back(p);
  return out;
}

}  // namespace

TEST(Classify, TruthTableAnd) {
  const auto m = and2();
  EXPECT_EQ(m.classify({1, 1}), 1u);
  EXPECT_EQ(m.classify({1, 0}), 0u);
}

TEST(Classify, DecisionTreeOrMatchesTable) {
  const auto m = or2_tree();
  EXPECT_EQ(m.classify({0, 1}), 1u);
  EXPECT_EQ(m.classify({0, 0}), 0u);
  EXPECT_EQ(m.to_truth_table().outputs, (std::vector<ClassId>{0, 1, 1, 1}));
}

TEST(Classify, RejectsOutOfDomainValues) {
  const auto m = and2();
  EXPECT_THROW(m.classify({2, 0}), DomainError);
  EXPECT_THROW(m.classify({1}), DomainError);
}

TEST(EnumeratePoints, FixedFirstFeature) {
  const auto space = FeatureSpace::boolean(2);
  const auto pts = drain(enumerate_points(space, {Value{1}, std::nullopt}));
  EXPECT_EQ(pts, (std::vector<Point>{{1, 0}, {1, 1}}));
}

TEST(EnumeratePoints, CompleteAssignmentYieldsOnePoint) {
  const auto space = FeatureSpace::uniform(3, 3);
  const auto pts = drain(enumerate_points(space, {Value{2}, Value{0}, Value{1}}));
  EXPECT_EQ(pts, (std::vector<Point>{{2, 0, 1}}));
}

TEST(EnumeratePoints, FreeSpaceHasNoDuplicates) {
  const auto space = FeatureSpace::boolean(3);
  const auto pts = drain(enumerate_points(space, PartialAssignment(3)));
  EXPECT_EQ(pts.size(), 8u);
  EXPECT_EQ(std::set<Point>(pts.begin(), pts.end()).size(), 8u);
  // Lexicographic: ranks come out in order.
  for (std::size_t k = 0; k < pts.size(); ++k) EXPECT_EQ(space.index_of(pts[k]), k);
}

TEST(EnumeratePoints, MixedDomainsCountIsProduct) {
  std::vector<Feature> fs{{"a", {"p", "q", "r"}}, {"b", {"0"}}, {"c", {"0", "1"}}};
  FeatureSpace space(fs);
  EXPECT_EQ(space.size(), 6u);
  EXPECT_EQ(drain(enumerate_points(space, PartialAssignment(3))).size(), 6u);
  EXPECT_THROW(enumerate_points(space, {std::nullopt, Value{1}, std::nullopt}), DomainError);
}

TEST(FeatureSpace, Invariants) {
  EXPECT_THROW(FeatureSpace(std::vector<Feature>{}), DomainError);
  EXPECT_THROW(FeatureSpace(std::vector<Feature>{Feature{"a", {}}}), DomainError);
  EXPECT_THROW(FeatureSpace::uniform(25, 2), CapExceededError);
  EXPECT_NO_THROW(FeatureSpace(FeatureSpace::uniform(3, 2).features(), 8));
  EXPECT_THROW(FeatureSpace(FeatureSpace::uniform(3, 2).features(), 7), CapExceededError);
}

TEST(Classifier, Invariants) {
  EXPECT_THROW(Classifier(FeatureSpace::boolean(1), {"only"}, TruthTable{{0, 0}}), PreconditionError);
  EXPECT_THROW(Classifier::boolean_table(2, {0, 1}), PreconditionError);
  EXPECT_THROW(Classifier::boolean_table(1, {0, 2}), PreconditionError);

  DecisionTree bad_arity;
  const auto leaf = bad_arity.add_leaf(0);
  bad_arity.add_split(0, {leaf});
  EXPECT_THROW(Classifier(FeatureSpace::boolean(1), {"0", "1"}, bad_arity), PreconditionError);

  DecisionTree repeated;
  const auto a = repeated.add_leaf(0);
  const auto b = repeated.add_leaf(1);
  const auto inner = repeated.add_split(0, {a, b});
  repeated.add_split(0, {inner, b});
  EXPECT_THROW(Classifier(FeatureSpace::boolean(1), {"0", "1"}, repeated), PreconditionError);

  DecisionTree forward;
  EXPECT_THROW(forward.add_split(0, {3}), PreconditionError);
}

TEST(Classifier, RandomTreesAgreeWithTheirTruthTables) {
  Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    const auto tree = random_tree_classifier(rng, {3, 6, 1, 3, 3, 5, 20});
    const Classifier table(tree.space(), tree.classes(), tree.to_truth_table());
    for (std::uint64_t i = 0; i < tree.space().size(); ++i) {
      const auto p = tree.space().point_at(i);
      ASSERT_EQ(tree.classify(p), table.classify(p));
      ASSERT_EQ(tree.classify(p), tree.classify(p));
    }
  }
}
