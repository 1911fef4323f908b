#include <gtest/gtest.h>

#include <sstream>

#include "ffa/io.hpp"
#include "ffa/random.hpp"
#include "ffa/report.hpp"

using namespace ffa;
using nlohmann::json;

namespace {

const char* kOrTree = R"({
  "version": 1,
  "features": [{"name": "a", "domain": [0, 1]}, {"name": "b", "domain": ["lo", "mid", "hi"]}],
  "classes": ["no", "yes"],
  "model": {"type": "tree", "root": {
    "feature": "a",
    "branches": {"1": {"class": "yes"}},
    "otherwise": {"feature": 2, "branches": {"hi": {"class": "yes"}}, "otherwise": {"class": "no"}}
  }}
})";

}  // namespace

TEST(ModelJson, ParsesTreeWithOtherwiseBranches) {
  const auto m = io::model_from_json(json::parse(kOrTree));
  ASSERT_NE(m.tree(), nullptr);
  EXPECT_EQ(m.classify({1, 0}), 1u);
  EXPECT_EQ(m.classify({0, 2}), 1u);
  EXPECT_EQ(m.classify({0, 1}), 0u);
}

TEST(ModelJson, RoundTripsTreesAndTables) {
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const auto m = random_tree_classifier(rng, {2, 5, 1, 3, 3, 4, 20});
    const auto back = io::model_from_json(json::parse(io::model_to_json(m).dump()));
    EXPECT_EQ(back.to_truth_table().outputs, m.to_truth_table().outputs);
    const Classifier table(m.space(), m.classes(), m.to_truth_table());
    const auto tback = io::model_from_json(io::model_to_json(table));
    EXPECT_EQ(tback.to_truth_table().outputs, m.to_truth_table().outputs);
  }
}

TEST(ModelJson, RejectsMalformedDocuments) {
  auto doc = json::parse(kOrTree);
  doc["version"] = 2;
  EXPECT_THROW(io::model_from_json(doc), ParseError);
  doc = json::parse(kOrTree);
  doc["model"]["root"].erase("otherwise");
  EXPECT_THROW(io::model_from_json(doc), ParseError);
  doc = json::parse(kOrTree);
  doc["model"]["root"]["branches"]["7"] = json{{"class", "no"}};
  EXPECT_THROW(io::model_from_json(doc), ParseError);
  doc = json::parse(kOrTree);
  doc["classes"] = json::array({"only"});
  EXPECT_THROW(io::model_from_json(doc), ParseError);
  doc = json::parse(kOrTree);
  doc["model"] = json{{"type", "table"}, {"outputs", json::array({"no", "yes"})}};
  EXPECT_THROW(io::model_from_json(doc), ParseError);
  EXPECT_THROW(io::model_from_json(json::parse("[1,2]")), ParseError);
}

TEST(Instance, ParsesWithAndWithoutLabel) {
  const auto m = io::model_from_json(json::parse(kOrTree));
  const auto a = io::parse_instance("0, hi", m);
  EXPECT_EQ(a.point, (Point{0, 2}));
  EXPECT_EQ(a.label, 1u);
  EXPECT_EQ(io::parse_instance("0,hi,yes", m).point, a.point);
  EXPECT_EQ(io::format_instance(a, m), "0,hi,yes");
  EXPECT_THROW(io::parse_instance("0,hi,no", m), ParseError);
  EXPECT_THROW(io::parse_instance("0,top", m), ParseError);
  EXPECT_THROW(io::parse_instance("0", m), ParseError);
}

TEST(Trace, RoundTripsRandomTraces) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    EnumerationTrace t;
    t.num_features = 1 + uniform_index(rng, 10);
    t.logical_time = uniform_index(rng, 2) == 1;
    double clock = 0;
    const auto n = 1 + uniform_index(rng, 20);
    for (std::size_t e = 0; e < n; ++e) {
      clock += t.logical_time ? 1.0 : static_cast<double>(rng() % 1000000) / 7919.0;
      const auto kind = static_cast<EventKind>(uniform_index(rng, 3));
      FeatureSet f;
      if (kind != EventKind::phase_switch) f = FeatureSet(rng() & FeatureSet::all(t.num_features).mask());
      t.events.push_back({clock, kind, f});
    }
    std::stringstream ss;
    io::write_trace(ss, t);
    ASSERT_EQ(io::read_trace(ss, t.num_features), t);
  }
}

TEST(Trace, LineFormat) {
  EnumerationTrace t{3, true, {{1, EventKind::axp, {0, 2}}, {2, EventKind::phase_switch, {}}}};
  std::stringstream ss;
  io::write_trace(ss, t);
  EXPECT_EQ(ss.str(), "{\"features\":[1,3],\"kind\":\"AXp\",\"t\":1}\n{\"features\":[],\"kind\":\"switch\",\"t\":2}\n");
  std::istringstream bad("{\"t\":1,\"kind\":\"AXp\",\"features\":[4]}\n");
  EXPECT_THROW(io::read_trace(bad, 3), ParseError);
  std::istringstream junk("not json\n");
  EXPECT_THROW(io::read_trace(junk, 3), ParseError);
}

TEST(FfaCsv, RoundTripsExactly) {
  const std::vector<double> v{1.0 / 3.0, 0.0, 1.0, 2.0 / 7.0};
  std::stringstream ss;
  io::write_ffa_csv(ss, v);
  EXPECT_EQ(io::read_ffa_csv(ss), v);
  std::istringstream dup("feature,value\n1,0.5\n1,0.5\n");
  EXPECT_THROW(io::read_ffa_csv(dup), ParseError);
}

TEST(EdgeList, ParsesNamesCommentsAndIsolatedVertices) {
  std::istringstream in("# a path\nu v\nv w  # second edge\n\nz\n");
  const auto g = io::parse_edge_list(in);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.isolated(*g.find("z")));
  std::istringstream loop("a a\n");
  EXPECT_THROW(io::parse_edge_list(loop), ParseError);
  std::istringstream dup("a b\nb a\n");
  EXPECT_THROW(io::parse_edge_list(dup), ParseError);
  std::istringstream three("a b c\n");
  EXPECT_THROW(io::parse_edge_list(three), ParseError);
}

TEST(Report, SnapshotRowsOnGridAndPerEvent) {
  EnumerationTrace t{2, true, {{1, EventKind::cxp, {0}}, {2, EventKind::axp, {0, 1}}, {3, EventKind::cxp, {1}}}};
  const auto grid = snapshot_rows(t, 2);
  ASSERT_EQ(grid.size(), 3u);  // t = 0, 2, and the final 3
  EXPECT_EQ(grid[1].n_axp, 1u);
  EXPECT_EQ(grid[1].n_cxp, 1u);
  EXPECT_EQ(grid[2].t, 3.0);
  EXPECT_FALSE(grid[0].ffa.has_value());
  EXPECT_EQ(*grid[1].ffa, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(snapshot_rows(t, 0).size(), 4u);
  std::ostringstream csv;
  write_snapshot_csv(csv, grid, 2);
  EXPECT_EQ(csv.str(), "t,n_axp,n_cxp,ffa_1,ffa_2\n0,0,0,,\n2,1,1,1,1\n3,1,2,1,1\n");
}

TEST(Report, CurvesNormalizeAcrossTraces) {
  const std::vector<double> exact{0.5, 0.5};
  EnumerationTrace fast{2, true, {{5, EventKind::axp, {0}}, {10, EventKind::axp, {1}}}};
  EnumerationTrace slow{2, true, {{10, EventKind::cxp, {0, 1}}, {15, EventKind::axp, {1}}, {20, EventKind::axp, {0}}}};
  const auto curves = metric_curves({fast, slow}, exact);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].back().normalized_time, 0.5);
  EXPECT_EQ(curves[1].back().normalized_time, 1.0);
  for (const auto& c : curves) {
    EXPECT_EQ(c.back().error, 0.0);
    EXPECT_EQ(c.back().tau, 1.0);
    EXPECT_NEAR(c.back().rbo, 1.0, 1e-12);
    EXPECT_EQ(c.back().kl, 0.0);
    EXPECT_EQ(c.back().n_axp, 1.0);
  }
  // Slow trace starts with no AXp: zero vector, the largest error, KL sentinel.
  EXPECT_EQ(curves[1].front().error, 1.0);
  EXPECT_EQ(curves[1].front().kl, kKlSentinel);
}
