#include <gtest/gtest.h>

#include <limits>

#include "ffa/enumerate.hpp"
#include "ffa/random.hpp"
#include "reference.hpp"

using namespace ffa;

namespace {

Classifier and_n(std::size_t n) {
  std::vector<ClassId> out(std::size_t{1} << n, 0);
  out.back() = 1;
  return Classifier::boolean_table(n, out);
}
Classifier or2() { return Classifier::boolean_table(2, {0, 1, 1, 1}); }

SlidingWindow window_of(std::size_t w, std::vector<std::size_t> axp, std::vector<std::size_t> cxp) {
  SlidingWindow win(w);
  for (auto a : axp) win.push_axp(a);
  for (auto c : cxp) win.push_cxp(c);
  return win;
}

EnumerationOptions logical() {
  EnumerationOptions o;
  o.logical_time = true;
  return o;
}

SwitchConfig never_switch(std::size_t w = 1) { return {w, 1e9, -1.0, true}; }

}  // namespace

TEST(XpEnum, OrTargetingAxps) {
  const auto m = or2();
  const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {1, 1})), XpKind::axp);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(canonical(r.axps), canonical({FeatureSet{0}, FeatureSet{1}}));
  EXPECT_EQ(canonical(r.cxps), Family{(FeatureSet{0, 1})});
}

TEST(XpEnum, AndTargetingCxps) {
  const auto m = and_n(2);
  const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {1, 1})), XpKind::cxp);
  EXPECT_EQ(canonical(r.cxps), canonical({FeatureSet{0}, FeatureSet{1}}));
  EXPECT_EQ(canonical(r.axps), Family{(FeatureSet{0, 1})});
}

TEST(XpEnum, ZeroIterationBudget) {
  const auto m = or2();
  EnumerationOptions o;
  o.budget.iterations = 0;
  const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {1, 1})), XpKind::axp, o);
  EXPECT_TRUE(r.axps.empty());
  EXPECT_TRUE(r.cxps.empty());
  EXPECT_TRUE(r.trace.events.empty());
  EXPECT_FALSE(r.complete);
}

TEST(XpEnum, ZeroSecondBudget) {
  const auto m = or2();
  EnumerationOptions o;
  o.budget.seconds = 0.0;
  const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {1, 1})), XpKind::cxp, o);
  EXPECT_TRUE(r.trace.events.empty());
}

TEST(XpEnum, PartialBudgetGivesValidPrefix) {
  const auto m = and_n(3);
  const auto v = make_instance(m, {1, 1, 1});
  EnumerationOptions o;
  o.budget.iterations = 2;
  const auto r = xp_enum(BruteForceOracle(m, v), XpKind::cxp, o);
  EXPECT_EQ(r.iterations, 2u);
  EXPECT_EQ(r.axps.size() + r.cxps.size(), 2u);
  const auto all_a = reference::all_axps(m, v), all_c = reference::all_cxps(m, v);
  for (auto x : r.axps) EXPECT_TRUE(std::count(all_a.begin(), all_a.end(), x));
  for (auto y : r.cxps) EXPECT_TRUE(std::count(all_c.begin(), all_c.end(), y));
}

TEST(XpEnum, ConstantClassifierGivesEmptyAxp) {
  const auto m = Classifier::boolean_table(2, {1, 1, 1, 1});
  for (auto target : {XpKind::axp, XpKind::cxp}) {
    const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {0, 1})), target);
    EXPECT_TRUE(r.complete);
    EXPECT_EQ(r.axps, Family{FeatureSet{}});
    EXPECT_TRUE(r.cxps.empty());
  }
}

TEST(ShouldSwitch, RatioCondition) {
  EXPECT_TRUE(should_switch(window_of(2, {6, 6}, {2, 2}), 5, {2, 2.0, 0.0, true}));
}

TEST(ShouldSwitch, StabilityCondition) {
  EXPECT_TRUE(should_switch(window_of(2, {3, 3}, {3, 3}), 3, {2, 2.0, 1.0, true}));
}

TEST(ShouldSwitch, NeitherCondition) {
  EXPECT_FALSE(should_switch(window_of(2, {3, 3}, {2, 2}), 4, {2, 2.0, 0.0, true}));
}

TEST(ShouldSwitch, NotReadyUntilBothWindowsFull) {
  const SwitchConfig cfg{2, 1.0, 100.0, true};
  EXPECT_EQ(evaluate_switch(window_of(2, {5}, {1, 1}), 1, cfg), SwitchSignal::not_ready);
  EXPECT_EQ(evaluate_switch(window_of(2, {5, 5}, {1}), 1, cfg), SwitchSignal::not_ready);
  EXPECT_FALSE(should_switch(window_of(2, {5}, {1}), 1, cfg));
}

TEST(ShouldSwitch, WindowKeepsLastEntries) {
  const auto win = window_of(2, {1, 9, 9}, {4, 1, 1});
  EXPECT_EQ(win.axp_total(), 18u);
  EXPECT_EQ(win.cxp_total(), 2u);
}

TEST(AdaptiveXpEnum, MatchesFixedTargetFamilies) {
  Rng rng(17);
  for (int k = 0; k < 60; ++k) {
    const auto model = random_tree_classifier(rng, {3, 5, 2, 3, 2, 5, 15});
    const auto v = make_instance(model, random_point(rng, model.space()));
    BruteForceOracle o(model, v);
    const auto ra = xp_enum(o, XpKind::axp);
    const auto rs = adaptive_xp_enum(o, SwitchConfig{2, 1.5, 0.5, true});
    ASSERT_EQ(canonical(rs.axps), canonical(ra.axps));
    ASSERT_EQ(canonical(rs.cxps), canonical(ra.cxps));
    ASSERT_EQ(canonical(ra.axps), reference::all_axps(model, v));
  }
}

TEST(AdaptiveXpEnum, UnsatisfiableThresholdsReplayCxpTarget) {
  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    const auto model = random_tree_classifier(rng, {3, 5, 2, 3, 2, 5, 15});
    BruteForceOracle o(model, make_instance(model, random_point(rng, model.space())));
    const auto rs = adaptive_xp_enum(o, never_switch(), logical());
    const auto rc = xp_enum(o, XpKind::cxp, logical());
    EXPECT_EQ(rs.trace.count(EventKind::phase_switch), 0u);
    EXPECT_EQ(rs.trace, rc.trace);
  }
}

TEST(AdaptiveXpEnum, SwitchesAsSoonAsWindowsFill) {
  const auto m = and_n(3);
  const auto r = adaptive_xp_enum(BruteForceOracle(m, make_instance(m, {1, 1, 1})), {1, 1.0, 0.0, true}, logical());
  const std::vector<TraceEvent> want{
      {1, EventKind::axp, {0, 1, 2}},
      {2, EventKind::cxp, {0}},
      {3, EventKind::cxp, {1}},
      {3, EventKind::phase_switch, {}},
      {4, EventKind::cxp, {2}},
  };
  EXPECT_EQ(r.trace.events, want);
  EXPECT_EQ(r.switches, 1u);
  EXPECT_TRUE(r.complete);
}

TEST(AdaptiveXpEnum, RejectsBadConfig) {
  const auto m = or2();
  BruteForceOracle o(m, make_instance(m, {1, 1}));
  EXPECT_THROW(adaptive_xp_enum(o, {0, 1.0, 1.0, true}), PreconditionError);
  EXPECT_THROW(adaptive_xp_enum(o, {1, 0.0, 1.0, true}), PreconditionError);
}

TEST(Snapshot, Examples) {
  const auto m = and_n(3);
  const auto r = xp_enum(BruteForceOracle(m, make_instance(m, {1, 1, 1})), XpKind::cxp, logical());
  const auto [a0, c0] = snapshot(r.trace, 0);
  EXPECT_TRUE(a0.empty());
  EXPECT_TRUE(c0.empty());
  const auto [af, cf] = snapshot(r.trace, 1e9);
  EXPECT_EQ(af, r.axps);
  EXPECT_EQ(cf, r.cxps);
  // Events: AXp at 1, then CXps at 2, 3, 4. Between 2 and 3: after event 2.
  const auto [am, cm] = snapshot(r.trace, 2.5);
  EXPECT_EQ(am, Family{(FeatureSet{0, 1, 2})});
  EXPECT_EQ(cm, Family{FeatureSet{0}});
}

// Replays the windows from a trace and checks every switch was justified.
TEST(EnumerationProperties, TracesAreSoundAndSwitchesJustified) {
  Rng rng(31);
  for (int k = 0; k < 60; ++k) {
    const auto model = random_tree_classifier(rng, {3, 6, 2, 3, 2, 5, 15});
    const auto v = make_instance(model, random_point(rng, model.space()));
    BruteForceOracle o(model, v);
    const SwitchConfig multi{2, 1.2, 0.5, false};
    const SwitchConfig once{2, 1.2, 0.5, true};
    for (const auto& r : {xp_enum(o, XpKind::axp), xp_enum(o, XpKind::cxp), adaptive_xp_enum(o, multi),
                          adaptive_xp_enum(o, once)}) {
      ASSERT_TRUE(r.complete);
      ASSERT_EQ(canonical(r.axps).size(), r.axps.size());
      ASSERT_EQ(canonical(r.cxps).size(), r.cxps.size());
      for (auto x : r.axps) {
        ASSERT_TRUE(reference::weak_axp(model, v, x));
        for (auto i : x.indices()) ASSERT_FALSE(reference::weak_axp(model, v, x.without(i)));
      }
      for (auto y : r.cxps) {
        ASSERT_TRUE(reference::weak_cxp(model, v, y));
        for (auto i : y.indices()) ASSERT_FALSE(reference::weak_cxp(model, v, y.without(i)));
      }
    }
    const auto r_once = adaptive_xp_enum(o, once);
    ASSERT_LE(r_once.trace.count(EventKind::phase_switch), 1u);

    const auto r = adaptive_xp_enum(o, multi);
    SlidingWindow win(multi.window);
    bool justified = false;
    for (const auto& e : r.trace.events) {
      if (e.kind == EventKind::cxp) {
        justified = should_switch(win, e.features.size(), multi);
        win.push_cxp(e.features.size());
      } else if (e.kind == EventKind::axp) {
        win.push_axp(e.features.size());
        justified = should_switch(win, std::nullopt, multi);
      } else {
        ASSERT_TRUE(justified);
      }
    }
  }
}
