#pragma once

// Anytime explanation enumeration: the fixed-target MARCO loop (AXp or CXp
// target) and the adaptive loop that starts on CXps and flips the hitting-set
// phase when the sliding-window size statistics say AXp enumeration will pay
// off.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/hitting.hpp"
#include "ffa/oracle.hpp"

namespace ffa {

struct SwitchConfig {
  std::size_t window = 50;
  double alpha = 2.0;    // AXp/CXp window size ratio that triggers a flip
  double epsilon = 1.0;  // tolerance for the CXp size to count as stable
  bool switch_once = true;

  void validate() const {
    if (window < 1) throw PreconditionError("switch window must be >= 1");
    if (!(alpha > 0)) throw PreconditionError("alpha must be positive");
  }
};

/// Sizes of the last w AXps and the last w CXps, oldest first.
class SlidingWindow {
 public:
  explicit SlidingWindow(std::size_t w) : w_(w) {
    if (w < 1) throw PreconditionError("window size must be >= 1");
  }

  std::size_t capacity() const { return w_; }
  void push_axp(std::size_t size) { push(axp_, size); }
  void push_cxp(std::size_t size) { push(cxp_, size); }
  bool full() const { return axp_.size() == w_ && cxp_.size() == w_; }
  const std::deque<std::size_t>& axp_sizes() const { return axp_; }
  const std::deque<std::size_t>& cxp_sizes() const { return cxp_; }
  std::size_t axp_total() const { return std::accumulate(axp_.begin(), axp_.end(), std::size_t{0}); }
  std::size_t cxp_total() const { return std::accumulate(cxp_.begin(), cxp_.end(), std::size_t{0}); }

 private:
  void push(std::deque<std::size_t>& q, std::size_t v) {
    q.push_back(v);
    if (q.size() > w_) q.pop_front();
  }

  std::size_t w_;
  std::deque<std::size_t> axp_;
  std::deque<std::size_t> cxp_;
};

enum class SwitchSignal { not_ready, stay, flip };

/// Evaluates the two switching conditions on the current windows:
///   ratio: sum(AXp sizes) / sum(CXp sizes) >= alpha
///   stability: | |Y_new| - mean(CXp sizes) | <= epsilon   (needs new_cxp_size)
/// Returns not_ready until both windows hold w entries.
inline SwitchSignal evaluate_switch(const SlidingWindow& win, std::optional<std::size_t> new_cxp_size,
                                    const SwitchConfig& cfg) {
  if (!win.full()) return SwitchSignal::not_ready;
  const auto a = static_cast<double>(win.axp_total());
  const auto c = static_cast<double>(win.cxp_total());
  if (c > 0 && a / c >= cfg.alpha) return SwitchSignal::flip;
  if (new_cxp_size) {
    const double mean = c / static_cast<double>(win.capacity());
    if (std::abs(static_cast<double>(*new_cxp_size) - mean) <= cfg.epsilon) return SwitchSignal::flip;
  }
  return SwitchSignal::stay;
}

/// Convenience form treating not_ready as false.
inline bool should_switch(const SlidingWindow& win, std::optional<std::size_t> new_cxp_size,
                          const SwitchConfig& cfg) {
  return evaluate_switch(win, new_cxp_size, cfg) == SwitchSignal::flip;
}

enum class EventKind { axp, cxp, phase_switch };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::axp: return "AXp";
    case EventKind::cxp: return "CXp";
    case EventKind::phase_switch: return "switch";
  }
  return "?";
}

struct TraceEvent {
  double t = 0;  // seconds since start, or the iteration number under logical time
  EventKind kind = EventKind::axp;
  FeatureSet features;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct EnumerationTrace {
  std::size_t num_features = 0;
  bool logical_time = false;
  std::vector<TraceEvent> events;
  friend bool operator==(const EnumerationTrace&, const EnumerationTrace&) = default;

  std::size_t count(EventKind k) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.kind == k ? 1 : 0;
    return n;
  }
  double final_time() const { return events.empty() ? 0.0 : events.back().t; }
};

/// Resource limit checked at the head of every iteration. Empty means unlimited.
struct Budget {
  std::optional<double> seconds;
  std::optional<std::size_t> iterations;
};

struct EnumerationOptions {
  Budget budget;
  bool logical_time = false;
};

struct EnumerationResult {
  Family axps;
  Family cxps;
  EnumerationTrace trace;
  std::size_t iterations = 0;
  std::size_t oracle_calls = 0;
  std::size_t switches = 0;
  bool complete = false;  // candidates exhausted, so both families are complete
};

namespace detail {

template <EntailmentOracle Oracle>
EnumerationResult run_marco(const Oracle& oracle, Phase initial, const SwitchConfig* sw,
                            const EnumerationOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t m = oracle.num_features();
  const FeatureSet all = FeatureSet::all(m);
  const std::size_t calls_before = oracle.calls();

  DualHittingState state(m);
  if (initial == Phase::target_axp) state.flip_phase();
  std::optional<SlidingWindow> window;
  if (sw) {
    sw->validate();
    window.emplace(sw->window);
  }

  EnumerationResult res;
  res.trace.num_features = m;
  res.trace.logical_time = opts.logical_time;

  auto now = [&]() -> double {
    if (opts.logical_time) return static_cast<double>(res.iterations);
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  auto record = [&](EventKind k, FeatureSet s) {
    res.trace.events.push_back(TraceEvent{now(), k, s});
    if (k == EventKind::axp) res.axps.push_back(s);
    if (k == EventKind::cxp) res.cxps.push_back(s);
  };

  for (;;) {
    if (opts.budget.iterations && res.iterations >= *opts.budget.iterations) break;
    if (opts.budget.seconds &&
        std::chrono::duration<double>(Clock::now() - start).count() >= *opts.budget.seconds)
      break;

    const auto candidate = state.minimal_hs();
    if (!candidate) {
      res.complete = true;
      break;
    }
    ++res.iterations;
    const FeatureSet mu = *candidate;

    std::optional<FeatureSet> found_axp;
    std::optional<FeatureSet> found_cxp;
    if (state.phase() == Phase::target_cxp) {
      if (!oracle.entails(all - mu))
        found_cxp = mu;
      else
        found_axp = extract_axp(all - mu, oracle).features;
    } else {
      if (oracle.entails(mu))
        found_axp = mu;
      else
        found_cxp = extract_cxp(all - mu, oracle).features;
    }

    if (found_axp) {
      record(EventKind::axp, *found_axp);
      // An empty AXp means the classifier is constant: it is the only AXp
      // and no CXp exists.
      if (found_axp->empty()) {
        res.complete = true;
        break;
      }
      state.add_axp(*found_axp);
    } else {
      record(EventKind::cxp, *found_cxp);
      state.add_cxp(*found_cxp);
    }

    if (window) {
      SwitchSignal sig;
      if (found_cxp) {
        sig = evaluate_switch(*window, found_cxp->size(), *sw);
        window->push_cxp(found_cxp->size());
      } else {
        window->push_axp(found_axp->size());
        sig = evaluate_switch(*window, std::nullopt, *sw);
      }
      if (sig == SwitchSignal::flip && (!sw->switch_once || res.switches == 0)) {
        state.flip_phase();
        ++res.switches;
        record(EventKind::phase_switch, FeatureSet{});
      }
    }
  }
  res.oracle_calls = oracle.calls() - calls_before;
  return res;
}

}  // namespace detail

/// Fixed-target enumeration. Targeting CXps, each candidate hits every known
/// AXp; it is recorded as a CXp if freeing it admits another class, otherwise
/// an AXp is extracted from its complement. Targeting AXps is the mirror image.
template <EntailmentOracle Oracle>
EnumerationResult xp_enum(const Oracle& oracle, XpKind target, const EnumerationOptions& opts = {}) {
  return detail::run_marco(oracle, target == XpKind::axp ? Phase::target_axp : Phase::target_cxp, nullptr, opts);
}

/// Adaptive enumeration: starts targeting CXps and flips the phase whenever
/// the switching conditions hold (at most once with switch_once).
template <EntailmentOracle Oracle>
EnumerationResult adaptive_xp_enum(const Oracle& oracle, const SwitchConfig& cfg,
                                   const EnumerationOptions& opts = {}) {
  return detail::run_marco(oracle, Phase::target_cxp, &cfg, opts);
}

/// Families discovered up to and including time `at`.
inline std::pair<Family, Family> snapshot(const EnumerationTrace& trace, double at) {
  std::pair<Family, Family> out;
  for (const auto& e : trace.events) {
    if (e.t > at) break;
    if (e.kind == EventKind::axp) out.first.push_back(e.features);
    if (e.kind == EventKind::cxp) out.second.push_back(e.features);
  }
  return out;
}

}  // namespace ffa
