#pragma once

// Offline post-processing of enumeration traces: periodic snapshots and
// normalized metric curves against an exact attribution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ffa/enumerate.hpp"
#include "ffa/ffa.hpp"
#include "ffa/io.hpp"
#include "ffa/metrics.hpp"

namespace ffa {

struct SnapshotRow {
  double t = 0;
  std::size_t n_axp = 0;
  std::size_t n_cxp = 0;
  std::optional<std::vector<double>> ffa;  // absent before the first AXp
};

/// Rows at t = 0, every, 2*every, ... up to the final event, plus one at the
/// final event time. every <= 0 gives one row per explanation event.
inline std::vector<SnapshotRow> snapshot_rows(const EnumerationTrace& trace, double every) {
  std::vector<double> times;
  const double end = trace.final_time();
  if (every > 0) {
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * every;
      if (t > end) break;
      times.push_back(t);
    }
    if (times.empty() || times.back() < end) times.push_back(end);
  } else {
    times.push_back(0);
    for (const auto& e : trace.events)
      if (e.kind != EventKind::phase_switch && (times.empty() || e.t != times.back())) times.push_back(e.t);
  }
  std::vector<SnapshotRow> rows;
  for (double t : times) {
    auto [a, c] = snapshot(trace, t);
    SnapshotRow r{t, a.size(), c.size(), std::nullopt};
    if (!a.empty()) r.ffa = ffa_from_axps(a, trace.num_features).as_doubles();
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_snapshot_csv(std::ostream& out, const std::vector<SnapshotRow>& rows, std::size_t m) {
  out << "t,n_axp,n_cxp";
  for (std::size_t i = 1; i <= m; ++i) out << ",ffa_" << i;
  out << '\n';
  for (const auto& r : rows) {
    out << io::format_double(r.t) << ',' << r.n_axp << ',' << r.n_cxp;
    for (std::size_t i = 0; i < m; ++i) {
      out << ',';
      if (r.ffa) out << io::format_double((*r.ffa)[i]);
    }
    out << '\n';
  }
}

struct CurveRow {
  double normalized_time = 0;
  double error = 0;
  double tau = 0;
  double rbo = 0;
  double kl = 0;
  double n_axp = 0;
  double n_cxp = 0;
};

/// One curve per trace, one row per explanation event. Times are divided by
/// the longest final time among the traces, errors by the largest error seen
/// in any of them, and explanation counts by the largest final counts. Before
/// the first AXp the approximation is the zero vector.
inline std::vector<std::vector<CurveRow>> metric_curves(const std::vector<EnumerationTrace>& traces,
                                                        std::span<const double> exact,
                                                        double rbo_persistence = kDefaultRboPersistence) {
  const auto exact_rank = rank_features(exact);
  const bool exact_zero = std::all_of(exact.begin(), exact.end(), [](double v) { return v == 0; });
  double max_time = 0, max_error = 0, max_axp = 0, max_cxp = 0;
  std::vector<std::vector<CurveRow>> curves;
  for (const auto& trace : traces) {
    if (trace.num_features != exact.size()) throw DimensionMismatchError("trace and exact attribution differ in m");
    max_time = std::max(max_time, trace.final_time());
    std::vector<CurveRow> rows;
    Family axps;
    std::size_t n_cxp = 0;
    for (const auto& e : trace.events) {
      if (e.kind == EventKind::phase_switch) continue;
      if (e.kind == EventKind::axp) axps.push_back(e.features);
      if (e.kind == EventKind::cxp) ++n_cxp;
      std::vector<double> approx(exact.size(), 0.0);
      if (!axps.empty()) approx = ffa_from_axps(axps, exact.size()).as_doubles();
      CurveRow r;
      r.normalized_time = e.t;
      r.error = manhattan_error(approx, exact);
      const auto rank = rank_features(approx);
      r.tau = kendall_tau(rank, exact_rank);
      r.rbo = rbo(rank, exact_rank, rbo_persistence);
      if (exact_zero)
        r.kl = r.error == 0 ? 0.0 : kKlSentinel;
      else
        r.kl = kl_divergence(approx, exact);
      r.n_axp = static_cast<double>(axps.size());
      r.n_cxp = static_cast<double>(n_cxp);
      max_error = std::max(max_error, r.error);
      rows.push_back(r);
    }
    max_axp = std::max(max_axp, static_cast<double>(axps.size()));
    max_cxp = std::max(max_cxp, static_cast<double>(n_cxp));
    curves.push_back(std::move(rows));
  }
  for (auto& rows : curves) {
    for (auto& r : rows) {
      r.normalized_time = max_time > 0 ? r.normalized_time / max_time : 1.0;
      if (max_error > 0) r.error /= max_error;
      if (max_axp > 0) r.n_axp /= max_axp;
      if (max_cxp > 0) r.n_cxp /= max_cxp;
    }
  }
  return curves;
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "normalized_time,error,tau,rbo,kl,n_axp,n_cxp\n";
  for (const auto& r : rows) {
    out << io::format_double(r.normalized_time) << ',' << io::format_double(r.error) << ','
        << io::format_double(r.tau) << ',' << io::format_double(r.rbo) << ',' << io::format_double(r.kl) << ','
        << io::format_double(r.n_axp) << ',' << io::format_double(r.n_cxp) << '\n';
  }
}

}  // namespace ffa
