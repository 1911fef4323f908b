#pragma once

// Formal feature attribution: the share of all AXps that contain a feature.

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ffa/enumerate.hpp"
#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/oracle.hpp"

namespace ffa {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

struct FfaVector {
  std::vector<Rational> values;
  std::size_t axp_count = 0;

  std::size_t size() const { return values.size(); }
  std::vector<double> as_doubles() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_double(v));
    return out;
  }
  friend bool operator==(const FfaVector&, const FfaVector&) = default;
};

inline FfaVector ffa_from_axps(const Family& axps, std::size_t m) {
  if (axps.empty()) throw UndefinedAttributionError("attribution needs at least one AXp");
  std::vector<std::int64_t> hits(m, 0);
  for (const auto& x : axps) {
    for (auto i : x.indices()) {
      if (i >= m) throw DomainError("AXp " + x.to_string() + " exceeds feature range");
      ++hits[i];
    }
  }
  FfaVector f;
  f.axp_count = axps.size();
  f.values.reserve(m);
  for (auto h : hits) f.values.emplace_back(h, static_cast<std::int64_t>(axps.size()));
  return f;
}

/// Exact attribution from a complete AXp enumeration. A constant classifier
/// has the single AXp {} and yields the zero vector.
template <EntailmentOracle Oracle>
FfaVector exact_ffa(const Oracle& oracle) {
  const auto run = xp_enum(oracle, XpKind::axp);
  return ffa_from_axps(run.axps, oracle.num_features());
}

inline FfaVector exact_ffa(const Classifier& model, const Instance& instance) {
  return exact_ffa(BruteForceOracle(model, instance));
}

/// Attribution over the AXps known at time `at`; nullopt before the first one.
inline std::optional<FfaVector> anytime_ffa(const EnumerationTrace& trace, double at) {
  auto [axps, cxps] = snapshot(trace, at);
  if (axps.empty()) return std::nullopt;
  return ffa_from_axps(axps, trace.num_features);
}

}  // namespace ffa
