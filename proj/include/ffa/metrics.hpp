#pragma once

// Distances between an approximate and an exact attribution vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "ffa/error.hpp"
#include "ffa/ffa.hpp"

namespace ffa {

/// Value KL divergence reports when the exact distribution puts mass on a
/// feature the approximation assigns zero.
inline constexpr double kKlSentinel = 0.5;
inline constexpr double kDefaultRboPersistence = 0.9;

/// Feature indices by attribution, descending; ties by ascending index.
struct RankedFeatures {
  std::vector<std::size_t> order;
  friend bool operator==(const RankedFeatures&, const RankedFeatures&) = default;
};

inline RankedFeatures rank_features(std::span<const double> values) {
  RankedFeatures r;
  r.order.resize(values.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return r;
}

inline RankedFeatures rank_features(const FfaVector& f) { return rank_features(f.as_doubles()); }

namespace detail {

inline void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatchError("vectors differ in dimension");
}

// positions[f] = rank of feature f; throws unless `r` is a permutation of 0..n-1.
inline std::vector<std::size_t> positions(const RankedFeatures& r, std::size_t n) {
  std::vector<std::size_t> pos(n, n);
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    const auto f = r.order[k];
    if (f >= n || pos[f] != n) throw DimensionMismatchError("rankings are over different feature sets");
    pos[f] = k;
  }
  return pos;
}

}  // namespace detail

inline double manhattan_error(std::span<const double> approx, std::span<const double> exact) {
  detail::check_same_dim(approx.size(), exact.size());
  double s = 0;
  for (std::size_t i = 0; i < approx.size(); ++i) s += std::abs(approx[i] - exact[i]);
  return s;
}

inline double manhattan_error(const FfaVector& approx, const FfaVector& exact) {
  return manhattan_error(approx.as_doubles(), exact.as_doubles());
}

/// (concordant - discordant) / C(m,2). A single feature counts as full agreement.
inline double kendall_tau(const RankedFeatures& a, const RankedFeatures& b) {
  detail::check_same_dim(a.order.size(), b.order.size());
  const std::size_t n = a.order.size();
  const auto pa = detail::positions(a, n);
  const auto pb = detail::positions(b, n);
  if (n < 2) return 1.0;
  long long score = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool ord_a = pa[i] < pa[j];
      const bool ord_b = pb[i] < pb[j];
      score += ord_a == ord_b ? 1 : -1;
    }
  return static_cast<double>(score) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

/// Extrapolated rank-biased overlap of two full rankings of the same items:
///   (X_k/k) p^k + ((1-p)/p) * sum_{d=1..k} (X_d/d) p^d
/// where X_d is the overlap of the depth-d prefixes.
inline double rbo(const RankedFeatures& a, const RankedFeatures& b, double persistence = kDefaultRboPersistence) {
  if (!(persistence > 0 && persistence < 1)) throw PreconditionError("RBO persistence must lie in (0,1)");
  detail::check_same_dim(a.order.size(), b.order.size());
  const std::size_t k = a.order.size();
  detail::positions(a, k);
  detail::positions(b, k);
  if (k == 0) return 1.0;
  std::vector<char> in_a(k, 0), in_b(k, 0);
  std::size_t overlap = 0;
  double sum = 0;
  double pd = 1;
  double agreement = 0;
  for (std::size_t d = 1; d <= k; ++d) {
    const auto x = a.order[d - 1];
    const auto y = b.order[d - 1];
    if (x == y) {
      ++overlap;
    } else {
      if (in_b[x]) ++overlap;
      if (in_a[y]) ++overlap;
    }
    in_a[x] = 1;
    in_b[y] = 1;
    pd *= persistence;
    agreement = static_cast<double>(overlap) / static_cast<double>(d);
    sum += agreement * pd;
  }
  return agreement * pd + (1 - persistence) / persistence * sum;
}

/// KL(P || Q) with P the exact and Q the approximate attribution, both
/// normalized to sum 1. Returns kKlSentinel when some P_i > 0 has Q_i = 0.
inline double kl_divergence(std::span<const double> approx, std::span<const double> exact) {
  detail::check_same_dim(approx.size(), exact.size());
  const double ps = std::accumulate(exact.begin(), exact.end(), 0.0);
  if (!(ps > 0)) throw UndefinedAttributionError("exact attribution is all zero");
  const double qs = std::accumulate(approx.begin(), approx.end(), 0.0);
  double kl = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double p = exact[i] / ps;
    if (p <= 0) continue;
    const double q = qs > 0 ? approx[i] / qs : 0.0;
    if (q <= 0) return kKlSentinel;
    kl += p * std::log(p / q);
  }
  return kl;
}

inline double kl_divergence(const FfaVector& approx, const FfaVector& exact) {
  return kl_divergence(approx.as_doubles(), exact.as_doubles());
}

}  // namespace ffa
