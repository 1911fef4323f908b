#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ffa/error.hpp"

namespace ffa {

inline constexpr std::size_t kMaxFeatures = 64;

/// A set of 0-based feature indices, stored as a 64-bit mask.
class FeatureSet {
 public:
  constexpr FeatureSet() = default;
  constexpr explicit FeatureSet(std::uint64_t mask) : mask_(mask) {}
  FeatureSet(std::initializer_list<std::size_t> items) {
    for (auto i : items) insert(i);
  }

  static FeatureSet all(std::size_t m) {
    if (m > kMaxFeatures) throw CapExceededError("at most 64 features are supported");
    return FeatureSet(m == kMaxFeatures ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }
  static FeatureSet from_indices(const std::vector<std::size_t>& items) {
    FeatureSet s;
    for (auto i : items) s.insert(i);
    return s;
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(std::size_t i) const { return i < kMaxFeatures && ((mask_ >> i) & 1U); }

  void insert(std::size_t i) {
    if (i >= kMaxFeatures) throw CapExceededError("feature index beyond 64");
    mask_ |= std::uint64_t{1} << i;
  }
  void erase(std::size_t i) {
    if (i < kMaxFeatures) mask_ &= ~(std::uint64_t{1} << i);
  }
  FeatureSet with(std::size_t i) const { FeatureSet s = *this; s.insert(i); return s; }
  FeatureSet without(std::size_t i) const { FeatureSet s = *this; s.erase(i); return s; }

  constexpr bool subset_of(FeatureSet o) const { return (mask_ & ~o.mask_) == 0; }
  constexpr bool intersects(FeatureSet o) const { return (mask_ & o.mask_) != 0; }

  /// Complement relative to {0..m-1}.
  FeatureSet complement(std::size_t m) const { return FeatureSet(all(m).mask_ & ~mask_); }

  friend constexpr FeatureSet operator|(FeatureSet a, FeatureSet b) { return FeatureSet(a.mask_ | b.mask_); }
  friend constexpr FeatureSet operator&(FeatureSet a, FeatureSet b) { return FeatureSet(a.mask_ & b.mask_); }
  friend constexpr FeatureSet operator-(FeatureSet a, FeatureSet b) { return FeatureSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(FeatureSet, FeatureSet) = default;
  // Orders by mask; used only to give families a canonical order.
  friend constexpr auto operator<=>(FeatureSet a, FeatureSet b) { return a.mask_ <=> b.mask_; }

  /// Members in ascending order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  /// Renders with 1-based indices, e.g. "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto i : indices()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t mask_ = 0;
};

using Family = std::vector<FeatureSet>;

/// Sorted, duplicate-free copy of a family; the canonical form used for comparisons.
inline Family canonical(Family f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

}  // namespace ffa
