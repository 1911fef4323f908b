#pragma once

// Minimal vertex covers, graph attribution (share of minimal covers that
// contain a vertex), and the two-copy gadget that recovers #mvc(G) from two
// attribution queries.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/ffa.hpp"

namespace ffa {

inline constexpr std::size_t kDefaultGraphCap = 20;

/// Simple undirected graph over vertices 0..n-1 with display labels.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) add_vertex(std::to_string(i + 1));
  }

  std::size_t add_vertex(std::string label) {
    if (labels_.size() >= 32) throw CapExceededError("graphs are limited to 32 vertices");
    labels_.push_back(std::move(label));
    adj_.push_back(0);
    return labels_.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= size() || v >= size()) throw PreconditionError("edge references a missing vertex");
    if (u == v) throw PreconditionError("self-loops are not allowed");
    adj_[u] |= std::uint32_t{1} << v;
    adj_[v] |= std::uint32_t{1} << u;
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t v) const { return labels_.at(v); }
  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }
  std::uint32_t neighbours(std::size_t v) const { return adj_.at(v); }
  bool has_edge(std::size_t u, std::size_t v) const { return (adj_.at(u) >> v) & 1U; }
  std::size_t degree(std::size_t v) const { return static_cast<std::size_t>(std::popcount(adj_.at(v))); }
  bool isolated(std::size_t v) const { return adj_.at(v) == 0; }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = u + 1; v < size(); ++v)
        if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }
  std::size_t num_edges() const { return edges().size(); }

  bool connected() const {
    if (size() == 0) return true;
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj_[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~seen;
      seen |= next;
    }
    return std::popcount(seen) == static_cast<int>(size());
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> adj_;
};

/// Vertex subset as a bitmask over vertex indices.
using VertexSet = std::uint32_t;

struct CoverCounts {
  std::int64_t total = 0;
  std::int64_t with_v = 0;
  std::int64_t without_v = 0;
};

/// Graph whose vertices are the features (labelled 1-based) appearing in
/// the size-2 sets and whose edges are those sets.
inline Graph cxps_to_graph(const Family& cxps) {
  const auto family = canonical(cxps);
  FeatureSet used;
  for (const auto& y : family) {
    if (y.size() != 2) throw PreconditionError("expected size-2 sets, got " + y.to_string());
    used = used | y;
  }
  Graph g;
  std::vector<std::size_t> index(kMaxFeatures, 0);
  for (auto f : used.indices()) index[f] = g.add_vertex(std::to_string(f + 1));
  for (const auto& y : family) {
    const auto ix = y.indices();
    g.add_edge(index[ix[0]], index[ix[1]]);
  }
  return g;
}

inline bool is_vertex_cover(const Graph& g, VertexSet c) {
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!((c >> v) & 1U) && (g.neighbours(v) & ~c)) return false;
  return true;
}

/// Inclusion-minimal vertex covers, by subset enumeration and a minimality
/// filter. Covers come out in increasing mask order.
inline std::vector<VertexSet> minimal_vertex_covers(const Graph& g, std::size_t cap = kDefaultGraphCap) {
  if (g.size() > cap) throw CapExceededError("graph has more vertices than the cover cap");
  std::vector<VertexSet> out;
  const std::uint64_t limit = std::uint64_t{1} << g.size();
  for (std::uint64_t s = 0; s < limit; ++s) {
    const auto c = static_cast<VertexSet>(s);
    if (!is_vertex_cover(g, c)) continue;
    // A cover is minimal iff every member has a neighbour outside it.
    bool minimal = true;
    for (VertexSet r = c; r && minimal; r &= r - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(r));
      if ((g.neighbours(v) & ~c) == 0) minimal = false;
    }
    if (minimal) out.push_back(c);
  }
  return out;
}

inline CoverCounts count_mvc(const Graph& g, std::optional<std::size_t> v = std::nullopt,
                             std::size_t cap = kDefaultGraphCap) {
  if (v && *v >= g.size()) throw PreconditionError("vertex not in graph");
  CoverCounts cc;
  for (auto c : minimal_vertex_covers(g, cap)) {
    ++cc.total;
    if (v && ((c >> *v) & 1U)) ++cc.with_v;
  }
  cc.without_v = v ? cc.total - cc.with_v : 0;
  return cc;
}

/// Share of minimal vertex covers containing v. An edgeless graph has only
/// the empty cover, so the value is 0.
inline Rational ffa_graph(const Graph& g, std::size_t v, std::size_t cap = kDefaultGraphCap) {
  const auto cc = count_mvc(g, v, cap);
  return Rational(cc.with_v, cc.total);
}

/// Two disjoint copies G1, G2 of g, with the copy v1 of v joined to every
/// vertex of G2. Returns the graph and v1.
inline std::pair<Graph, std::size_t> gadget_double(const Graph& g, std::size_t v) {
  if (v >= g.size()) throw PreconditionError("vertex not in graph");
  if (g.isolated(v)) throw PreconditionError("gadget needs a non-isolated vertex");
  const std::size_t n = g.size();
  Graph d;
  for (std::size_t i = 0; i < n; ++i) d.add_vertex(g.label(i) + "_1");
  for (std::size_t i = 0; i < n; ++i) d.add_vertex(g.label(i) + "_2");
  for (auto [a, b] : g.edges()) {
    d.add_edge(a, b);
    d.add_edge(a + n, b + n);
  }
  for (std::size_t w = 0; w < n; ++w) d.add_edge(v, w + n);
  return {std::move(d), v};
}

/// #mvc(G) = (1/p - 1) / (1/q - 1), where p = ffa(G, v) and q = ffa(gadget, v1).
inline Rational recover_mvc_count(const Rational& p, const Rational& q) {
  const Rational zero(0), one(1);
  if (p <= zero || p >= one || q <= zero || q >= one)
    throw PreconditionError("recovery needs attribution values strictly between 0 and 1");
  return (one / p - one) / (one / q - one);
}

}  // namespace ffa
