#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homdens/error.hpp"

namespace homdens {

using node_t = std::uint32_t;
using Edge = std::pair<node_t, node_t>;

namespace detail {

inline std::string edge_str(std::uint64_t u, std::uint64_t v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

// Canonicalizes, validates and sorts an edge list for a graph on n nodes.
inline std::vector<Edge> canonical_edges(std::uint64_t n,
                                         std::span<const std::pair<std::uint64_t, std::uint64_t>> raw) {
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) {
    if (a == b) throw invalid_graph("self-loop at node " + std::to_string(a));
    if (a >= n || b >= n)
      throw invalid_graph("edge " + edge_str(a, b) + " has endpoint >= n=" + std::to_string(n));
    edges.emplace_back(static_cast<node_t>(std::min(a, b)), static_cast<node_t>(std::max(a, b)));
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) throw invalid_graph("duplicate edge " + edge_str(dup->first, dup->second));
  return edges;
}

}  // namespace detail

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are stored canonically (u < v) and sorted lexicographically. Optional
/// node attributes are scalars in [0,1], one per node. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Validating constructor. Accepts edges in either orientation; rejects
  /// self-loops, out-of-range endpoints, duplicates and malformed attributes.
  Graph(std::uint64_t n, std::span<const std::pair<std::uint64_t, std::uint64_t>> edges,
        std::optional<std::vector<double>> attrs = std::nullopt)
      : n_(check_n(n)), edges_(detail::canonical_edges(n, edges)), attrs_(std::move(attrs)) {
    if (attrs_) {
      if (attrs_->size() != n_)
        throw invalid_graph("node_attrs has length " + std::to_string(attrs_->size()) +
                            ", expected " + std::to_string(n_));
      for (std::size_t i = 0; i < attrs_->size(); ++i) {
        double a = (*attrs_)[i];
        if (!(a >= 0.0 && a <= 1.0))
          throw invalid_graph("node_attrs[" + std::to_string(i) + "] = " + std::to_string(a) +
                              " outside [0,1]");
      }
    }
  }

  Graph(std::uint64_t n, std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> edges,
        std::optional<std::vector<double>> attrs = std::nullopt)
      : Graph(n, std::span<const std::pair<std::uint64_t, std::uint64_t>>(edges.begin(), edges.size()),
              std::move(attrs)) {}

  /// Builds from edges already known to be canonical, sorted and unique.
  static Graph from_canonical(std::uint64_t n, std::vector<Edge> edges) {
    Graph g;
    g.n_ = check_n(n);
    g.edges_ = std::move(edges);
    return g;
  }

  std::uint64_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::optional<std::vector<double>>& node_attrs() const noexcept { return attrs_; }
  bool has_attrs() const noexcept { return attrs_.has_value(); }

  std::vector<std::uint64_t> degrees() const {
    std::vector<std::uint64_t> deg(n_, 0);
    for (auto [u, v] : edges_) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  /// Sorted neighbor lists.
  std::vector<std::vector<node_t>> adjacency() const {
    std::vector<std::vector<node_t>> adj(n_);
    for (auto [u, v] : edges_) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  /// Copy with one extra edge; throws if the edge is invalid or present.
  Graph with_edge(node_t u, node_t v) const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e(edges_.begin(), edges_.end());
    e.emplace_back(u, v);
    return Graph(n_, e, attrs_);
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static std::uint64_t check_n(std::uint64_t n) {
    if (n > std::uint64_t{1} << 32) throw invalid_graph("node count exceeds 2^32");
    return n;
  }

  std::uint64_t n_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<double>> attrs_;
};

inline Graph new_graph(std::uint64_t n, std::span<const std::pair<std::uint64_t, std::uint64_t>> edges,
                       std::optional<std::vector<double>> attrs = std::nullopt) {
  return Graph(n, edges, std::move(attrs));
}

/// Small pattern graph F with k nodes. The edge list keeps the caller's order,
/// which is the order edge queries are issued in by the sampler.
struct Pattern {
  std::uint32_t k = 1;
  std::vector<Edge> edges;
  std::string name;

  Pattern() = default;
  Pattern(std::uint32_t k_, std::vector<Edge> edges_, std::string name_ = {})
      : k(k_), edges(std::move(edges_)), name(std::move(name_)) {
    if (k == 0) throw invalid_graph("pattern must have at least one node");
    if (k > 64) throw invalid_graph("pattern has more than 64 nodes");
    std::vector<Edge> seen;
    for (auto& [u, v] : edges) {
      if (u == v) throw invalid_graph("pattern self-loop at node " + std::to_string(u));
      if (u >= k || v >= k) throw invalid_graph("pattern edge " + detail::edge_str(u, v) + " out of range");
      if (u > v) std::swap(u, v);
      seen.emplace_back(u, v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw invalid_graph("pattern has duplicate edges");
  }

  std::size_t l() const noexcept { return edges.size(); }

  Graph as_graph() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e(edges.begin(), edges.end());
    return Graph(k, e);
  }

  static Pattern from_graph(const Graph& g, std::string name = {}) {
    if (g.n() == 0 || g.n() > 64) throw invalid_graph("pattern must have 1..64 nodes");
    return Pattern(static_cast<std::uint32_t>(g.n()), g.edges(), std::move(name));
  }
};

using PatternFamily = std::vector<Pattern>;

/// Complete graph K_k as a pattern named "K<k>".
inline Pattern clique(std::uint32_t k) {
  std::vector<Edge> e;
  for (node_t u = 0; u < k; ++u)
    for (node_t v = u + 1; v < k; ++v) e.emplace_back(u, v);
  return Pattern(k, std::move(e), "K" + std::to_string(k));
}

inline Pattern path(std::uint32_t k) {
  std::vector<Edge> e;
  for (node_t u = 0; u + 1 < k; ++u) e.emplace_back(u, u + 1);
  return Pattern(k, std::move(e), "P" + std::to_string(k));
}

inline Pattern edgeless(std::uint32_t k) { return Pattern(k, {}, "E" + std::to_string(k)); }

}  // namespace homdens
