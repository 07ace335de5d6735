#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "homdens/error.hpp"
#include "homdens/exact.hpp"
#include "homdens/graph.hpp"

namespace homdens {

/// Number of connected graphs with 1..5 nodes; the atlas stops there.
inline constexpr std::size_t kAtlasSize = 31;

inline bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  const auto adj = g.adjacency();
  std::vector<char> seen(g.n(), 0);
  std::vector<node_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    node_t u = stack.back();
    stack.pop_back();
    for (node_t v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == g.n();
}

/// Every labeled simple graph on n nodes (2^(n(n-1)/2) of them), n <= 6.
inline std::vector<Graph> all_labeled_graphs(std::uint32_t n) {
  if (n > 6) throw budget_exceeded("labeled graph enumeration limited to n <= 6");
  std::vector<Edge> slots;
  for (node_t u = 0; u < n; ++u)
    for (node_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::vector<Graph> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) e.push_back(slots[i]);
    out.push_back(Graph::from_canonical(n, std::move(e)));
  }
  return out;
}

/// One canonical representative per isomorphism class of graphs on exactly n
/// nodes, ordered by (edge count, ascending-sorted degree sequence, canonical
/// edge list), all compared lexicographically.
inline std::vector<Graph> isomorphism_classes(std::uint32_t n, bool connected_only) {
  using Key = std::tuple<std::size_t, std::vector<std::uint64_t>, std::vector<Edge>>;
  std::set<Key> classes;
  for (const auto& g : all_labeled_graphs(n)) {
    if (connected_only && !is_connected(g)) continue;
    auto canon = canonical_form(g);
    auto deg = g.degrees();
    std::sort(deg.begin(), deg.end());
    classes.emplace(g.m(), std::move(deg), std::move(canon));
  }
  std::vector<Graph> out;
  out.reserve(classes.size());
  for (const auto& [m, deg, edges] : classes) out.push_back(Graph::from_canonical(n, edges));
  return out;
}

/// Patterns for every isomorphism class on 1..max_nodes nodes (connected or
/// not), in node-count order then class order. Named "G<n>.<i>".
inline PatternFamily all_patterns_up_to(std::uint32_t max_nodes) {
  PatternFamily out;
  for (std::uint32_t n = 1; n <= max_nodes; ++n) {
    auto cls = isomorphism_classes(n, false);
    for (std::size_t i = 0; i < cls.size(); ++i)
      out.push_back(Pattern::from_graph(cls[i], "G" + std::to_string(n) + "." + std::to_string(i)));
  }
  return out;
}

namespace detail {

inline const PatternFamily& full_atlas() {
  static const PatternFamily atlas = [] {
    PatternFamily out;
    for (std::uint32_t n = 1; n <= 5; ++n)
      for (const auto& g : isomorphism_classes(n, true))
        out.push_back(Pattern::from_graph(g, "atlas:" + std::to_string(out.size())));
    return out;
  }();
  return atlas;
}

}  // namespace detail

/// First `count` connected graphs ordered by node count, then by the class
/// order of isomorphism_classes. Indices 0..9 are the connected graphs on at
/// most 4 nodes; 10..30 are the 21 connected 5-node graphs.
inline PatternFamily atlas_connected(std::size_t count) {
  if (count < 1) throw invalid_parameter("atlas count must be >= 1");
  if (count > kAtlasSize) throw invalid_parameter("atlas only covers the first 31 connected graphs (<= 5 nodes)");
  const auto& all = detail::full_atlas();
  return PatternFamily(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
}

inline Pattern atlas_pattern(std::size_t index) {
  if (index >= kAtlasSize) throw invalid_parameter("atlas index must be in 0..30");
  return detail::full_atlas()[index];
}

}  // namespace homdens
