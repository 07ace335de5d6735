#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "homdens/edge_oracle.hpp"
#include "homdens/error.hpp"
#include "homdens/graph.hpp"

namespace homdens {

/// Default cap on n^k for exhaustive enumeration; (n=30, k=5) fits.
inline constexpr std::uint64_t kExactMapBudget = 100'000'000;

/// Largest graph accepted by the permutation-based isomorphism routines.
inline constexpr std::uint64_t kIsoMaxNodes = 8;

struct ExactCount {
  std::uint64_t hom_count = 0;
  std::uint64_t total_maps = 0;  // n^k
  double density = 0.0;
};

namespace detail {

// Dense adjacency bit matrix for small graphs, hash set otherwise.
class SmallAdjacency {
 public:
  static constexpr std::uint64_t kDenseLimit = 4096;

  explicit SmallAdjacency(const Graph& g) : n_(g.n()) {
    if (n_ <= kDenseLimit) {
      stride_ = (n_ + 63) / 64;
      bits_.assign(n_ * stride_, 0);
      for (auto [u, v] : g.edges()) {
        set(u, v);
        set(v, u);
      }
    } else {
      sparse_ = ExactEdgeSet(g);
    }
  }

  bool contains(node_t u, node_t v) const noexcept {
    if (!bits_.empty()) return (bits_[u * stride_ + (v >> 6)] >> (v & 63)) & 1;
    return sparse_.contains(u, v);
  }

 private:
  void set(node_t u, node_t v) { bits_[u * stride_ + (v >> 6)] |= std::uint64_t{1} << (v & 63); }

  std::uint64_t n_;
  std::uint64_t stride_ = 0;
  std::vector<std::uint64_t> bits_;
  ExactEdgeSet sparse_;
};

inline std::uint64_t checked_power(std::uint64_t n, std::uint32_t k, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (n != 0 && total > budget / n)
      throw budget_exceeded("n^k = " + std::to_string(n) + "^" + std::to_string(k) + " exceeds the map budget " +
                            std::to_string(budget));
    total *= n;
  }
  if (total > budget) throw budget_exceeded("n^k exceeds the map budget");
  return total;
}

}  // namespace detail

/// Exact hom(F, G) by enumerating every map V(F) -> V(G).
///
/// Maps are visited in big-endian mixed-radix order over pattern nodes
/// (node 0 is the most significant digit). A prefix is abandoned as soon as an
/// edge between two assigned pattern nodes is not preserved, which skips whole
/// blocks of the enumeration without changing the count.
inline ExactCount exact_hom(const Pattern& pattern, const Graph& g, std::uint64_t budget = kExactMapBudget) {
  if (g.n() == 0) throw invalid_parameter("homomorphism density is undefined for a graph with 0 nodes");
  const std::uint32_t k = pattern.k;
  ExactCount out;
  out.total_maps = detail::checked_power(g.n(), k, budget);

  // back[j]: pattern nodes < j adjacent to j.
  std::vector<std::vector<std::uint32_t>> back(k);
  for (auto [a, b] : pattern.edges) back[std::max(a, b)].push_back(std::min(a, b));

  const detail::SmallAdjacency adj(g);
  const auto n = static_cast<node_t>(g.n());
  std::vector<node_t> f(k, 0);
  std::uint64_t count = 0;

  // Iterative DFS; f[depth] is the digit being tried at depth.
  std::uint32_t depth = 0;
  f[0] = 0;
  for (;;) {
    bool ok = true;
    for (std::uint32_t a : back[depth])
      if (!adj.contains(f[a], f[depth])) {
        ok = false;
        break;
      }
    if (ok) {
      if (depth + 1 == k) {
        ++count;
      } else {
        ++depth;
        f[depth] = 0;
        continue;
      }
    }
    // Advance to the next candidate, carrying into shallower digits.
    while (++f[depth] == n) {
      if (depth == 0) {
        out.hom_count = count;
        out.density = static_cast<double>(count) / static_cast<double>(out.total_maps);
        return out;
      }
      --depth;
    }
  }
}

/// hom(K2, G) = 2|E(G)|.
inline std::uint64_t hom_k2(const Graph& g) { return 2 * static_cast<std::uint64_t>(g.m()); }

/// hom(K3, G) = sum over ordered adjacent (u,v) of |N(u) ∩ N(v)|, i.e. six
/// times the triangle count.
inline std::uint64_t hom_k3(const Graph& g) {
  const auto adj = g.adjacency();
  std::uint64_t total = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (node_t v : adj[u]) {
      const auto& a = adj[u];
      const auto& b = adj[v];
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (b[j] < a[i]) {
          ++j;
        } else {
          ++total;
          ++i;
          ++j;
        }
      }
    }
  }
  return total;
}

namespace detail {

inline void check_iso_size(const Graph& g) {
  if (g.n() > kIsoMaxNodes)
    throw budget_exceeded("isomorphism search limited to graphs with at most " + std::to_string(kIsoMaxNodes) +
                          " nodes");
}

inline std::vector<Edge> relabel(const std::vector<Edge>& edges, const std::vector<node_t>& perm) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (auto [u, v] : edges) {
    node_t a = perm[u], b = perm[v];
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// True iff some bijection V(g1) -> V(g2) maps E(g1) onto E(g2).
inline bool are_isomorphic(const Graph& g1, const Graph& g2) {
  detail::check_iso_size(g1);
  detail::check_iso_size(g2);
  if (g1.n() != g2.n() || g1.m() != g2.m()) return false;
  auto d1 = g1.degrees();
  auto d2 = g2.degrees();
  std::sort(d1.begin(), d1.end());
  std::sort(d2.begin(), d2.end());
  if (d1 != d2) return false;

  std::vector<node_t> perm(g1.n());
  std::iota(perm.begin(), perm.end(), node_t{0});
  do {
    if (detail::relabel(g1.edges(), perm) == g2.edges()) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Lexicographically smallest sorted edge list over all relabelings.
inline std::vector<Edge> canonical_form(const Graph& g) {
  detail::check_iso_size(g);
  std::vector<node_t> perm(g.n());
  std::iota(perm.begin(), perm.end(), node_t{0});
  std::vector<Edge> best = g.edges();
  do {
    auto e = detail::relabel(g.edges(), perm);
    if (e < best) best = std::move(e);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<double> density_vector_exact(const Graph& g, const PatternFamily& patterns,
                                                std::uint64_t budget = kExactMapBudget) {
  std::vector<double> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(exact_hom(p, g, budget).density);
  return out;
}

}  // namespace homdens
