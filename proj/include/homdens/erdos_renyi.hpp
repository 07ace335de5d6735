#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "homdens/error.hpp"
#include "homdens/graph.hpp"
#include "homdens/random.hpp"

namespace homdens {

/// Node counts at or above this use geometric skipping instead of one
/// Bernoulli draw per pair.
inline constexpr std::uint64_t kErSkipThreshold = 100'000;

/// G(n,p) as a pure function of (n, p, seed).
///
/// Below kErSkipThreshold, pairs are visited row-major (u = 0..n-2,
/// v = u+1..n-1) and each gets one draw `uniform01() < p` from a single
/// Xoshiro256 stream seeded with `seed`. From the threshold on, the gap to the
/// next present pair in the same row-major order is drawn as
/// floor(log(1-U) / log(1-p)), one uniform per edge. Both schemes produce the
/// G(n,p) distribution; they do not produce the same graph for a given seed.
inline Graph generate_er(std::uint64_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter("edge probability p must lie in [0,1]");
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return Graph::from_canonical(n, std::move(edges));

  Xoshiro256 rng(seed);
  const std::uint64_t pairs = n * (n - 1) / 2;

  if (p == 1.0) {
    edges.reserve(pairs);
    for (node_t u = 0; u + 1 < n; ++u)
      for (node_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_canonical(n, std::move(edges));
  }

  edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * p * 1.05) + 16);

  if (n < kErSkipThreshold) {
    for (node_t u = 0; u + 1 < n; ++u)
      for (node_t v = u + 1; v < n; ++v)
        if (rng.uniform01() < p) edges.emplace_back(u, v);
    return Graph::from_canonical(n, std::move(edges));
  }

  const double log_q = std::log1p(-p);
  // Cursor sits just after pair (u, v); v == u means before (u, u+1).
  std::uint64_t u = 0;
  std::uint64_t v = 0;
  std::uint64_t row_left = n - 1;
  for (;;) {
    const double r = rng.uniform01();
    const double gap = std::floor(std::log1p(-r) / log_q);
    if (!(gap < static_cast<double>(pairs))) break;
    std::uint64_t skip = static_cast<std::uint64_t>(gap);
    // Advance skip pairs, then take the next one.
    while (skip >= row_left) {
      skip -= row_left;
      ++u;
      if (u + 1 >= n) return Graph::from_canonical(n, std::move(edges));
      v = u;
      row_left = n - 1 - u;
    }
    v += skip + 1;
    row_left -= skip + 1;
    edges.emplace_back(static_cast<node_t>(u), static_cast<node_t>(v));
    if (row_left == 0) {
      ++u;
      if (u + 1 >= n) break;
      v = u;
      row_left = n - 1 - u;
    }
  }
  return Graph::from_canonical(n, std::move(edges));
}

/// Edge probability log(n)^2 / n (natural log), capped at 1.
inline double sparse_threshold_p(std::uint64_t n) {
  if (n < 2) return 0.0;
  const double l = std::log(static_cast<double>(n));
  return std::min(1.0, l * l / static_cast<double>(n));
}

}  // namespace homdens
