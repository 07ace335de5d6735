#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "homdens/edge_oracle.hpp"
#include "homdens/error.hpp"
#include "homdens/graph.hpp"
#include "homdens/random.hpp"

namespace homdens {

enum class Weighting { unweighted, node_attrs, degree };

inline std::string to_string(Weighting w) {
  switch (w) {
    case Weighting::unweighted: return "none";
    case Weighting::node_attrs: return "attrs";
    case Weighting::degree: return "degree";
  }
  return "?";
}

inline Weighting parse_weighting(const std::string& s) {
  if (s == "none" || s == "unweighted") return Weighting::unweighted;
  if (s == "attrs" || s == "node_attrs") return Weighting::node_attrs;
  if (s == "degree") return Weighting::degree;
  throw invalid_parameter("unknown weighting '" + s + "' (expected none|attrs|degree)");
}

/// Trials are split into chunks of this many; chunk c draws from its own
/// stream Xoshiro256(derive_seed(seed, {c})).
inline constexpr std::uint64_t kChunkSize = 4096;

/// Largest pattern the sampler accepts.
inline constexpr std::uint32_t kMaxPatternNodes = 64;

struct SamplingConfig {
  double epsilon = 0.01;
  double delta = 0.05;  // failure probability; confidence is 1 - delta
  std::uint64_t seed = 0;
  Weighting weighting = Weighting::unweighted;
  std::optional<std::uint64_t> explicit_n_samples;
  unsigned threads = 0;  // 0 = std::thread::hardware_concurrency()

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw invalid_parameter("epsilon must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw invalid_parameter("delta must lie in (0,1)");
    if (explicit_n_samples && *explicit_n_samples == 0) throw invalid_parameter("explicit sample count must be >= 1");
  }
};

struct DensityEstimate {
  double t_bar = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;  // trials with X_i > 0
  SamplingConfig config;
  double elapsed_ms = 0.0;
  /// False when N came from explicit_n_samples rather than the sampling bound,
  /// in which case the (epsilon, delta) guarantee does not apply.
  bool guarantee_holds = true;
};

using Morphism = std::vector<node_t>;

/// N = ceil(ln(2/delta) / (2 epsilon^2)): enough i.i.d. [0,1] trials for
/// P(|mean - p| > epsilon) <= delta by Hoeffding.
inline std::uint64_t required_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw invalid_parameter("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw invalid_parameter("delta must lie in (0,1)");
  const double n = std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon));
  if (!(n < 0x1.0p62)) throw invalid_parameter("epsilon too small: sample count overflows");
  return static_cast<std::uint64_t>(n);
}

namespace detail {

inline std::uint64_t chunk_count(std::uint64_t n_samples) { return (n_samples + kChunkSize - 1) / kChunkSize; }

inline std::uint64_t chunk_length(std::uint64_t n_samples, std::uint64_t c) {
  return std::min(kChunkSize, n_samples - c * kChunkSize);
}

inline unsigned resolve_threads(unsigned requested, std::uint64_t chunks) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(1, chunks)));
}

/// Runs body(c) for every chunk c in [0, chunks), on up to `threads` workers.
template <typename Body>
void for_each_chunk(std::uint64_t chunks, unsigned threads, Body&& body) {
  if (threads <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed); c < chunks;
         c = next.fetch_add(1, std::memory_order_relaxed))
      body(c);
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
}

}  // namespace detail

/// Calls fn(std::span<const node_t>) for each of `count` uniform maps
/// [k] -> [n], in the same chunked order the sampler consumes them.
template <typename Fn>
void for_each_morphism(std::uint64_t n, std::uint32_t k, std::uint64_t count, std::uint64_t seed, Fn&& fn) {
  if (n == 0) throw invalid_parameter("no morphisms into a graph with 0 nodes");
  if (k == 0 || k > kMaxPatternNodes) throw invalid_parameter("pattern size must be in 1..64");
  std::array<node_t, kMaxPatternNodes> f{};
  for (std::uint64_t c = 0; c < detail::chunk_count(count); ++c) {
    Xoshiro256 rng(derive_seed(seed, {c}));
    const std::uint64_t len = detail::chunk_length(count, c);
    for (std::uint64_t i = 0; i < len; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) f[j] = static_cast<node_t>(rng.below(n));
      fn(std::span<const node_t>(f.data(), k));
    }
  }
}

/// Materialized morphism stream; intended for tests and small counts.
inline std::vector<Morphism> sample_morphisms(std::uint64_t n, std::uint32_t k, std::uint64_t count,
                                              std::uint64_t seed) {
  std::vector<Morphism> out;
  out.reserve(count);
  for_each_morphism(n, k, count, seed, [&](std::span<const node_t> f) { out.emplace_back(f.begin(), f.end()); });
  return out;
}

/// True iff f maps every pattern edge onto an edge the oracle accepts. Stops
/// at the first rejected edge.
template <EdgeMembership Oracle>
bool is_homomorphism(std::span<const node_t> f, const Pattern& pattern, const Oracle& oracle) {
  for (const auto& [u, v] : pattern.edges)
    if (!oracle.contains(f[u], f[v])) return false;
  return true;
}

inline bool is_homomorphism(std::span<const node_t> f, const Pattern& pattern, const EdgeOracle& oracle) {
  return oracle.visit([&](const auto& o) { return is_homomorphism(f, pattern, o); });
}

/// Per-node weights in [0,1] for the weighted modes; empty for unweighted.
inline std::vector<double> node_weights(const Graph& g, Weighting w) {
  switch (w) {
    case Weighting::unweighted:
      return {};
    case Weighting::node_attrs:
      if (!g.has_attrs()) throw invalid_parameter("weighting=attrs requires node attributes");
      return *g.node_attrs();
    case Weighting::degree: {
      std::vector<double> out(g.n(), 0.0);
      if (g.n() <= 1) return out;
      const auto deg = g.degrees();
      const double denom = static_cast<double>(g.n() - 1);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(deg[i]) / denom;
      return out;
    }
  }
  return {};
}

namespace detail {

struct ChunkResult {
  std::uint64_t hits = 0;
  double sum = 0.0;
};

template <EdgeMembership Oracle>
DensityEstimate run_sampler(std::uint64_t n, const Pattern& pattern, const Oracle& oracle,
                            const std::vector<double>& weights, const SamplingConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t n_samples =
      config.explicit_n_samples ? *config.explicit_n_samples : required_samples(config.epsilon, config.delta);
  const std::uint64_t chunks = chunk_count(n_samples);
  const std::uint32_t k = pattern.k;
  const bool weighted = !weights.empty();
  std::vector<ChunkResult> partial(chunks);

  for_each_chunk(chunks, resolve_threads(config.threads, chunks), [&](std::uint64_t c) {
    Xoshiro256 rng(derive_seed(config.seed, {c}));
    std::array<node_t, kMaxPatternNodes> f{};
    const std::span<const node_t> fs(f.data(), k);
    ChunkResult r;
    const std::uint64_t len = chunk_length(n_samples, c);
    for (std::uint64_t i = 0; i < len; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) f[j] = static_cast<node_t>(rng.below(n));
      if (!is_homomorphism(fs, pattern, oracle)) continue;
      if (weighted) {
        double x = 1.0;
        for (std::uint32_t j = 0; j < k; ++j) x *= weights[f[j]];
        if (x > 0.0) {
          ++r.hits;
          r.sum += x;
        }
      } else {
        ++r.hits;
      }
    }
    partial[c] = r;
  });

  DensityEstimate est;
  est.n_samples = n_samples;
  est.config = config;
  est.guarantee_holds = !config.explicit_n_samples.has_value();
  double sum = 0.0;
  for (const auto& r : partial) {
    est.hits += r.hits;
    sum += r.sum;
  }
  est.t_bar = weighted ? sum / static_cast<double>(n_samples)
                       : static_cast<double>(est.hits) / static_cast<double>(n_samples);
  est.t_bar = std::clamp(est.t_bar, 0.0, 1.0);
  est.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return est;
}

inline void check_sampler_inputs(const Graph& g, const Pattern& pattern, std::uint64_t oracle_n,
                                 const SamplingConfig& config) {
  config.validate();
  if (g.n() == 0) throw invalid_parameter("cannot sample morphisms into a graph with 0 nodes");
  if (pattern.k == 0 || pattern.k > kMaxPatternNodes) throw invalid_parameter("pattern size must be in 1..64");
  if (oracle_n != g.n()) throw invalid_parameter("edge oracle was built for a different graph");
}

}  // namespace detail

/// Monte-Carlo estimate of the homomorphism density t(F, G).
///
/// Draws N uniform maps V(F) -> V(G) and averages X_i = [f_i is a
/// homomorphism] * prod_u w(f_i(u)), with w = 1 (unweighted), the node
/// attribute, or deg/(n-1). With an exact oracle and N from
/// required_samples, P(|t_bar - t| > epsilon) <= delta. A Bloom oracle can
/// only over-report edges, so its estimate is never below the exact one for
/// the same seed.
///
/// The result depends only on (graph, pattern, oracle answers, config.seed,
/// N, weighting), never on config.threads.
template <EdgeMembership Oracle>
DensityEstimate sample_density(const Graph& g, const Pattern& pattern, const Oracle& oracle,
                               const SamplingConfig& config) {
  detail::check_sampler_inputs(g, pattern, oracle.node_count(), config);
  return detail::run_sampler(g.n(), pattern, oracle, node_weights(g, config.weighting), config);
}

inline DensityEstimate sample_density(const Graph& g, const Pattern& pattern, const EdgeOracle& oracle,
                                      const SamplingConfig& config) {
  return oracle.visit([&](const auto& o) { return sample_density(g, pattern, o, config); });
}

/// Seed used for the i-th pattern of a batched call.
inline std::uint64_t pattern_seed(std::uint64_t seed, std::uint64_t pattern_index) {
  return derive_seed(seed, {pattern_index});
}

/// Element i equals sample_density(g, patterns[i], oracle, config) with
/// config.seed replaced by pattern_seed(config.seed, i).
template <typename Oracle>
std::vector<DensityEstimate> sample_density_many(const Graph& g, const PatternFamily& patterns,
                                                 const Oracle& oracle, const SamplingConfig& config) {
  std::vector<DensityEstimate> out;
  out.reserve(patterns.size());
  const auto weights = node_weights(g, config.weighting);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    SamplingConfig c = config;
    c.seed = pattern_seed(config.seed, i);
    detail::check_sampler_inputs(g, patterns[i], oracle.node_count(), c);
    if constexpr (std::is_same_v<Oracle, EdgeOracle>)
      out.push_back(oracle.visit([&](const auto& o) { return detail::run_sampler(g.n(), patterns[i], o, weights, c); }));
    else
      out.push_back(detail::run_sampler(g.n(), patterns[i], oracle, weights, c));
  }
  return out;
}

}  // namespace homdens
