#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "homdens/edge_oracle.hpp"
#include "homdens/erdos_renyi.hpp"
#include "homdens/graph.hpp"
#include "homdens/random.hpp"
#include "homdens/sampler.hpp"

namespace homdens {

struct BenchVariant {
  OracleKind oracle = OracleKind::bloom;
  double epsilon = 0.01;
};

/// Parses "exact:0.005,bloom:0.005,bloom:0.01".
inline std::vector<BenchVariant> parse_variants(const std::string& spec) {
  std::vector<BenchVariant> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const std::string item = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw invalid_parameter("variant '" + item + "' is not ORACLE:EPSILON");
    BenchVariant v;
    v.oracle = parse_oracle_kind(item.substr(0, colon));
    try {
      std::size_t used = 0;
      v.epsilon = std::stod(item.substr(colon + 1), &used);
      if (used != item.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw invalid_parameter("variant '" + item + "' has a malformed epsilon");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// The three series of the scalability figure.
inline std::vector<BenchVariant> default_variants() {
  return {{OracleKind::exact, 5e-3}, {OracleKind::bloom, 5e-3}, {OracleKind::bloom, 1e-2}};
}

struct BenchOptions {
  double delta = 0.05;
  double fpr = kDefaultFpr;
  int warmup = 1;
  int repetitions = 5;
  unsigned threads = 0;
};

struct BenchResult {
  std::uint64_t n = 0;
  std::uint64_t edges = 0;
  std::string pattern;
  OracleKind oracle = OracleKind::exact;
  double epsilon = 0.0;
  std::uint64_t n_samples = 0;
  double build_ms = 0.0;
  double sample_ms = 0.0;
  double t_bar = 0.0;
  std::optional<std::string> error;
};

/// Seeds for the graph and the sampler of the row with node count n.
inline std::uint64_t bench_graph_seed(std::uint64_t seed, std::uint64_t n) { return derive_seed(seed, {n, 0}); }
inline std::uint64_t bench_sample_seed(std::uint64_t seed, std::uint64_t n) { return derive_seed(seed, {n, 1}); }

namespace detail {

template <typename F>
double median_ms(int warmup, int reps, F&& f) {
  for (int i = 0; i < warmup; ++i) f();
  std::vector<double> t;
  for (int i = 0; i < std::max(1, reps); ++i) {
    const auto s = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t mid = t.size() / 2;
  return t.size() % 2 ? t[mid] : 0.5 * (t[mid - 1] + t[mid]);
}

inline BenchResult bench_row(const Graph& g, const Pattern& pattern, const BenchVariant& v, std::uint64_t seed,
                             const BenchOptions& opts) {
  BenchResult r;
  r.n = g.n();
  r.edges = g.m();
  r.pattern = pattern.name;
  r.oracle = v.oracle;
  r.epsilon = v.epsilon;
  try {
    r.build_ms = median_ms(opts.warmup, opts.repetitions, [&] {
      auto o = EdgeOracle::build(g, v.oracle, opts.fpr);
      (void)o;
    });
    const EdgeOracle oracle = EdgeOracle::build(g, v.oracle, opts.fpr);
    SamplingConfig cfg;
    cfg.epsilon = v.epsilon;
    cfg.delta = opts.delta;
    cfg.seed = bench_sample_seed(seed, g.n());
    cfg.threads = opts.threads;
    DensityEstimate est;
    r.sample_ms = median_ms(opts.warmup, opts.repetitions, [&] { est = sample_density(g, pattern, oracle, cfg); });
    r.t_bar = est.t_bar;
    r.n_samples = est.n_samples;
  } catch (const std::bad_alloc&) {
    r.error = "out of memory";
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace detail

/// For each n: G(n, log(n)^2/n) with seed bench_graph_seed(seed, n), then one
/// row per variant with build and sampling timed separately (median of
/// opts.repetitions after opts.warmup runs). Rows run sequentially; a row
/// that fails carries `error` and the rest continue.
inline std::vector<BenchResult> run_bench(const std::vector<std::uint64_t>& sizes, const Pattern& pattern,
                                          const std::vector<BenchVariant>& variants, std::uint64_t seed,
                                          const BenchOptions& opts = {}) {
  for (auto n : sizes)
    if (n < 10) throw invalid_parameter("bench sizes must be >= 10");
  std::vector<BenchResult> out;
  for (auto n : sizes) {
    std::optional<Graph> g;
    try {
      g = generate_er(n, sparse_threshold_p(n), bench_graph_seed(seed, n));
    } catch (const std::bad_alloc&) {
      for (const auto& v : variants) {
        BenchResult r;
        r.n = n;
        r.pattern = pattern.name;
        r.oracle = v.oracle;
        r.epsilon = v.epsilon;
        r.error = "out of memory generating graph";
        out.push_back(r);
      }
      continue;
    }
    for (const auto& v : variants) out.push_back(detail::bench_row(*g, pattern, v, seed, opts));
  }
  return out;
}

/// Per-pattern rows on one G(n, log(n)^2/n) instance.
inline std::vector<BenchResult> bench_patterns(std::uint64_t n, const PatternFamily& patterns,
                                               const std::vector<BenchVariant>& variants, std::uint64_t seed,
                                               const BenchOptions& opts = {}) {
  if (n < 10) throw invalid_parameter("bench sizes must be >= 10");
  const Graph g = generate_er(n, sparse_threshold_p(n), bench_graph_seed(seed, n));
  std::vector<BenchResult> out;
  for (const auto& p : patterns)
    for (const auto& v : variants) out.push_back(detail::bench_row(g, p, v, seed, opts));
  return out;
}

/// Header "n,pattern,oracle,epsilon,N,build_ms,sample_ms,t_bar"; failed rows
/// are left out.
inline std::string write_bench_csv(const std::vector<BenchResult>& rows) {
  std::string out = "n,pattern,oracle,epsilon,N,build_ms,sample_ms,t_bar\n";
  char buf[256];
  for (const auto& r : rows) {
    if (r.error) continue;
    std::snprintf(buf, sizeof buf, "%llu,%s,%s,%g,%llu,%.3f,%.3f,%.9g\n", static_cast<unsigned long long>(r.n),
                  r.pattern.c_str(), to_string(r.oracle).c_str(), r.epsilon,
                  static_cast<unsigned long long>(r.n_samples), r.build_ms, r.sample_ms, r.t_bar);
    out += buf;
  }
  return out;
}

}  // namespace homdens
