#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "homdens/edge_oracle.hpp"
#include "homdens/graph.hpp"
#include "homdens/io.hpp"
#include "homdens/random.hpp"
#include "homdens/sampler.hpp"

namespace homdens {

enum class FilterChoice { automatic, exact, bloom };

/// Below this node count `automatic` picks the exact oracle.
inline constexpr std::uint64_t kAutoBloomNodes = 10'000;

struct FilterOptions {
  FilterChoice choice = FilterChoice::automatic;
  double fpr = kDefaultFpr;
};

inline FilterChoice parse_filter_choice(const std::string& s) {
  if (s == "auto") return FilterChoice::automatic;
  if (s == "exact") return FilterChoice::exact;
  if (s == "bloom") return FilterChoice::bloom;
  throw invalid_parameter("unknown filter '" + s + "' (expected auto|exact|bloom)");
}

/// Oracle for g under the given choice. Edgeless graphs always get the exact
/// set: a Bloom filter needs at least one item and would answer the same.
inline EdgeOracle make_oracle(const Graph& g, const FilterOptions& opts) {
  OracleKind kind = OracleKind::exact;
  if (opts.choice == FilterChoice::bloom) kind = OracleKind::bloom;
  if (opts.choice == FilterChoice::automatic && g.n() >= kAutoBloomNodes) kind = OracleKind::bloom;
  if (g.m() == 0) kind = OracleKind::exact;
  return EdgeOracle::build(g, kind, opts.fpr);
}

struct EmbeddingRecord {
  std::string id;
  std::string label;
  std::uint64_t n_nodes = 0;
  std::vector<double> features;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// Node count plus sampled densities of every pattern; config.seed is the
/// graph's seed and feature i uses pattern_seed(config.seed, i).
inline EmbeddingRecord embed_graph(const Graph& g, const PatternFamily& patterns, const SamplingConfig& config,
                                   const FilterOptions& filter = {}) {
  if (g.n() == 0) throw invalid_parameter("cannot embed a graph with 0 nodes");
  const EdgeOracle oracle = make_oracle(g, filter);
  EmbeddingRecord rec;
  rec.n_nodes = g.n();
  rec.features.reserve(patterns.size());
  for (const auto& est : sample_density_many(g, patterns, oracle, config)) rec.features.push_back(est.t_bar);
  return rec;
}

/// Seed for the graph at `position` in replicate `sample_index`.
inline std::uint64_t graph_seed(std::uint64_t seed, std::uint64_t sample_index, std::uint64_t position) {
  return derive_seed(seed, {sample_index, position});
}

struct EmbedFailure {
  std::string id;
  std::string message;
};

struct EmbedResult {
  std::vector<EmbeddingRecord> records;
  std::vector<EmbedFailure> failures;
};

/// Embeds every record; graphs run in parallel on `threads` workers (0 = all
/// cores) with one sampler thread each. Output keeps input order, and a
/// record that fails is reported in `failures` instead of aborting the run.
inline EmbedResult embed_dataset(const std::vector<DatasetRecord>& records, const PatternFamily& patterns,
                                 const SamplingConfig& config, const FilterOptions& filter,
                                 std::uint64_t sample_index, unsigned threads = 0) {
  config.validate();
  const std::size_t count = records.size();
  std::vector<EmbeddingRecord> out(count);
  std::vector<std::string> errors(count);
  std::vector<char> ok(count, 0);

  auto embed_one = [&](std::size_t i) {
    SamplingConfig c = config;
    c.seed = graph_seed(config.seed, sample_index, i);
    c.threads = 1;
    try {
      out[i] = embed_graph(records[i].graph, patterns, c, filter);
      out[i].id = records[i].id;
      out[i].label = records[i].label;
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) embed_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) embed_one(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  EmbedResult result;
  for (std::size_t i = 0; i < count; ++i) {
    if (ok[i])
      result.records.push_back(std::move(out[i]));
    else
      result.failures.push_back({records[i].id, errors[i]});
  }
  return result;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace detail

/// At least nine significant digits: fixed with nine decimals from 0.1 up,
/// scientific below.
inline std::string format_density(double v) {
  char buf[64];
  if (v == 0.0 || v >= 0.1)
    std::snprintf(buf, sizeof buf, "%.9f", v);
  else
    std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

/// CSV with header "id,label,n,t_0,...,t_{K-1}" and one row per record.
// `width` fixes the feature column count; by default it is taken from the first record.
inline std::string write_embeddings_csv(const std::vector<EmbeddingRecord>& records,
                                        std::optional<std::size_t> width_hint = std::nullopt) {
  const std::size_t width = width_hint ? *width_hint : records.empty() ? 0 : records.front().features.size();
  for (const auto& r : records)
    if (r.features.size() != width)
      throw invalid_parameter("record '" + r.id + "' has " + std::to_string(r.features.size()) +
                              " features, expected " + std::to_string(width));
  std::string out = "id,label,n";
  for (std::size_t i = 0; i < width; ++i) out += ",t_" + std::to_string(i);
  out += '\n';
  for (const auto& r : records) {
    out += detail::csv_field(r.id);
    out += ',';
    out += detail::csv_field(r.label);
    out += ',';
    out += std::to_string(r.n_nodes);
    for (double f : r.features) {
      out += ',';
      out += format_density(f);
    }
    out += '\n';
  }
  return out;
}

}  // namespace homdens
