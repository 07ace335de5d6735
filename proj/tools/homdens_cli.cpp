// homdens: command-line front end for sampled homomorphism densities.
//
//   homdens density --graph G.edges --pattern K3 --epsilon 0.01 --seed 7
//   homdens embed   --dataset data.jsonl --patterns atlas:10 --out emb.csv
//   homdens bench   --ns 1000,10000,100000 --pattern K3 --out bench.csv
//   homdens gen-er  --n 1000 --p 0.01 --seed 1 --out g.edges
//   homdens atlas   --count 10
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "homdens/homdens.hpp"

namespace {

using namespace homdens;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct SamplingFlags {
  double epsilon = 0.01;
  double delta = 0.05;
  std::optional<double> confidence;
  std::uint64_t seed = 0;
  std::string filter = "exact";
  double fpr = kDefaultFpr;
  std::string weights = "none";
  unsigned threads = 0;
  std::optional<std::uint64_t> samples;

  void add_to(CLI::App* app, const std::string& default_filter) {
    filter = default_filter;
    app->add_option("--epsilon", epsilon, "additive precision")->check(CLI::PositiveNumber)->capture_default_str();
    auto* d = app->add_option("--delta", delta, "failure probability")
                  ->check(CLI::Range(0.0, 1.0))
                  ->capture_default_str();
    app->add_option("--confidence", confidence, "confidence 1-delta")->check(CLI::Range(0.0, 1.0))->excludes(d);
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--filter", filter, "edge oracle")
        ->check(CLI::IsMember({"exact", "bloom", "auto"}))
        ->capture_default_str();
    app->add_option("--fpr", fpr, "bloom false-positive rate")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--weights", weights, "weighting mode")
        ->check(CLI::IsMember({"none", "attrs", "degree"}))
        ->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    app->add_option("--samples", samples, "override the sample count (drops the precision guarantee)")
        ->check(CLI::PositiveNumber);
  }

  SamplingConfig config() const {
    SamplingConfig c;
    c.epsilon = epsilon;
    c.delta = confidence ? 1.0 - *confidence : delta;
    c.seed = seed;
    c.weighting = parse_weighting(weights);
    c.threads = threads;
    c.explicit_n_samples = samples;
    return c;
  }

  FilterOptions filter_options() const { return {parse_filter_choice(filter), fpr}; }
};

// K<k>, atlas:<index>, or a path to an edge-list file.
Pattern resolve_pattern(const std::string& spec) {
  if (spec.size() >= 2 && spec[0] == 'K' && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
    const unsigned long k = std::stoul(spec.substr(1));
    if (k < 1 || k > kMaxPatternNodes) throw invalid_parameter("clique size out of range in '" + spec + "'");
    return clique(static_cast<std::uint32_t>(k));
  }
  if (spec.rfind("atlas:", 0) == 0) {
    const std::string idx = spec.substr(6);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
      throw invalid_parameter("malformed atlas index in '" + spec + "'");
    return atlas_pattern(std::stoul(idx));
  }
  return Pattern::from_graph(read_edge_list_file(spec), spec);
}

PatternFamily resolve_family(const std::string& spec) {
  if (spec.rfind("atlas:", 0) != 0) throw invalid_parameter("--patterns expects atlas:COUNT, got '" + spec + "'");
  const std::string cnt = spec.substr(6);
  if (cnt.empty() || cnt.find_first_not_of("0123456789") != std::string::npos)
    throw invalid_parameter("malformed atlas count in '" + spec + "'");
  return atlas_connected(std::stoul(cnt));
}

void emit(const std::optional<std::string>& path, const std::string& data) {
  if (path)
    write_file(*path, data);
  else
    std::cout << data;
}

std::vector<std::uint64_t> parse_sizes(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      // Accept scientific shorthand such as 1e5.
      const double d = std::stod(item, &used);
      if (used != item.size() || d < 0 || d != static_cast<double>(static_cast<unsigned long long>(d)))
        throw std::invalid_argument(item);
      v = static_cast<unsigned long long>(d);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--ns", "'" + item + "' is not a non-negative integer");
    }
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--ns", "empty size list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampled graph homomorphism densities"};
  app.require_subcommand(1);

  // density
  auto* density = app.add_subcommand("density", "estimate t(F,G) for one pattern");
  std::string graph_path, pattern_spec;
  SamplingFlags dflags;
  density->add_option("--graph", graph_path, "edge-list file")->required();
  density->add_option("--pattern", pattern_spec, "K2..K5, atlas:IDX or an edge-list file")->required();
  dflags.add_to(density, "exact");

  // embed
  auto* embed = app.add_subcommand("embed", "embed a dataset into density feature vectors");
  std::string dataset_path, family_spec = "atlas:10";
  std::uint64_t sample_index = 0;
  std::optional<std::string> embed_out;
  SamplingFlags eflags;
  embed->add_option("--dataset", dataset_path, "newline-delimited JSON dataset")->required();
  embed->add_option("--patterns", family_spec, "pattern family atlas:COUNT")->capture_default_str();
  embed->add_option("--sample-index", sample_index, "independent replicate index")->capture_default_str();
  embed->add_option("--out", embed_out, "output CSV (default stdout)");
  eflags.add_to(embed, "auto");

  // bench
  auto* bench = app.add_subcommand("bench", "scalability benchmark on G(n, log(n)^2/n)");
  std::string ns = "1000,10000,100000", bench_pattern = "K3", variants = "exact:0.005,bloom:0.005,bloom:0.01";
  std::uint64_t bench_seed = 0;
  std::optional<std::string> bench_out;
  BenchOptions bopts;
  bench->add_option("--ns", ns, "comma-separated node counts")->capture_default_str();
  bench->add_option("--pattern", bench_pattern, "pattern (or comma list of patterns)")->capture_default_str();
  bench->add_option("--variants", variants, "ORACLE:EPSILON list")->capture_default_str();
  bench->add_option("--seed", bench_seed, "random seed")->capture_default_str();
  bench->add_option("--out", bench_out, "output CSV (default stdout)");
  bench->add_option("--reps", bopts.repetitions, "timed repetitions")->check(CLI::Range(1, 1000))->capture_default_str();
  bench->add_option("--warmup", bopts.warmup, "warm-up runs")->check(CLI::Range(0, 100))->capture_default_str();
  bench->add_option("--threads", bopts.threads, "sampler threads (0 = all cores)")->capture_default_str();
  bench->add_option("--fpr", bopts.fpr, "bloom false-positive rate")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench->add_option("--delta", bopts.delta, "failure probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();

  // gen-er
  auto* gen = app.add_subcommand("gen-er", "generate an Erdos-Renyi graph");
  std::uint64_t gen_n = 0, gen_seed = 0;
  double gen_p = 0.0;
  std::optional<std::string> gen_out;
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--p", gen_p, "edge probability")->required()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output edge list (default stdout)");

  // atlas
  auto* atlas = app.add_subcommand("atlas", "list the first COUNT connected atlas patterns");
  std::size_t atlas_count = 10;
  std::optional<std::string> atlas_out;
  atlas->add_option("--count", atlas_count, "number of patterns")
      ->check(CLI::Range(std::size_t{1}, kAtlasSize))
      ->capture_default_str();
  atlas->add_option("--out", atlas_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*density) {
      const Graph g = read_edge_list_file(graph_path);
      const Pattern pattern = resolve_pattern(pattern_spec);
      const SamplingConfig cfg = dflags.config();
      const EdgeOracle oracle = make_oracle(g, dflags.filter_options());
      const DensityEstimate est = sample_density(g, pattern, oracle, cfg);
      nlohmann::ordered_json j;
      j["t"] = est.t_bar;
      j["N"] = est.n_samples;
      j["epsilon"] = cfg.epsilon;
      j["delta"] = cfg.delta;
      j["n_nodes"] = g.n();
      j["pattern"] = pattern.name;
      j["elapsed_ms"] = est.elapsed_ms;
      std::cout << j.dump() << '\n';
    } else if (*embed) {
      std::ifstream in(dataset_path);
      if (!in) throw parse_error("cannot open '" + dataset_path + "'");
      const auto records = parse_dataset(in);
      const auto family = resolve_family(family_spec);
      SamplingConfig cfg = eflags.config();
      const unsigned threads = cfg.threads;
      const auto result = embed_dataset(records, family, cfg, eflags.filter_options(), sample_index, threads);
      emit(embed_out, write_embeddings_csv(result.records, family.size()));
      for (const auto& f : result.failures) std::cerr << "failed: " << f.id << ": " << f.message << '\n';
      if (!result.failures.empty()) {
        std::cerr << result.failures.size() << " of " << records.size() << " records failed\n";
        return kDataError;
      }
    } else if (*bench) {
      const auto sizes = parse_sizes(ns);
      const auto vars = parse_variants(variants);
      std::vector<Pattern> patterns;
      std::stringstream ss(bench_pattern);
      for (std::string p; std::getline(ss, p, ',');) patterns.push_back(resolve_pattern(p));
      std::vector<BenchResult> rows;
      for (const auto& p : patterns) {
        auto r = run_bench(sizes, p, vars, bench_seed, bopts);
        rows.insert(rows.end(), r.begin(), r.end());
      }
      emit(bench_out, write_bench_csv(rows));
      for (const auto& r : rows)
        if (r.error) std::cerr << "row n=" << r.n << " " << to_string(r.oracle) << ":" << r.epsilon << " failed: " << *r.error << '\n';
    } else if (*gen) {
      emit(gen_out, write_edge_list(generate_er(gen_n, gen_p, gen_seed)));
    } else if (*atlas) {
      std::string out;
      for (const auto& p : atlas_connected(atlas_count))
        out += write_dataset_record(p.name, p.as_graph(), std::to_string(p.k)) + "\n";
      emit(atlas_out, out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsageError;
  } catch (const invalid_parameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
