#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homdens/atlas.hpp"
#include "homdens/erdos_renyi.hpp"
#include "homdens/exact.hpp"
#include "homdens/sampler.hpp"

using namespace homdens;

namespace {

const Graph kTriangle(3, {{0, 1}, {1, 2}, {0, 2}});
const Graph kPath3(3, {{0, 1}, {1, 2}});

SamplingConfig cfg(double eps, std::uint64_t seed, unsigned threads = 1) {
  SamplingConfig c;
  c.epsilon = eps;
  c.delta = 0.05;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

// ceil(ln(2/delta) / (2 eps^2)) evaluated independently: ln 40 = 3.68888.
TEST(RequiredSamples, SamplingBound) {
  EXPECT_EQ(required_samples(0.1, 0.05), 185u);
  EXPECT_EQ(required_samples(0.01, 0.05), 18445u);
  EXPECT_EQ(required_samples(0.005, 0.05), 73778u);
  EXPECT_EQ(required_samples(0.05, 0.05), 738u);
}

TEST(RequiredSamples, RejectsBadParameters) {
  EXPECT_THROW(required_samples(0.0, 0.05), invalid_parameter);
  EXPECT_THROW(required_samples(-0.1, 0.05), invalid_parameter);
  EXPECT_THROW(required_samples(0.1, 0.0), invalid_parameter);
  EXPECT_THROW(required_samples(0.1, 1.0), invalid_parameter);
  EXPECT_THROW(required_samples(1e-12, 0.05), invalid_parameter);
}

TEST(SampleMorphisms, SingleNodeTargetGivesZeroMap) {
  for (const auto& f : sample_morphisms(1, 4, 100, 3)) EXPECT_EQ(f, (Morphism{0, 0, 0, 0}));
}

TEST(SampleMorphisms, DeterministicAndSeedSensitive) {
  EXPECT_EQ(sample_morphisms(1000, 3, 9000, 5), sample_morphisms(1000, 3, 9000, 5));
  EXPECT_NE(sample_morphisms(1000, 3, 10, 5), sample_morphisms(1000, 3, 10, 6));
}

TEST(SampleMorphisms, ChunkStreamsAreIndependentOfTotalCount) {
  // The first 5000 draws of a 9000-draw stream equal a 5000-draw stream.
  const auto a = sample_morphisms(77, 2, 9000, 11);
  const auto b = sample_morphisms(77, 2, 5000, 11);
  EXPECT_TRUE(std::equal(b.begin(), b.end(), a.begin()));
}

TEST(SampleMorphisms, Errors) {
  EXPECT_THROW(sample_morphisms(0, 2, 10, 1), invalid_parameter);
  EXPECT_THROW(sample_morphisms(5, 0, 10, 1), invalid_parameter);
}

// n=10, N=1e5, k=1: each count within 3 sigma of 1e4 (sigma = sqrt(N p (1-p)))
// and the chi-square statistic under the 0.1% critical value for 9 dof.
TEST(SampleMorphisms, UniformFrequencies) {
  std::vector<double> counts(10, 0);
  for_each_morphism(10, 1, 100'000, 2024, [&](std::span<const node_t> f) { counts[f[0]] += 1; });
  const double sigma = std::sqrt(1e5 * 0.1 * 0.9);
  double chi2 = 0;
  for (double c : counts) {
    EXPECT_NEAR(c, 1e4, 3 * sigma);
    chi2 += (c - 1e4) * (c - 1e4) / 1e4;
  }
  EXPECT_LT(chi2, 27.88);
}

// Every position of a k-tuple is uniform, not just the first.
TEST(SampleMorphisms, UniformPerPosition) {
  std::vector<std::vector<double>> counts(4, std::vector<double>(3, 0));
  for_each_morphism(3, 4, 60'000, 8, [&](std::span<const node_t> f) {
    for (std::size_t j = 0; j < 4; ++j) counts[j][f[j]] += 1;
  });
  const double sigma = std::sqrt(6e4 / 3.0 * 2.0 / 3.0);
  for (const auto& row : counts)
    for (double c : row) EXPECT_NEAR(c, 2e4, 4 * sigma);
}

TEST(IsHomomorphism, Examples) {
  const auto k3 = build_exact(kTriangle);
  const auto p3 = build_exact(kPath3);
  const node_t f01[] = {0, 1};
  const node_t f22[] = {2, 2};
  const node_t f012[] = {0, 1, 2};
  EXPECT_TRUE(is_homomorphism(f01, clique(2), k3));
  EXPECT_FALSE(is_homomorphism(f22, clique(2), k3));
  EXPECT_FALSE(is_homomorphism(f012, clique(3), p3));
  EXPECT_TRUE(is_homomorphism(f012, path(3), p3));
}

TEST(IsHomomorphism, ShortCircuitsAtFirstFailure) {
  struct CountingOracle {
    mutable int queries = 0;
    bool contains(node_t, node_t) const {
      ++queries;
      return false;
    }
    std::uint64_t node_count() const { return 10; }
  } oracle;
  const node_t f[] = {0, 1, 2, 3, 4};
  EXPECT_FALSE(is_homomorphism(f, clique(5), oracle));
  EXPECT_EQ(oracle.queries, 1);
}

// The result does not depend on the order pattern edges are queried in.
TEST(IsHomomorphism, EdgeOrderInvariant) {
  const Graph g = generate_er(12, 0.5, 4);
  const auto o = build_exact(g);
  const auto fam = atlas_connected(31);
  Xoshiro256 rng(1);
  for (const auto& p : fam) {
    auto shuffled = p.edges;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Pattern q(p.k, shuffled);
    for (const auto& f : sample_morphisms(12, p.k, 500, rng()))
      ASSERT_EQ(is_homomorphism(f, p, o), is_homomorphism(f, q, o)) << p.name;
  }
}

TEST(SampleDensity, EdgelessPatternIsExactlyOne) {
  const Graph g = generate_er(50, 0.1, 1);
  const auto o = build_exact(g);
  for (std::uint32_t k = 1; k <= 5; ++k) {
    const auto est = sample_density(g, edgeless(k), o, cfg(0.05, k));
    EXPECT_EQ(est.t_bar, 1.0);
    EXPECT_EQ(est.hits, est.n_samples);
  }
}

// t(K2, K3) = 2m / n^2 = 6/9.
TEST(SampleDensity, EdgeDensityOfTriangle) {
  const auto o = build_exact(kTriangle);
  const auto est = sample_density(kTriangle, clique(2), o, cfg(0.01, 7));
  EXPECT_EQ(est.n_samples, 18445u);
  EXPECT_NEAR(est.t_bar, 2.0 / 3.0, 0.01);
  EXPECT_DOUBLE_EQ(est.t_bar, static_cast<double>(est.hits) / static_cast<double>(est.n_samples));
  EXPECT_TRUE(est.guarantee_holds);
}

TEST(SampleDensity, MeanOverSeedsIsUnbiased) {
  const Graph g = generate_er(40, 0.3, 10);
  const auto o = build_exact(g);
  const double exact = exact_hom(clique(2), g).density;
  ASSERT_DOUBLE_EQ(exact, 2.0 * static_cast<double>(g.m()) / 1600.0);
  double sum = 0;
  const int runs = 100;
  for (int s = 0; s < runs; ++s) sum += sample_density(g, clique(2), o, cfg(0.05, s)).t_bar;
  // Per-run sd <= 0.5/sqrt(738); mean of 100 runs has sd <= 0.00185.
  EXPECT_NEAR(sum / runs, exact, 4 * 0.5 / std::sqrt(738.0 * runs));
}

TEST(SampleDensity, ExplicitSampleCountDropsGuarantee) {
  auto c = cfg(0.01, 3);
  c.explicit_n_samples = 1000;
  const auto est = sample_density(kTriangle, clique(2), build_exact(kTriangle), c);
  EXPECT_EQ(est.n_samples, 1000u);
  EXPECT_FALSE(est.guarantee_holds);
}

TEST(SampleDensity, Errors) {
  const Graph empty(0, {});
  EXPECT_THROW(sample_density(empty, clique(2), build_exact(empty), cfg(0.1, 0)), invalid_parameter);
  auto c = cfg(0.1, 0);
  c.weighting = Weighting::node_attrs;
  EXPECT_THROW(sample_density(kTriangle, clique(2), build_exact(kTriangle), c), invalid_parameter);
  const Graph other(5, {{0, 1}});
  EXPECT_THROW(sample_density(kTriangle, clique(2), build_exact(other), cfg(0.1, 0)), invalid_parameter);
  auto bad = cfg(0.1, 0);
  bad.delta = 1.5;
  EXPECT_THROW(sample_density(kTriangle, clique(2), build_exact(kTriangle), bad), invalid_parameter);
}

TEST(SampleDensity, ThreadCountDoesNotChangeResult) {
  const Graph g = generate_er(200, 0.1, 3);
  const auto o = EdgeOracle::build(g, OracleKind::bloom);
  for (Weighting w : {Weighting::unweighted, Weighting::degree}) {
    auto c = cfg(0.002, 17, 1);
    c.weighting = w;
    const auto ref = sample_density(g, clique(3), o, c);
    ASSERT_GT(ref.n_samples, 20 * kChunkSize);
    for (unsigned t : {2u, 4u, 8u, 0u}) {
      c.threads = t;
      const auto est = sample_density(g, clique(3), o, c);
      EXPECT_EQ(est.t_bar, ref.t_bar) << "threads=" << t;
      EXPECT_EQ(est.hits, ref.hits);
    }
  }
}

TEST(SampleDensity, BloomNeverBelowExact) {
  const Graph g = generate_er(60, 0.15, 12);
  const auto exact = EdgeOracle::build(g, OracleKind::exact);
  const auto bloom = EdgeOracle::build(g, OracleKind::bloom, 0.2);
  for (std::uint64_t s = 0; s < 20; ++s)
    for (const auto& p : {clique(2), clique(3), path(4)}) {
      const auto a = sample_density(g, p, exact, cfg(0.05, s));
      const auto b = sample_density(g, p, bloom, cfg(0.05, s));
      ASSERT_GE(b.t_bar, a.t_bar);
    }
}

TEST(SampleDensity, WeightedModes) {
  // attrs: single node weight 0.5 on a 1-node graph: E[prod] = 0.5^k.
  const Graph one(1, {}, std::vector<double>{0.5});
  auto c = cfg(0.05, 1);
  c.weighting = Weighting::node_attrs;
  EXPECT_DOUBLE_EQ(sample_density(one, edgeless(3), build_exact(one), c).t_bar, 0.125);
  // degree: n = 1 uses weight 0.
  c.weighting = Weighting::degree;
  const auto est = sample_density(one, edgeless(2), build_exact(one), c);
  EXPECT_EQ(est.t_bar, 0.0);
  EXPECT_EQ(est.hits, 0u);
  // degree on K3: every node has weight 2/2 = 1, so weighted equals unweighted.
  c.weighting = Weighting::degree;
  const auto w = sample_density(kTriangle, clique(3), build_exact(kTriangle), c);
  c.weighting = Weighting::unweighted;
  const auto u = sample_density(kTriangle, clique(3), build_exact(kTriangle), c);
  EXPECT_EQ(w.t_bar, u.t_bar);
}

// Weighted trials are the unweighted indicator times a product in [0,1], on
// the same morphism stream.
TEST(SampleDensity, UnweightedDominatesWeighted) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Graph base = generate_er(30, 0.3, s);
    std::vector<double> attrs(30);
    Xoshiro256 rng(s);
    for (auto& a : attrs) a = rng.uniform01();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e(base.edges().begin(), base.edges().end());
    const Graph g(30, e, attrs);
    const auto o = build_exact(g);
    for (const auto& p : atlas_connected(10)) {
      auto c = cfg(0.05, s);
      const double un = sample_density(g, p, o, c).t_bar;
      c.weighting = Weighting::node_attrs;
      const double wa = sample_density(g, p, o, c).t_bar;
      c.weighting = Weighting::degree;
      const double wd = sample_density(g, p, o, c).t_bar;
      ASSERT_GE(un, wa);
      ASSERT_GE(un, wd);
      ASSERT_GE(wa, 0.0);
      ASSERT_GE(wd, 0.0);
    }
  }
}

// Weighted estimate vs. exact expectation by enumeration over all maps.
TEST(SampleDensity, WeightedDensityWithinEpsilon) {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}}, std::vector<double>{0.2, 0.9, 0.6, 1.0});
  const Pattern p = clique(2);
  const auto adj = build_exact(g);
  auto weighted_exact = [&](const std::vector<double>& w) {
    double s = 0;
    for (node_t a = 0; a < 4; ++a)
      for (node_t b = 0; b < 4; ++b)
        if (adj.contains(a, b)) s += w[a] * w[b];
    return s / 16.0;
  };
  auto c = cfg(0.01, 5);
  c.weighting = Weighting::node_attrs;
  EXPECT_NEAR(sample_density(g, p, adj, c).t_bar, weighted_exact(*g.node_attrs()), 0.01);
  c.weighting = Weighting::degree;
  EXPECT_NEAR(sample_density(g, p, adj, c).t_bar, weighted_exact({2.0 / 3, 2.0 / 3, 1.0, 1.0 / 3}), 0.01);
}

TEST(SampleDensityMany, MatchesPerPatternCalls) {
  const Graph g = generate_er(80, 0.2, 6);
  const auto o = EdgeOracle::build(g, OracleKind::exact);
  const auto fam = atlas_connected(10);
  const auto c = cfg(0.05, 99);
  const auto many = sample_density_many(g, fam, o, c);
  ASSERT_EQ(many.size(), fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    auto ci = c;
    ci.seed = pattern_seed(c.seed, i);
    EXPECT_EQ(many[i].t_bar, sample_density(g, fam[i], o, ci).t_bar);
  }
  const auto again = sample_density_many(g, fam, o, c);
  for (std::size_t i = 0; i < fam.size(); ++i) EXPECT_EQ(again[i].t_bar, many[i].t_bar);
}

TEST(SampleDensityMany, K1IsOne) {
  const auto r = sample_density_many(kPath3, PatternFamily{atlas_pattern(0)}, build_exact(kPath3), cfg(0.1, 1));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].t_bar, 1.0);
}

TEST(SampleDensityMany, AtlasOnK5AllPositive) {
  const Graph k5 = clique(5).as_graph();
  const auto fam = atlas_connected(10);
  for (double d : density_vector_exact(k5, fam)) EXPECT_GT(d, 0.0);
  for (const auto& e : sample_density_many(k5, fam, build_exact(k5), cfg(0.05, 3))) EXPECT_GT(e.t_bar, 0.0);
}

// Coverage at small scale (the acceptance binary runs the full version).
TEST(SampleDensity, ChernoffCoverageSmall) {
  const auto fam = atlas_connected(10);
  int bad = 0, total = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Graph g = generate_er(20, 0.3, 1000 + s);
    const auto o = build_exact(g);
    const auto exact = density_vector_exact(g, fam);
    const auto est = sample_density_many(g, fam, o, cfg(0.05, s));
    for (std::size_t i = 0; i < fam.size(); ++i, ++total) bad += std::abs(est[i].t_bar - exact[i]) > 0.05;
  }
  EXPECT_LE(static_cast<double>(bad) / total, 0.05 + 0.03);
}

TEST(SampleDensity, RangeInAllModes) {
  const Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {0, 3}},
                std::vector<double>{1, 1, 1, 1, 1, 1});
  const auto o = build_exact(g);
  for (Weighting w : {Weighting::unweighted, Weighting::node_attrs, Weighting::degree})
    for (const auto& p : atlas_connected(31)) {
      auto c = cfg(0.1, 2);
      c.weighting = w;
      const auto est = sample_density(g, p, o, c);
      ASSERT_GE(est.t_bar, 0.0);
      ASSERT_LE(est.t_bar, 1.0);
    }
}
