#pragma once

#include <bit>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "homdens/error.hpp"
#include "homdens/graph.hpp"
#include "homdens/random.hpp"

namespace homdens {

/// Anything that answers "is {u,v} an edge of G".
template <typename O>
concept EdgeMembership = requires(const O& o, node_t u, node_t v) {
  { o.contains(u, v) } -> std::convertible_to<bool>;
  { o.node_count() } -> std::convertible_to<std::uint64_t>;
};

namespace detail {

inline std::uint64_t load_le64(const unsigned char* p) noexcept {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void store_le64(unsigned char* p, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

}  // namespace detail

struct Hash128 {
  std::uint64_t h1;
  std::uint64_t h2;
};

/// MurmurHash3_x64_128 (Appleby, public domain) with both 64-bit lanes
/// initialised to `seed`. For a 32-bit seed this is bit-identical to the
/// reference implementation.
inline Hash128 murmur3_x64_128(std::span<const unsigned char> data, std::uint64_t seed) noexcept {
  constexpr std::uint64_t c1 = 0x87c37b91114253d5ULL;
  constexpr std::uint64_t c2 = 0x4cf5ad432745937fULL;
  const std::size_t len = data.size();
  const std::size_t nblocks = len / 16;
  std::uint64_t h1 = seed;
  std::uint64_t h2 = seed;
  const unsigned char* p = data.data();

  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint64_t k1 = detail::load_le64(p + 16 * i);
    std::uint64_t k2 = detail::load_le64(p + 16 * i + 8);
    k1 *= c1; k1 = std::rotl(k1, 31); k1 *= c2; h1 ^= k1;
    h1 = std::rotl(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;
    k2 *= c2; k2 = std::rotl(k2, 33); k2 *= c1; h2 ^= k2;
    h2 = std::rotl(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
  }

  const unsigned char* tail = p + nblocks * 16;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  switch (len & 15) {
    case 15: k2 ^= std::uint64_t{tail[14]} << 48; [[fallthrough]];
    case 14: k2 ^= std::uint64_t{tail[13]} << 40; [[fallthrough]];
    case 13: k2 ^= std::uint64_t{tail[12]} << 32; [[fallthrough]];
    case 12: k2 ^= std::uint64_t{tail[11]} << 24; [[fallthrough]];
    case 11: k2 ^= std::uint64_t{tail[10]} << 16; [[fallthrough]];
    case 10: k2 ^= std::uint64_t{tail[9]} << 8; [[fallthrough]];
    case 9:
      k2 ^= std::uint64_t{tail[8]};
      k2 *= c2; k2 = std::rotl(k2, 33); k2 *= c1; h2 ^= k2;
      [[fallthrough]];
    case 8: k1 ^= std::uint64_t{tail[7]} << 56; [[fallthrough]];
    case 7: k1 ^= std::uint64_t{tail[6]} << 48; [[fallthrough]];
    case 6: k1 ^= std::uint64_t{tail[5]} << 40; [[fallthrough]];
    case 5: k1 ^= std::uint64_t{tail[4]} << 32; [[fallthrough]];
    case 4: k1 ^= std::uint64_t{tail[3]} << 24; [[fallthrough]];
    case 3: k1 ^= std::uint64_t{tail[2]} << 16; [[fallthrough]];
    case 2: k1 ^= std::uint64_t{tail[1]} << 8; [[fallthrough]];
    case 1:
      k1 ^= std::uint64_t{tail[0]};
      k1 *= c1; k1 = std::rotl(k1, 31); k1 *= c2; h1 ^= k1;
      break;
    default:
      break;
  }

  h1 ^= len;
  h2 ^= len;
  h1 += h2;
  h2 += h1;
  h1 = detail::fmix64(h1);
  h2 = detail::fmix64(h2);
  h1 += h2;
  h2 += h1;
  return {h1, h2};
}

/// Hash of the canonical pair (min,max) encoded as two little-endian u64.
inline Hash128 hash_edge(node_t u, node_t v, std::uint64_t seed) noexcept {
  if (u > v) std::swap(u, v);
  unsigned char key[16];
  detail::store_le64(key, u);
  detail::store_le64(key + 8, v);
  return murmur3_x64_128(key, seed);
}

/// Exact edge set: open-addressing hash table over packed canonical pairs,
/// load factor at most 1/2.
class ExactEdgeSet {
 public:
  ExactEdgeSet() = default;

  explicit ExactEdgeSet(const Graph& g) : n_(g.n()) {
    std::size_t cap = 16;
    while (cap < 2 * g.m()) cap <<= 1;
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
    for (auto [u, v] : g.edges()) insert(pack(u, v));
    size_ = g.m();
  }

  bool contains(node_t u, node_t v) const noexcept {
    assert(u < n_ && v < n_);
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = pack(u, v);
    for (std::size_t i = slot_of(key);; i = (i + 1) & mask_) {
      const std::uint64_t s = slots_[i];
      if (s == key) return true;
      if (s == kEmpty) return false;
    }
  }

  std::uint64_t node_count() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t memory_bytes() const noexcept { return slots_.size() * sizeof(std::uint64_t); }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  static constexpr std::uint64_t pack(node_t u, node_t v) noexcept {
    return (std::uint64_t{u} << 32) | std::uint64_t{v};
  }
  std::size_t slot_of(std::uint64_t key) const noexcept { return splitmix64(key) & mask_; }

  void insert(std::uint64_t key) {
    std::size_t i = slot_of(key);
    while (slots_[i] != kEmpty) i = (i + 1) & mask_;
    slots_[i] = key;
  }

  std::uint64_t n_ = 0;
  std::size_t size_ = 0;
  std::size_t mask_ = 0;
  std::vector<std::uint64_t> slots_;
};

inline ExactEdgeSet build_exact(const Graph& g) { return ExactEdgeSet(g); }

inline constexpr double kDefaultFpr = 0.01;
inline constexpr std::uint64_t kBloomHashSeed = 0x9747b28cULL;
inline constexpr std::uint64_t kBloomMinBits = 64;

/// m_bits = ceil(-items * ln(fpr) / ln(2)^2), at least kBloomMinBits.
inline std::uint64_t bloom_bits_for(std::uint64_t items, double fpr) {
  const double ln2 = std::log(2.0);
  const double bits = std::ceil(-static_cast<double>(items) * std::log(fpr) / (ln2 * ln2));
  return std::max<std::uint64_t>(kBloomMinBits, static_cast<std::uint64_t>(bits));
}

/// h = max(1, round(m_bits / items * ln 2)).
inline std::uint32_t bloom_hashes_for(std::uint64_t m_bits, std::uint64_t items) {
  const double h = std::round(static_cast<double>(m_bits) / static_cast<double>(items) * std::log(2.0));
  return static_cast<std::uint32_t>(std::max(1.0, h));
}

/// Bloom filter over E(G) with double hashing:
///   idx_i = (h1 + i * (h2 | 1)) mod m_bits,  i = 0..h-1
/// where (h1, h2) = murmur3_x64_128(le64(min) ++ le64(max), hash_seed).
/// Self-pairs are answered false without touching the bit array.
class BloomEdgeFilter {
 public:
  static constexpr std::uint32_t kMagic = 0x46424448;  // "HDBF" little-endian
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 4 + 8 + 8 + 8 + 8;

  BloomEdgeFilter() = default;

  BloomEdgeFilter(const Graph& g, double fpr, std::uint64_t hash_seed = kBloomHashSeed)
      : n_(g.n()), target_fpr_(fpr), item_count_(g.m()), hash_seed_(hash_seed) {
    if (!(fpr > 0.0 && fpr < 1.0)) throw invalid_parameter("bloom fpr must lie in (0,1)");
    if (g.m() == 0) throw invalid_parameter("cannot build a bloom filter for an edgeless graph; use the exact oracle");
    m_bits_ = bloom_bits_for(item_count_, fpr);
    num_hashes_ = bloom_hashes_for(m_bits_, item_count_);
    words_.assign((m_bits_ + 63) / 64, 0);
    for (auto [u, v] : g.edges()) insert(u, v);
  }

  bool contains(node_t u, node_t v) const noexcept {
    assert(u < n_ && v < n_);
    if (u == v) return false;
    const auto [h1, h2] = hash_edge(u, v, hash_seed_);
    std::uint64_t idx = h1 % m_bits_;
    const std::uint64_t step = (h2 | 1) % m_bits_;
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
      if (!((words_[idx >> 6] >> (idx & 63)) & 1)) return false;
      idx += step;
      if (idx >= m_bits_) idx -= m_bits_;
    }
    return true;
  }

  std::uint64_t node_count() const noexcept { return n_; }
  std::uint64_t m_bits() const noexcept { return m_bits_; }
  std::uint32_t num_hashes() const noexcept { return num_hashes_; }
  std::uint64_t item_count() const noexcept { return item_count_; }
  double target_fpr() const noexcept { return target_fpr_; }
  std::uint64_t hash_seed() const noexcept { return hash_seed_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::size_t memory_bytes() const noexcept { return words_.size() * sizeof(std::uint64_t); }

  /// Binary form, all fields little-endian:
  ///   u32 magic "HDBF", u32 version, u64 node_count, u32 num_hashes,
  ///   u64 m_bits, u64 item_count, f64 target_fpr, u64 hash_seed,
  ///   then ceil(m_bits/64) u64 words (bit i is bit i%64 of word i/64).
  std::vector<unsigned char> serialize() const {
    std::vector<unsigned char> out(kHeaderBytes + 8 * words_.size());
    unsigned char* p = out.data();
    auto put32 = [&p](std::uint32_t v) {
      for (int i = 0; i < 4; ++i) *p++ = static_cast<unsigned char>(v >> (8 * i));
    };
    auto put64 = [&p](std::uint64_t v) {
      detail::store_le64(p, v);
      p += 8;
    };
    put32(kMagic);
    put32(kVersion);
    put64(n_);
    put32(num_hashes_);
    put64(m_bits_);
    put64(item_count_);
    put64(std::bit_cast<std::uint64_t>(target_fpr_));
    put64(hash_seed_);
    for (std::uint64_t w : words_) put64(w);
    return out;
  }

  static BloomEdgeFilter deserialize(std::span<const unsigned char> bytes) {
    if (bytes.size() < kHeaderBytes) throw parse_error("bloom filter blob truncated (header)");
    const unsigned char* p = bytes.data();
    auto get32 = [&p]() {
      std::uint32_t v = 0;
      for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
      p += 4;
      return v;
    };
    auto get64 = [&p]() {
      std::uint64_t v = detail::load_le64(p);
      p += 8;
      return v;
    };
    if (get32() != kMagic) throw parse_error("bad bloom filter magic");
    if (std::uint32_t ver = get32(); ver != kVersion)
      throw parse_error("unsupported bloom filter version " + std::to_string(ver));
    BloomEdgeFilter f;
    f.n_ = get64();
    f.num_hashes_ = get32();
    f.m_bits_ = get64();
    f.item_count_ = get64();
    f.target_fpr_ = std::bit_cast<double>(get64());
    f.hash_seed_ = get64();
    if (f.m_bits_ < kBloomMinBits || f.num_hashes_ == 0) throw parse_error("bloom filter header is inconsistent");
    const std::uint64_t nwords = (f.m_bits_ + 63) / 64;
    if (bytes.size() != kHeaderBytes + 8 * nwords) throw parse_error("bloom filter blob has wrong length");
    f.words_.resize(nwords);
    for (auto& w : f.words_) w = get64();
    return f;
  }

  friend bool operator==(const BloomEdgeFilter&, const BloomEdgeFilter&) = default;

 private:
  void insert(node_t u, node_t v) noexcept {
    const auto [h1, h2] = hash_edge(u, v, hash_seed_);
    std::uint64_t idx = h1 % m_bits_;
    const std::uint64_t step = (h2 | 1) % m_bits_;
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
      words_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
      idx += step;
      if (idx >= m_bits_) idx -= m_bits_;
    }
  }

  std::uint64_t n_ = 0;
  double target_fpr_ = kDefaultFpr;
  std::uint64_t item_count_ = 0;
  std::uint64_t hash_seed_ = kBloomHashSeed;
  std::uint64_t m_bits_ = 0;
  std::uint32_t num_hashes_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BloomEdgeFilter build_bloom(const Graph& g, double fpr = kDefaultFpr) { return BloomEdgeFilter(g, fpr); }

enum class OracleKind { exact, bloom };

inline std::string to_string(OracleKind k) { return k == OracleKind::exact ? "exact" : "bloom"; }

inline OracleKind parse_oracle_kind(const std::string& s) {
  if (s == "exact") return OracleKind::exact;
  if (s == "bloom") return OracleKind::bloom;
  throw invalid_parameter("unknown oracle kind '" + s + "' (expected exact|bloom)");
}

/// Type-erased oracle. Hot loops should `visit` once and run on the concrete
/// type instead of calling contains() here per query.
class EdgeOracle {
 public:
  EdgeOracle(ExactEdgeSet e) : impl_(std::move(e)) {}
  EdgeOracle(BloomEdgeFilter b) : impl_(std::move(b)) {}

  static EdgeOracle build(const Graph& g, OracleKind kind, double fpr = kDefaultFpr) {
    if (kind == OracleKind::exact) return EdgeOracle(ExactEdgeSet(g));
    return EdgeOracle(BloomEdgeFilter(g, fpr));
  }

  OracleKind kind() const noexcept {
    return std::holds_alternative<ExactEdgeSet>(impl_) ? OracleKind::exact : OracleKind::bloom;
  }

  bool contains(node_t u, node_t v) const noexcept {
    return std::visit([u, v](const auto& o) { return o.contains(u, v); }, impl_);
  }

  std::uint64_t node_count() const noexcept {
    return std::visit([](const auto& o) { return o.node_count(); }, impl_);
  }

  template <typename F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), impl_);
  }

 private:
  std::variant<ExactEdgeSet, BloomEdgeFilter> impl_;
};

}  // namespace homdens
