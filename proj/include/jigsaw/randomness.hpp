#pragma once

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "jigsaw/topology.hpp"

namespace jigsaw {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed of trial `index` under `master`: mix64(master ^ mix64(index)).
// Pure integer arithmetic, so identical on every platform.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index));
}

// Canonical key of the unordered pair {u, v}: (min << 32) | max.
constexpr std::uint64_t pair_key(Vertex u, Vertex v) noexcept {
  return u < v ? (std::uint64_t{u} << 32) | v : (std::uint64_t{v} << 32) | u;
}

// Uniform in [0, 1) with 53 random bits, a pure function of (seed, {u, v}).
constexpr double pair_uniform(std::uint64_t seed, Vertex u, Vertex v) noexcept {
  return static_cast<double>(mix64(seed ^ mix64(pair_key(u, v))) >> 11) * 0x1.0p-53;
}

// Small sequential generator for policy choices and test instance generation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// The people graph. Lazy mode decides each pair on demand from a stateless
// hash of (seed, pair); explicit mode looks the pair up in a supplied edge set.
// In lazy mode status(u,v) = pair_uniform(seed,u,v) < p, so for a fixed seed
// the edge set grows monotonically with p.
class EdgeSampler {
 public:
  static EdgeSampler lazy(std::uint64_t seed, double p);
  static EdgeSampler explicit_edges(std::span<const std::pair<Vertex, Vertex>> edges);

  bool status(Vertex u, Vertex v) const noexcept {
    // Same test as pair_uniform(seed, u, v) < p, done on the 53-bit integer.
    if (edges_ == nullptr) return (mix64(seed_ ^ mix64(pair_key(u, v))) >> 11) < threshold_;
    return edges_->contains(pair_key(u, v));
  }

  bool is_lazy() const noexcept { return edges_ == nullptr; }
  std::uint64_t seed() const noexcept { return seed_; }
  double probability() const noexcept { return p_; }
  // Same seed, different p. Only meaningful for lazy samplers.
  EdgeSampler with_probability(double p) const;
  // Edges of an explicit sampler, sorted by pair key.
  std::vector<std::pair<Vertex, Vertex>> explicit_edge_list() const;

 private:
  EdgeSampler() = default;

  std::uint64_t seed_ = 0;
  double p_ = 0.0;
  std::uint64_t threshold_ = 0;  // ceil(p * 2^53)
  std::shared_ptr<const absl::flat_hash_set<std::uint64_t>> edges_;
};

// Decided-pair store plus per-vertex first-examination counters.
class ExamLedger {
 public:
  explicit ExamLedger(std::size_t vertex_count);

  // Records an examination of {u, v}; counters move only on the first one.
  void record(Vertex u, Vertex v, bool status);

  std::optional<bool> decided(Vertex u, Vertex v) const;
  std::uint32_t first_exams(Vertex v) const { return counts_.at(v); }
  std::uint32_t max_exams_per_vertex() const noexcept { return max_count_; }
  std::size_t decided_pairs() const noexcept { return decided_.size(); }
  std::uint64_t queries() const noexcept { return queries_; }
  std::size_t vertex_count() const noexcept { return counts_.size(); }

 private:
  absl::flat_hash_map<std::uint64_t, bool> decided_;
  std::vector<std::uint32_t> counts_;
  std::uint32_t max_count_ = 0;
  std::uint64_t queries_ = 0;
};

// Status of {u, v}; records the examination. Throws UsageError when u == v.
bool examine(const EdgeSampler& s, ExamLedger& ledger, Vertex u, Vertex v);

// First w in S (in order) with a people edge to v. Examines only the prefix
// up to and including the hit.
std::optional<Vertex> find_people_neighbor_in(const EdgeSampler& s, ExamLedger& ledger, Vertex v,
                                              std::span<const Vertex> S);

// min(cap, number of people neighbours of v in S); stops once cap is reached.
std::size_t count_people_neighbors_in(const EdgeSampler& s, ExamLedger& ledger, Vertex v,
                                      std::span<const Vertex> S, std::size_t cap);

std::uint32_t max_exams_per_vertex(const ExamLedger& ledger);

}  // namespace jigsaw
