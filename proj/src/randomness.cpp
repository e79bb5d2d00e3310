#include "jigsaw/randomness.hpp"

#include <algorithm>
#include <cmath>

#include "jigsaw/error.hpp"

namespace jigsaw {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("edge probability must lie in [0, 1]");
}

}  // namespace

EdgeSampler EdgeSampler::lazy(std::uint64_t seed, double p) {
  check_probability(p);
  EdgeSampler s;
  s.seed_ = seed;
  s.p_ = p;
  s.threshold_ = static_cast<std::uint64_t>(std::ceil(std::ldexp(p, 53)));
  return s;
}

EdgeSampler EdgeSampler::explicit_edges(std::span<const std::pair<Vertex, Vertex>> edges) {
  auto set = std::make_shared<absl::flat_hash_set<std::uint64_t>>();
  set->reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) throw UsageError("explicit people graph: self-loop at vertex " + std::to_string(u));
    set->insert(pair_key(u, v));
  }
  EdgeSampler s;
  s.edges_ = std::move(set);
  return s;
}

EdgeSampler EdgeSampler::with_probability(double p) const {
  if (!is_lazy()) throw UsageError("with_probability: explicit samplers have no edge probability");
  return lazy(seed_, p);
}

std::vector<std::pair<Vertex, Vertex>> EdgeSampler::explicit_edge_list() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  if (edges_ == nullptr) return out;
  std::vector<std::uint64_t> keys(edges_->begin(), edges_->end());
  std::sort(keys.begin(), keys.end());
  out.reserve(keys.size());
  for (auto k : keys) out.emplace_back(static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffu));
  return out;
}

ExamLedger::ExamLedger(std::size_t vertex_count) : counts_(vertex_count, 0) {}

void ExamLedger::record(Vertex u, Vertex v, bool status) {
  ++queries_;
  if (decided_.try_emplace(pair_key(u, v), status).second) {
    max_count_ = std::max({max_count_, ++counts_[u], ++counts_[v]});
  }
}

std::optional<bool> ExamLedger::decided(Vertex u, Vertex v) const {
  auto it = decided_.find(pair_key(u, v));
  if (it == decided_.end()) return std::nullopt;
  return it->second;
}

bool examine(const EdgeSampler& s, ExamLedger& ledger, Vertex u, Vertex v) {
  if (u == v) throw UsageError("examine: u == v");
  if (u >= ledger.vertex_count() || v >= ledger.vertex_count()) {
    throw UsageError("examine: vertex out of ledger range");
  }
  const bool st = s.status(u, v);
  ledger.record(u, v, st);
  return st;
}

std::optional<Vertex> find_people_neighbor_in(const EdgeSampler& s, ExamLedger& ledger, Vertex v,
                                              std::span<const Vertex> S) {
  for (Vertex w : S) {
    if (examine(s, ledger, v, w)) return w;
  }
  return std::nullopt;
}

std::size_t count_people_neighbors_in(const EdgeSampler& s, ExamLedger& ledger, Vertex v,
                                      std::span<const Vertex> S, std::size_t cap) {
  if (cap == 0) throw UsageError("count_people_neighbors_in: cap must be >= 1");
  std::size_t found = 0;
  for (Vertex w : S) {
    if (examine(s, ledger, v, w) && ++found == cap) break;
  }
  return found;
}

std::uint32_t max_exams_per_vertex(const ExamLedger& ledger) { return ledger.max_exams_per_vertex(); }

}  // namespace jigsaw
