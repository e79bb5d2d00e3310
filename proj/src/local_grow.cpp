#include <algorithm>

#include "jigsaw/engine.hpp"
#include "jigsaw/error.hpp"

namespace jigsaw {

GrowResult local_grow(const DynamicsParams& params, double p, std::uint64_t seed, std::uint32_t L,
                      bool stop_at_boundary) {
  params.validate();
  if (L < 2) throw UsageError("local_grow: box side L must be >= 2");
  if (static_cast<std::uint64_t>(L) * L > 0xffffffffull) throw UsageError("local_grow: box too large");
  const auto sampler = EdgeSampler::lazy(seed, p);
  const std::size_t cells = static_cast<std::size_t>(L) * L;

  std::vector<char> inside(cells, 0);
  // Incremental people-neighbour scan: cell z has examined members[0, scanned[z])
  // and found `found[z]` people neighbours among them. The member list only
  // grows by appending, so resuming the scan is exact.
  std::vector<std::uint32_t> scanned(cells, 0);
  std::vector<std::uint32_t> found(cells, 0);
  std::vector<std::uint32_t> queued(cells, 0);

  GrowResult out;
  auto& members = out.cluster;
  members.push_back(0);
  inside[0] = 1;

  std::vector<Vertex> candidates;
  std::vector<Vertex> next_candidates;
  std::vector<Vertex> added;
  std::uint32_t epoch = 1;

  auto push_neighbors = [&](Vertex v, std::vector<Vertex>& into) {
    const std::uint32_t x = v % L;
    const std::uint32_t y = v / L;
    const Vertex nb[4] = {x + 1 < L ? v + 1 : Partition::kNone, x > 0 ? v - 1 : Partition::kNone,
                          y + 1 < L ? v + L : Partition::kNone, y > 0 ? v - L : Partition::kNone};
    for (Vertex w : nb) {
      if (w != Partition::kNone && !inside[w] && queued[w] != epoch) {
        queued[w] = epoch;
        into.push_back(w);
      }
    }
  };
  push_neighbors(0, candidates);

  const auto on_far_side = [L](Vertex v) { return v % L == L - 1 || v / L == L - 1; };

  while (true) {
    const auto size_now = static_cast<std::uint32_t>(members.size());
    added.clear();
    for (Vertex z : candidates) {
      const std::uint32_t x = z % L;
      const std::uint32_t y = z / L;
      const Vertex nb[4] = {x + 1 < L ? z + 1 : Partition::kNone, x > 0 ? z - 1 : Partition::kNone,
                            y + 1 < L ? z + L : Partition::kNone, y > 0 ? z - L : Partition::kNone};
      int puzzle_in = 0;
      bool joins = false;
      for (Vertex w : nb) {
        if (w == Partition::kNone || !inside[w]) continue;
        ++puzzle_in;
        if (sampler.status(z, w)) joins = true;  // doubly connected
      }
      if (!joins && params.theta_finite() && puzzle_in >= params.theta) joins = true;
      if (!joins && puzzle_in >= params.tau) {
        auto& f = found[z];
        auto& s = scanned[z];
        while (f < static_cast<std::uint32_t>(params.sigma) && s < size_now) {
          if (sampler.status(z, members[s])) ++f;
          ++s;
        }
        joins = f >= static_cast<std::uint32_t>(params.sigma);
      }
      if (joins) added.push_back(z);
    }
    if (added.empty()) break;
    ++out.steps;
    for (Vertex z : added) {
      inside[z] = 1;
      members.push_back(z);
      if (on_far_side(z)) out.reached = true;
    }
    if (out.reached && stop_at_boundary) break;
    ++epoch;
    next_candidates.clear();
    for (Vertex z : candidates) {
      if (!inside[z]) {
        queued[z] = epoch;
        next_candidates.push_back(z);
      }
    }
    for (Vertex z : added) push_neighbors(z, next_candidates);
    std::swap(candidates, next_candidates);
  }
  return out;
}

}  // namespace jigsaw
