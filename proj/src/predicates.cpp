#include <algorithm>
#include <deque>

#include "jigsaw/engine.hpp"
#include "jigsaw/error.hpp"

namespace jigsaw {

bool is_internally_solved(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                          std::span<const Vertex> A) {
  if (A.empty()) throw UsageError("is_internally_solved: A must be nonempty");
  const auto g = PuzzleGraph::induced(t, A);
  return run(g, params, sampler).solved;
}

bool is_unstoppable(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                    std::span<const Vertex> A) {
  params.validate();
  std::vector<char> in_a(t.size(), 0);
  for (Vertex v : A) {
    if (v >= t.size()) throw UsageError("is_unstoppable: vertex out of range");
    in_a[v] = 1;
  }
  for (Vertex v = 0; v < t.size(); ++v) {
    if (in_a[v]) continue;
    int found = 0;
    for (Vertex w : A) {
      if (sampler.status(v, w) && ++found >= params.sigma) break;
    }
    if (found < params.sigma) return false;
  }
  return true;
}

namespace {

bool clusters_connected(const PuzzleGraph& g, const Partition& P) {
  std::vector<char> seen(g.size(), 0);
  std::deque<Vertex> queue;
  for (Vertex root : P.roots()) {
    const Vertex start = P.first_member(root);
    seen[start] = 1;
    queue.assign(1, start);
    std::size_t reached = 1;
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w] && P.find(w) == root) {
          seen[w] = 1;
          ++reached;
          queue.push_back(w);
        }
      }
    }
    if (reached != P.cluster_size(root)) return false;
  }
  return true;
}

}  // namespace

bool is_inert(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler, const Partition& P,
              bool require_connected) {
  params.validate();
  if (P.vertex_count() != g.size()) throw UsageError("is_inert: partition size mismatch");
  if (require_connected && !clusters_connected(g, P)) {
    throw UsageError("is_inert: partition has a cluster that is not puzzle-connected");
  }
  const auto people = [&](Vertex a, Vertex b) { return sampler.status(g.global_id(a), g.global_id(b)); };

  if (params.rule == MergeRule::Basic) {
    // Inert iff no two puzzle-adjacent clusters share a people edge.
    std::vector<std::pair<Vertex, Vertex>> adjacent;
    for (Vertex u = 0; u < g.size(); ++u) {
      for (Vertex w : g.neighbors(u)) {
        const Vertex ru = P.find(u);
        const Vertex rw = P.find(w);
        if (ru < rw) adjacent.emplace_back(ru, rw);
      }
    }
    std::sort(adjacent.begin(), adjacent.end());
    adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
    for (auto [a, b] : adjacent) {
      const auto ma = P.members(a);
      const auto mb = P.members(b);
      for (Vertex x : ma) {
        for (Vertex y : mb) {
          if (people(x, y)) return false;
        }
      }
    }
    return true;
  }

  // Threshold rule: for every cluster W and every v on its outer boundary,
  // v is not doubly connected into W, cpuzzle(v,W) < theta, and
  // cpeople(v,W) < sigma or cpuzzle(v,W) < tau.
  std::vector<std::uint32_t> seen(g.size(), 0);
  std::uint32_t epoch = 0;
  for (Vertex root : P.roots()) {
    ++epoch;
    const auto members = P.members(root);
    for (Vertex u : members) {
      for (Vertex v : g.neighbors(u)) {
        if (P.find(v) == root || seen[v] == epoch) continue;
        seen[v] = epoch;
        int in_w = 0;
        for (Vertex x : g.neighbors(v)) {
          if (P.find(x) != root) continue;
          ++in_w;
          if (people(v, x)) return false;
        }
        if (params.theta_finite() && in_w >= params.theta) return false;
        if (in_w >= params.tau) {
          int found = 0;
          for (Vertex x : members) {
            if (people(v, x) && ++found >= params.sigma) return false;
          }
        }
      }
    }
  }
  return true;
}

bool is_inert(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler, const Partition& P,
              bool require_connected) {
  return is_inert(PuzzleGraph::from_topology(t), params, sampler, P, require_connected);
}

}  // namespace jigsaw
