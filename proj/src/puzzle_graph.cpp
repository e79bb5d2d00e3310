#include "jigsaw/puzzle_graph.hpp"

#include <algorithm>
#include <limits>

#include "jigsaw/error.hpp"

namespace jigsaw {

PuzzleGraph PuzzleGraph::from_topology(const Topology& t) {
  const std::uint64_t half_edges = static_cast<std::uint64_t>(t.size()) * t.degree();
  if (half_edges >= std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError("puzzle graph too large to materialise: " + t.spec_string());
  }
  PuzzleGraph g;
  g.global_size_ = t.size();
  g.offsets_.reserve(t.size() + 1);
  g.targets_.reserve(half_edges);
  for (Vertex v = 0; v < t.size(); ++v) {
    const auto begin = g.targets_.size();
    t.append_neighbors(v, g.targets_);
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(begin), g.targets_.end());
    g.offsets_.push_back(static_cast<std::uint32_t>(g.targets_.size()));
  }
  return g;
}

PuzzleGraph PuzzleGraph::induced(const Topology& t, std::span<const Vertex> A) {
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(t.size(), kAbsent);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] >= t.size()) throw UsageError("induced: vertex out of range");
    if (local[A[i]] != kAbsent) throw UsageError("induced: duplicate vertex in A");
    local[A[i]] = static_cast<Vertex>(i);
  }
  PuzzleGraph g;
  g.global_size_ = t.size();
  g.global_ids_.assign(A.begin(), A.end());
  std::vector<Vertex> buf;
  for (Vertex v : A) {
    buf.clear();
    t.append_neighbors(v, buf);
    const auto begin = g.targets_.size();
    for (Vertex w : buf) {
      if (local[w] != kAbsent) g.targets_.push_back(local[w]);
    }
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(begin), g.targets_.end());
    g.offsets_.push_back(static_cast<std::uint32_t>(g.targets_.size()));
  }
  return g;
}

}  // namespace jigsaw
