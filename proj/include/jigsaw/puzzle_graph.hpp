#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jigsaw/topology.hpp"

namespace jigsaw {

// Materialised adjacency (CSR, sorted rows) of a puzzle graph or of an
// induced subgraph of one. Built once and shared read-only across trials.
//
// Induced graphs renumber A's vertices 0..|A|-1; global_id() maps back so the
// people graph is queried on the original vertex labels.
class PuzzleGraph {
 public:
  static PuzzleGraph from_topology(const Topology& t);
  // Subgraph of t induced by A (A must not contain duplicates).
  static PuzzleGraph induced(const Topology& t, std::span<const Vertex> A);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::uint32_t edge_begin(Vertex v) const noexcept { return offsets_[v]; }
  std::uint32_t edge_end(Vertex v) const noexcept { return offsets_[v + 1]; }
  // Target of half-edge h (a position in the CSR target array).
  Vertex target(std::uint32_t h) const noexcept { return targets_[h]; }
  std::size_t half_edge_count() const noexcept { return targets_.size(); }

  bool is_identity() const noexcept { return global_ids_.empty(); }
  Vertex global_id(Vertex v) const noexcept { return global_ids_.empty() ? v : global_ids_[v]; }
  std::span<const Vertex> global_ids() const noexcept { return global_ids_; }
  // Vertex count of the graph the ids refer to (N of the parent topology).
  std::size_t global_size() const noexcept { return global_size_; }

 private:
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Vertex> targets_;
  std::vector<Vertex> global_ids_;
  std::size_t global_size_ = 0;
};

}  // namespace jigsaw
