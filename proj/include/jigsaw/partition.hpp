#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jigsaw/topology.hpp"

namespace jigsaw {

// Union-find over [0, N) with threaded member lists, so that merging two
// clusters and walking a cluster's members are both cheap.
class Partition {
 public:
  Partition() = default;
  // All singletons.
  explicit Partition(std::size_t n);
  // Vertices with equal labels share a cluster. Labels are arbitrary integers.
  static Partition from_labels(std::span<const std::uint32_t> labels);
  // Clusters given as disjoint lists covering [0, n).
  static Partition from_clusters(std::size_t n, const std::vector<std::vector<Vertex>>& clusters);

  std::size_t vertex_count() const noexcept { return parent_.size(); }
  std::size_t cluster_count() const noexcept { return clusters_; }
  std::size_t max_cluster_size() const noexcept { return max_size_; }
  // Number of unions performed since construction.
  std::uint64_t generation() const noexcept { return generation_; }

  Vertex find(Vertex v) noexcept {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  Vertex find(Vertex v) const noexcept {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  bool same(Vertex a, Vertex b) noexcept { return find(a) == find(b); }

  // Merges the clusters of a and b; returns the surviving root.
  Vertex unite(Vertex a, Vertex b) noexcept;

  std::size_t cluster_size(Vertex v) const noexcept { return size_[find(v)]; }

  // Members of root's cluster, in list order. `root` must be a root.
  template <class F>
  void for_each_member(Vertex root, F&& f) const {
    for (Vertex v = head_[root]; v != kNone; v = next_[v]) f(v);
  }
  Vertex first_member(Vertex root) const noexcept { return head_[root]; }
  Vertex next_member(Vertex v) const noexcept { return next_[v]; }

  std::vector<Vertex> members(Vertex v) const;
  std::vector<Vertex> roots() const;
  // Label of each vertex = smallest vertex of its cluster. Canonical, so two
  // partitions are equal iff their labels are.
  std::vector<std::uint32_t> labels() const;
  // Clusters as sorted vectors, ordered by smallest member.
  std::vector<std::vector<Vertex>> clusters() const;

  // True iff every cluster of *this lies inside a cluster of `coarser`.
  bool refines(const Partition& coarser) const;
  // Common refinement: non-empty intersections of clusters.
  static Partition meet(const Partition& a, const Partition& b);

  bool operator==(const Partition& other) const { return labels() == other.labels(); }

  static constexpr Vertex kNone = 0xffffffffu;

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<Vertex> head_;
  std::vector<Vertex> tail_;
  std::vector<Vertex> next_;
  std::size_t clusters_ = 0;
  std::size_t max_size_ = 0;
  std::uint64_t generation_ = 0;
};

}  // namespace jigsaw
