#include "jigsaw/partition.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "jigsaw/error.hpp"

namespace jigsaw {

Partition::Partition(std::size_t n)
    : parent_(n), size_(n, 1), head_(n), tail_(n), next_(n, kNone), clusters_(n), max_size_(n > 0 ? 1 : 0) {
  std::iota(parent_.begin(), parent_.end(), Vertex{0});
  std::iota(head_.begin(), head_.end(), Vertex{0});
  std::iota(tail_.begin(), tail_.end(), Vertex{0});
}

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  Partition p(labels.size());
  std::unordered_map<std::uint32_t, Vertex> first;
  for (Vertex v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = first.try_emplace(labels[v], v);
    if (!inserted) p.unite(it->second, v);
  }
  p.generation_ = 0;
  return p;
}

Partition Partition::from_clusters(std::size_t n, const std::vector<std::vector<Vertex>>& clusters) {
  std::vector<std::uint32_t> labels(n, kNone);
  std::uint32_t id = 0;
  for (const auto& c : clusters) {
    for (Vertex v : c) {
      if (v >= n) throw UsageError("partition: vertex out of range");
      if (labels[v] != kNone) throw UsageError("partition: clusters overlap");
      labels[v] = id;
    }
    ++id;
  }
  if (std::find(labels.begin(), labels.end(), kNone) != labels.end()) {
    throw UsageError("partition: clusters do not cover the vertex set");
  }
  return from_labels(labels);
}

Vertex Partition::unite(Vertex a, Vertex b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  next_[tail_[a]] = head_[b];
  tail_[a] = tail_[b];
  --clusters_;
  ++generation_;
  max_size_ = std::max<std::size_t>(max_size_, size_[a]);
  return a;
}

std::vector<Vertex> Partition::members(Vertex v) const {
  std::vector<Vertex> out;
  const Vertex root = find(v);
  out.reserve(size_[root]);
  for_each_member(root, [&](Vertex w) { out.push_back(w); });
  return out;
}

std::vector<Vertex> Partition::roots() const {
  std::vector<Vertex> out;
  out.reserve(clusters_);
  for (Vertex v = 0; v < parent_.size(); ++v) {
    if (parent_[v] == v) out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> Partition::labels() const {
  const std::size_t n = parent_.size();
  std::vector<std::uint32_t> min_of_root(n, kNone);
  std::vector<std::uint32_t> out(n);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex r = find(v);
    if (min_of_root[r] == kNone) min_of_root[r] = v;  // v ascends, so the first hit is the minimum
    out[v] = min_of_root[r];
  }
  return out;
}

std::vector<std::vector<Vertex>> Partition::clusters() const {
  const auto lab = labels();
  std::vector<std::vector<Vertex>> out;
  std::vector<std::uint32_t> slot(lab.size(), kNone);
  for (Vertex v = 0; v < lab.size(); ++v) {
    if (slot[lab[v]] == kNone) {
      slot[lab[v]] = static_cast<std::uint32_t>(out.size());
      out.emplace_back();
    }
    out[slot[lab[v]]].push_back(v);
  }
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.vertex_count() != vertex_count()) throw UsageError("refines: size mismatch");
  std::vector<Vertex> image(vertex_count(), kNone);
  for (Vertex v = 0; v < vertex_count(); ++v) {
    const Vertex r = find(v);
    const Vertex c = coarser.find(v);
    if (image[r] == kNone) {
      image[r] = c;
    } else if (image[r] != c) {
      return false;
    }
  }
  return true;
}

Partition Partition::meet(const Partition& a, const Partition& b) {
  if (a.vertex_count() != b.vertex_count()) throw UsageError("meet: size mismatch");
  const std::size_t n = a.vertex_count();
  std::vector<std::uint32_t> labels(n);
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  for (Vertex v = 0; v < n; ++v) {
    const std::uint64_t key = (std::uint64_t{a.find(v)} << 32) | b.find(v);
    labels[v] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
  }
  return from_labels(labels);
}

}  // namespace jigsaw
