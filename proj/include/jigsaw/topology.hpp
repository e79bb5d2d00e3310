#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jigsaw {

// Flat vertex index in [0, N). Coordinates are a mixed-radix view of it,
// least significant coordinate first.
using Vertex = std::uint32_t;

enum class Family {
  Ring,               // Z_n
  Torus,              // Z_n^d, nearest neighbours
  RangeTorus,         // Z_n^2, neighbourhood {y : |x - y|_inf <= r}
  Hypercube,          // {0,1}^n
  Hamming,            // Z_n^d, neighbours differ in exactly one coordinate
  CompleteTimesRing,  // K_n x Z_m
  Complete,           // K_n
};

// Immutable descriptor of a deterministic puzzle-graph family. Neighbours
// are computed on the fly, so memory is O(1) regardless of N.
class Topology {
 public:
  static Topology ring(std::uint32_t n);
  static Topology torus(std::uint32_t n, std::uint32_t d);
  static Topology range_torus(std::uint32_t n, std::uint32_t r);
  static Topology hypercube(std::uint32_t n);
  static Topology hamming(std::uint32_t n, std::uint32_t d);
  static Topology complete_times_ring(std::uint32_t n, std::uint32_t m);
  static Topology complete(std::uint32_t n);

  // Grammar: `ring:n=1024`, `torus:n=400,d=2`, `range:n=400,r=3`,
  // `hypercube:n=16`, `hamming:n=50,d=3`, `kxring:n=64,m=9`, `complete:n=100`.
  static Topology parse(std::string_view spec);
  std::string spec_string() const;

  Family family() const noexcept { return family_; }
  std::size_t size() const noexcept { return size_; }
  // Every family here is regular.
  std::uint32_t degree() const noexcept { return degree_; }

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }  // dimension (torus, hamming)
  std::uint32_t r() const noexcept { return r_; }  // range (range torus)
  std::uint32_t m() const noexcept { return m_; }  // ring length (kxring)

  bool is_torus_2d() const noexcept { return family_ == Family::Torus && d_ == 2; }

  // Puzzle neighbours of v in ascending index order. Throws UsageError for v >= N.
  std::vector<Vertex> neighbors(Vertex v) const;
  // Appends the neighbours of v in generation order (not sorted).
  void append_neighbors(Vertex v, std::vector<Vertex>& out) const;
  bool adjacent(Vertex u, Vertex v) const;

  // Mixed-radix coordinates for lattice families (ring, torus, range, hamming).
  std::vector<std::uint32_t> coords(Vertex v) const;
  Vertex index(std::span<const std::uint32_t> coords) const;

  // log of the family's size parameter: log n for ring, torus, range and
  // hamming graphs, log N otherwise. This is the "log n" in p * log n.
  double log_scale() const;

  bool operator==(const Topology&) const = default;

 private:
  Topology(Family f, std::uint32_t n, std::uint32_t d, std::uint32_t r, std::uint32_t m);

  void check_vertex(Vertex v) const;

  Family family_;
  std::uint32_t n_ = 0;
  std::uint32_t d_ = 0;
  std::uint32_t r_ = 0;
  std::uint32_t m_ = 0;
  std::size_t size_ = 0;
  std::uint32_t degree_ = 0;
};

// |neighbors(v) ∩ S|; v itself never counts. Duplicates in S count once.
std::size_t cpuzzle(const Topology& t, Vertex v, std::span<const Vertex> S);

// Connectivity check used by tests and by the CLI's selftest.
bool is_connected(const Topology& t);

}  // namespace jigsaw
