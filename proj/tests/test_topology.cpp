#include <doctest.h>

#include <algorithm>
#include <set>

#include "jigsaw/coarse_grain.hpp"
#include "jigsaw/error.hpp"
#include "jigsaw/puzzle_graph.hpp"
#include "jigsaw/topology.hpp"

using namespace jigsaw;

namespace {

std::vector<Topology> sample_topologies() {
  return {Topology::ring(3),       Topology::ring(17),          Topology::torus(3, 2),
          Topology::torus(5, 3),   Topology::range_torus(7, 2), Topology::hypercube(1),
          Topology::hypercube(5),  Topology::hamming(4, 3),     Topology::complete_times_ring(3, 4),
          Topology::complete(1),   Topology::complete(6)};
}

}  // namespace

// ============================================================================
// Neighbourhoods
// ============================================================================

TEST_CASE("ring and torus neighbourhoods") {
  CHECK(Topology::ring(4).neighbors(0) == std::vector<Vertex>{1, 3});

  const auto t = Topology::torus(3, 2);
  const std::vector<std::uint32_t> origin{0, 0};
  const Vertex v = t.index(origin);
  std::vector<Vertex> expected;
  for (auto c : {std::vector<std::uint32_t>{1, 0}, {2, 0}, {0, 1}, {0, 2}}) expected.push_back(t.index(c));
  std::sort(expected.begin(), expected.end());
  CHECK(t.neighbors(v) == expected);
}

TEST_CASE("hypercube neighbours are single bit flips") {
  CHECK(Topology::hypercube(3).neighbors(0) == std::vector<Vertex>{1, 2, 4});
}

TEST_CASE("range torus and product graphs") {
  const auto r = Topology::range_torus(7, 1);
  CHECK(r.degree() == 8);
  const auto k = Topology::complete_times_ring(4, 5);
  CHECK(k.size() == 20);
  CHECK(k.degree() == 5);  // 3 in the clique, 2 along the ring
  CHECK(Topology::hamming(4, 2).degree() == 6);
}

TEST_CASE("neighbour lists are sorted, duplicate free, symmetric, regular") {
  for (const auto& t : sample_topologies()) {
    CAPTURE(t.spec_string());
    for (Vertex v = 0; v < t.size(); ++v) {
      const auto nb = t.neighbors(v);
      CHECK(nb.size() == t.degree());
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      CHECK(std::find(nb.begin(), nb.end(), v) == nb.end());
      for (Vertex w : nb) CHECK(t.adjacent(w, v));
    }
    CHECK(is_connected(t));
  }
}

TEST_CASE("coordinates round-trip") {
  const auto t = Topology::torus(5, 3);
  for (Vertex v = 0; v < t.size(); ++v) CHECK(t.index(t.coords(v)) == v);
  const std::vector<std::uint32_t> c{2, 3};
  CHECK(Topology::torus(5, 2).index(c) == 2 + 5 * 3);
}

TEST_CASE("invalid parameters and vertices are usage errors") {
  CHECK_THROWS_AS(Topology::ring(2), UsageError);
  CHECK_THROWS_AS(Topology::torus(2, 2), UsageError);
  CHECK_THROWS_AS(Topology::hamming(2, 3), UsageError);
  CHECK_THROWS_AS(Topology::hypercube(0), UsageError);
  CHECK_THROWS_AS(Topology::hypercube(31), UsageError);
  CHECK_THROWS_AS(Topology::range_torus(5, 3), UsageError);
  CHECK_THROWS_AS(Topology::ring(5).neighbors(5), UsageError);
}

TEST_CASE("spec strings parse and print") {
  for (const auto& t : sample_topologies()) CHECK(Topology::parse(t.spec_string()) == t);
  CHECK(Topology::parse("torus:n=400,d=2") == Topology::torus(400, 2));
  CHECK(Topology::parse("kxring:n=64,m=9") == Topology::complete_times_ring(64, 9));
  CHECK_THROWS_AS(Topology::parse("ring"), UsageError);
  CHECK_THROWS_AS(Topology::parse("ring:n=abc"), UsageError);
  CHECK_THROWS_AS(Topology::parse("moebius:n=5"), UsageError);
  CHECK_THROWS_AS(Topology::parse("torus:n=5"), UsageError);
}

// ============================================================================
// Puzzle counts
// ============================================================================

TEST_CASE("cpuzzle") {
  const auto r = Topology::ring(5);
  const std::vector<Vertex> s13{1, 3};
  const std::vector<Vertex> s2{2};
  CHECK(cpuzzle(r, 2, s13) == 2);
  CHECK(cpuzzle(r, 2, s2) == 0);

  const auto t = Topology::torus(4, 2);
  auto at = [&](std::uint32_t x, std::uint32_t y) { return t.index(std::vector<std::uint32_t>{x, y}); };
  const std::vector<Vertex> s{at(1, 0), at(0, 3), at(2, 2)};
  CHECK(cpuzzle(t, at(0, 0), s) == 2);
}

TEST_CASE("CSR puzzle graph matches the topology") {
  for (const auto& t : sample_topologies()) {
    const auto g = PuzzleGraph::from_topology(t);
    REQUIRE(g.size() == t.size());
    CHECK(g.is_identity());
    for (Vertex v = 0; v < t.size(); ++v) {
      const auto nb = g.neighbors(v);
      CHECK(std::vector<Vertex>(nb.begin(), nb.end()) == t.neighbors(v));
    }
  }
}

TEST_CASE("induced puzzle graph of a ring arc is a path") {
  const auto t = Topology::ring(8);
  const std::vector<Vertex> arc{6, 7, 0, 1};
  const auto g = PuzzleGraph::induced(t, arc);
  REQUIRE(g.size() == 4);
  CHECK(g.neighbors(0).size() == 1);
  CHECK(g.neighbors(1).size() == 2);
  CHECK(g.global_id(2) == 0);
  CHECK(g.global_size() == 8);
}

// ============================================================================
// Coarse graining
// ============================================================================

TEST_CASE("2x2 coarse graining") {
  const auto t = Topology::torus(6, 2);
  auto at = [&](std::uint32_t x, std::uint32_t y) { return t.index(std::vector<std::uint32_t>{x, y}); };

  SUBCASE("no people edges") {
    const auto cg = coarse_grain_2x2(t, EdgeSampler::lazy(1, 0.0));
    CHECK(cg.topology == Topology::torus(3, 2));
    CHECK(cg.edges.empty());
  }
  SUBCASE("edge inside a block is ignored") {
    const std::vector<std::pair<Vertex, Vertex>> e{{at(0, 0), at(1, 1)}};
    CHECK(coarse_grain_2x2(t, EdgeSampler::explicit_edges(e)).edges.empty());
  }
  SUBCASE("edge between blocks becomes a coarse edge") {
    const std::vector<std::pair<Vertex, Vertex>> e{{at(0, 0), at(2, 0)}};
    const auto cg = coarse_grain_2x2(t, EdgeSampler::explicit_edges(e));
    REQUIRE(cg.edges.size() == 1);
    const std::vector<std::uint32_t> b0{0, 0};
    const std::vector<std::uint32_t> b1{1, 0};
    CHECK(cg.edges[0] == std::pair<Vertex, Vertex>{cg.topology.index(b0), cg.topology.index(b1)});
  }
  SUBCASE("odd side is rejected") {
    CHECK_THROWS_AS(coarse_grain_2x2(Topology::torus(7, 2), EdgeSampler::lazy(1, 0.5)), UsageError);
  }
}
