#include <array>

#include "jigsaw/engine.hpp"
#include "jigsaw/error.hpp"

namespace jigsaw {

namespace {

struct TorusEdges {
  std::uint32_t n;

  Vertex at(std::uint32_t x, std::uint32_t y) const { return (x % n) + (y % n) * n; }
  std::uint32_t edge(Vertex v, int dir) const { return 2 * v + static_cast<std::uint32_t>(dir); }

  // Edges of the unit square with lower-left corner (x, y), in cyclic order
  // bottom, right, top, left; consecutive entries share a corner.
  std::array<std::uint32_t, 4> square(std::uint32_t x, std::uint32_t y) const {
    return {edge(at(x, y), 0), edge(at(x + 1, y), 1), edge(at(x, y + 1), 0), edge(at(x, y), 1)};
  }
};

}  // namespace

std::vector<bool> square_completion_run(const Topology& torus, const EdgeSampler& sampler) {
  if (!torus.is_torus_2d()) throw UsageError("square_completion_run: requires a 2D torus");
  const std::uint32_t n = torus.n();
  const TorusEdges te{n};
  const std::size_t N = torus.size();
  std::vector<bool> occupied(2 * N, false);
  std::vector<std::uint32_t> work;

  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t x = 0; x < n; ++x) {
      const Vertex v = te.at(x, y);
      if (sampler.status(v, te.at(x + 1, y))) {
        occupied[te.edge(v, 0)] = true;
        work.push_back(te.edge(v, 0));
      }
      if (sampler.status(v, te.at(x, y + 1))) {
        occupied[te.edge(v, 1)] = true;
        work.push_back(te.edge(v, 1));
      }
    }
  }

  while (!work.empty()) {
    const std::uint32_t e = work.back();
    work.pop_back();
    const Vertex v = e / 2;
    const std::uint32_t x = v % n;
    const std::uint32_t y = v / n;
    // The two unit squares containing e.
    const std::array<std::array<std::uint32_t, 2>, 2> corners =
        (e % 2 == 0) ? std::array<std::array<std::uint32_t, 2>, 2>{{{x, y}, {x, y + n - 1}}}
                     : std::array<std::array<std::uint32_t, 2>, 2>{{{x, y}, {x + n - 1, y}}};
    for (const auto& c : corners) {
      const auto sq = te.square(c[0], c[1]);
      bool corner_pair = false;
      for (int i = 0; i < 4; ++i) {
        if (occupied[sq[i]] && occupied[sq[(i + 1) % 4]]) corner_pair = true;
      }
      if (!corner_pair) continue;
      for (auto f : sq) {
        if (!occupied[f]) {
          occupied[f] = true;
          work.push_back(f);
        }
      }
    }
  }
  return occupied;
}

Partition square_completion_components(const Topology& torus, const std::vector<bool>& occupied) {
  if (!torus.is_torus_2d()) throw UsageError("square_completion_components: requires a 2D torus");
  const std::uint32_t n = torus.n();
  if (occupied.size() != 2 * torus.size()) throw UsageError("square_completion_components: wrong edge count");
  const TorusEdges te{n};
  Partition P(torus.size());
  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t x = 0; x < n; ++x) {
      const Vertex v = te.at(x, y);
      if (occupied[te.edge(v, 0)]) P.unite(v, te.at(x + 1, y));
      if (occupied[te.edge(v, 1)]) P.unite(v, te.at(x, y + 1));
    }
  }
  return P;
}

}  // namespace jigsaw
