#include "jigsaw/coarse_grain.hpp"

#include <array>

#include "jigsaw/error.hpp"

namespace jigsaw {

CoarseGrained coarse_grain_2x2(const Topology& torus, const EdgeSampler& people) {
  if (!torus.is_torus_2d()) throw UsageError("coarse_grain_2x2: requires a 2D torus");
  const std::uint32_t n = torus.n();
  if (n % 2 != 0) throw UsageError("coarse_grain_2x2: n must be even");
  const std::uint32_t half = n / 2;
  if (half < 3) throw UsageError("coarse_grain_2x2: n/2 must be >= 3");

  CoarseGrained out{Topology::torus(half, 2), {}};
  const std::size_t blocks = static_cast<std::size_t>(half) * half;
  auto cells_of = [&](Vertex b) {
    const std::uint32_t bx = b % half;
    const std::uint32_t by = b / half;
    const Vertex base = 2 * bx + 2 * by * n;
    return std::array<Vertex, 4>{base, base + 1, base + n, base + n + 1};
  };
  for (Vertex a = 0; a < blocks; ++a) {
    const auto ca = cells_of(a);
    for (Vertex b = a + 1; b < blocks; ++b) {
      const auto cb = cells_of(b);
      bool linked = false;
      for (Vertex u : ca) {
        for (Vertex v : cb) {
          if (people.status(u, v)) {
            linked = true;
            break;
          }
        }
        if (linked) break;
      }
      if (linked) out.edges.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace jigsaw
