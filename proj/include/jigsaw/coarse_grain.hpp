#pragma once

#include <utility>
#include <vector>

#include "jigsaw/randomness.hpp"
#include "jigsaw/topology.hpp"

namespace jigsaw {

struct CoarseGrained {
  Topology topology;                              // Torus(n/2, 2)
  std::vector<std::pair<Vertex, Vertex>> edges;   // explicit coarse people graph
};

// Groups Torus(n,2) into 2x2 blocks (2i, 2j) + {0,1}^2. Two distinct blocks
// are people-adjacent iff some people edge joins them; edges inside a block
// are ignored. Enumerates all block pairs, so it is meant for small n.
CoarseGrained coarse_grain_2x2(const Topology& torus, const EdgeSampler& people);

}  // namespace jigsaw
