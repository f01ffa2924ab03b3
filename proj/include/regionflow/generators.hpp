#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

// Uniform integer in [0, bound) from a 64-bit engine by rejection, so the
// stream is identical on every platform (std distributions are not).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// The 14 grid displacements in their fixed order. Connectivity c uses the
// first c/2 of them; each displacement contributes one undirected edge per
// node, i.e. two incident edges for interior nodes.
const std::vector<std::pair<int, int>>& grid_displacements();

struct GridSpec {
  int width = 0;
  int height = 0;
  int connectivity = 4;
  Cap strength = 0;
  std::uint64_t seed = 0;
};

// Node (x, y) has id y * width + x; s and t follow. Excess values are drawn
// from std::mt19937_64(seed) in row-major node order, uniform in [-500, 500]:
// positive values become excess, negative ones a sink arc. Edges are added
// node by node (row-major) and displacement by displacement, as one pair with
// capacity `strength` in both directions.
Network gen_grid(const GridSpec& spec);

// Partition of a gen_grid network into slices x slices blocks.
Partition grid_partition(const GridSpec& spec, int slices_x, int slices_y);

// Chain family with k chains 1 - 2_i - 3_i - 4_i - 5 sharing nodes 1, 5 and 6,
// an edge 5 - 6 and a one-way arc 6 -> 1. Node 1 holds the only excess (2)
// and an arc of capacity 1 to the sink. Region 0 holds everything but node 6,
// region 1 holds node 6.
struct AdversarialInstance {
  Network net;
  Partition part;
  Vertex v1 = kNoVertex, v5 = kNoVertex, v6 = kNoVertex;
  std::vector<std::array<Vertex, 3>> chains;
  Cap sentinel = 0;  // stands in for infinite capacity
};

AdversarialInstance gen_adversarial(int k);

}  // namespace regionflow
