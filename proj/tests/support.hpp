#pragma once

#include <random>
#include <vector>

#include "regionflow/generators.hpp"
#include "regionflow/labeling.hpp"
#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace testing {

using namespace regionflow;

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Random sparse network on n non-terminal vertices (ids 0..n-1, s = n,
// t = n + 1) with paired arcs, random excess and sink arcs.
inline Network random_network(std::mt19937_64& rng, int n, int arcs, int max_cap) {
  NetworkBuilder b(n + 2, n, n + 1);
  for (int i = 0; i < arcs; ++i) {
    int u = pick(rng, 0, n - 1), v = pick(rng, 0, n - 1);
    if (u == v) continue;
    b.add_arc(u, v, pick(rng, 0, max_cap), pick(rng, 0, 1) ? pick(rng, 0, max_cap) : 0);
  }
  for (int v = 0; v < n; ++v) {
    switch (pick(rng, 0, 3)) {
      case 0: b.add_excess(v, pick(rng, 1, max_cap)); break;
      case 1: b.add_arc(v, n + 1, pick(rng, 1, max_cap)); break;
      case 2: b.add_arc(n, v, pick(rng, 1, max_cap)); break;
      default: break;
    }
  }
  return b.build();
}

// s->a:2, s->b:2, a->t:1, b->t:3, a->b:1 with a=0, b=1, s=2, t=3.
inline Network diamond() {
  NetworkBuilder b(4, 2, 3);
  b.add_arc(2, 0, 2);
  b.add_arc(2, 1, 2);
  b.add_arc(0, 3, 1);
  b.add_arc(1, 3, 3);
  b.add_arc(0, 1, 1);
  return b.build();
}

// Source arcs folded into excess.
inline Network folded(const Network& net) { return init(net, Metric::kPushRelabel, net.vertex_count()).network; }

// Minimum over all 2^(n-2) cuts, by enumeration.
inline Cap brute_force_mincut(const Network& net) {
  std::vector<Vertex> free;
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!net.is_terminal(v)) free.push_back(v);
  Cap best = -1;
  for (std::uint32_t mask = 0; mask < (1u << free.size()); ++mask) {
    std::vector<bool> side(static_cast<std::size_t>(net.vertex_count()), false);
    side[net.source()] = true;
    for (std::size_t i = 0; i < free.size(); ++i) side[free[i]] = (mask >> i) & 1;
    Cap c = cut_cost(net, side);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

inline Partition random_partition(std::mt19937_64& rng, const Network& net, int regions) {
  std::vector<RegionId> of(static_cast<std::size_t>(net.vertex_count()), kNoRegion);
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!net.is_terminal(v)) of[v] = pick(rng, 0, regions - 1);
  Partition p = make_partition(of, regions, net.source(), net.sink());
  compute_boundary(p, net);
  return p;
}

inline GridSpec random_grid_spec(std::mt19937_64& rng, int max_side) {
  GridSpec g;
  g.width = pick(rng, 2, max_side);
  g.height = pick(rng, 2, max_side);
  g.connectivity = pick(rng, 0, 1) ? 8 : 4;
  const Cap strengths[] = {10, 150, 1000};
  g.strength = strengths[pick(rng, 0, 2)];
  g.seed = rng();
  return g;
}

inline Label d_inf_of(const Network& net, const Partition& part, Variant var) {
  return var == Variant::kArd ? std::max<Label>(1, part.boundary_size()) : net.vertex_count();
}

inline Label arc_length(const Partition& part, Variant var, Vertex u, Vertex v) {
  return var == Variant::kPrd || crosses_regions(part, u, v) ? 1 : 0;
}

// Exact distance labels of the metric, unreachable vertices at d_inf.
inline Labeling true_labels(const Network& net, const Partition& part, Variant var) {
  Labeling lab;
  lab.metric = metric_of(var);
  lab.d_inf = d_inf_of(net, part, var);
  lab.d = var == Variant::kArd ? true_region_distance(net, part) : bfs_distance(net);
  std::vector<bool> reach = sink_reachable(net);
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!reach[v] || lab[v] > lab.d_inf) lab[v] = lab.d_inf;
  lab[net.source()] = lab.d_inf;
  lab[net.sink()] = 0;
  return lab;
}

// Valid labeling: exact distances cut at a random level, then random
// relabel steps (each raises a vertex to its lowest admissible value).
inline Labeling random_valid_labeling(std::mt19937_64& rng, const Network& net, const Partition& part, Variant var) {
  Labeling lab = true_labels(net, part, var);
  Label cap = pick(rng, 0, lab.d_inf);
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!net.is_terminal(v)) lab[v] = std::min(lab[v], cap);
  int steps = pick(rng, 0, net.vertex_count());
  for (int i = 0; i < steps; ++i) {
    Vertex v = pick(rng, 0, net.vertex_count() - 1);
    if (net.is_terminal(v)) continue;
    Label best = lab.d_inf;
    for (ArcId a = net.first_arc(v); a < net.end_arc(v); ++a)
      if (net.cap(a) > 0) best = std::min(best, lab[net.head(a)] + arc_length(part, var, v, net.head(a)));
    lab[v] = std::max(lab[v], std::min(best, lab.d_inf));
  }
  return lab;
}

inline Labeling local_labels(const RegionNetwork& rn, const Labeling& global) {
  Labeling lab;
  lab.metric = global.metric;
  lab.d_inf = global.d_inf;
  lab.d.resize(rn.global.size());
  for (std::size_t v = 0; v < rn.global.size(); ++v) lab.d[v] = global[rn.global[v]];
  return lab;
}

// A region of a random network with a valid labeling, ready to discharge.
struct RegionCase {
  Network net;
  Partition part;
  RegionId k = 0;
  Labeling global;
  RegionNetwork rn;
  Labeling lab;
};

inline RegionCase random_region_case(std::mt19937_64& rng, Variant var, int max_n = 16) {
  RegionCase c;
  int n = pick(rng, 2, max_n);
  c.net = folded(random_network(rng, n, pick(rng, n, 3 * n), 9));
  c.part = random_partition(rng, c.net, pick(rng, 1, 4));
  c.k = pick(rng, 0, c.part.region_count - 1);
  c.global = random_valid_labeling(rng, c.net, c.part, var);
  c.rn = build_region_network(c.net, c.part, c.k);
  c.lab = local_labels(c.rn, c.global);
  return c;
}

}  // namespace testing
