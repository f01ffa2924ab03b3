#pragma once

#include <vector>

#include "regionflow/network.hpp"

namespace regionflow {

// Fixed assignment of non-terminal vertices to regions, plus the boundary
// structure derived from the arc set.
struct Partition {
  RegionId region_count = 0;
  Vertex source = kNoVertex;
  Vertex sink = kNoVertex;
  std::vector<RegionId> region_of;             // kNoRegion for s and t
  std::vector<std::vector<Vertex>> members;    // sorted, per region
  std::vector<std::vector<Vertex>> boundary;   // B^R, sorted, per region
  std::vector<Vertex> boundary_set;            // union of all B^R, sorted
  std::vector<Vertex> boundary_index;          // position in boundary_set or -1
  std::vector<ArcId> inter_region_pairs;       // pair ids crossing regions

  Vertex vertex_count() const { return static_cast<Vertex>(region_of.size()); }
  bool in_boundary(Vertex v) const { return boundary_index[v] >= 0; }
  Vertex boundary_size() const { return static_cast<Vertex>(boundary_set.size()); }
};

// Region assignment only; boundary fields stay empty until compute_boundary.
Partition make_partition(std::vector<RegionId> region_of, RegionId region_count, Vertex source, Vertex sink);

// Axis-aligned blocks over a row-major grid (dims[0] varies fastest). Grid
// vertices take ids [0, prod(dims)); terminals must be the next two ids.
Partition partition_grid(const std::vector<int>& dims, const std::vector<int>& slices, Vertex source,
                         Vertex sink);

// Contiguous blocks of ceil(n/K) non-terminal vertices in id order.
Partition partition_by_id(Vertex vertex_count, Vertex source, Vertex sink, RegionId regions);

struct PairEnds {
  Vertex u, v;
  ArcId pair;
};

// Fills boundary fields from the crossing pairs (terminal arcs never cross).
void compute_boundary(Partition& part, const std::vector<PairEnds>& crossing);
void compute_boundary(Partition& part, const Network& net);

enum class BoundaryMode {
  kZeroIncoming,  // capacities on (B^R, R) set to zero
  kKeepIncoming,  // arcs from the boundary keep their capacity
};

// Region network with compact local ids: interior vertices first (in global
// order), then B^R (in global order), then s and t. Pairs are kept in global
// pair order with their global orientation.
struct RegionNetwork {
  RegionId region = kNoRegion;
  Vertex inner_count = 0;
  Vertex boundary_count = 0;
  Network net;
  std::vector<Vertex> global;       // per local vertex
  std::vector<ArcId> global_pair;   // per local pair

  bool is_inner(Vertex v) const { return v < inner_count; }
  bool is_boundary(Vertex v) const { return v >= inner_count && v < inner_count + boundary_count; }
  Vertex local_source() const { return net.source(); }
  Vertex local_sink() const { return net.sink(); }

  bool operator==(const RegionNetwork&) const = default;
};

// One input pair as stored in a region: global endpoints and capacities in
// the pair's global orientation.
struct PairRecord {
  Vertex u, v;
  Cap cap, reverse_cap;
  ArcId id;
};

// Assembles a region network from the pairs touching region k (any order)
// and the excess of its members.
RegionNetwork assemble_region(const Partition& part, RegionId k, std::vector<PairRecord> pairs,
                              const std::vector<std::pair<Vertex, Cap>>& excess, BoundaryMode mode);

RegionNetwork build_region_network(const Network& net, const Partition& part, RegionId k,
                                   BoundaryMode mode = BoundaryMode::kZeroIncoming);

}  // namespace regionflow
