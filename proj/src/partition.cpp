#include "regionflow/partition.hpp"

#include <algorithm>

namespace regionflow {

Partition make_partition(std::vector<RegionId> region_of, RegionId region_count, Vertex source, Vertex sink) {
  Partition part;
  part.region_count = region_count;
  part.source = source;
  part.sink = sink;
  part.region_of = std::move(region_of);
  part.members.assign(static_cast<std::size_t>(region_count), {});
  part.boundary.assign(static_cast<std::size_t>(region_count), {});
  for (Vertex v = 0; v < part.vertex_count(); ++v) {
    RegionId r = part.region_of[v];
    if (v == source || v == sink) {
      if (r != kNoRegion) throw Error(ErrorKind::kShapeMismatch, "terminal assigned to a region");
      continue;
    }
    if (r < 0 || r >= region_count)
      throw Error(ErrorKind::kShapeMismatch, "vertex " + std::to_string(v) + " has no valid region");
    part.members[r].push_back(v);
  }
  part.boundary_index.assign(part.region_of.size(), -1);
  return part;
}

Partition partition_grid(const std::vector<int>& dims, const std::vector<int>& slices, Vertex source,
                         Vertex sink) {
  if (dims.empty() || dims.size() != slices.size())
    throw Error(ErrorKind::kShapeMismatch, "grid dims and slices differ in rank");
  long long cells = 1;
  RegionId regions = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || slices[i] < 1 || slices[i] > dims[i])
      throw Error(ErrorKind::kShapeMismatch, "slices must be in [1, dim] per dimension");
    cells *= dims[i];
    regions *= slices[i];
  }
  if (std::min(source, sink) != cells || std::max(source, sink) != cells + 1)
    throw Error(ErrorKind::kShapeMismatch, "grid does not match the vertex count");
  std::vector<RegionId> region_of(static_cast<std::size_t>(cells + 2), kNoRegion);
  for (long long id = 0; id < cells; ++id) {
    long long rest = id;
    RegionId r = 0, stride = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      long long c = rest % dims[i];
      rest /= dims[i];
      r += static_cast<RegionId>(c * slices[i] / dims[i]) * stride;
      stride *= slices[i];
    }
    region_of[id] = r;
  }
  return make_partition(std::move(region_of), regions, source, sink);
}

Partition partition_by_id(Vertex vertex_count, Vertex source, Vertex sink, RegionId regions) {
  if (regions < 1) throw Error(ErrorKind::kShapeMismatch, "region count must be positive");
  Vertex inner = vertex_count - 2;
  Vertex block = std::max<Vertex>(1, (inner + regions - 1) / regions);
  std::vector<RegionId> region_of(static_cast<std::size_t>(vertex_count), kNoRegion);
  Vertex rank = 0;
  for (Vertex v = 0; v < vertex_count; ++v) {
    if (v == source || v == sink) continue;
    region_of[v] = rank++ / block;
  }
  return make_partition(std::move(region_of), regions, source, sink);
}

void compute_boundary(Partition& part, const std::vector<PairEnds>& crossing) {
  for (auto& b : part.boundary) b.clear();
  part.boundary_set.clear();
  part.inter_region_pairs.clear();
  std::fill(part.boundary_index.begin(), part.boundary_index.end(), -1);
  for (const PairEnds& e : crossing) {
    RegionId ru = part.region_of[e.u], rv = part.region_of[e.v];
    if (ru == kNoRegion || rv == kNoRegion || ru == rv) continue;
    part.boundary[ru].push_back(e.v);
    part.boundary[rv].push_back(e.u);
    part.inter_region_pairs.push_back(e.pair);
  }
  for (auto& b : part.boundary) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    part.boundary_set.insert(part.boundary_set.end(), b.begin(), b.end());
  }
  std::sort(part.boundary_set.begin(), part.boundary_set.end());
  part.boundary_set.erase(std::unique(part.boundary_set.begin(), part.boundary_set.end()), part.boundary_set.end());
  for (std::size_t i = 0; i < part.boundary_set.size(); ++i)
    part.boundary_index[part.boundary_set[i]] = static_cast<Vertex>(i);
  std::sort(part.inter_region_pairs.begin(), part.inter_region_pairs.end());
}

void compute_boundary(Partition& part, const Network& net) {
  if (net.vertex_count() != part.vertex_count())
    throw Error(ErrorKind::kShapeMismatch, "partition and network vertex counts differ");
  std::vector<PairEnds> crossing;
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    Vertex u = net.tail(a), v = net.head(a);
    RegionId ru = part.region_of[u], rv = part.region_of[v];
    if (ru != kNoRegion && rv != kNoRegion && ru != rv) crossing.push_back({u, v, p});
  }
  compute_boundary(part, crossing);
}

namespace {

Vertex find_sorted(const std::vector<Vertex>& list, Vertex v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  return (it != list.end() && *it == v) ? static_cast<Vertex>(it - list.begin()) : kNoVertex;
}

}  // namespace

RegionNetwork assemble_region(const Partition& part, RegionId k, std::vector<PairRecord> pairs,
                              const std::vector<std::pair<Vertex, Cap>>& excess, BoundaryMode mode) {
  const auto& members = part.members[k];
  const auto& bound = part.boundary[k];
  RegionNetwork rn;
  rn.region = k;
  rn.inner_count = static_cast<Vertex>(members.size());
  rn.boundary_count = static_cast<Vertex>(bound.size());
  const Vertex ls = rn.inner_count + rn.boundary_count;
  const Vertex lt = ls + 1;
  rn.global = members;
  rn.global.insert(rn.global.end(), bound.begin(), bound.end());
  rn.global.push_back(part.source);
  rn.global.push_back(part.sink);

  // 0: inner, 1: boundary, 2: terminal
  auto local = [&](Vertex g, int& kind) -> Vertex {
    if (g == part.source) return kind = 2, ls;
    if (g == part.sink) return kind = 2, lt;
    if (part.region_of[g] == k) return kind = 0, find_sorted(members, g);
    Vertex b = find_sorted(bound, g);
    kind = 1;
    return b == kNoVertex ? kNoVertex : rn.inner_count + b;
  };

  std::sort(pairs.begin(), pairs.end(), [](const PairRecord& a, const PairRecord& b) { return a.id < b.id; });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const PairRecord& a, const PairRecord& b) { return a.id == b.id; }),
              pairs.end());

  NetworkBuilder b(lt + 1, ls, lt);
  for (const PairRecord& p : pairs) {
    int ku = 0, kv = 0;
    Vertex lu = local(p.u, ku), lv = local(p.v, kv);
    if (lu == kNoVertex || lv == kNoVertex) continue;
    if (ku != 0 && kv != 0) continue;  // no interior endpoint: not in E^R
    Cap c = p.cap, rc = p.reverse_cap;
    if (mode == BoundaryMode::kZeroIncoming) {
      if (ku == 1) c = 0;
      if (kv == 1) rc = 0;
    }
    b.add_arc(lu, lv, c, rc);
    rn.global_pair.push_back(p.id);
  }
  for (const auto& [v, e] : excess) {
    if (part.region_of[v] != k) continue;
    if (e > 0) b.add_excess(find_sorted(members, v), e);
  }
  rn.net = b.build();
  return rn;
}

RegionNetwork build_region_network(const Network& net, const Partition& part, RegionId k, BoundaryMode mode) {
  if (k < 0 || k >= part.region_count) throw Error(ErrorKind::kPreconditionViolated, "region id out of range");
  std::vector<PairRecord> pairs;
  std::vector<std::pair<Vertex, Cap>> excess;
  for (Vertex u : part.members[k]) {
    if (net.excess(u) != 0) excess.emplace_back(u, net.excess(u));
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      ArcId fwd = net.pair_arc(net.pair_of(a));
      Vertex x = net.tail(fwd), y = net.head(fwd);
      pairs.push_back({x, y, net.cap(fwd), net.cap(net.sister(fwd)), net.pair_of(a)});
    }
  }
  return assemble_region(part, k, std::move(pairs), excess, mode);
}

}  // namespace regionflow
