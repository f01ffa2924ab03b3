#include "regionflow/generators.hpp"

namespace regionflow {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

const std::vector<std::pair<int, int>>& grid_displacements() {
  static const std::vector<std::pair<int, int>> list = {
      {0, 1}, {1, 0}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3},
      {3, 2}, {0, 2}, {2, 0}, {2, 2}, {3, 3}, {3, 4}, {4, 2}};
  return list;
}

Network gen_grid(const GridSpec& spec) {
  const auto& disp = grid_displacements();
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorKind::kPreconditionViolated, "empty grid");
  if (spec.connectivity < 2 || spec.connectivity % 2 != 0 ||
      spec.connectivity / 2 > static_cast<int>(disp.size()))
    throw Error(ErrorKind::kPreconditionViolated, "connectivity must be even and at most 28");
  if (spec.strength < 0) throw Error(ErrorKind::kPreconditionViolated, "negative strength");
  const Vertex cells = static_cast<Vertex>(spec.width) * spec.height;
  const Vertex s = cells, t = cells + 1;
  NetworkBuilder b(cells + 2, s, t);
  std::mt19937_64 rng(spec.seed);
  std::vector<std::int64_t> value(static_cast<std::size_t>(cells));
  for (Vertex v = 0; v < cells; ++v) value[v] = static_cast<std::int64_t>(uniform_below(rng, 1001)) - 500;
  for (Vertex v = 0; v < cells; ++v) {
    if (value[v] > 0) b.add_excess(v, value[v]);
    if (value[v] < 0) b.add_arc(v, t, -value[v]);
  }
  const int used = spec.connectivity / 2;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      for (int i = 0; i < used; ++i) {
        int nx = x + disp[i].first, ny = y + disp[i].second;
        if (nx >= spec.width || ny >= spec.height) continue;
        b.add_arc(y * spec.width + x, ny * spec.width + nx, spec.strength, spec.strength);
      }
    }
  }
  return b.build();
}

Partition grid_partition(const GridSpec& spec, int slices_x, int slices_y) {
  const Vertex cells = static_cast<Vertex>(spec.width) * spec.height;
  return partition_grid({spec.width, spec.height}, {slices_x, slices_y}, cells, cells + 1);
}

AdversarialInstance gen_adversarial(int k) {
  if (k < 1) throw Error(ErrorKind::kPreconditionViolated, "need at least one chain");
  AdversarialInstance inst;
  inst.v1 = 0;
  for (int i = 0; i < k; ++i) inst.chains.push_back({1 + 3 * i, 2 + 3 * i, 3 + 3 * i});
  inst.v5 = 3 * k + 1;
  inst.v6 = 3 * k + 2;
  const Vertex s = 3 * k + 3, t = 3 * k + 4;
  const Cap total_excess = 2;
  // Flow may circulate around 1 -> chain -> 6 -> 1 many times, so the
  // sentinel must exceed the excess by far more than one unit.
  inst.sentinel = (total_excess + 1) << 30;
  const Cap inf = inst.sentinel;
  NetworkBuilder b(t + 1, s, t);
  b.add_excess(inst.v1, total_excess);
  b.add_arc(inst.v1, t, 1);
  for (const auto& c : inst.chains) {
    b.add_arc(inst.v1, c[0], inf, inf);
    b.add_arc(c[0], c[1], inf, inf);
    b.add_arc(c[1], c[2], inf, inf);
    b.add_arc(c[2], inst.v5, inf, inf);
  }
  b.add_arc(inst.v5, inst.v6, inf, inf);
  b.add_arc(inst.v6, inst.v1, inf, 0);
  inst.net = b.build();
  std::vector<RegionId> region_of(static_cast<std::size_t>(t + 1), 0);
  region_of[s] = region_of[t] = kNoRegion;
  region_of[inst.v6] = 1;
  inst.part = make_partition(std::move(region_of), 2, s, t);
  compute_boundary(inst.part, inst.net);
  return inst;
}

}  // namespace regionflow
