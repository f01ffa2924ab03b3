#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

enum class Variant { kArd, kPrd };

inline Metric metric_of(Variant v) { return v == Variant::kArd ? Metric::kRegion : Metric::kPushRelabel; }

// An arc between two different regions. Under the region metric these are
// the only arcs of length one.
inline bool crosses_regions(const Partition& part, Vertex u, Vertex v) {
  RegionId ru = part.region_of[u], rv = part.region_of[v];
  return ru != kNoRegion && rv != kNoRegion && ru != rv;
}

struct LabelViolation {
  ArcId arc = kNoArc;
  Vertex u = kNoVertex, v = kNoVertex;
  std::string message;
};

// Validity on every positive residual arc; terminals are skipped as tails.
std::optional<LabelViolation> check_valid(const Network& net, const Labeling& lab, const Partition& part);

// Same check inside a region network (local ids): arcs touching a boundary
// vertex are the crossing arcs.
std::optional<LabelViolation> check_valid_region(const RegionNetwork& rn, const Labeling& lab);

// Exact distances to t over positive residual arcs. The region metric counts
// crossing arcs only; unreachable vertices get the boundary size.
std::vector<Label> true_region_distance(const Network& net, const Partition& part);
// Plain BFS distance; unreachable vertices get n.
std::vector<Label> bfs_distance(const Network& net);

// Counts per label value in [0, d_inf].
class LabelHistogram {
 public:
  LabelHistogram() = default;
  explicit LabelHistogram(Label d_inf) : counts_(static_cast<std::size_t>(d_inf) + 1, 0) {}

  void add(Label l, long long c = 1) { counts_[l] += c; }
  void remove(Label l, long long c = 1) { counts_[l] -= c; }
  void move(Label from, Label to, long long c = 1) {
    counts_[from] -= c;
    counts_[to] += c;
  }
  long long count(Label l) const { return counts_[l]; }
  Label d_inf() const { return static_cast<Label>(counts_.size()) - 1; }
  long long total() const;

  // Smallest g > 0 with no vertex labelled g while some label lies in
  // (g, d_inf); nullopt if there is none.
  std::optional<Label> find_gap() const;

 private:
  std::vector<long long> counts_;
};

LabelHistogram make_histogram(const std::vector<Label>& labels, Label d_inf);

// Raises every label above the first gap to d_inf. Returns the gap, if any.
std::optional<Label> global_gap(Labeling& lab, LabelHistogram& hist);

// Exact distance within the region network from the seeds t (label 0) and the
// boundary vertices (their current labels). Interior labels of `lab` are
// ignored; boundary labels are copied unchanged.
Labeling region_relabel(const RegionNetwork& rn, const Labeling& lab, Variant variant);

// Push-relabel region gap: no vertex of R or B^R carries label g > 0. Interior
// vertices with g < d < d_next, d_next the lowest boundary label above g, are
// raised to d_next + 1 (d_inf if no boundary label lies above g).
Labeling region_gap(const RegionNetwork& rn, Labeling lab, Label g);

// Residual inter-region arc of the boundary graph, by global id.
struct BoundaryArc {
  Vertex u, v;
};

// Per region, (group label, distance) sorted by label. A vertex of that
// region with label l maps to max(l, distance of the first group >= l).
using GroupDistances = std::vector<std::pair<Label, Label>>;

struct BoundaryRelabelResult {
  std::vector<Label> labels;                // per boundary_set entry
  std::vector<GroupDistances> groups;       // per region
};

BoundaryRelabelResult boundary_relabel(const Partition& part, const std::vector<Label>& boundary_labels,
                                       const std::vector<BoundaryArc>& arcs, Label d_inf);

Label apply_group_distances(const GroupDistances& groups, Label l, Label d_inf);

// Whole-network form: builds the boundary graph from `net` and updates every
// vertex, interior ones through their region's group distances.
Labeling boundary_relabel(const Network& net, const Labeling& lab, const Partition& part);

}  // namespace regionflow
