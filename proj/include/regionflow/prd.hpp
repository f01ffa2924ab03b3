#pragma once

#include <vector>

#include "regionflow/discharge.hpp"

namespace regionflow {

// Occupied labels of the interior vertices as a doubly-linked list of
// buckets, each holding an active and an inactive vertex list. There are at
// most as many buckets as interior vertices, whatever the label range.
class BucketList {
 public:
  explicit BucketList(Vertex vertices = 0);

  void insert(Vertex v, Label label, bool active);
  void remove(Vertex v);
  void set_active(Vertex v, bool active);
  // Moves v to a higher label; returns true if its old bucket became empty.
  bool raise(Vertex v, Label label);

  bool contains(Vertex v) const { return bucket_of_[v] >= 0; }
  bool active(Vertex v) const { return active_[v]; }
  Label label_of(Vertex v) const { return buckets_[bucket_of_[v]].label; }

  // Some active vertex of the highest label, or kNoVertex.
  Vertex highest_active();
  bool has_label(Label l) const;
  // Vertices with labels in (lo, hi), ascending by label.
  std::vector<Vertex> vertices_between(Label lo, Label hi) const;
  // Labels of all buckets, ascending (for consistency checks).
  std::vector<Label> labels() const;
  bool consistent(const std::vector<Label>& d) const;

 private:
  struct Bucket {
    Label label;
    int prev, next;
    Vertex heads[2];  // inactive, active
  };
  int find_or_create(Label label, int hint);
  void unlink_vertex(Vertex v);
  void link_vertex(Vertex v, int b, bool active);
  void drop_bucket(int b);
  bool empty(int b) const { return buckets_[b].heads[0] < 0 && buckets_[b].heads[1] < 0; }

  std::vector<Bucket> buckets_;
  std::vector<int> free_;
  int first_ = -1;  // lowest label
  int last_ = -1;   // highest label
  int top_ = -1;    // no active vertex above this bucket
  std::vector<int> bucket_of_;
  std::vector<Vertex> prev_, next_;
  std::vector<bool> active_;
};

enum class ArcRule {
  kCurrentArc,  // HIPR-style current arc, kept across discharges
  kForward,     // lowest higher global id first; used to replay fixed schedules
};

struct PrdOptions {
  bool initial_relabel = false;
  bool region_gap = true;
  ArcRule rule = ArcRule::kCurrentArc;
};

// Per-region state that survives between discharges.
struct PrdState {
  std::vector<ArcId> current;  // per interior vertex

  bool operator==(const PrdState&) const = default;
};

PrdState make_prd_state(const RegionNetwork& rn);

// Pushes min(e(u), c(a)) along a = (u, v). Throws kNotApplicable unless u is
// an active interior vertex, c(a) > 0 and d(u) = d(v) + 1.
Cap push(RegionNetwork& rn, const Labeling& lab, ArcId a);

// d(u) := min(d_inf, 1 + min label over residual out-arcs). Throws
// kNotApplicable unless u is active with no admissible arc.
void relabel(const RegionNetwork& rn, Labeling& lab, Vertex u);

// Highest-label push-relabel until no interior vertex is active.
DischargeStats prd_discharge(RegionNetwork& rn, Labeling& lab, PrdState& state, const PrdOptions& options = {});

}  // namespace regionflow
