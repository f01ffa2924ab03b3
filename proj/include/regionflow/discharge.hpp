#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regionflow/labeling.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

// One augmented path of an ARD discharge: start vertex, end vertex (t or a
// boundary vertex) and amount, in local ids.
struct PathFlow {
  Vertex from, to;
  Cap amount;
};

struct DischargeStats {
  long long pushes = 0;
  long long relabels = 0;
  long long gaps = 0;
  long long augmentations = 0;
  long long stages = 0;
  long long relocations = 0;  // orphans freed from a search tree
  std::vector<PathFlow> paths;  // ARD only, when recording is on
};

struct DischargeCheck {
  bool optimality = true;    // only checked when requested
  bool monotonicity = true;
  bool validity = true;
  bool flow_direction = true;
  std::string message;
  bool ok() const { return optimality && monotonicity && validity && flow_direction; }
};

// Post-hoc check of a region discharge from the states before and after.
// PRD: every arc with f'(u,v) > 0 has d'(u) > d(v). ARD: every recorded path
// from u to v has d'(u) > d(v), and the paths account for the moved flow.
DischargeCheck check_discharge(const RegionNetwork& before, const Labeling& lab_before, const RegionNetwork& after,
                               const Labeling& lab_after, Variant variant, bool expect_optimal,
                               const std::vector<PathFlow>* paths = nullptr);

inline bool is_active(const RegionNetwork& rn, const Labeling& lab, Vertex v) {
  return rn.is_inner(v) && rn.net.excess(v) > 0 && lab[v] < lab.d_inf;
}

bool has_active(const RegionNetwork& rn, const Labeling& lab);

}  // namespace regionflow
