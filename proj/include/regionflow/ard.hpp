#pragma once

#include <limits>
#include <vector>

#include "regionflow/discharge.hpp"

namespace regionflow {

// Moves flow from the vertices of X (their excess; s is unlimited) along
// residual paths through interior vertices to any vertex v with target[v],
// shortest paths first, until no target is reachable from an X-vertex that
// still has excess. Returns the amount moved. Paths are appended to
// stats->paths when `record` is set.
Cap augment(RegionNetwork& rn, const std::vector<Vertex>& X, const std::vector<bool>& target,
            DischargeStats* stats = nullptr, bool record = false);

enum class ArdBackend {
  kBasic,   // fresh shortest-path augmentation per stage
  kForest,  // persistent sink and boundary search trees
};

inline constexpr Label kAllStages = std::numeric_limits<Label>::max();

struct ArdOptions {
  Label max_stage = kAllStages;  // stages 0..max_stage are executed
  ArdBackend backend = ArdBackend::kBasic;
  bool record_paths = false;
};

// Search trees of a region, kept between discharges. mark[v] is -1 for the
// sink tree, j >= 0 for the tree rooted at the boundary vertices labelled j,
// kFree otherwise; the label of a marked interior vertex is mark + 1.
struct SearchForest {
  static constexpr Label kFree = std::numeric_limits<Label>::min();
  std::vector<Label> mark;     // per interior vertex
  std::vector<ArcId> parent;   // arc toward the root, or kNoArc

  bool empty() const { return mark.empty(); }
  bool operator==(const SearchForest&) const = default;
};

// Staged augmentation to T_k = {t} u {w in B^R : d(w) < k}, k = 0, 1, ...,
// followed by region-relabel. The forest backend needs `forest` (it is
// created on first use and updated in place).
DischargeStats ard_discharge(RegionNetwork& rn, Labeling& lab, const ArdOptions& options = {},
                             SearchForest* forest = nullptr);

// Drops every tree path that is no longer residual or whose root label
// changed; the affected vertices become free.
void forest_validate(SearchForest& forest, const RegionNetwork& rn, const Labeling& lab);

// Stage k of the forest backend: grows the tree with root label k - 1 (the
// sink tree for k = 0) and, if `augment_flow`, augments every excess vertex it
// contains to the root. Throws kInternalInconsistency if the tree reaches a
// vertex whose label exceeds k.
void forest_grow_augment(SearchForest& forest, RegionNetwork& rn, const Labeling& lab, Label k, bool augment_flow,
                         DischargeStats& stats, bool record = false);

}  // namespace regionflow
