#include "regionflow/ard.hpp"

#include <algorithm>
#include <map>

namespace regionflow {

namespace {

constexpr Cap kUnlimited = std::numeric_limits<Cap>::max();

class Dinic {
 public:
  Dinic(RegionNetwork& rn, const std::vector<bool>& target, DischargeStats* stats, bool record)
      : rn_(rn), net_(rn.net), target_(target), stats_(stats), record_(record),
        level_(static_cast<std::size_t>(net_.vertex_count())), cur_(level_.size()) {}

  Cap run(const std::vector<Vertex>& X) {
    Cap moved = 0;
    while (levels(X)) {
      for (Vertex x : X) {
        if (target_[x] || level_[x] != 0) continue;
        while (supply(x) > 0) {
          Cap d = path_from(x);
          if (d == 0) break;
          moved += d;
        }
      }
    }
    return moved;
  }

 private:
  Cap supply(Vertex x) const { return x == net_.source() ? kUnlimited : net_.excess(x); }
  bool passable(Vertex v) const { return rn_.is_inner(v) && !target_[v]; }

  bool levels(const std::vector<Vertex>& X) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<Vertex> queue;
    for (Vertex x : X)
      if (!target_[x] && level_[x] < 0 && supply(x) > 0) {
        level_[x] = 0;
        queue.push_back(x);
      }
    bool reached = false;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Vertex v = queue[i];
      for (ArcId a = net_.first_arc(v); a < net_.end_arc(v); ++a) {
        Vertex h = net_.head(a);
        if (net_.cap(a) <= 0 || level_[h] >= 0) continue;
        if (target_[h]) {
          level_[h] = level_[v] + 1;
          reached = true;
        } else if (passable(h)) {
          level_[h] = level_[v] + 1;
          queue.push_back(h);
        }
      }
    }
    for (Vertex v = 0; v < net_.vertex_count(); ++v) cur_[v] = net_.first_arc(v);
    return reached;
  }

  Cap path_from(Vertex x) {
    std::vector<ArcId> stack;
    Vertex v = x;
    while (true) {
      if (v != x && target_[v]) {
        Cap d = supply(x);
        for (ArcId a : stack) d = std::min(d, net_.cap(a));
        for (ArcId a : stack) net_.push(a, d);
        if (stats_) {
          ++stats_->augmentations;
          if (record_) stats_->paths.push_back({x, v, d});
        }
        return d;
      }
      ArcId& a = cur_[v];
      for (; a < net_.end_arc(v); ++a) {
        Vertex h = net_.head(a);
        if (net_.cap(a) > 0 && level_[h] == level_[v] + 1 && (target_[h] || passable(h))) break;
      }
      if (a < net_.end_arc(v)) {
        stack.push_back(a);
        v = net_.head(a);
        continue;
      }
      level_[v] = -1;
      if (stack.empty()) return 0;
      v = net_.tail(stack.back());
      stack.pop_back();
      ++cur_[v];
    }
  }

  RegionNetwork& rn_;
  Network& net_;
  const std::vector<bool>& target_;
  DischargeStats* stats_;
  bool record_;
  std::vector<Label> level_;
  std::vector<ArcId> cur_;
};

std::vector<Vertex> excess_vertices(const RegionNetwork& rn) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < rn.inner_count; ++v)
    if (rn.net.excess(v) > 0) out.push_back(v);
  return out;
}

// Boundary vertices of the region keyed by label, labels below d_inf only.
std::map<Label, std::vector<Vertex>> roots_by_label(const RegionNetwork& rn, const Labeling& lab) {
  std::map<Label, std::vector<Vertex>> out;
  for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w)
    if (lab[w] < lab.d_inf) out[lab[w]].push_back(w);
  return out;
}

void basic_discharge(RegionNetwork& rn, Labeling& lab, const ArdOptions& options, DischargeStats& stats) {
  const Label last = std::min(options.max_stage, lab.d_inf);
  std::vector<bool> target(static_cast<std::size_t>(rn.net.vertex_count()), false);
  target[rn.net.sink()] = true;
  auto roots = roots_by_label(rn, lab);
  auto next_root = roots.begin();
  for (Label k = 0; k <= last; ++k) {
    if (k > 0) {
      // Jump to the next stage that adds targets.
      if (next_root == roots.end() || next_root->first + 1 > last) break;
      k = next_root->first + 1;
      for (Vertex w : next_root->second) target[w] = true;
      ++next_root;
    }
    std::vector<Vertex> X = excess_vertices(rn);
    if (X.empty()) break;
    ++stats.stages;
    augment(rn, X, target, &stats, options.record_paths);
  }
  lab = region_relabel(rn, lab, Variant::kArd);
}

bool is_root_of(const RegionNetwork& rn, const Labeling& lab, Vertex x, Label r) {
  if (r < 0) return x == rn.net.sink();
  return rn.is_boundary(x) && lab[x] == r;
}

class ForestStage {
 public:
  ForestStage(SearchForest& f, RegionNetwork& rn, const Labeling& lab, Label k, DischargeStats& stats, bool record)
      : f_(f), rn_(rn), net_(rn.net), lab_(lab), r_(k - 1), stats_(stats), record_(record) {}

  void run(bool augment_flow, const std::vector<Vertex>& excess) {
    if (r_ < 0) {
      open_.push_back(net_.sink());
    } else {
      for (Vertex w = rn_.inner_count; w < rn_.inner_count + rn_.boundary_count; ++w)
        if (lab_[w] == r_) open_.push_back(w);
    }
    if (open_.empty()) return;
    for (Vertex v = 0; v < rn_.inner_count; ++v)
      if (f_.mark[v] == r_) open_.push_back(v);
    bool counted = false;
    do {
      grow();
      if (!augment_flow) return;
      for (Vertex v : excess) {
        while (net_.excess(v) > 0 && f_.mark[v] == r_) {
          if (!counted) {
            ++stats_.stages;
            counted = true;
          }
          augment_from(v);
        }
      }
    } while (!open_.empty());
  }

 private:
  void grow() {
    while (!open_.empty()) {
      Vertex x = open_.back();
      open_.pop_back();
      if (rn_.is_inner(x) && f_.mark[x] != r_) continue;
      for (ArcId a = net_.first_arc(x); a < net_.end_arc(x); ++a) {
        Vertex y = net_.head(a);
        ArcId back = net_.sister(a);
        if (!rn_.is_inner(y) || net_.cap(back) <= 0) continue;
        Label m = f_.mark[y];
        if (m == SearchForest::kFree) {
          if (lab_[y] > r_ + 1)
            throw Error(ErrorKind::kInternalInconsistency, "search tree reached a vertex labelled above the tree");
          f_.mark[y] = r_;
          f_.parent[y] = back;
          open_.push_back(y);
        } else if (m > r_) {
          throw Error(ErrorKind::kInternalInconsistency, "search tree reached a vertex of a higher tree");
        }
      }
    }
  }

  void augment_from(Vertex v) {
    Cap d = net_.excess(v);
    Vertex x = v;
    while (rn_.is_inner(x)) {
      ArcId a = f_.parent[x];
      d = std::min(d, net_.cap(a));
      x = net_.head(a);
    }
    Vertex root = x;
    for (x = v; rn_.is_inner(x);) {
      ArcId a = f_.parent[x];
      net_.push(a, d);
      if (net_.cap(a) == 0) {
        f_.parent[x] = kNoArc;
        orphans_.push_back(x);
      }
      x = net_.head(a);
    }
    ++stats_.augmentations;
    if (record_) stats_.paths.push_back({v, root, d});
    adopt();
  }

  bool rooted(Vertex x) const {
    while (rn_.is_inner(x)) {
      if (f_.mark[x] != r_ || f_.parent[x] == kNoArc) return false;
      x = net_.head(f_.parent[x]);
    }
    return is_root_of(rn_, lab_, x, r_);
  }

  void adopt() {
    for (std::size_t i = 0; i < orphans_.size(); ++i) {
      Vertex o = orphans_[i];
      ArcId found = kNoArc;
      for (ArcId a = net_.first_arc(o); a < net_.end_arc(o) && found == kNoArc; ++a) {
        if (net_.cap(a) <= 0) continue;
        Vertex x = net_.head(a);
        if (is_root_of(rn_, lab_, x, r_) || (rn_.is_inner(x) && f_.mark[x] == r_ && rooted(x))) found = a;
      }
      if (found != kNoArc) {
        f_.parent[o] = found;
        continue;
      }
      ++stats_.relocations;
      f_.mark[o] = SearchForest::kFree;
      for (ArcId a = net_.first_arc(o); a < net_.end_arc(o); ++a) {
        Vertex x = net_.head(a);
        if (!rn_.is_inner(x) || f_.mark[x] != r_) continue;
        if (net_.cap(a) > 0) open_.push_back(x);
        if (f_.parent[x] == net_.sister(a)) {
          f_.parent[x] = kNoArc;
          orphans_.push_back(x);
        }
      }
    }
    orphans_.clear();
  }

  SearchForest& f_;
  RegionNetwork& rn_;
  Network& net_;
  const Labeling& lab_;
  Label r_;
  DischargeStats& stats_;
  bool record_;
  std::vector<Vertex> open_;
  std::vector<Vertex> orphans_;
};

void forest_discharge(RegionNetwork& rn, Labeling& lab, const ArdOptions& options, SearchForest& forest,
                      DischargeStats& stats) {
  forest_validate(forest, rn, lab);
  const Label last = std::min(options.max_stage, lab.d_inf);
  std::vector<Vertex> excess = excess_vertices(rn);
  std::vector<Label> stages{0};
  for (auto& [l, ws] : roots_by_label(rn, lab)) stages.push_back(l + 1);
  for (Label k : stages) {
    bool aug = k <= last && !excess.empty();
    ForestStage(forest, rn, lab, k, stats, options.record_paths).run(aug, excess);
    if (aug) std::erase_if(excess, [&](Vertex v) { return rn.net.excess(v) == 0; });
  }
  for (Vertex v = 0; v < rn.inner_count; ++v)
    lab[v] = forest.mark[v] == SearchForest::kFree ? lab.d_inf : forest.mark[v] + 1;
}

}  // namespace

Cap augment(RegionNetwork& rn, const std::vector<Vertex>& X, const std::vector<bool>& target, DischargeStats* stats,
            bool record) {
  return Dinic(rn, target, stats, record).run(X);
}

void forest_validate(SearchForest& forest, const RegionNetwork& rn, const Labeling& lab) {
  const Network& net = rn.net;
  const auto n = static_cast<std::size_t>(rn.inner_count);
  if (forest.mark.size() != n) {
    forest.mark.assign(n, SearchForest::kFree);
    forest.parent.assign(n, kNoArc);
    return;
  }
  // 0 unknown, 1 rooted, 2 broken
  std::vector<char> state(n, 0);
  std::vector<Vertex> chain;
  for (Vertex v = 0; v < rn.inner_count; ++v) {
    chain.clear();
    Vertex x = v;
    char result = 2;
    while (true) {
      if (state[x] != 0) {
        result = state[x];
        break;
      }
      chain.push_back(x);
      state[x] = 2;  // provisional; also breaks cycles
      Label m = forest.mark[x];
      ArcId a = forest.parent[x];
      if (m == SearchForest::kFree || a == kNoArc || lab[x] != m + 1 || net.cap(a) <= 0) break;
      Vertex h = net.head(a);
      if (!rn.is_inner(h)) {
        result = is_root_of(rn, lab, h, m) ? 1 : 2;
        break;
      }
      if (forest.mark[h] != m) break;
      x = h;
    }
    for (Vertex c : chain) {
      state[c] = result;
      if (result == 2) {
        forest.mark[c] = SearchForest::kFree;
        forest.parent[c] = kNoArc;
      }
    }
  }
}

void forest_grow_augment(SearchForest& forest, RegionNetwork& rn, const Labeling& lab, Label k, bool augment_flow,
                         DischargeStats& stats, bool record) {
  if (forest.mark.size() != static_cast<std::size_t>(rn.inner_count)) forest_validate(forest, rn, lab);
  ForestStage(forest, rn, lab, k, stats, record).run(augment_flow, excess_vertices(rn));
}

DischargeStats ard_discharge(RegionNetwork& rn, Labeling& lab, const ArdOptions& options, SearchForest* forest) {
  DischargeStats stats;
  if (options.backend == ArdBackend::kForest) {
    SearchForest local;
    forest_discharge(rn, lab, options, forest ? *forest : local, stats);
  } else {
    basic_discharge(rn, lab, options, stats);
  }
  return stats;
}

}  // namespace regionflow
