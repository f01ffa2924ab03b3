#include "regionflow/labeling.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace regionflow {

namespace {

std::string arc_text(Vertex u, Vertex v, Label du, Label dv) {
  return "arc (" + std::to_string(u) + "," + std::to_string(v) + ") labels " + std::to_string(du) + " > " +
         std::to_string(dv) + " + allowance";
}

std::optional<LabelViolation> check_terminals(const Labeling& lab, Vertex s, Vertex t) {
  if (lab[t] != 0) return LabelViolation{kNoArc, t, kNoVertex, "d(t) != 0"};
  if (lab[s] != lab.d_inf) return LabelViolation{kNoArc, s, kNoVertex, "d(s) != d_inf"};
  for (std::size_t v = 0; v < lab.d.size(); ++v) {
    if (lab.d[v] < 0 || lab.d[v] > lab.d_inf)
      return LabelViolation{kNoArc, static_cast<Vertex>(v), kNoVertex, "label out of range"};
  }
  return std::nullopt;
}

}  // namespace

std::optional<LabelViolation> check_valid(const Network& net, const Labeling& lab, const Partition& part) {
  if (auto bad = check_terminals(lab, net.source(), net.sink())) return bad;
  for (Vertex u = 0; u < net.vertex_count(); ++u) {
    if (net.is_terminal(u)) continue;
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      if (net.cap(a) <= 0) continue;
      Vertex v = net.head(a);
      Label allow = 1;
      if (lab.metric == Metric::kRegion && !crosses_regions(part, u, v)) allow = 0;
      if (lab[u] > lab[v] + allow) return LabelViolation{a, u, v, arc_text(u, v, lab[u], lab[v])};
    }
  }
  return std::nullopt;
}

std::optional<LabelViolation> check_valid_region(const RegionNetwork& rn, const Labeling& lab) {
  const Network& net = rn.net;
  if (auto bad = check_terminals(lab, net.source(), net.sink())) return bad;
  for (Vertex u = 0; u < net.vertex_count(); ++u) {
    if (net.is_terminal(u)) continue;
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      if (net.cap(a) <= 0) continue;
      Vertex v = net.head(a);
      Label allow = 1;
      if (lab.metric == Metric::kRegion && !rn.is_boundary(u) && !rn.is_boundary(v)) allow = 0;
      if (lab[u] > lab[v] + allow) return LabelViolation{a, u, v, arc_text(u, v, lab[u], lab[v])};
    }
  }
  return std::nullopt;
}

std::vector<Label> true_region_distance(const Network& net, const Partition& part) {
  const Label unreachable = std::max<Label>(1, part.boundary_size());
  std::vector<Label> dist(static_cast<std::size_t>(net.vertex_count()), unreachable);
  std::deque<Vertex> dq;
  dist[net.sink()] = 0;
  dq.push_back(net.sink());
  std::vector<bool> done(dist.size(), false);
  while (!dq.empty()) {
    Vertex x = dq.front();
    dq.pop_front();
    if (done[x]) continue;
    done[x] = true;
    for (ArcId a = net.first_arc(x); a < net.end_arc(x); ++a) {
      Vertex y = net.head(a);
      if (y == net.source() || net.cap(net.sister(a)) <= 0) continue;
      Label w = crosses_regions(part, y, x) ? 1 : 0;
      if (dist[x] + w < dist[y]) {
        dist[y] = dist[x] + w;
        if (w == 0) dq.push_front(y);
        else dq.push_back(y);
      }
    }
  }
  dist[net.source()] = unreachable;
  return dist;
}

std::vector<Label> bfs_distance(const Network& net) {
  const Label n = net.vertex_count();
  std::vector<Label> dist(static_cast<std::size_t>(n), n);
  std::deque<Vertex> q{net.sink()};
  dist[net.sink()] = 0;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    for (ArcId a = net.first_arc(x); a < net.end_arc(x); ++a) {
      Vertex y = net.head(a);
      if (y == net.source() || dist[y] != n || net.cap(net.sister(a)) <= 0) continue;
      dist[y] = std::min(dist[x] + 1, n);
      q.push_back(y);
    }
  }
  dist[net.source()] = n;
  return dist;
}

long long LabelHistogram::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0LL); }

std::optional<Label> LabelHistogram::find_gap() const {
  const Label inf = d_inf();
  Label top = inf - 1;
  while (top > 0 && counts_[top] == 0) --top;
  for (Label g = 1; g < top; ++g) {
    if (counts_[g] == 0) return g;
  }
  return std::nullopt;
}

LabelHistogram make_histogram(const std::vector<Label>& labels, Label d_inf) {
  LabelHistogram h(d_inf);
  for (Label l : labels) h.add(l);
  return h;
}

std::optional<Label> global_gap(Labeling& lab, LabelHistogram& hist) {
  auto g = hist.find_gap();
  if (!g) return std::nullopt;
  for (Label& l : lab.d) {
    if (l > *g && l < lab.d_inf) {
      hist.move(l, lab.d_inf);
      l = lab.d_inf;
    }
  }
  return g;
}

Labeling region_relabel(const RegionNetwork& rn, const Labeling& lab, Variant variant) {
  const Network& net = rn.net;
  const Label inf = lab.d_inf;
  Labeling out = lab;
  const Vertex s = net.source(), t = net.sink();
  std::vector<Label> best(static_cast<std::size_t>(rn.inner_count), inf);
  std::vector<bool> done(best.size(), false);
  for (Vertex v = 0; v < rn.inner_count; ++v) out[v] = inf;
  out[s] = inf;
  out[t] = 0;

  // Seeds: t, then boundary vertices by (label, id).
  std::vector<Vertex> seeds;
  for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w)
    if (lab[w] < inf) seeds.push_back(w);
  std::stable_sort(seeds.begin(), seeds.end(), [&](Vertex a, Vertex b) { return lab[a] < lab[b]; });
  seeds.insert(seeds.begin(), t);

  struct Entry {
    Vertex v;
    Label d;
  };
  std::deque<Entry> dq;
  std::size_t next_seed = 0;
  auto seed_label = [&](std::size_t i) { return seeds[i] == t ? 0 : lab[seeds[i]]; };

  auto relax_from = [&](Vertex x, Label dx) {
    // Length of the arcs y -> x.
    Label w = 1;
    if (variant == Variant::kArd) w = rn.is_boundary(x) ? 1 : 0;
    Label nl = dx + w;
    if (nl >= inf) return;
    for (ArcId a = net.first_arc(x); a < net.end_arc(x); ++a) {
      Vertex y = net.head(a);
      if (!rn.is_inner(y) || done[y] || net.cap(net.sister(a)) <= 0 || nl >= best[y]) continue;
      best[y] = nl;
      if (nl == dx) dq.push_front({y, nl});
      else dq.push_back({y, nl});
    }
  };

  while (!dq.empty() || next_seed < seeds.size()) {
    bool take_seed = next_seed < seeds.size() && (dq.empty() || seed_label(next_seed) <= dq.front().d);
    if (take_seed) {
      Vertex x = seeds[next_seed];
      relax_from(x, seed_label(next_seed));
      ++next_seed;
      continue;
    }
    Entry e = dq.front();
    dq.pop_front();
    if (done[e.v] || e.d != best[e.v]) continue;
    done[e.v] = true;
    out[e.v] = e.d;
    relax_from(e.v, e.d);
  }
  return out;
}

Labeling region_gap(const RegionNetwork& rn, Labeling lab, Label g) {
  if (g <= 0) throw Error(ErrorKind::kPreconditionViolated, "gap label must be positive");
  const Vertex region_end = rn.inner_count + rn.boundary_count;
  for (Vertex v = 0; v < region_end; ++v) {
    if (lab[v] == g) throw Error(ErrorKind::kPreconditionViolated, "label " + std::to_string(g) + " is present");
  }
  Label next = lab.d_inf;
  for (Vertex w = rn.inner_count; w < region_end; ++w)
    if (lab[w] > g) next = std::min(next, lab[w]);
  const Label raised = next >= lab.d_inf ? lab.d_inf : std::min(next + 1, lab.d_inf);
  for (Vertex v = 0; v < rn.inner_count; ++v)
    if (lab[v] > g && lab[v] < next) lab[v] = raised;
  return lab;
}

BoundaryRelabelResult boundary_relabel(const Partition& part, const std::vector<Label>& boundary_labels,
                                       const std::vector<BoundaryArc>& arcs, Label d_inf) {
  const auto& bset = part.boundary_set;
  // Groups: one per (region, label) among finite boundary labels.
  std::vector<std::vector<Label>> region_labels(static_cast<std::size_t>(part.region_count));
  for (std::size_t i = 0; i < bset.size(); ++i)
    if (boundary_labels[i] < d_inf) region_labels[part.region_of[bset[i]]].push_back(boundary_labels[i]);
  std::vector<int> region_first(static_cast<std::size_t>(part.region_count) + 1, 0);
  std::vector<Label> group_label;
  for (RegionId r = 0; r < part.region_count; ++r) {
    auto& ls = region_labels[r];
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    region_first[r] = static_cast<int>(group_label.size());
    group_label.insert(group_label.end(), ls.begin(), ls.end());
  }
  region_first[part.region_count] = static_cast<int>(group_label.size());
  auto group_of = [&](Vertex v, Label l) -> int {
    RegionId r = part.region_of[v];
    const auto& ls = region_labels[r];
    return region_first[r] + static_cast<int>(std::lower_bound(ls.begin(), ls.end(), l) - ls.begin());
  };
  const int groups = static_cast<int>(group_label.size());

  // Reversed unit arcs: from the head group back to the tail group.
  std::vector<std::vector<int>> rev(static_cast<std::size_t>(groups));
  for (const BoundaryArc& a : arcs) {
    Label lu = boundary_labels[part.boundary_index[a.u]];
    Label lv = boundary_labels[part.boundary_index[a.v]];
    if (lu >= d_inf || lv >= d_inf) continue;
    rev[group_of(a.v, lv)].push_back(group_of(a.u, lu));
  }

  std::vector<Label> dist(static_cast<std::size_t>(groups), d_inf);
  std::deque<int> dq;
  for (int g = 0; g < groups; ++g) {
    if (group_label[g] == 0) {
      dist[g] = 0;
      dq.push_back(g);
    }
  }
  std::vector<bool> done(static_cast<std::size_t>(groups), false);
  std::vector<RegionId> region_of_group(static_cast<std::size_t>(groups));
  for (RegionId r = 0; r < part.region_count; ++r)
    for (int g = region_first[r]; g < region_first[r + 1]; ++g) region_of_group[g] = r;
  while (!dq.empty()) {
    int g = dq.front();
    dq.pop_front();
    if (done[g]) continue;
    done[g] = true;
    // Zero arc from the next lower group of the same region.
    if (g > region_first[region_of_group[g]] && dist[g] < dist[g - 1]) {
      dist[g - 1] = dist[g];
      dq.push_front(g - 1);
    }
    for (int h : rev[g]) {
      if (dist[g] + 1 < dist[h]) {
        dist[h] = dist[g] + 1;
        dq.push_back(h);
      }
    }
  }

  BoundaryRelabelResult out;
  out.labels.resize(bset.size());
  for (std::size_t i = 0; i < bset.size(); ++i) {
    Label l = boundary_labels[i];
    out.labels[i] = l >= d_inf ? d_inf : std::min(d_inf, std::max(l, dist[group_of(bset[i], l)]));
  }
  out.groups.resize(static_cast<std::size_t>(part.region_count));
  for (RegionId r = 0; r < part.region_count; ++r)
    for (int g = region_first[r]; g < region_first[r + 1]; ++g) out.groups[r].emplace_back(group_label[g], dist[g]);
  return out;
}

Label apply_group_distances(const GroupDistances& groups, Label l, Label d_inf) {
  if (l >= d_inf) return d_inf;
  if (l == 0) return 0;
  auto it = std::lower_bound(groups.begin(), groups.end(), std::make_pair(l, Label{-1}));
  if (it == groups.end()) return d_inf;
  return std::min(d_inf, std::max(l, it->second));
}

Labeling boundary_relabel(const Network& net, const Labeling& lab, const Partition& part) {
  std::vector<Label> bl(part.boundary_set.size());
  for (std::size_t i = 0; i < bl.size(); ++i) bl[i] = lab[part.boundary_set[i]];
  std::vector<BoundaryArc> arcs;
  for (Vertex u : part.boundary_set) {
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      Vertex v = net.head(a);
      if (net.cap(a) > 0 && crosses_regions(part, u, v)) arcs.push_back({u, v});
    }
  }
  BoundaryRelabelResult r = boundary_relabel(part, bl, arcs, lab.d_inf);
  Labeling out = lab;
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (net.is_terminal(v)) continue;
    int bi = part.boundary_index[v];
    out[v] = bi >= 0 ? r.labels[bi] : apply_group_distances(r.groups[part.region_of[v]], lab[v], lab.d_inf);
  }
  return out;
}

}  // namespace regionflow
