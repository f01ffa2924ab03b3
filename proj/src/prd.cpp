#include "regionflow/prd.hpp"

#include <algorithm>

namespace regionflow {

BucketList::BucketList(Vertex vertices)
    : bucket_of_(static_cast<std::size_t>(vertices), -1),
      prev_(static_cast<std::size_t>(vertices), kNoVertex),
      next_(static_cast<std::size_t>(vertices), kNoVertex),
      active_(static_cast<std::size_t>(vertices), false) {}

int BucketList::find_or_create(Label label, int hint) {
  // Walk to the last bucket with a label <= `label`.
  int at = -1;
  if (hint >= 0) {
    at = hint;
    while (buckets_[at].next >= 0 && buckets_[buckets_[at].next].label <= label) at = buckets_[at].next;
  } else {
    at = last_;
    while (at >= 0 && buckets_[at].label > label) at = buckets_[at].prev;
  }
  if (at >= 0 && buckets_[at].label == label) return at;
  int b;
  if (!free_.empty()) {
    b = free_.back();
    free_.pop_back();
  } else {
    b = static_cast<int>(buckets_.size());
    buckets_.push_back({});
  }
  int after = at < 0 ? first_ : buckets_[at].next;
  buckets_[b] = {label, at, after, {kNoVertex, kNoVertex}};
  if (at >= 0) buckets_[at].next = b;
  else first_ = b;
  if (after >= 0) buckets_[after].prev = b;
  else last_ = b;
  return b;
}

void BucketList::drop_bucket(int b) {
  Bucket& bk = buckets_[b];
  if (bk.prev >= 0) buckets_[bk.prev].next = bk.next;
  else first_ = bk.next;
  if (bk.next >= 0) buckets_[bk.next].prev = bk.prev;
  else last_ = bk.prev;
  if (top_ == b) top_ = bk.prev;
  free_.push_back(b);
}

void BucketList::unlink_vertex(Vertex v) {
  int b = bucket_of_[v];
  Vertex& head = buckets_[b].heads[active_[v] ? 1 : 0];
  if (prev_[v] != kNoVertex) next_[prev_[v]] = next_[v];
  else head = next_[v];
  if (next_[v] != kNoVertex) prev_[next_[v]] = prev_[v];
  prev_[v] = next_[v] = kNoVertex;
}

void BucketList::link_vertex(Vertex v, int b, bool active) {
  bucket_of_[v] = b;
  active_[v] = active;
  Vertex& head = buckets_[b].heads[active ? 1 : 0];
  prev_[v] = kNoVertex;
  next_[v] = head;
  if (head != kNoVertex) prev_[head] = v;
  head = v;
  if (active && (top_ < 0 || buckets_[b].label > buckets_[top_].label)) top_ = b;
}

void BucketList::insert(Vertex v, Label label, bool active) { link_vertex(v, find_or_create(label, -1), active); }

void BucketList::remove(Vertex v) {
  int b = bucket_of_[v];
  unlink_vertex(v);
  bucket_of_[v] = -1;
  active_[v] = false;
  if (empty(b)) drop_bucket(b);
}

void BucketList::set_active(Vertex v, bool active) {
  if (active_[v] == active) return;
  int b = bucket_of_[v];
  unlink_vertex(v);
  link_vertex(v, b, active);
}

bool BucketList::raise(Vertex v, Label label) {
  int b = bucket_of_[v];
  bool active = active_[v];
  unlink_vertex(v);
  int nb = find_or_create(label, b);
  link_vertex(v, nb, active);
  if (empty(b)) {
    drop_bucket(b);
    return true;
  }
  return false;
}

Vertex BucketList::highest_active() {
  while (top_ >= 0 && buckets_[top_].heads[1] == kNoVertex) top_ = buckets_[top_].prev;
  return top_ < 0 ? kNoVertex : buckets_[top_].heads[1];
}

bool BucketList::has_label(Label l) const {
  for (int b = first_; b >= 0 && buckets_[b].label <= l; b = buckets_[b].next)
    if (buckets_[b].label == l) return true;
  return false;
}

std::vector<Vertex> BucketList::vertices_between(Label lo, Label hi) const {
  std::vector<Vertex> out;
  for (int b = first_; b >= 0 && buckets_[b].label < hi; b = buckets_[b].next) {
    if (buckets_[b].label <= lo) continue;
    for (int k = 0; k < 2; ++k)
      for (Vertex v = buckets_[b].heads[k]; v != kNoVertex; v = next_[v]) out.push_back(v);
  }
  return out;
}

std::vector<Label> BucketList::labels() const {
  std::vector<Label> out;
  for (int b = first_; b >= 0; b = buckets_[b].next) out.push_back(buckets_[b].label);
  return out;
}

bool BucketList::consistent(const std::vector<Label>& d) const {
  Label prev = -1;
  for (int b = first_; b >= 0; b = buckets_[b].next) {
    if (buckets_[b].label <= prev || empty(b)) return false;
    prev = buckets_[b].label;
    for (int k = 0; k < 2; ++k)
      for (Vertex v = buckets_[b].heads[k]; v != kNoVertex; v = next_[v])
        if (bucket_of_[v] != b || d[v] != prev || active_[v] != (k == 1)) return false;
  }
  return true;
}

PrdState make_prd_state(const RegionNetwork& rn) {
  PrdState st;
  st.current.resize(static_cast<std::size_t>(rn.inner_count));
  for (Vertex v = 0; v < rn.inner_count; ++v) st.current[v] = rn.net.first_arc(v);
  return st;
}

Cap push(RegionNetwork& rn, const Labeling& lab, ArcId a) {
  Network& net = rn.net;
  Vertex u = net.tail(a), v = net.head(a);
  if (!is_active(rn, lab, u)) throw Error(ErrorKind::kNotApplicable, "push from an inactive vertex");
  if (net.cap(a) <= 0) throw Error(ErrorKind::kNotApplicable, "push on a saturated arc");
  if (lab[u] != lab[v] + 1) throw Error(ErrorKind::kNotApplicable, "push on an arc that is not admissible");
  Cap delta = std::min(net.excess(u), net.cap(a));
  net.push(a, delta);
  return delta;
}

namespace {

Label min_residual_label(const Network& net, const Labeling& lab, Vertex u) {
  Label m = lab.d_inf;
  for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a)
    if (net.cap(a) > 0) m = std::min(m, lab[net.head(a)]);
  return m;
}

}  // namespace

void relabel(const RegionNetwork& rn, Labeling& lab, Vertex u) {
  const Network& net = rn.net;
  if (!is_active(rn, lab, u)) throw Error(ErrorKind::kNotApplicable, "relabel of an inactive vertex");
  for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a)
    if (net.cap(a) > 0 && lab[u] == lab[net.head(a)] + 1)
      throw Error(ErrorKind::kNotApplicable, "relabel while an admissible arc exists");
  lab[u] = std::min(lab.d_inf, min_residual_label(net, lab, u) + 1);
}

namespace {

class HighestLabel {
 public:
  HighestLabel(RegionNetwork& rn, Labeling& lab, PrdState& state, const PrdOptions& options, DischargeStats& stats)
      : rn_(rn), net_(rn.net), lab_(lab), state_(state), options_(options), stats_(stats),
        buckets_(rn.inner_count) {
    for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w) boundary_labels_.push_back(lab[w]);
    std::sort(boundary_labels_.begin(), boundary_labels_.end());
    for (Vertex v = 0; v < rn.inner_count; ++v)
      if (lab[v] < lab.d_inf) order_.push_back(v);
    std::stable_sort(order_.begin(), order_.end(), [&](Vertex a, Vertex b) { return lab[a] < lab[b]; });
    for (Vertex v : order_) buckets_.insert(v, lab[v], net_.excess(v) > 0);
  }

  void run() {
    for (Vertex u = buckets_.highest_active(); u != kNoVertex; u = buckets_.highest_active()) {
      buckets_.set_active(u, false);
      discharge(u);
    }
  }

 private:
  ArcId admissible(Vertex u) {
    const Label want = lab_[u] - 1;
    if (options_.rule == ArcRule::kCurrentArc) {
      for (ArcId& a = state_.current[u]; a < net_.end_arc(u); ++a)
        if (net_.cap(a) > 0 && lab_[net_.head(a)] == want) return a;
      return kNoArc;
    }
    ArcId best = kNoArc, best_up = kNoArc;
    const Vertex gu = rn_.global[u];
    for (ArcId a = net_.first_arc(u); a < net_.end_arc(u); ++a) {
      if (net_.cap(a) <= 0 || lab_[net_.head(a)] != want) continue;
      Vertex g = rn_.global[net_.head(a)];
      if (best == kNoArc || g < rn_.global[net_.head(best)]) best = a;
      if (g > gu && (best_up == kNoArc || g < rn_.global[net_.head(best_up)])) best_up = a;
    }
    return best_up != kNoArc ? best_up : best;
  }

  void discharge(Vertex u) {
    while (net_.excess(u) > 0 && lab_[u] < lab_.d_inf) {
      ArcId a = admissible(u);
      if (a != kNoArc) {
        Vertex v = net_.head(a);
        net_.push(a, std::min(net_.excess(u), net_.cap(a)));
        ++stats_.pushes;
        if (rn_.is_inner(v) && buckets_.contains(v) && !buckets_.active(v)) buckets_.set_active(v, true);
        continue;
      }
      Label next = std::min(lab_.d_inf, min_residual_label(net_, lab_, u) + 1);
      state_.current[u] = net_.first_arc(u);
      if (next <= lab_[u]) continue;  // capacities changed since the arc was passed
      ++stats_.relabels;
      Label old = lab_[u];
      bool emptied;
      if (next >= lab_.d_inf) {
        int before = buckets_.has_label(old) ? 1 : 0;
        buckets_.remove(u);
        emptied = before && !buckets_.has_label(old);
      } else {
        emptied = buckets_.raise(u, next);
      }
      lab_[u] = next;
      if (emptied && options_.region_gap) gap(old);
    }
  }

  void gap(Label g) {
    if (g <= 0 || std::binary_search(boundary_labels_.begin(), boundary_labels_.end(), g)) return;
    auto it = std::upper_bound(boundary_labels_.begin(), boundary_labels_.end(), g);
    Label next = it == boundary_labels_.end() ? lab_.d_inf : std::min(*it, lab_.d_inf);
    Label raised = next >= lab_.d_inf ? lab_.d_inf : std::min(next + 1, lab_.d_inf);
    std::vector<Vertex> hit = buckets_.vertices_between(g, next);
    if (hit.empty()) return;
    ++stats_.gaps;
    for (Vertex v : hit) {
      if (raised >= lab_.d_inf) buckets_.remove(v);
      else buckets_.raise(v, raised);
      lab_[v] = raised;
      state_.current[v] = net_.first_arc(v);
    }
  }

  RegionNetwork& rn_;
  Network& net_;
  Labeling& lab_;
  PrdState& state_;
  const PrdOptions& options_;
  DischargeStats& stats_;
  BucketList buckets_;
  std::vector<Label> boundary_labels_;
  std::vector<Vertex> order_;
};

}  // namespace

DischargeStats prd_discharge(RegionNetwork& rn, Labeling& lab, PrdState& state, const PrdOptions& options) {
  DischargeStats stats;
  if (static_cast<Vertex>(state.current.size()) != rn.inner_count) state = make_prd_state(rn);
  if (options.initial_relabel) {
    Labeling fresh = region_relabel(rn, lab, Variant::kPrd);
    for (Vertex v = 0; v < rn.inner_count; ++v) lab[v] = std::max(lab[v], fresh[v]);
  }
  HighestLabel hl(rn, lab, state, options, stats);
  hl.run();
  return stats;
}

}  // namespace regionflow
