#include "regionflow/reduction.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "regionflow/oracle.hpp"

namespace regionflow {

namespace {

// Shortest-path augmentation from the vertices of X to any target, through
// passable vertices. Unlimited sources ignore their excess.
class Paths {
 public:
  Paths(Network& net, std::vector<char> target, std::vector<char> passable, std::vector<char> unlimited)
      : net_(net), target_(std::move(target)), passable_(std::move(passable)), unlimited_(std::move(unlimited)),
        level_(static_cast<std::size_t>(net.vertex_count())), cur_(level_.size()) {}

  Cap run(const std::vector<Vertex>& X) {
    Cap moved = 0;
    while (levels(X)) {
      for (Vertex x : X) {
        if (level_[x] != 0) continue;
        while (supply(x) > 0) {
          Cap d = path_from(x);
          if (d == 0) break;
          moved = checked_add(moved, d);
        }
      }
    }
    return moved;
  }

 private:
  Cap supply(Vertex x) const {
    return unlimited_[x] ? std::numeric_limits<Cap>::max() : net_.excess(x);
  }
  bool enterable(Vertex v) const { return target_[v] || passable_[v]; }

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
        if (net_.cap(a) <= 0 || level_[h] >= 0 || !enterable(h)) continue;
        level_[h] = level_[v] + 1;
        if (target_[h])
          reached = true;
        else
          queue.push_back(h);
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
        return d;
      }
      ArcId& a = cur_[v];
      for (; a < net_.end_arc(v); ++a) {
        Vertex h = net_.head(a);
        if (net_.cap(a) > 0 && level_[h] == level_[v] + 1 && enterable(h)) break;
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

  Network& net_;
  std::vector<char> target_, passable_, unlimited_;
  std::vector<Label> level_;
  std::vector<ArcId> cur_;
};

std::vector<char> forward_reach(const Network& net, const std::vector<Vertex>& from) {
  std::vector<char> seen(static_cast<std::size_t>(net.vertex_count()), 0);
  std::vector<Vertex> queue;
  for (Vertex v : from)
    if (!seen[v]) seen[v] = 1, queue.push_back(v);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (ArcId a = net.first_arc(queue[i]); a < net.end_arc(queue[i]); ++a) {
      Vertex h = net.head(a);
      if (net.cap(a) > 0 && !seen[h]) seen[h] = 1, queue.push_back(h);
    }
  return seen;
}

std::vector<char> backward_reach(const Network& net, const std::vector<Vertex>& to) {
  std::vector<char> seen(static_cast<std::size_t>(net.vertex_count()), 0);
  std::vector<Vertex> queue;
  for (Vertex v : to)
    if (!seen[v]) seen[v] = 1, queue.push_back(v);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (ArcId a = net.first_arc(queue[i]); a < net.end_arc(queue[i]); ++a) {
      Vertex h = net.head(a);
      if (net.cap(net.sister(a)) > 0 && !seen[h]) seen[h] = 1, queue.push_back(h);
    }
  return seen;
}

}  // namespace

RegionReduction region_reduce(const RegionNetwork& rn) {
  RegionReduction out;
  out.residual = rn;
  Network& net = out.residual.net;
  const Vertex n = net.vertex_count();
  const Vertex s = net.source(), t = net.sink();
  const auto size = static_cast<std::size_t>(n);

  std::vector<Vertex> boundary;
  for (Vertex v = rn.inner_count; v < rn.inner_count + rn.boundary_count; ++v) boundary.push_back(v);
  auto sources = [&] {
    std::vector<Vertex> X{s};
    for (Vertex v = 0; v < rn.inner_count; ++v)
      if (net.excess(v) > 0) X.push_back(v);
    return X;
  };
  std::vector<char> none(size, 0), only_s(size, 0);
  only_s[s] = 1;

  std::vector<char> to_t(size, 0), passable(size, 0);
  to_t[t] = 1;
  for (Vertex v = 0; v < n; ++v) passable[v] = !net.is_terminal(v);
  out.to_sink = Paths(net, to_t, passable, only_s).run(sources());

  std::vector<Vertex> X = sources();
  std::vector<char> from_s = forward_reach(net, X);
  std::vector<char> reach_t = backward_reach(net, {t});
  std::vector<char> to_bs(size, 0);
  for (Vertex b : boundary) {
    if (from_s[b]) out.source_boundary.push_back(b), to_bs[b] = 1;
    if (reach_t[b]) out.sink_boundary.push_back(b);
  }
  if (!out.source_boundary.empty()) {
    std::vector<char> pass = passable;
    for (Vertex b : out.source_boundary) pass[b] = 0;
    out.to_boundary = Paths(net, to_bs, pass, only_s).run(X);
  }

  // B^T -> t runs on a scratch copy: it only shapes the classification.
  Network scratch = net;
  if (!out.sink_boundary.empty()) {
    std::vector<char> pass = passable, unlimited(size, 0);
    for (Vertex b : out.sink_boundary) pass[b] = 0, unlimited[b] = 1;
    out.boundary_to_sink = Paths(scratch, to_t, pass, unlimited).run(out.sink_boundary);
  }

  std::vector<Vertex> start{s};
  for (Vertex v = 0; v < rn.inner_count; ++v)
    if (scratch.excess(v) > 0) start.push_back(v);
  from_s = forward_reach(scratch, start);
  reach_t = backward_reach(scratch, {t});
  std::vector<char> reach_b = backward_reach(scratch, boundary);
  std::vector<char> from_b = forward_reach(scratch, boundary);

  out.local = NodeClass(n);
  for (Vertex v = 0; v < rn.inner_count; ++v) {
    auto& f = out.local.flags[v];
    if (from_s[v]) {
      f = kStrongSource;
    } else if (reach_t[v]) {
      f = kStrongSink;
    } else {
      if (!reach_b[v]) f |= kWeakSource;
      if (!from_b[v]) f |= kWeakSink;
    }
  }
  return out;
}

std::optional<ClassificationError> verify_classification(const Network& net, const NodeClass& cls) {
  if (cls.flags.size() != static_cast<std::size_t>(net.vertex_count()))
    return ClassificationError{kNoVertex, kUndecided, "classification size differs from the network"};
  if (std::all_of(cls.flags.begin(), cls.flags.end(), [](std::uint8_t f) { return f == kUndecided; }))
    return std::nullopt;
  oracle::CutSets sets = oracle::mincut_sets(net);
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    auto fail = [&](NodeFlag f, const char* what) {
      return ClassificationError{v, f, "vertex " + std::to_string(v) + " " + what};
    };
    if (cls.has(v, kStrongSource) && cls.has(v, kStrongSink)) return fail(kStrongSource, "is both strong source and strong sink");
    if (cls.has(v, kStrongSource) && !(sets.minimal[v] && sets.maximal[v]))
      return fail(kStrongSource, "is flagged strong source but lies outside an optimal source set");
    if (cls.has(v, kStrongSink) && (sets.minimal[v] || sets.maximal[v]))
      return fail(kStrongSink, "is flagged strong sink but lies inside an optimal source set");
    if (cls.has(v, kWeakSource) && !sets.maximal[v])
      return fail(kWeakSource, "is flagged weak source but is outside the maximal source set");
    if (cls.has(v, kWeakSink) && sets.minimal[v])
      return fail(kWeakSink, "is flagged weak sink but is inside the minimal source set");
  }
  return std::nullopt;
}

ReducedProblem reduce_network(const Network& net, const Partition& part) {
  ReducedProblem out;
  Network cur = net;
  out.cls = NodeClass(net.vertex_count());
  for (RegionId k = 0; k < part.region_count; ++k) {
    RegionNetwork rn = build_region_network(cur, part, k, BoundaryMode::kKeepIncoming);
    RegionReduction r = region_reduce(rn);
    const Network& res = r.residual.net;
    for (ArcId p = 0; p < res.pair_count(); ++p) {
      ArcId la = res.pair_arc(p);
      ArcId ga = cur.pair_arc(rn.global_pair[p]);
      cur.set_cap(ga, res.cap(la));
      cur.set_cap(cur.sister(ga), res.cap(res.sister(la)));
    }
    for (Vertex v = 0; v < res.vertex_count(); ++v) {
      if (res.is_terminal(v)) continue;
      Vertex g = rn.global[v];
      cur.set_excess(g, checked_add(cur.excess(g), res.excess(v) - rn.net.excess(v)));
    }
    cur.add_flow_value(res.flow_value() - rn.net.flow_value());

    RegionDecided d{k};
    for (Vertex v = 0; v < rn.inner_count; ++v) {
      std::uint8_t f = r.local.flags[v];
      out.cls.flags[rn.global[v]] = f;
      ++d.members;
      if (r.local.decided(v)) ++d.decided;
      d.strong_source += (f & kStrongSource) != 0;
      d.strong_sink += (f & kStrongSink) != 0;
      d.weak_source += (f & kWeakSource) != 0;
      d.weak_sink += (f & kWeakSink) != 0;
    }
    out.regions.push_back(d);
  }
  out.network = mask_decided(cur, out.cls);
  return out;
}

Network mask_decided(const Network& net, const NodeClass& cls) {
  enum Side { kFreeSide, kS, kT };
  auto side = [&](Vertex v) {
    if (v == net.source() || cls.masked_source(v)) return kS;
    if (v == net.sink() || cls.has(v, kStrongSink)) return kT;
    return kFreeSide;
  };
  const Vertex t = net.sink();
  NetworkBuilder b(net.vertex_count(), net.source(), t);
  std::vector<Cap> excess(static_cast<std::size_t>(net.vertex_count()), 0);
  Cap constant = 0;
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (net.is_terminal(v)) continue;
    if (side(v) == kFreeSide) excess[v] = checked_add(excess[v], net.excess(v));
    else if (side(v) == kT) constant = checked_add(constant, net.excess(v));
  }
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    Vertex u = net.tail(a), v = net.head(a);
    Side su = side(u), sv = side(v);
    if (su == kFreeSide && sv == kFreeSide) {
      b.add_arc(u, v, net.cap(a), net.cap(net.sister(a)));
      continue;
    }
    for (auto [x, y, c] : {std::tuple{u, v, net.cap(a)}, std::tuple{v, u, net.cap(net.sister(a))}}) {
      if (c == 0) continue;
      Side sx = side(x), sy = side(y);
      if (sx == kS && sy == kFreeSide) excess[y] = checked_add(excess[y], c);
      else if (sx == kS && sy == kT) constant = checked_add(constant, c);
      else if (sx == kFreeSide && sy == kT) b.add_arc(x, t, c);
    }
  }
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (excess[v] > 0) b.add_excess(v, excess[v]);
  Network out = b.build();
  out.add_flow_value(checked_add(net.flow_value(), constant));
  out.set_direct_capacity(net.direct_capacity());
  return out;
}

CutResult resolve_cut(const CutResult& cut, const NodeClass& cls, const Network& original) {
  CutResult out = cut;
  for (Vertex v = 0; v < original.vertex_count(); ++v) {
    if (original.is_terminal(v)) continue;
    if (cls.masked_source(v)) out.source_side[v] = true;
    else if (cls.has(v, kStrongSink)) out.source_side[v] = false;
  }
  out.cut_cost = cut_cost(original, out.source_side);
  return out;
}

}  // namespace regionflow
