#include "regionflow/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace regionflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArcNotFound: return "arc-not-found";
    case ErrorKind::kPreflowViolation: return "preflow-violation";
    case ErrorKind::kNotOptimal: return "not-optimal";
    case ErrorKind::kCostMismatch: return "cost-mismatch";
    case ErrorKind::kShapeMismatch: return "shape-mismatch";
    case ErrorKind::kPreconditionViolated: return "precondition-violated";
    case ErrorKind::kNotApplicable: return "not-applicable";
    case ErrorKind::kInternalInconsistency: return "internal-inconsistency";
    case ErrorKind::kSweepBoundExceeded: return "sweep-bound-exceeded";
    case ErrorKind::kPageIo: return "page-io-failure";
    case ErrorKind::kPageCorrupt: return "page-corrupt";
    case ErrorKind::kMalformedLine: return "malformed-line";
    case ErrorKind::kCountMismatch: return "count-mismatch";
    case ErrorKind::kDuplicateTerminal: return "duplicate-terminal";
    case ErrorKind::kSizeGuard: return "size-guard-exceeded";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kIo: return "io-failure";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

void Network::push(ArcId a, Cap delta) {
  cap_[a] -= delta;
  cap_[sister_[a]] += delta;
  Vertex from = head_[sister_[a]];
  Vertex to = head_[a];
  if (from != source_) excess_[from] -= delta;
  if (to == sink_) {
    flow_value_ = checked_add(flow_value_, delta);
  } else if (to != source_) {
    excess_[to] = checked_add(excess_[to], delta);
  }
}

ArcId Network::find_arc(Vertex u, Vertex v) const {
  for (ArcId a = first_[u]; a < first_[u + 1]; ++a) {
    if (head_[a] == v) return a;
  }
  return kNoArc;
}

NetworkBuilder::NetworkBuilder(Vertex vertex_count, Vertex source, Vertex sink)
    : source_(source), sink_(sink), excess_(static_cast<std::size_t>(vertex_count), 0) {
  if (source == sink) throw Error(ErrorKind::kPreconditionViolated, "source equals sink");
  if (source < 0 || sink < 0 || source >= vertex_count || sink >= vertex_count)
    throw Error(ErrorKind::kPreconditionViolated, "terminal id out of range");
}

ArcId NetworkBuilder::add_arc(Vertex u, Vertex v, Cap cap, Cap reverse_cap) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw Error(ErrorKind::kPreconditionViolated, "arc endpoint out of range");
  if (cap < 0 || reverse_cap < 0) throw Error(ErrorKind::kPreconditionViolated, "negative capacity");
  if (u == v) return kNoArc;
  pairs_.push_back({u, v, cap, reverse_cap});
  return static_cast<ArcId>(pairs_.size()) - 1;
}

void NetworkBuilder::add_excess(Vertex v, Cap e) {
  if (e < 0) throw Error(ErrorKind::kPreconditionViolated, "negative excess");
  if (v == source_ || v == sink_) throw Error(ErrorKind::kPreconditionViolated, "excess on a terminal");
  excess_[v] = checked_add(excess_[v], e);
}

void NetworkBuilder::add_direct_capacity(Cap c) { direct_ = checked_add(direct_, c); }

Network NetworkBuilder::build() const {
  Network net;
  const Vertex n = vertex_count();
  const ArcId m = 2 * static_cast<ArcId>(pairs_.size());
  net.source_ = source_;
  net.sink_ = sink_;
  net.excess_ = excess_;
  net.direct_ = direct_;
  net.first_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Pair& p : pairs_) {
    ++net.first_[p.u + 1];
    ++net.first_[p.v + 1];
  }
  std::partial_sum(net.first_.begin(), net.first_.end(), net.first_.begin());
  std::vector<ArcId> next(net.first_.begin(), net.first_.end() - 1);
  net.head_.resize(m);
  net.sister_.resize(m);
  net.cap_.resize(m);
  net.pair_.resize(m);
  net.pair_arc_.resize(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const Pair& p = pairs_[i];
    ArcId fwd = next[p.u]++;
    ArcId rev = next[p.v]++;
    net.head_[fwd] = p.v;
    net.head_[rev] = p.u;
    net.cap_[fwd] = p.cap;
    net.cap_[rev] = p.reverse_cap;
    net.sister_[fwd] = rev;
    net.sister_[rev] = fwd;
    net.pair_[fwd] = net.pair_[rev] = static_cast<ArcId>(i);
    net.pair_arc_[i] = fwd;
  }
  return net;
}

Cap residual_capacity(const Network& net, const Preflow& flow, ArcId a) {
  if (a < 0 || a >= net.arc_count()) throw Error(ErrorKind::kArcNotFound, "arc id " + std::to_string(a));
  return net.cap(a) - flow[a];
}

Cap residual_capacity(const Network& net, const Preflow& flow, Vertex u, Vertex v) {
  ArcId a = net.find_arc(u, v);
  if (a == kNoArc)
    throw Error(ErrorKind::kArcNotFound, "(" + std::to_string(u) + "," + std::to_string(v) + ")");
  return residual_capacity(net, flow, a);
}

InitResult init(Network net, Metric metric, Label d_inf) {
  const Vertex s = net.source();
  for (ArcId a = net.first_arc(s); a < net.end_arc(s); ++a) {
    Cap c = net.cap(a);
    if (c > 0) net.push(a, c);
  }
  if (net.direct_capacity() > 0) {
    net.add_flow_value(net.direct_capacity());
    net.set_direct_capacity(0);
  }
  Labeling lab;
  lab.metric = metric;
  lab.d_inf = d_inf;
  lab.d.assign(static_cast<std::size_t>(net.vertex_count()), 0);
  lab.d[s] = d_inf;
  return {std::move(net), std::move(lab)};
}

std::optional<PreflowViolation> verify_preflow(const Network& net, const Preflow& flow) {
  using Kind = PreflowViolation::Kind;
  if (static_cast<ArcId>(flow.f.size()) != net.arc_count())
    return PreflowViolation{Kind::kSize, kNoArc, kNoVertex, "flow size does not match arc count"};
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    if (flow[a] != -flow[net.sister(a)])
      return PreflowViolation{Kind::kAntisymmetry, a, kNoVertex,
                              "f(u,v) != -f(v,u) on arc " + std::to_string(a)};
  }
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    if (flow[a] > net.cap(a))
      return PreflowViolation{Kind::kCapacity, a, kNoVertex,
                              "f exceeds capacity on arc " + std::to_string(a)};
  }
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (net.is_terminal(v)) continue;
    Cap e = net.excess(v);
    for (ArcId a = net.first_arc(v); a < net.end_arc(v); ++a) e -= flow[a];
    if (e < 0)
      return PreflowViolation{Kind::kNegativeExcess, kNoArc, v,
                              "negative residual excess at vertex " + std::to_string(v)};
  }
  return std::nullopt;
}

Network apply_flow(Network net, const Preflow& flow) {
  if (auto bad = verify_preflow(net, flow)) throw Error(ErrorKind::kPreflowViolation, bad->message);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    // Each pair is applied once, from its forward arc.
    if (!net.is_forward(a) || flow[a] == 0) continue;
    net.push(a, flow[a]);
  }
  return net;
}

Cap flow_value(const Network& net, const Preflow& flow) {
  Cap total = 0;
  const Vertex t = net.sink();
  for (ArcId a = net.first_arc(t); a < net.end_arc(t); ++a) total = checked_add(total, flow[net.sister(a)]);
  return total;
}

Preflow flow_between(const Network& original, const Network& residual) {
  Preflow f(original.arc_count());
  for (ArcId a = 0; a < original.arc_count(); ++a) f.f[a] = original.cap(a) - residual.cap(a);
  return f;
}

Cap cut_cost(const Network& net, const std::vector<bool>& source_side) {
  Cap cost = checked_add(net.flow_value(), net.direct_capacity());
  for (Vertex u = 0; u < net.vertex_count(); ++u) {
    if (!source_side[u]) {
      if (!net.is_terminal(u)) cost = checked_add(cost, net.excess(u));
      continue;
    }
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      if (!source_side[net.head(a)]) cost = checked_add(cost, net.cap(a));
    }
  }
  return cost;
}

std::vector<bool> sink_reachable(const Network& net) {
  std::vector<bool> reach(static_cast<std::size_t>(net.vertex_count()), false);
  std::deque<Vertex> queue{net.sink()};
  reach[net.sink()] = true;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (ArcId a = net.first_arc(v); a < net.end_arc(v); ++a) {
      Vertex u = net.head(a);
      if (!reach[u] && net.cap(net.sister(a)) > 0) {
        reach[u] = true;
        queue.push_back(u);
      }
    }
  }
  return reach;
}

CutResult extract_cut(const Network& residual, const Network& original) {
  std::vector<bool> reach = sink_reachable(residual);
  if (reach[residual.source()]) throw Error(ErrorKind::kNotOptimal, "source reaches the sink");
  for (Vertex v = 0; v < residual.vertex_count(); ++v) {
    if (!residual.is_terminal(v) && residual.excess(v) > 0 && reach[v])
      throw Error(ErrorKind::kNotOptimal, "vertex " + std::to_string(v) + " carries excess and reaches the sink");
  }
  CutResult cut;
  cut.source_side.resize(reach.size());
  for (std::size_t v = 0; v < reach.size(); ++v) cut.source_side[v] = !reach[v];
  cut.source_side[residual.source()] = true;
  cut.cut_cost = cut_cost(original, cut.source_side);
  cut.flow_value = residual.flow_value();
  if (cut.cut_cost != cut.flow_value)
    throw Error(ErrorKind::kCostMismatch,
                "cut cost " + std::to_string(cut.cut_cost) + " != flow " + std::to_string(cut.flow_value));
  return cut;
}

}  // namespace regionflow
