#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regionflow/types.hpp"

namespace regionflow {

class NetworkBuilder;

// A flow network in residual form. Arcs are stored in pairs: every arc has a
// sister running in the opposite direction, so the arc set is symmetric and
// pushing on an arc is a single write to the pair. Parallel arcs are allowed;
// each input arc is its own pair. Arcs are grouped by tail (CSR).
//
// Excess is kept explicitly per vertex rather than as source arcs; the flow
// already delivered to the sink is accumulated in flow_value().
class Network {
 public:
  Network() = default;

  Vertex vertex_count() const { return static_cast<Vertex>(excess_.size()); }
  ArcId arc_count() const { return static_cast<ArcId>(head_.size()); }
  ArcId pair_count() const { return static_cast<ArcId>(pair_arc_.size()); }
  Vertex source() const { return source_; }
  Vertex sink() const { return sink_; }
  bool is_terminal(Vertex v) const { return v == source_ || v == sink_; }

  ArcId first_arc(Vertex v) const { return first_[v]; }
  ArcId end_arc(Vertex v) const { return first_[v + 1]; }
  Vertex head(ArcId a) const { return head_[a]; }
  Vertex tail(ArcId a) const { return head_[sister_[a]]; }
  ArcId sister(ArcId a) const { return sister_[a]; }
  Cap cap(ArcId a) const { return cap_[a]; }
  // Input pair the arc belongs to, and the pair's forward (u->v as read) arc.
  ArcId pair_of(ArcId a) const { return pair_[a]; }
  ArcId pair_arc(ArcId p) const { return pair_arc_[p]; }
  bool is_forward(ArcId a) const { return pair_arc_[pair_[a]] == a; }

  Cap excess(Vertex v) const { return excess_[v]; }
  Cap flow_value() const { return flow_value_; }
  // Capacity of direct source->sink arcs not yet folded by init().
  Cap direct_capacity() const { return direct_; }

  // Moves delta units along arc a (no checks; callers validate).
  void push(ArcId a, Cap delta);
  void set_cap(ArcId a, Cap c) { cap_[a] = c; }
  void set_excess(Vertex v, Cap e) { excess_[v] = e; }
  void add_flow_value(Cap delta) { flow_value_ = checked_add(flow_value_, delta); }
  void set_direct_capacity(Cap c) { direct_ = c; }

  // First arc u->v, or kNoArc.
  ArcId find_arc(Vertex u, Vertex v) const;

  bool operator==(const Network&) const = default;

 private:
  friend class NetworkBuilder;

  Vertex source_ = kNoVertex;
  Vertex sink_ = kNoVertex;
  std::vector<ArcId> first_;
  std::vector<Vertex> head_;
  std::vector<ArcId> sister_;
  std::vector<Cap> cap_;
  std::vector<ArcId> pair_;
  std::vector<ArcId> pair_arc_;
  std::vector<Cap> excess_;
  Cap flow_value_ = 0;
  Cap direct_ = 0;
};

class NetworkBuilder {
 public:
  NetworkBuilder(Vertex vertex_count, Vertex source, Vertex sink);

  // Adds the pair u->v (cap) / v->u (reverse_cap) and returns its pair id.
  // Self loops are ignored and return kNoArc.
  ArcId add_arc(Vertex u, Vertex v, Cap cap, Cap reverse_cap = 0);
  void add_excess(Vertex v, Cap e);
  void add_direct_capacity(Cap c);

  Vertex vertex_count() const { return static_cast<Vertex>(excess_.size()); }

  Network build() const;

 private:
  struct Pair {
    Vertex u, v;
    Cap cap, reverse_cap;
  };
  Vertex source_, sink_;
  std::vector<Pair> pairs_;
  std::vector<Cap> excess_;
  Cap direct_ = 0;
};

// Per-arc flow, antisymmetric across sister arcs.
struct Preflow {
  std::vector<Cap> f;

  Preflow() = default;
  explicit Preflow(ArcId arcs) : f(static_cast<std::size_t>(arcs), 0) {}
  Cap operator[](ArcId a) const { return f[a]; }
  // Adds delta on a and -delta on its sister.
  void add(const Network& net, ArcId a, Cap delta) {
    f[a] += delta;
    f[net.sister(a)] -= delta;
  }
};

enum class Metric { kPushRelabel, kRegion };

// Distance labels. d_inf is n for the push-relabel metric and the boundary
// size for the region metric.
struct Labeling {
  Metric metric = Metric::kPushRelabel;
  Label d_inf = 0;
  std::vector<Label> d;

  Label operator[](Vertex v) const { return d[v]; }
  Label& operator[](Vertex v) { return d[v]; }
  bool operator==(const Labeling&) const = default;
};

struct CutResult {
  std::vector<bool> source_side;  // per vertex
  Cap cut_cost = 0;
  Cap flow_value = 0;
};

struct PreflowViolation {
  enum class Kind { kAntisymmetry, kCapacity, kNegativeExcess, kSize };
  Kind kind;
  ArcId arc = kNoArc;
  Vertex vertex = kNoVertex;
  std::string message;
};

Cap residual_capacity(const Network& net, const Preflow& flow, ArcId a);
Cap residual_capacity(const Network& net, const Preflow& flow, Vertex u, Vertex v);

struct InitResult {
  Network network;
  Labeling labels;
};

// Saturates all source arcs (folding them into excess) and moves direct
// source->sink capacity into the flow value. Labels start at zero with
// d(s) = d_inf.
InitResult init(Network net, Metric metric, Label d_inf);

// Replaces capacities and excesses with their residual values. Throws
// kPreflowViolation if the flow is not a preflow in net.
Network apply_flow(Network net, const Preflow& flow);

std::optional<PreflowViolation> verify_preflow(const Network& net, const Preflow& flow);

Cap flow_value(const Network& net, const Preflow& flow);

// Flow between two states of the same network: original cap - residual cap.
Preflow flow_between(const Network& original, const Network& residual);

// Cost of the cut (C, V\C) with C = {v : source_side[v]}, including excess on
// the sink side and the constant already delivered (flow_value()).
Cap cut_cost(const Network& net, const std::vector<bool>& source_side);

// Vertices that reach the sink over positive residual arcs.
std::vector<bool> sink_reachable(const Network& net);

// Minimum cut (V\T, T), T = vertices reaching t in the residual network.
// `residual` must hold a maximum preflow; the cost is evaluated on
// `original` and must equal the residual flow value.
CutResult extract_cut(const Network& residual, const Network& original);

}  // namespace regionflow
