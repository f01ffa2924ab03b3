#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regionflow/partition.hpp"

namespace regionflow {

enum NodeFlag : std::uint8_t {
  kUndecided = 0,
  kStrongSource = 1,  // source side of every optimal cut
  kStrongSink = 2,    // sink side of every optimal cut
  kWeakSource = 4,    // source side of some optimal cut
  kWeakSink = 8,      // sink side of some optimal cut
};

struct NodeClass {
  std::vector<std::uint8_t> flags;  // per vertex

  NodeClass() = default;
  explicit NodeClass(Vertex n) : flags(static_cast<std::size_t>(n), kUndecided) {}
  bool has(Vertex v, NodeFlag f) const { return (flags[v] & f) != 0; }
  // Strong sink or weak source: the side is fixed without further work.
  bool decided(Vertex v) const { return (flags[v] & (kStrongSink | kWeakSource | kStrongSource)) != 0; }
  // Folded into the source by mask_decided.
  bool masked_source(Vertex v) const { return (flags[v] & (kStrongSource | kWeakSource)) != 0; }
};

struct RegionReduction {
  NodeClass local;            // per local vertex of the region network
  std::vector<Vertex> source_boundary;  // B^S, local ids
  std::vector<Vertex> sink_boundary;    // B^T, local ids
  Cap to_sink = 0;            // moved s -> t
  Cap to_boundary = 0;        // moved s -> B^S
  Cap boundary_to_sink = 0;   // moved B^T -> t (classification only)
  // The region after the s -> t and s -> B^S augmentations. This part of the
  // flow is a preflow of the whole network and can seed the first sweep; the
  // B^T -> t part draws on boundary vertices without excess and is not kept.
  RegionNetwork residual;
};

// Classifies the interior vertices of one region from a single region flow.
// Arcs from the boundary into the region should carry their capacity
// (BoundaryMode::kKeepIncoming).
RegionReduction region_reduce(const RegionNetwork& rn);

struct ClassificationError {
  Vertex vertex;
  NodeFlag flag;
  std::string message;
};

// Checks every flag against the two canonical optimal cuts of net (oracle).
std::optional<ClassificationError> verify_classification(const Network& net, const NodeClass& cls);

struct RegionDecided {
  RegionId region;
  Vertex members = 0;
  Vertex decided = 0;
  Vertex strong_source = 0, strong_sink = 0, weak_source = 0, weak_sink = 0;
  double fraction() const { return members == 0 ? 0.0 : static_cast<double>(decided) / members; }
};

struct ReducedProblem {
  Network network;  // preflow of all regions applied, decided vertices masked
  NodeClass cls;    // global ids
  std::vector<RegionDecided> regions;
};

// Runs region_reduce on every region in turn, keeping the s -> t and s -> B^S
// flow of each in the network, then masks the decided vertices. net must be in
// residual form (source arcs folded into excess).
ReducedProblem reduce_network(const Network& net, const Partition& part);

// Masked copy with the same vertex ids: strong and weak source vertices are
// merged into s, strong sink vertices into t. Masked vertices keep no arcs and
// no excess. Every optimal cut of the result, resolved with resolve_cut, is an
// optimal cut of net with the same cost.
Network mask_decided(const Network& net, const NodeClass& cls);

// Puts masked vertices back on their side and recomputes the cost on `original`.
CutResult resolve_cut(const CutResult& cut, const NodeClass& cls, const Network& original);

}  // namespace regionflow
