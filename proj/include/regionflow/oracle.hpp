#pragma once

#include <vector>

#include "regionflow/network.hpp"

// Reference max-flow used only for verification. It shares the Network input
// type with the solvers but none of their discharge code.
namespace regionflow::oracle {

struct Limits {
  Vertex max_vertices = 10'000;  // non-terminal vertices
  ArcId max_arcs = 100'000;
};

struct MaxflowResult {
  Cap flow_value = 0;  // includes net.flow_value() and direct capacity
  Preflow flow;        // maximum preflow in net
};

struct CutSets {
  Cap flow_value = 0;
  std::vector<bool> minimal;  // residual-reachable from s and remaining excess
  std::vector<bool> maximal;  // complement of the vertices reaching t
  Cap minimal_cost = 0;
  Cap maximal_cost = 0;
};

MaxflowResult maxflow(const Network& net, Limits limits = {});

CutSets mincut_sets(const Network& net, Limits limits = {});

// Positive-residual reachability from any vertex of X to any vertex of Y.
bool reach(const Network& net, const std::vector<Vertex>& from, const std::vector<Vertex>& to);

// Vertices reachable from `from` over positive residual arcs.
std::vector<bool> reachable_from(const Network& net, const std::vector<Vertex>& from);

// Cost of a cut computed directly from the arc list.
Cap cut_cost(const Network& net, const std::vector<bool>& source_side);

}  // namespace regionflow::oracle
