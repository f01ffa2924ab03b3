#include "regionflow/oracle.hpp"

#include <algorithm>
#include <queue>

namespace regionflow::oracle {
namespace {

// Plain Dinic over an edge list. Edge 2i is the forward copy of network arc
// i's pair slot; excess enters through extra edges from the source.
struct Dinic {
  struct Edge {
    int to;
    Cap cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;
  std::vector<int> level, it;

  explicit Dinic(int n) : adj(n), level(n), it(n) {}

  int add(int u, int v, Cap c, Cap rc) {
    adj[u].push_back(static_cast<int>(edges.size()));
    edges.push_back({v, c});
    adj[v].push_back(static_cast<int>(edges.size()));
    edges.push_back({u, rc});
    return static_cast<int>(edges.size()) - 2;
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj[u]) {
        if (edges[id].cap > 0 && level[edges[id].to] < 0) {
          level[edges[id].to] = level[u] + 1;
          q.push(edges[id].to);
        }
      }
    }
    return level[t] >= 0;
  }

  Cap dfs(int u, int t, Cap pushed) {
    if (u == t) return pushed;
    for (int& i = it[u]; i < static_cast<int>(adj[u].size()); ++i) {
      int id = adj[u][i];
      Edge& e = edges[id];
      if (e.cap <= 0 || level[e.to] != level[u] + 1) continue;
      Cap got = dfs(e.to, t, std::min(pushed, e.cap));
      if (got > 0) {
        e.cap -= got;
        edges[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  Cap run(int s, int t) {
    Cap total = 0;
    while (bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (Cap f = dfs(s, t, std::numeric_limits<Cap>::max())) total = checked_add(total, f);
    }
    return total;
  }
};

void guard(const Network& net, const Limits& limits) {
  if (net.vertex_count() - 2 > limits.max_vertices || net.arc_count() > limits.max_arcs)
    throw Error(ErrorKind::kSizeGuard, "oracle instance has " + std::to_string(net.vertex_count()) +
                                           " vertices, " + std::to_string(net.arc_count()) + " arcs");
}

struct Solved {
  Dinic dinic;
  std::vector<int> edge_of_arc;
  std::vector<int> excess_edge;
  Cap flow = 0;
};

Solved solve(const Network& net) {
  const int n = net.vertex_count();
  Solved out{Dinic(n), std::vector<int>(static_cast<std::size_t>(net.arc_count()), -1),
             std::vector<int>(static_cast<std::size_t>(n), -1), 0};
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    ArcId b = net.sister(a);
    int id = out.dinic.add(net.tail(a), net.head(a), net.cap(a), net.cap(b));
    out.edge_of_arc[a] = id;
    out.edge_of_arc[b] = id ^ 1;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!net.is_terminal(v) && net.excess(v) > 0)
      out.excess_edge[v] = out.dinic.add(net.source(), v, net.excess(v), 0);
  }
  out.flow = out.dinic.run(net.source(), net.sink());
  out.flow = checked_add(out.flow, checked_add(net.flow_value(), net.direct_capacity()));
  return out;
}

std::vector<bool> bfs_mark(const Dinic& d, int start, bool reverse) {
  const int n = static_cast<int>(d.adj.size());
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  seen[start] = true;
  q.push(start);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int id : d.adj[u]) {
      int v = d.edges[id].to;
      Cap c = reverse ? d.edges[id ^ 1].cap : d.edges[id].cap;
      if (c > 0 && !seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

MaxflowResult maxflow(const Network& net, Limits limits) {
  guard(net, limits);
  Solved s = solve(net);
  MaxflowResult r;
  r.flow_value = s.flow;
  r.flow = Preflow(net.arc_count());
  for (ArcId a = 0; a < net.arc_count(); ++a) r.flow.f[a] = net.cap(a) - s.dinic.edges[s.edge_of_arc[a]].cap;
  return r;
}

Cap cut_cost(const Network& net, const std::vector<bool>& side) {
  Cap cost = net.flow_value() + net.direct_capacity();
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    ArcId b = net.sister(a);
    Vertex u = net.tail(a), v = net.head(a);
    if (side[u] && !side[v]) cost += net.cap(a);
    if (side[v] && !side[u]) cost += net.cap(b);
  }
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (!side[v] && !net.is_terminal(v)) cost += net.excess(v);
  }
  return cost;
}

CutSets mincut_sets(const Network& net, Limits limits) {
  guard(net, limits);
  Solved s = solve(net);
  CutSets out;
  out.flow_value = s.flow;
  // The source already reaches every vertex with unused excess through its
  // excess edge, so a plain BFS from s gives the minimal set.
  out.minimal = bfs_mark(s.dinic, net.source(), false);
  std::vector<bool> to_sink = bfs_mark(s.dinic, net.sink(), true);
  out.maximal.resize(to_sink.size());
  for (std::size_t v = 0; v < to_sink.size(); ++v) out.maximal[v] = !to_sink[v];
  out.minimal_cost = oracle::cut_cost(net, out.minimal);
  out.maximal_cost = oracle::cut_cost(net, out.maximal);
  if (out.minimal_cost != out.flow_value || out.maximal_cost != out.flow_value)
    throw Error(ErrorKind::kInternalInconsistency, "oracle cut cost differs from its flow value");
  return out;
}

std::vector<bool> reachable_from(const Network& net, const std::vector<Vertex>& from) {
  std::vector<bool> seen(static_cast<std::size_t>(net.vertex_count()), false);
  std::queue<Vertex> q;
  for (Vertex v : from) {
    if (!seen[v]) {
      seen[v] = true;
      q.push(v);
    }
  }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (ArcId a = net.first_arc(u); a < net.end_arc(u); ++a) {
      Vertex v = net.head(a);
      if (net.cap(a) > 0 && !seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return seen;
}

bool reach(const Network& net, const std::vector<Vertex>& from, const std::vector<Vertex>& to) {
  std::vector<bool> seen = reachable_from(net, from);
  return std::any_of(to.begin(), to.end(), [&](Vertex v) { return seen[v]; });
}

}  // namespace regionflow::oracle
