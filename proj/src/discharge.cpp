#include "regionflow/discharge.hpp"

#include <map>

namespace regionflow {

bool has_active(const RegionNetwork& rn, const Labeling& lab) {
  for (Vertex v = 0; v < rn.inner_count; ++v)
    if (is_active(rn, lab, v)) return true;
  return false;
}

DischargeCheck check_discharge(const RegionNetwork& before, const Labeling& lab_before, const RegionNetwork& after,
                               const Labeling& lab_after, Variant variant, bool expect_optimal,
                               const std::vector<PathFlow>* paths) {
  DischargeCheck r;
  auto note = [&](const std::string& m) {
    if (r.message.empty()) r.message = m;
  };
  const Network& n0 = before.net;
  const Network& n1 = after.net;
  if (expect_optimal && has_active(after, lab_after)) {
    r.optimality = false;
    note("active vertex left in the region");
  }
  for (Vertex v = 0; v < before.inner_count + before.boundary_count; ++v) {
    bool boundary = before.is_boundary(v);
    if ((boundary && lab_after[v] != lab_before[v]) || lab_after[v] < lab_before[v]) {
      r.monotonicity = false;
      note("label of local vertex " + std::to_string(v) + " decreased or boundary label changed");
    }
  }
  if (auto bad = check_valid_region(after, lab_after)) {
    r.validity = false;
    note("invalid labeling: " + bad->message);
  }
  if (variant == Variant::kPrd) {
    for (ArcId a = 0; a < n0.arc_count(); ++a) {
      Cap moved = n0.cap(a) - n1.cap(a);
      if (moved <= 0) continue;
      Vertex u = n0.tail(a), v = n0.head(a);
      if (n0.is_terminal(u)) continue;
      if (!(lab_after[u] > lab_before[v])) {
        r.flow_direction = false;
        note("flow on (" + std::to_string(u) + "," + std::to_string(v) + ") against the labels");
      }
    }
  } else if (paths) {
    std::map<Vertex, Cap> out_of, into;
    for (const PathFlow& p : *paths) {
      out_of[p.from] += p.amount;
      into[p.to] += p.amount;
      if (p.to == n0.sink()) continue;
      if (!(lab_after[p.from] > lab_before[p.to])) {
        r.flow_direction = false;
        note("path from " + std::to_string(p.from) + " to a label not below its new label");
      }
    }
    for (Vertex v = 0; v < n0.vertex_count(); ++v) {
      if (n0.is_terminal(v)) continue;
      Cap delta = n0.excess(v) - n1.excess(v);
      Cap expect = (out_of.count(v) ? out_of[v] : 0) - (into.count(v) ? into[v] : 0);
      if (delta != expect) {
        r.flow_direction = false;
        note("recorded paths do not account for excess change at " + std::to_string(v));
      }
    }
    Cap sink_gain = n1.flow_value() - n0.flow_value();
    if (sink_gain != (into.count(n0.sink()) ? into[n0.sink()] : 0)) {
      r.flow_direction = false;
      note("recorded paths do not account for the flow into t");
    }
  }
  return r;
}

}  // namespace regionflow
