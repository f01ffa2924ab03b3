#include <random>

#include "doctest.h"
#include "regionflow/ard.hpp"
#include "regionflow/oracle.hpp"
#include "support.hpp"

using namespace regionflow;
using testing::RegionCase;

namespace {

// Max flow from the excess of X to the targets, through inner non-target
// vertices only, by the reference solver on a rebuilt network.
Cap oracle_augment(const RegionNetwork& rn, const std::vector<Vertex>& X, const std::vector<bool>& target) {
  const Network& net = rn.net;
  const Vertex n = net.vertex_count();
  const Vertex S = n, T = n + 1;
  auto usable = [&](Vertex v) { return target[v] || rn.is_inner(v); };
  NetworkBuilder b(n + 2, S, T);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    Vertex u = net.tail(a), v = net.head(a);
    if (net.cap(a) > 0 && usable(u) && !target[u] && usable(v)) b.add_arc(u, v, net.cap(a));
  }
  for (Vertex x : X)
    if (!target[x] && net.excess(x) > 0) b.add_arc(S, x, net.excess(x));
  for (Vertex v = 0; v < n; ++v)
    if (target[v]) b.add_arc(v, T, std::numeric_limits<Cap>::max() / 4);
  return oracle::maxflow(b.build()).flow_value;
}

Labeling relabel_oracle(const RegionNetwork& rn, const Labeling& seeds) {
  Labeling out = seeds;
  for (Vertex u = 0; u < rn.inner_count; ++u) {
    auto reach = oracle::reachable_from(rn.net, {u});
    Label k = seeds.d_inf;
    if (reach[rn.net.sink()]) k = 0;
    for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w)
      if (reach[w]) k = std::min(k, seeds[w] + 1);
    out[u] = std::min(k, seeds.d_inf);
  }
  return out;
}

struct Run {
  RegionNetwork rn;
  Labeling lab;
  DischargeStats stats;
};

Run discharge(const RegionCase& c, ArdBackend backend, Label max_stage = kAllStages) {
  Run r{c.rn, c.lab, {}};
  SearchForest forest;
  r.stats = ard_discharge(r.rn, r.lab, ArdOptions{max_stage, backend, true}, &forest);
  return r;
}

}  // namespace

TEST_CASE("augment moves the bottleneck") {
  NetworkBuilder b(5, 3, 4);
  b.add_excess(0, 5);
  b.add_arc(0, 1, 3);
  b.add_arc(1, 4, 9);
  Network net = b.build();
  Partition part = make_partition({0, 0, 1, kNoRegion, kNoRegion}, 2, 3, 4);
  compute_boundary(part, net);
  RegionNetwork rn = build_region_network(net, part, 0);
  std::vector<bool> to_t(rn.global.size(), false);
  to_t[rn.net.sink()] = true;
  CHECK(augment(rn, {0}, to_t) == 3);
  CHECK(rn.net.cap(rn.net.find_arc(0, 1)) == 0);
  CHECK(rn.net.excess(0) == 2);
  CHECK(augment(rn, {0}, to_t) == 0);
}

TEST_CASE("augment equals the reference max flow to the targets") {
  std::mt19937_64 rng(97);
  for (int it = 0; it < 500; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd);
    std::vector<Vertex> X;
    for (Vertex v = 0; v < c.rn.inner_count; ++v)
      if (testing::pick(rng, 0, 1)) X.push_back(v);
    std::vector<bool> target(c.rn.global.size(), false);
    target[c.rn.net.sink()] = testing::pick(rng, 0, 1);
    for (Vertex w = c.rn.inner_count; w < c.rn.inner_count + c.rn.boundary_count; ++w)
      target[w] = testing::pick(rng, 0, 1);
    Cap want = oracle_augment(c.rn, X, target);
    RegionNetwork rn = c.rn;
    CHECK(augment(rn, X, target) == want);
    // Nothing left to move.
    CHECK(oracle_augment(rn, X, target) == 0);
  }
}

TEST_CASE("stage zero drains to t only") {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 300; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd);
    std::vector<Vertex> inner;
    for (Vertex v = 0; v < c.rn.inner_count; ++v) inner.push_back(v);
    std::vector<bool> to_t(c.rn.global.size(), false);
    to_t[c.rn.net.sink()] = true;
    Cap want = oracle_augment(c.rn, inner, to_t);
    for (ArdBackend backend : {ArdBackend::kBasic, ArdBackend::kForest}) {
      Run r = discharge(c, backend, 0);
      CHECK(r.rn.net.flow_value() - c.rn.net.flow_value() == want);
      for (Vertex w = c.rn.inner_count; w < c.rn.inner_count + c.rn.boundary_count; ++w)
        CHECK(r.rn.net.excess(w) == 0);
    }
  }
}

TEST_CASE("excess cut off from every target ends at d_inf") {
  NetworkBuilder b(5, 3, 4);
  b.add_excess(0, 2);
  b.add_arc(0, 1, 0);
  b.add_arc(1, 2, 4);
  Network net = b.build();
  Partition part = make_partition({0, 0, 1, kNoRegion, kNoRegion}, 2, 3, 4);
  compute_boundary(part, net);
  RegionNetwork rn = build_region_network(net, part, 0);
  Labeling lab{Metric::kRegion, 2, {0, 0, 0, 2, 0}};
  for (ArdBackend backend : {ArdBackend::kBasic, ArdBackend::kForest}) {
    RegionNetwork copy = rn;
    Labeling l = lab;
    SearchForest f;
    ard_discharge(copy, l, ArdOptions{kAllStages, backend, false}, &f);
    CHECK(l[0] == 2);
    CHECK(l[1] == 1);
  }
}

TEST_CASE("ARD discharge properties on random regions") {
  std::mt19937_64 rng(103);
  for (int it = 0; it < 1000; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd);
    for (ArdBackend backend : {ArdBackend::kBasic, ArdBackend::kForest}) {
      bool partial = it % 3 == 0;
      Label stage = partial ? testing::pick(rng, 0, c.lab.d_inf) : kAllStages;
      Run r = discharge(c, backend, stage);
      DischargeCheck chk = check_discharge(c.rn, c.lab, r.rn, r.lab, Variant::kArd, !partial, &r.stats.paths);
      INFO("it " << it << " backend " << int(backend) << ": " << chk.message);
      CHECK(chk.ok());
      // The final labels are min{k : u -> T_k} in the final residual network.
      CHECK(r.lab == relabel_oracle(r.rn, c.lab));
    }
  }
}

TEST_CASE("forest and basic backends agree") {
  std::mt19937_64 rng(107);
  for (int it = 0; it < 1000; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd, 24);
    Run basic = discharge(c, ArdBackend::kBasic);
    Run forest = discharge(c, ArdBackend::kForest);
    CHECK(basic.lab == forest.lab);
    CHECK(basic.rn.net.flow_value() == forest.rn.net.flow_value());
  }
}

TEST_CASE("persistent forest over repeated discharges") {
  // Discharge a region several times with rising boundary labels and fresh
  // excess, keeping the forest. Each round is compared with the basic backend
  // started from the same state.
  std::mt19937_64 rng(109);
  for (int it = 0; it < 300; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd, 20);
    RegionNetwork b = c.rn;
    Labeling lb = c.lab;
    SearchForest forest;
    for (int round = 0; round < 4; ++round) {
      RegionNetwork a = b;
      Labeling la = lb;
      SearchForest none;
      ard_discharge(a, la, ArdOptions{kAllStages, ArdBackend::kBasic, false}, &none);
      ard_discharge(b, lb, ArdOptions{kAllStages, ArdBackend::kForest, false}, &forest);
      INFO("it " << it << " round " << round);
      REQUIRE(la == lb);
      CHECK(a.net.flow_value() == b.net.flow_value());
      for (Vertex w = c.rn.inner_count; w < c.rn.inner_count + c.rn.boundary_count; ++w)
        if (testing::pick(rng, 0, 2) == 0) lb[w] = std::min(lb.d_inf, lb[w] + testing::pick(rng, 1, 2));
      if (c.rn.inner_count) {
        Vertex v = testing::pick(rng, 0, c.rn.inner_count - 1);
        b.net.set_excess(v, b.net.excess(v) + testing::pick(rng, 1, 5));
      }
      // Raised seeds can leave interior labels too low; restore validity.
      Labeling fixed = region_relabel(b, lb, Variant::kArd);
      for (Vertex u = 0; u < c.rn.inner_count; ++u) lb[u] = std::max(lb[u], fixed[u]);
    }
  }
}

TEST_CASE("sink tree of an empty forest is the set reaching t") {
  std::mt19937_64 rng(113);
  for (int it = 0; it < 300; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd);
    SearchForest forest;
    forest_validate(forest, c.rn, c.lab);
    DischargeStats stats;
    RegionNetwork rn = c.rn;
    Labeling lab = c.lab;
    for (Vertex v = 0; v < rn.inner_count; ++v) lab[v] = 0;
    forest_grow_augment(forest, rn, lab, 0, false, stats);
    CHECK(rn == c.rn);
    std::vector<bool> to_t(rn.global.size(), false);
    to_t[rn.net.sink()] = true;
    for (Vertex v = 0; v < rn.inner_count; ++v) {
      // v reaches t through interior vertices only.
      RegionNetwork probe = rn;
      probe.net.set_excess(v, 1);
      bool reaches = oracle_augment(probe, {v}, to_t) > 0;
      CHECK((forest.mark[v] == -1) == reaches);
      if (reaches) CHECK(forest.parent[v] != kNoArc);
    }
  }
}

TEST_CASE("raising a root label frees its tree") {
  // 0 -> 1 -> boundary 2; t unreachable.
  NetworkBuilder b(5, 3, 4);
  b.add_arc(0, 1, 1);
  b.add_arc(1, 2, 1);
  Network net = b.build();
  Partition part = make_partition({0, 0, 1, kNoRegion, kNoRegion}, 2, 3, 4);
  compute_boundary(part, net);
  RegionNetwork rn = build_region_network(net, part, 0);
  Labeling lab{Metric::kRegion, 3, {1, 1, 0, 3, 0}};
  SearchForest forest;
  forest_validate(forest, rn, lab);
  DischargeStats stats;
  forest_grow_augment(forest, rn, lab, 0, false, stats);
  forest_grow_augment(forest, rn, lab, 1, false, stats);
  CHECK(forest.mark[0] == 0);
  CHECK(forest.mark[1] == 0);
  lab[2] = 1;
  forest_validate(forest, rn, lab);
  CHECK(forest.mark[0] == SearchForest::kFree);
  CHECK(forest.mark[1] == SearchForest::kFree);

  // A tree that reaches a vertex labelled above the stage is an error.
  Labeling wrong{Metric::kRegion, 3, {1, 3, 0, 3, 0}};
  SearchForest f2;
  forest_validate(f2, rn, wrong);
  forest_grow_augment(f2, rn, wrong, 0, false, stats);
  CHECK_THROWS_AS(forest_grow_augment(f2, rn, wrong, 1, false, stats), Error);
}
