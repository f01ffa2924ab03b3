#include <random>

#include "doctest.h"
#include "regionflow/labeling.hpp"
#include "regionflow/oracle.hpp"
#include "support.hpp"

using namespace regionflow;
using testing::RegionCase;

namespace {

const Variant kVariants[] = {Variant::kArd, Variant::kPrd};

bool monotone(const Labeling& before, const Labeling& after) {
  for (std::size_t v = 0; v < before.d.size(); ++v)
    if (after.d[v] < before.d[v]) return false;
  return true;
}

bool lower_bound(const Labeling& lab, const Labeling& truth) {
  for (std::size_t v = 0; v < lab.d.size(); ++v)
    if (lab.d[v] > truth.d[v]) return false;
  return true;
}

// Distances inside a region network by Bellman-Ford: t at 0, boundary
// vertices at their labels, arc lengths of the metric.
std::vector<Label> region_distance_oracle(const RegionNetwork& rn, const Labeling& lab, Variant var) {
  const Network& net = rn.net;
  std::vector<Label> d(static_cast<std::size_t>(net.vertex_count()), lab.d_inf);
  d[net.sink()] = 0;
  for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w) d[w] = lab[w];
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < rn.inner_count; ++v)
      for (ArcId a = net.first_arc(v); a < net.end_arc(v); ++a) {
        Vertex w = net.head(a);
        if (net.cap(a) <= 0 || w == net.source()) continue;
        Label len = var == Variant::kPrd || rn.is_boundary(w) ? 1 : 0;
        Label c = std::min(lab.d_inf, d[w] + len);
        if (c < d[v]) d[v] = c, changed = true;
      }
  }
  return d;
}

}  // namespace

TEST_CASE("zero labeling is valid under both metrics") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 100; ++it) {
    Network net = testing::folded(testing::random_network(rng, 10, 30, 5));
    Partition part = testing::random_partition(rng, net, 3);
    for (Variant var : kVariants) {
      Labeling lab;
      lab.metric = metric_of(var);
      lab.d_inf = testing::d_inf_of(net, part, var);
      lab.d.assign(static_cast<std::size_t>(net.vertex_count()), 0);
      lab[net.source()] = lab.d_inf;
      CHECK(!check_valid(net, lab, part));
    }
  }
}

TEST_CASE("region metric rejects a unit step inside a region") {
  NetworkBuilder b(4, 2, 3);
  b.add_arc(0, 1, 1);
  Network net = b.build();
  Partition same = make_partition({0, 0, kNoRegion, kNoRegion}, 1, 2, 3);
  Partition split = make_partition({0, 1, kNoRegion, kNoRegion}, 2, 2, 3);
  compute_boundary(same, net);
  compute_boundary(split, net);
  Labeling lab{Metric::kRegion, 2, {1, 0, 2, 0}};
  auto bad = check_valid(net, lab, same);
  REQUIRE(bad);
  CHECK(bad->u == 0);
  CHECK(bad->v == 1);
  CHECK(!check_valid(net, lab, split));
  lab.metric = Metric::kPushRelabel;
  CHECK(!check_valid(net, lab, same));
}

TEST_CASE("true region distance") {
  NetworkBuilder b(4, 2, 3);
  b.add_arc(2, 0, 1);
  b.add_arc(0, 1, 1);
  b.add_arc(1, 3, 1);
  Network net = b.build();
  Partition part = make_partition({0, 1, kNoRegion, kNoRegion}, 2, 2, 3);
  compute_boundary(part, net);
  auto d = true_region_distance(net, part);
  CHECK(d[1] == 0);
  CHECK(d[0] == 1);

  net.push(net.find_arc(0, 1), 1);
  d = true_region_distance(net, part);
  CHECK(d[0] == part.boundary_size());

  std::mt19937_64 rng(43);
  for (int it = 0; it < 50; ++it) {
    Network r = testing::folded(testing::random_network(rng, 10, 25, 4));
    Partition one = partition_by_id(r.vertex_count(), r.source(), r.sink(), 1);
    compute_boundary(one, r);
    auto dist = true_region_distance(r, one);
    auto reach = sink_reachable(r);
    for (Vertex v = 0; v < r.vertex_count(); ++v)
      if (reach[v] && v != r.source()) CHECK(dist[v] == 0);
  }
}

TEST_CASE("true distances against Bellman-Ford on the whole network") {
  std::mt19937_64 rng(47);
  for (int it = 0; it < 200; ++it) {
    Network net = testing::folded(testing::random_network(rng, 12, 30, 3));
    Partition part = testing::random_partition(rng, net, 3);
    for (Variant var : kVariants) {
      Labeling truth = testing::true_labels(net, part, var);
      std::vector<Label> d(static_cast<std::size_t>(net.vertex_count()), truth.d_inf);
      d[net.sink()] = 0;
      for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < net.vertex_count(); ++v) {
          if (net.is_terminal(v)) continue;
          for (ArcId a = net.first_arc(v); a < net.end_arc(v); ++a) {
            Vertex w = net.head(a);
            if (net.cap(a) <= 0 || w == net.source()) continue;
            Label c = std::min(truth.d_inf, d[w] + testing::arc_length(part, var, v, w));
            if (c < d[v]) d[v] = c, changed = true;
          }
        }
      }
      for (Vertex v = 0; v < net.vertex_count(); ++v)
        if (!net.is_terminal(v)) CHECK(truth[v] == d[v]);
    }
  }
}

TEST_CASE("region relabel is the exact seeded distance") {
  std::mt19937_64 rng(53);
  for (int it = 0; it < 1000; ++it) {
    for (Variant var : kVariants) {
      RegionCase c = testing::random_region_case(rng, var);
      Labeling out = region_relabel(c.rn, c.lab, var);
      auto want = region_distance_oracle(c.rn, c.lab, var);
      for (Vertex v = 0; v < c.rn.inner_count; ++v) CHECK(out[v] == want[v]);
      for (Vertex w = c.rn.inner_count; w < c.rn.inner_count + c.rn.boundary_count; ++w) CHECK(out[w] == c.lab[w]);
      CHECK(!check_valid_region(c.rn, out));
      CHECK(monotone(c.lab, out));
      CHECK(region_relabel(c.rn, out, var) == out);

      // Lifted to the whole network the result stays valid and a lower bound.
      Labeling global = c.global;
      for (Vertex v = 0; v < c.rn.inner_count; ++v) global[c.rn.global[v]] = out[v];
      CHECK(!check_valid(c.net, global, c.part));
      CHECK(lower_bound(global, testing::true_labels(c.net, c.part, var)));

      if (var == Variant::kArd) {
        // min{k : u -> T_k} by plain reachability.
        for (Vertex u = 0; u < c.rn.inner_count; ++u) {
          auto reach = oracle::reachable_from(c.rn.net, {u});
          Label k = c.lab.d_inf;
          if (reach[c.rn.net.sink()]) k = 0;
          for (Vertex w = c.rn.inner_count; w < c.rn.inner_count + c.rn.boundary_count; ++w)
            if (reach[w]) k = std::min(k, c.lab[w] + 1);
          CHECK(out[u] == std::min(k, c.lab.d_inf));
        }
      }
    }
  }
}

TEST_CASE("region relabel on a single region is the BFS distance") {
  std::mt19937_64 rng(59);
  for (int it = 0; it < 100; ++it) {
    Network net = testing::folded(testing::random_network(rng, 12, 30, 3));
    Partition one = partition_by_id(net.vertex_count(), net.source(), net.sink(), 1);
    compute_boundary(one, net);
    RegionNetwork rn = build_region_network(net, one, 0);
    Labeling zero;
    zero.metric = Metric::kPushRelabel;
    zero.d_inf = net.vertex_count();
    zero.d.assign(rn.global.size(), 0);
    zero[rn.net.source()] = zero.d_inf;
    Labeling out = region_relabel(rn, zero, Variant::kPrd);
    Labeling truth = testing::true_labels(net, one, Variant::kPrd);
    for (Vertex v = 0; v < rn.inner_count; ++v) CHECK(out[v] == truth[rn.global[v]]);
  }
}

TEST_CASE("vertex without a residual path gets d_inf") {
  NetworkBuilder b(4, 2, 3);
  b.add_arc(0, 1, 0);
  b.add_excess(0, 1);
  Network net = b.build();
  Partition part = make_partition({0, 1, kNoRegion, kNoRegion}, 2, 2, 3);
  compute_boundary(part, net);
  RegionNetwork rn = build_region_network(net, part, 0);
  Labeling lab{Metric::kRegion, 2, {0, 0, 2, 0}};
  CHECK(region_relabel(rn, lab, Variant::kArd)[0] == 2);
}

TEST_CASE("global gap") {
  Labeling lab{Metric::kPushRelabel, 6, {0, 1, 3, 3, 6, 0}};
  LabelHistogram hist = make_histogram({0, 1, 3, 3}, 6);
  CHECK(hist.find_gap() == 2);
  CHECK(global_gap(lab, hist) == 2);
  CHECK(lab.d == std::vector<Label>{0, 1, 6, 6, 6, 0});
  CHECK(hist.count(6) == 2);
  CHECK(hist.count(3) == 0);

  Labeling full{Metric::kPushRelabel, 6, {0, 1, 2, 3}};
  LabelHistogram h2 = make_histogram(full.d, 6);
  CHECK(!global_gap(full, h2));
  CHECK(full.d == std::vector<Label>{0, 1, 2, 3});
  CHECK(h2.total() == 4);
}

TEST_CASE("global gap keeps validity and the lower bound") {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 1000; ++it) {
    Network net = testing::folded(testing::random_network(rng, testing::pick(rng, 2, 14), 30, 4));
    Partition part = testing::random_partition(rng, net, testing::pick(rng, 1, 4));
    for (Variant var : kVariants) {
      Labeling lab = testing::random_valid_labeling(rng, net, part, var);
      std::vector<Label> inner;
      for (Vertex v = 0; v < net.vertex_count(); ++v)
        if (!net.is_terminal(v)) inner.push_back(lab[v]);
      LabelHistogram hist = make_histogram(inner, lab.d_inf);
      Labeling before = lab;
      global_gap(lab, hist);
      CHECK(!check_valid(net, lab, part));
      CHECK(monotone(before, lab));
      CHECK(lower_bound(lab, testing::true_labels(net, part, var)));
    }
  }
}

TEST_CASE("region gap") {
  // Interior 0, 1 and boundary 2; d_inf 10.
  NetworkBuilder b(5, 3, 4);
  b.add_arc(0, 2, 1);
  b.add_arc(1, 0, 1);
  Network net = b.build();
  Partition part = make_partition({0, 0, 1, kNoRegion, kNoRegion}, 2, 3, 4);
  compute_boundary(part, net);
  RegionNetwork rn = build_region_network(net, part, 0);
  REQUIRE(rn.boundary_count == 1);
  Labeling lab{Metric::kPushRelabel, 10, {1, 4, 3, 10, 0}};
  // Boundary holds 3: labels strictly between 2 and 3 move, and there are none.
  CHECK(region_gap(rn, lab, 2) == lab);

  Labeling high{Metric::kPushRelabel, 10, {1, 4, 0, 10, 0}};
  Labeling out = region_gap(rn, high, 2);
  CHECK(out[0] == 1);
  CHECK(out[1] == 10);

  Labeling raise{Metric::kPushRelabel, 10, {1, 5, 6, 10, 0}};
  CHECK(region_gap(rn, raise, 3)[1] == 7);

  CHECK_THROWS_AS(region_gap(rn, lab, 1), Error);
}

TEST_CASE("region gap keeps validity and the lower bound") {
  std::mt19937_64 rng(67);
  int applied = 0;
  for (int it = 0; it < 1000; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kPrd);
    std::vector<bool> used(static_cast<std::size_t>(c.lab.d_inf) + 1, false);
    for (Vertex v = 0; v < c.rn.inner_count + c.rn.boundary_count; ++v) used[c.lab[v]] = true;
    std::vector<Label> free;
    for (Label g = 1; g < c.lab.d_inf; ++g)
      if (!used[g]) free.push_back(g);
    if (free.empty()) continue;
    Label g = free[testing::pick(rng, 0, static_cast<int>(free.size()) - 1)];
    Labeling out = region_gap(c.rn, c.lab, g);
    ++applied;
    CHECK(monotone(c.lab, out));
    CHECK(!check_valid_region(c.rn, out));
    auto exact = region_distance_oracle(c.rn, c.lab, Variant::kPrd);
    for (Vertex v = 0; v < c.rn.inner_count; ++v) CHECK(out[v] <= std::max(exact[v], c.lab[v]));
    Labeling global = c.global;
    for (Vertex v = 0; v < c.rn.inner_count; ++v) global[c.rn.global[v]] = out[v];
    CHECK(!check_valid(c.net, global, c.part));
    CHECK(lower_bound(global, testing::true_labels(c.net, c.part, Variant::kPrd)));
  }
  CHECK(applied > 300);
}

TEST_CASE("boundary relabel on equal labels") {
  // Two regions {0,1} and {2,3}; crossing pairs 1-2 and 0-3; t hangs off 3.
  NetworkBuilder b(6, 4, 5);
  b.add_arc(0, 1, 1, 1);
  b.add_arc(1, 2, 1, 1);
  b.add_arc(0, 3, 1, 1);
  b.add_arc(2, 3, 1, 1);
  b.add_arc(3, 5, 1);
  Network net = b.build();
  Partition part = make_partition({0, 0, 1, 1, kNoRegion, kNoRegion}, 2, 4, 5);
  compute_boundary(part, net);
  REQUIRE(part.boundary_size() == 4);
  Labeling lab{Metric::kRegion, 4, {0, 0, 0, 0, 4, 0}};
  Labeling out = boundary_relabel(net, lab, part);
  for (Vertex v = 0; v < 4; ++v) CHECK(out[v] <= 1);
  CHECK(!check_valid(net, out, part));

  // Cutting t off leaves no group at label 0 reachable: labels rise.
  net.push(net.find_arc(3, 5), 1);
  Labeling cut = boundary_relabel(net, lab, part);
  for (Vertex v = 0; v < 4; ++v) CHECK(cut[v] >= lab[v]);
  CHECK(!check_valid(net, cut, part));
}

TEST_CASE("boundary relabel keeps validity and the lower bound") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 1000; ++it) {
    Network net = testing::folded(testing::random_network(rng, testing::pick(rng, 2, 14), 30, 4));
    Partition part = testing::random_partition(rng, net, testing::pick(rng, 1, 4));
    Labeling lab = testing::random_valid_labeling(rng, net, part, Variant::kArd);
    Labeling out = boundary_relabel(net, lab, part);
    CHECK(!check_valid(net, out, part));
    CHECK(monotone(lab, out));
    CHECK(lower_bound(out, testing::true_labels(net, part, Variant::kArd)));
    CHECK(boundary_relabel(net, out, part) == out);
  }
}
