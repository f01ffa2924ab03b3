#include <random>
#include <sstream>

#include "doctest.h"
#include "regionflow/dimacs.hpp"
#include "regionflow/oracle.hpp"
#include "regionflow/sweep.hpp"
#include "support.hpp"

using namespace regionflow;

TEST_CASE("uniform_below stays in range and is reproducible") {
  std::mt19937_64 a(1), b(1);
  for (int i = 0; i < 1000; ++i) {
    auto x = uniform_below(a, 1001);
    CHECK(x < 1001);
    CHECK(x == uniform_below(b, 1001));
  }
}

TEST_CASE("grid layout") {
  GridSpec g{6, 6, 8, 150, 4};
  Network net = gen_grid(g);
  CHECK(net.vertex_count() == 38);
  CHECK(net.source() == 36);
  CHECK(net.sink() == 37);
  Partition part = grid_partition(g, 2, 2);
  CHECK(part.region_count == 4);
  CHECK(gen_grid(g) == net);
  g.seed = 5;
  CHECK(!(gen_grid(g) == net));

  // Incident grid edges of a node far from the border.
  GridSpec big{12, 12, 8, 7, 1};
  Network bn = gen_grid(big);
  Vertex centre = 6 * 12 + 6;
  int edges = 0;
  for (ArcId a = bn.first_arc(centre); a < bn.end_arc(centre); ++a) {
    if (bn.is_terminal(bn.head(a))) continue;
    ++edges;
    CHECK(bn.cap(a) == 7);
  }
  CHECK(edges == 8);
  big.connectivity = 16;
  Network b16 = gen_grid(big);
  edges = 0;
  for (ArcId a = b16.first_arc(centre); a < b16.end_arc(centre); ++a) edges += !b16.is_terminal(b16.head(a));
  CHECK(edges == 16);
  CHECK(grid_displacements().size() == 14);
  CHECK(grid_displacements()[2] == std::pair<int, int>{1, 2});
}

TEST_CASE("grid terminal arcs") {
  GridSpec g{20, 20, 4, 10, 9};
  Network net = gen_grid(g);
  for (Vertex v = 0; v < 400; ++v) {
    CHECK(net.excess(v) <= 500);
    ArcId a = net.find_arc(v, net.sink());
    if (net.excess(v) > 0) CHECK(a == kNoArc);
    if (a != kNoArc) {
      CHECK(net.cap(a) >= 1);
      CHECK(net.cap(a) <= 500);
    }
  }
}

TEST_CASE("strength zero moves nothing") {
  GridSpec g{15, 15, 8, 0, 2};
  Network net = gen_grid(g);
  CHECK(oracle::maxflow(net).flow_value == 0);
  Partition part = grid_partition(g, 2, 2);
  compute_boundary(part, net);
  CHECK(run_sequential(net, part).cut.flow_value == 0);
}

TEST_CASE("100x100 grids at strength 150 match the oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GridSpec g{100, 100, 8, 150, seed};
    Network net = gen_grid(g);
    Partition part = grid_partition(g, 2, 2);
    compute_boundary(part, net);
    CHECK(run_sequential(net, part).cut.flow_value == oracle::maxflow(net).flow_value);
  }
}

TEST_CASE("adversarial family") {
  AdversarialInstance one = gen_adversarial(1);
  CHECK(one.net.vertex_count() == 8);  // six regular nodes and two terminals
  CHECK(one.part.members[1] == std::vector<Vertex>{one.v6});
  CHECK(one.part.members[0].size() == 5);

  AdversarialInstance three = gen_adversarial(3);
  CHECK(three.chains.size() == 3);
  CHECK(three.net.vertex_count() == 3 * 3 + 5);
  const Network& net = three.net;
  for (const auto& c : three.chains) {
    CHECK(net.cap(net.find_arc(three.v1, c[0])) == three.sentinel);
    CHECK(net.cap(net.find_arc(c[2], three.v5)) == three.sentinel);
  }
  ArcId back = net.find_arc(three.v6, three.v1);
  CHECK(net.cap(back) == three.sentinel);
  CHECK(net.cap(net.sister(back)) == 0);
  CHECK(three.part.boundary[0] == std::vector<Vertex>{three.v6});
  CHECK(three.sentinel > 2 + 1);

  for (int k = 1; k <= 8; ++k) {
    AdversarialInstance inst = gen_adversarial(k);
    Cap want = oracle::maxflow(inst.net).flow_value;
    CHECK(want == 1);
    CHECK(run_sequential(inst.net, inst.part).cut.flow_value == want);
    SolveConfig prd;
    prd.variant = Variant::kPrd;
    CHECK(run_sequential(inst.net, inst.part, prd).cut.flow_value == want);
  }
  CHECK_THROWS_AS(gen_adversarial(0), Error);
}

TEST_CASE("generated instances round trip through DIMACS") {
  for (int k : {1, 4}) {
    AdversarialInstance inst = gen_adversarial(k);
    std::ostringstream out;
    write_dimacs(inst.net, out);
    std::istringstream in(out.str());
    CHECK(parse_dimacs(in, DimacsOptions{true}) == inst.net);
  }
}
