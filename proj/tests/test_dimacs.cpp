#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "regionflow/dimacs.hpp"
#include "regionflow/oracle.hpp"
#include "support.hpp"

using namespace regionflow;

namespace {

const char* kDiamond =
    "c diamond\n"
    "p max 4 5\n"
    "n 3 s\n"
    "n 4 t\n"
    "a 3 1 2\n"
    "a 3 2 2\n"
    "a 1 4 1\n"
    "a 2 4 3\n"
    "a 1 2 1\n";

Network parse(const std::string& text, DimacsOptions o = {}) {
  std::istringstream in(text);
  return parse_dimacs(in, o);
}

ErrorKind parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for: " << text);
  return ErrorKind::kIo;
}

std::string write(const Network& net) {
  std::ostringstream out;
  write_dimacs(net, out);
  return out.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rf-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

using ArcTuple = std::tuple<Vertex, Vertex, Cap>;

// Every positive directed capacity of the network, as a sorted multiset.
std::vector<ArcTuple> arc_multiset(const std::vector<PairRecord>& pairs) {
  std::vector<ArcTuple> out;
  for (const PairRecord& p : pairs) {
    out.emplace_back(p.u, p.v, p.cap);
    if (p.reverse_cap > 0) out.emplace_back(p.v, p.u, p.reverse_cap);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairRecord> pairs_of(const Network& net) {
  std::vector<PairRecord> out;
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    out.push_back({net.tail(a), net.head(a), net.cap(a), net.cap(net.sister(a)), p});
  }
  return out;
}

}  // namespace

TEST_CASE("diamond file") {
  Network net = parse(kDiamond);
  CHECK(net.vertex_count() == 4);
  CHECK(net.source() == 2);
  CHECK(net.sink() == 3);
  // Source arcs become excess.
  CHECK(net.excess(0) == 2);
  CHECK(net.excess(1) == 2);
  CHECK(net.pair_count() == 3);
  ArcId ab = net.find_arc(0, 1);
  REQUIRE(ab != kNoArc);
  CHECK(net.cap(ab) == 1);
  CHECK(net.cap(net.sister(ab)) == 0);
  CHECK(oracle::maxflow(net).flow_value == 4);
}

TEST_CASE("malformed input") {
  CHECK(parse_error("p max 2 1\nn 1 s\nn 2 t\na 1 2 -3\n") == ErrorKind::kMalformedLine);
  CHECK(parse_error("p max 3 2\nn 1 s\nn 2 t\na 1 3 1\n") == ErrorKind::kCountMismatch);
  CHECK(parse_error("p max 3 1\nn 1 s\nn 2 s\nn 3 t\na 1 3 1\n") == ErrorKind::kDuplicateTerminal);
  CHECK(parse_error("p max 3 1\nn 1 s\nn 2 t\na 1 9 1\n") == ErrorKind::kMalformedLine);
  CHECK(parse_error("x\n") == ErrorKind::kMalformedLine);
  try {
    parse("p max 2 1\nn 1 s\nn 2 t\na 1 2 -3\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("excess extension and direct arcs") {
  Network net = parse("p max 3 2\nn 2 s\nn 3 t\nn 1 e 6\na 1 3 4\na 2 3 5\n");
  CHECK(net.excess(0) == 6);
  CHECK(net.direct_capacity() == 5);
  CHECK(oracle::maxflow(net).flow_value == 9);
}

TEST_CASE("pair mode merges a line and its reverse") {
  std::string text = "p max 4 4\nn 3 s\nn 4 t\na 1 2 5\na 2 1 7\na 1 4 1\na 3 1 1\n";
  Network plain = parse(text);
  Network paired = parse(text, DimacsOptions{true});
  CHECK(plain.pair_count() == 3);
  CHECK(paired.pair_count() == 2);
  ArcId a = paired.find_arc(0, 1);
  CHECK(paired.cap(a) == 5);
  CHECK(paired.cap(paired.sister(a)) == 7);
  CHECK(oracle::maxflow(plain).flow_value == oracle::maxflow(paired).flow_value);
}

TEST_CASE("parse, write, parse is a fixed point") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 100; ++it) {
    Network net = testing::folded(testing::random_network(rng, testing::pick(rng, 1, 12), 30, 20));
    Network once = parse(write(net));
    std::string text = write(once);
    CHECK(parse(text) == once);
    CHECK(write(parse(text)) == text);
    CHECK(oracle::maxflow(once).flow_value == oracle::maxflow(net).flow_value);
  }
  GridSpec g{7, 5, 8, 150, 3};
  Network grid = gen_grid(g);
  CHECK(parse(write(grid), DimacsOptions{true}) == grid);
}

TEST_CASE("cut files") {
  Network original = parse(kDiamond);
  Network residual = apply_flow(original, oracle::maxflow(original).flow);
  CutResult cut = extract_cut(residual, original);
  std::ostringstream out;
  write_cut(cut, out);
  CHECK(out.str().rfind("f 4\nc 4\n", 0) == 0);
  std::istringstream back(out.str());
  CutFile cf = read_cut(back);
  CHECK(cf.flow == 4);
  CHECK(cf.cost == 4);
  std::istringstream text(kDiamond);
  CHECK(stream_cut_cost(text, cf) == 4);

  CutResult trivial;
  trivial.source_side = {false, false, true, false};
  std::ostringstream o2;
  write_cut(trivial, o2);
  std::istringstream b2(o2.str());
  CutFile t2 = read_cut(b2);
  for (Vertex v : t2.source_side) CHECK(v == 2);
  std::istringstream again(kDiamond);
  CHECK(stream_cut_cost(again, t2) == 4);  // both source arcs cross
}

TEST_CASE("streamed cut cost matches the in-memory cost") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 100; ++it) {
    Network net = testing::random_network(rng, testing::pick(rng, 1, 10), 25, 9);
    std::string text = write(net);
    Network parsed = parse(text);
    std::vector<bool> side(static_cast<std::size_t>(net.vertex_count()));
    for (std::size_t v = 0; v < side.size(); ++v) side[v] = testing::pick(rng, 0, 1);
    side[net.source()] = true;
    side[net.sink()] = false;
    CutResult cut{side, cut_cost(parsed, side), 0};
    std::ostringstream out;
    write_cut(cut, out);
    std::istringstream cin_(out.str()), din(text);
    CHECK(stream_cut_cost(din, read_cut(cin_)) == cut.cut_cost);
  }
}

TEST_CASE("partition sidecar round trip") {
  Partition part = partition_by_id(12, 10, 11, 3);
  std::ostringstream out;
  write_partition(part, out);
  std::istringstream in(out.str());
  Partition back = read_partition(in, 10, 11);
  CHECK(back.region_of == part.region_of);
  CHECK(back.members == part.members);
}

TEST_CASE("split a two-region path") {
  // s - u1 - u2 - t
  std::string text = "p max 4 3\nn 3 s\nn 4 t\na 3 1 5\na 1 2 4\na 2 4 3\n";
  std::istringstream in(text);
  DimacsStream stream(in);
  stream.read_header();
  Partition part = make_partition({0, 1, kNoRegion, kNoRegion}, 2, 2, 3);
  auto dir = scratch_dir("path");
  SplitStats st = split(stream, part, dir);
  PartContents p0 = read_part(part_path(dir, 0)), p1 = read_part(part_path(dir, 1));
  PartContents bd = read_part(boundary_path(dir));
  CHECK(p0.pairs.empty());
  REQUIRE(p0.excess.size() == 1);
  CHECK(p0.excess[0] == std::pair<Vertex, Cap>{0, 5});
  REQUIRE(p1.pairs.size() == 1);
  CHECK(p1.pairs[0].v == 3);
  REQUIRE(bd.pairs.size() == 1);
  CHECK(bd.pairs[0].u == 0);
  CHECK(bd.pairs[0].v == 1);
  CHECK(bd.pairs[0].cap == 4);
  CHECK(st.boundary_pairs == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("split with one region leaves the boundary empty") {
  std::istringstream in(kDiamond);
  DimacsStream stream(in);
  stream.read_header();
  auto dir = scratch_dir("one");
  split(stream, partition_by_id(4, 2, 3, 1), dir);
  CHECK(read_part(boundary_path(dir)).pairs.empty());
  CHECK(read_part(part_path(dir, 0)).pairs.size() == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("split parts merge back to the original arcs") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    Network net = testing::random_network(rng, testing::pick(rng, 2, 30), 80, 9);
    std::string text = write(net);
    Network parsed = parse(text);
    RegionId K = testing::pick(rng, 1, 5);
    Partition part = partition_by_id(parsed.vertex_count(), parsed.source(), parsed.sink(), K);
    std::istringstream in(text);
    DimacsStream stream(in);
    stream.read_header();
    auto dir = scratch_dir("merge");
    SplitStats st = split(stream, part, dir);
    std::vector<PairRecord> all = read_part(boundary_path(dir)).pairs;
    Partition bounded = part;
    compute_boundary(bounded, parsed);
    CHECK(static_cast<std::size_t>(st.peak_buffered_pairs) <= bounded.inter_region_pairs.size());
    CHECK(all.size() == bounded.inter_region_pairs.size());
    Cap excess_total = 0, want_excess = 0;
    for (RegionId k = 0; k < K; ++k) {
      PartContents pc = read_part(part_path(dir, k));
      all.insert(all.end(), pc.pairs.begin(), pc.pairs.end());
      for (auto [v, e] : pc.excess) {
        CHECK(part.region_of[v] == k);
        excess_total += e;
      }
    }
    for (Vertex v = 0; v < parsed.vertex_count(); ++v)
      if (!parsed.is_terminal(v)) want_excess += parsed.excess(v);
    CHECK(excess_total == want_excess);
    CHECK(arc_multiset(all) == arc_multiset(pairs_of(parsed)));
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("corrupt part file is rejected") {
  std::istringstream in(kDiamond);
  DimacsStream stream(in);
  stream.read_header();
  auto dir = scratch_dir("corrupt");
  split(stream, partition_by_id(4, 2, 3, 1), dir);
  auto path = part_path(dir, 0);
  auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 3);
  CHECK_THROWS_AS(read_part(path), Error);
  std::filesystem::remove_all(dir);
}
