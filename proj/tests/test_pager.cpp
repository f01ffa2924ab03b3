#include <cstdlib>
#include <fstream>
#include <random>

#include "doctest.h"
#include "regionflow/pager.hpp"
#include "support.hpp"

using namespace regionflow;
using testing::RegionCase;

namespace {

RegionPage random_page(std::mt19937_64& rng, Variant var) {
  RegionCase c = testing::random_region_case(rng, var);
  RegionPage page;
  page.rn = c.rn;
  page.labels.assign(c.lab.d.begin(), c.lab.d.begin() + c.rn.inner_count);
  page.prd = make_prd_state(c.rn);
  if (var == Variant::kArd) {
    Labeling lab = c.lab;
    ard_discharge(page.rn, lab, ArdOptions{}, &page.forest);
    page.labels.assign(lab.d.begin(), lab.d.begin() + c.rn.inner_count);
  }
  for (ArcId a = 0; a < page.rn.net.arc_count(); ++a)
    if (testing::pick(rng, 0, 3) == 0) page.crossing.push_back({a, testing::pick(rng, 0, 50), testing::pick(rng, 0, 1) == 1});
  return page;
}

void expect_corrupt(std::string_view bytes) {
  try {
    load_page(bytes);
    FAIL("corrupt page accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kPageCorrupt);
  }
}

Labeling with_labels(const RegionPage& page, const Labeling& seeds) {
  Labeling lab = seeds;
  for (std::size_t i = 0; i < page.labels.size(); ++i) lab.d[i] = page.labels[i];
  return lab;
}

}  // namespace

TEST_CASE("page round trip") {
  std::mt19937_64 rng(127);
  for (int it = 0; it < 300; ++it) {
    RegionPage page = random_page(rng, it % 2 ? Variant::kArd : Variant::kPrd);
    std::string bytes = save_page(page);
    CHECK(bytes.substr(0, 8) == "RFPAGE01");
    CHECK(load_page(bytes) == page);
    CHECK(save_page(load_page(bytes)) == bytes);
  }
}

TEST_CASE("page of a region without members") {
  NetworkBuilder b(4, 2, 3);
  b.add_arc(0, 1, 2);
  b.add_arc(1, 3, 2);
  Network net = b.build();
  Partition part = make_partition({0, 0, kNoRegion, kNoRegion}, 2, 2, 3);
  compute_boundary(part, net);
  RegionPage page;
  page.rn = build_region_network(net, part, 1);
  CHECK(page.rn.inner_count == 0);
  page.prd = make_prd_state(page.rn);
  CHECK(load_page(save_page(page)) == page);
}

TEST_CASE("corrupt pages are rejected") {
  std::mt19937_64 rng(131);
  RegionPage page = random_page(rng, Variant::kArd);
  std::string bytes = save_page(page);

  std::string bad = bytes;
  bad[0] = 'X';
  expect_corrupt(bad);

  for (int it = 0; it < 50; ++it) {
    std::string flipped = bytes;
    std::size_t at = testing::pick(rng, 12, static_cast<int>(bytes.size()) - 1);
    flipped[at] = static_cast<char>(flipped[at] ^ (1 << testing::pick(rng, 0, 7)));
    expect_corrupt(flipped);
  }
  for (std::size_t len : {std::size_t{0}, std::size_t{5}, std::size_t{12}, bytes.size() / 2, bytes.size() - 1})
    expect_corrupt(std::string_view(bytes).substr(0, len));
  expect_corrupt(bytes + "x");
}

TEST_CASE("a reloaded page discharges identically") {
  std::mt19937_64 rng(137);
  for (int it = 0; it < 200; ++it) {
    RegionCase c = testing::random_region_case(rng, Variant::kArd);
    RegionPage page;
    page.rn = c.rn;
    page.labels.assign(c.lab.d.begin(), c.lab.d.begin() + c.rn.inner_count);
    page.prd = make_prd_state(c.rn);
    {
      // Warm the forest with a first discharge.
      Labeling lab = with_labels(page, c.lab);
      ard_discharge(page.rn, lab, ArdOptions{}, &page.forest);
      page.labels.assign(lab.d.begin(), lab.d.begin() + c.rn.inner_count);
      if (c.rn.inner_count) page.rn.net.set_excess(0, page.rn.net.excess(0) + 3);
    }
    RegionPage copy = load_page(save_page(page));
    Labeling la = with_labels(page, c.lab), lb = with_labels(copy, c.lab);
    DischargeStats sa = ard_discharge(page.rn, la, ArdOptions{}, &page.forest);
    DischargeStats sb = ard_discharge(copy.rn, lb, ArdOptions{}, &copy.forest);
    CHECK(la == lb);
    CHECK(page.rn == copy.rn);
    CHECK(page.forest == copy.forest);
    CHECK(sa.augmentations == sb.augmentations);
    CHECK(sa.relocations == sb.relocations);

    RegionCase p = testing::random_region_case(rng, Variant::kPrd);
    PrdState state = make_prd_state(p.rn);
    RegionPage pp{p.rn, {p.lab.d.begin(), p.lab.d.begin() + p.rn.inner_count}, state, {}, {}};
    RegionPage pc = load_page(save_page(pp));
    Labeling l1 = with_labels(pp, p.lab), l2 = with_labels(pc, p.lab);
    prd_discharge(pp.rn, l1, pp.prd, PrdOptions{});
    prd_discharge(pc.rn, l2, pc.prd, PrdOptions{});
    CHECK(l1 == l2);
    CHECK(pp == pc);
  }
}

TEST_CASE("pager counts bytes and cleans up") {
  std::mt19937_64 rng(139);
  std::filesystem::path dir = default_page_dir();
  REQUIRE_FALSE(std::filesystem::exists(dir));
  {
    Pager pager(dir);
    CHECK(std::filesystem::is_directory(dir));
    std::uint64_t out = 0, in = 0;
    std::vector<RegionPage> pages;
    for (RegionId k = 0; k < 4; ++k) {
      pages.push_back(random_page(rng, Variant::kArd));
      pager.save(k, pages.back());
      out += save_page(pages.back()).size();
    }
    CHECK(pager.bytes_out() == out);
    CHECK(pager.bytes_in() == 0);
    for (RegionId k = 3; k >= 0; --k) {
      CHECK(pager.load(k) == pages[k]);
      in += save_page(pages[k]).size();
    }
    CHECK(pager.bytes_in() == in);
    CHECK(pager.peek(1) == pages[1]);
    CHECK(pager.bytes_in() == in);
    CHECK_THROWS_AS(pager.load(9), Error);
  }
  CHECK_FALSE(std::filesystem::exists(dir));
}

TEST_CASE("pager keeps a directory it did not create") {
  std::mt19937_64 rng(149);
  std::filesystem::path dir = default_page_dir();
  std::filesystem::create_directories(dir);
  std::filesystem::path other = dir / "keep.txt";
  { std::ofstream(other) << "x"; }
  {
    Pager pager(dir);
    pager.save(0, load_page(save_page(random_page(rng, Variant::kPrd))));
    CHECK(std::filesystem::exists(dir / "page_0.bin"));
  }
  CHECK(std::filesystem::exists(other));
  CHECK_FALSE(std::filesystem::exists(dir / "page_0.bin"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("REGIONFLOW_TMP picks the page directory") {
  const char* old = std::getenv("REGIONFLOW_TMP");
  std::string saved = old ? old : "";
  ::setenv("REGIONFLOW_TMP", "/tmp/regionflow-env-test", 1);
  CHECK(default_page_dir() == std::filesystem::path("/tmp/regionflow-env-test"));
  if (old)
    ::setenv("REGIONFLOW_TMP", saved.c_str(), 1);
  else
    ::unsetenv("REGIONFLOW_TMP");
  CHECK(default_page_dir() != std::filesystem::path("/tmp/regionflow-env-test"));
}
