#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regionflow/ard.hpp"
#include "regionflow/prd.hpp"

namespace regionflow {

// Arc of a region network from an interior vertex to a boundary vertex, tied
// to its slot in the shared inter-region capacity table.
struct CrossArc {
  ArcId arc;
  std::int32_t index;  // position in Partition::inter_region_pairs
  bool forward;        // arc runs along the pair's orientation

  bool operator==(const CrossArc&) const = default;
};

// Everything a region keeps between discharges.
struct RegionPage {
  RegionNetwork rn;
  std::vector<Label> labels;  // interior vertices, local ids
  PrdState prd;
  SearchForest forest;
  std::vector<CrossArc> crossing;

  bool operator==(const RegionPage&) const = default;
};

// Byte layout (little-endian): "RFPAGE01", u32 version, the page fields in
// declaration order (vectors as u64 length + elements, the network as its
// pair list plus excesses), then a u64 FNV-1a checksum of all prior bytes.
std::string save_page(const RegionPage& page);
// Throws kPageCorrupt on a bad magic, version, length or checksum.
RegionPage load_page(std::string_view bytes);

// One file per region under `dir`.
class Pager {
 public:
  explicit Pager(std::filesystem::path dir);
  ~Pager();
  Pager(const Pager&) = delete;
  Pager& operator=(const Pager&) = delete;

  void save(RegionId k, const RegionPage& page);
  RegionPage load(RegionId k);
  // Reads a page without counting the bytes (inspection only).
  RegionPage peek(RegionId k) const;

  std::uint64_t bytes_in() const { return bytes_in_; }
  std::uint64_t bytes_out() const { return bytes_out_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path file(RegionId k) const;

  std::filesystem::path dir_;
  bool owns_dir_ = false;
  std::vector<RegionId> written_;
  std::uint64_t bytes_in_ = 0, bytes_out_ = 0;
};

// REGIONFLOW_TMP if set, else a fresh directory under the system temp path.
std::filesystem::path default_page_dir();

}  // namespace regionflow
