#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

struct DimacsOptions {
  // Merge an arc line immediately followed by its reverse into one pair.
  bool pair_arcs = false;
};

// One resolved item of a DIMACS stream after terminal folding. Pair ids are
// assigned in order of appearance and match the ids of parse_dimacs.
struct DimacsItem {
  enum class Kind { kPair, kExcess, kDirect };
  Kind kind;
  PairRecord pair{};
  Vertex vertex = kNoVertex;
  Cap value = 0;
};

// Streaming reader shared by the parser and the splitter.
class DimacsStream {
 public:
  DimacsStream(std::istream& in, DimacsOptions options = {});

  // Reads up to the first arc line; afterwards the header fields are set.
  void read_header();
  Vertex vertex_count() const { return n_; }
  Vertex source() const { return s_; }
  Vertex sink() const { return t_; }

  // Next item, or false at end of input (after count validation).
  bool next(DimacsItem& item);

 private:
  bool read_line(std::vector<std::string>& tokens);
  void handle_node_line(const std::vector<std::string>& tokens);
  void emit_pending();
  [[noreturn]] void fail(const std::string& what) const;
  Vertex parse_id(const std::string& token) const;
  Cap parse_cap(const std::string& token) const;

  std::istream& in_;
  DimacsOptions options_;
  long long line_no_ = 0;
  Vertex n_ = 0;
  long long m_ = 0;
  long long arcs_seen_ = 0;
  Vertex s_ = kNoVertex, t_ = kNoVertex;
  bool header_done_ = false;
  bool finished_ = false;
  ArcId next_pair_ = 0;
  std::vector<std::string> held_;  // first arc line, read while scanning the header
  bool have_held_ = false;
  std::vector<DimacsItem> queued_;
  std::size_t queue_head_ = 0;
  // Arc held back in pair mode until we know whether its reverse follows.
  bool pending_ = false;
  Vertex pu_ = 0, pv_ = 0;
  Cap pc_ = 0, prc_ = 0;
};

Network parse_dimacs(std::istream& in, DimacsOptions options = {});
Network read_dimacs_file(const std::filesystem::path& path, DimacsOptions options = {});

// Canonical form: excess as source arcs, then pairs in id order (reverse line
// right after its forward line when the reverse capacity is positive), then
// direct capacity.
void write_dimacs(const Network& net, std::ostream& out);

// Partition sidecar: "p regions <K> <n>", then per region "r <k> <lo>-<hi> ...",
// 1-based inclusive id ranges.
void write_partition(const Partition& part, std::ostream& out);
Partition read_partition(std::istream& in, Vertex source, Vertex sink);

// Cut file: "f <flow>", "c <cost>", then one 1-based source-side id per line.
void write_cut(const CutResult& cut, std::ostream& out);

struct CutFile {
  Cap flow = 0;
  Cap cost = 0;
  std::vector<Vertex> source_side;  // 0-based
};
CutFile read_cut(std::istream& in);

// Cost of a cut recomputed from the DIMACS text without building the graph.
Cap stream_cut_cost(std::istream& dimacs, const CutFile& cut);

// Binary part files (little endian):
//   header  : "RFPART01" | u32 version | i32 region (-1: boundary file)
//             | u32 vertex count | u32 source | u32 sink
//   records : u8 tag, then
//             1 pair   : u32 u | u32 v | i64 cap | i64 reverse cap | u64 pair id
//             2 excess : u32 v | i64 excess
//             3 direct : i64 capacity
//   trailer : u8 0 | u64 record count
// Vertex ids are 0-based.
struct PartContents {
  RegionId region = kNoRegion;
  Vertex vertex_count = 0;
  Vertex source = kNoVertex, sink = kNoVertex;
  std::vector<PairRecord> pairs;
  std::vector<std::pair<Vertex, Cap>> excess;
  Cap direct = 0;
};

PartContents read_part(const std::filesystem::path& path);

std::filesystem::path part_path(const std::filesystem::path& dir, RegionId k);
std::filesystem::path boundary_path(const std::filesystem::path& dir);

struct SplitStats {
  std::vector<long long> region_pairs;
  long long boundary_pairs = 0;
  long long peak_buffered_pairs = 0;
};

// Single pass: pairs inside a region (or between a region and a terminal) go
// to that region's part file; crossing pairs are buffered and written to the
// boundary file at the end, together with the direct capacity.
// `in` must have read its header.
SplitStats split(DimacsStream& in, const Partition& part, const std::filesystem::path& dir);

}  // namespace regionflow
