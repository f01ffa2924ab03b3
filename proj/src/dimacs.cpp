#include "regionflow/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace regionflow {

DimacsStream::DimacsStream(std::istream& in, DimacsOptions options) : in_(in), options_(options) {}

void DimacsStream::fail(const std::string& what) const {
  throw Error(ErrorKind::kMalformedLine, "line " + std::to_string(line_no_) + ": " + what);
}

bool DimacsStream::read_line(std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    tokens.clear();
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (tokens.empty() || tokens[0] == "c") continue;
    return true;
  }
  return false;
}

Vertex DimacsStream::parse_id(const std::string& token) const {
  long long v = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size()) fail("bad vertex id '" + token + "'");
  if (v < 1 || v > n_) fail("vertex id " + token + " out of range");
  return static_cast<Vertex>(v - 1);
}

Cap DimacsStream::parse_cap(const std::string& token) const {
  Cap c = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), c);
  if (ec != std::errc() || end != token.data() + token.size()) fail("bad capacity '" + token + "'");
  if (c < 0) fail("negative capacity " + token);
  return c;
}

void DimacsStream::read_header() {
  bool have_problem = false;
  std::vector<std::string> tok;
  while (read_line(tok)) {
    const std::string& kind = tok[0];
    if (kind == "p") {
      if (have_problem) fail("second problem line");
      if (tok.size() != 4 || tok[1] != "max") fail("expected 'p max <n> <m>'");
      long long n = 0, m = 0;
      auto r1 = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), n);
      auto r2 = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), m);
      if (r1.ec != std::errc() || r2.ec != std::errc() || n < 2 || m < 0 ||
          n > std::numeric_limits<Vertex>::max() - 2)
        fail("bad problem sizes");
      n_ = static_cast<Vertex>(n);
      m_ = m;
      have_problem = true;
    } else if (!have_problem) {
      fail("line before the problem line");
    } else if (kind == "a") {
      held_ = tok;
      have_held_ = true;
      break;
    } else {
      handle_node_line(tok);
    }
  }
  if (!have_problem) fail("missing problem line");
  if (s_ == kNoVertex || t_ == kNoVertex) fail("missing source or sink declaration");
  if (s_ == t_) throw Error(ErrorKind::kDuplicateTerminal, "source and sink are the same vertex");
  header_done_ = true;
  for (DimacsItem& item : queued_) {
    if (item.vertex == s_ || item.vertex == t_) fail("excess on a terminal");
  }
}

void DimacsStream::handle_node_line(const std::vector<std::string>& tok) {
  if (tok[0] != "n") fail("unknown line type '" + tok[0] + "'");
  if (tok.size() == 3 && (tok[2] == "s" || tok[2] == "t")) {
    Vertex v = parse_id(tok[1]);
    Vertex& slot = tok[2] == "s" ? s_ : t_;
    if (slot != kNoVertex)
      throw Error(ErrorKind::kDuplicateTerminal, "line " + std::to_string(line_no_) + ": second '" + tok[2] + "'");
    if (header_done_) fail("terminal declared after arcs");
    slot = v;
    return;
  }
  if (tok.size() == 4 && tok[2] == "e") {
    DimacsItem item{DimacsItem::Kind::kExcess};
    item.vertex = parse_id(tok[1]);
    item.value = parse_cap(tok[3]);
    if (header_done_ && (item.vertex == s_ || item.vertex == t_)) fail("excess on a terminal");
    queued_.push_back(item);
    return;
  }
  fail("expected 'n <id> s|t' or 'n <id> e <value>'");
}

void DimacsStream::emit_pending() {
  if (!pending_) return;
  pending_ = false;
  DimacsItem item{DimacsItem::Kind::kPair};
  item.pair = {pu_, pv_, pc_, prc_, next_pair_++};
  queued_.push_back(item);
}

bool DimacsStream::next(DimacsItem& item) {
  if (!header_done_) read_header();
  std::vector<std::string> tok;
  while (queue_head_ == queued_.size()) {
    queued_.clear();
    queue_head_ = 0;
    if (finished_) return false;
    bool got = false;
    if (have_held_) {
      tok = held_;
      have_held_ = false;
      got = true;
    } else {
      got = read_line(tok);
    }
    if (!got) {
      if (pending_) emit_pending();
      finished_ = true;
      if (arcs_seen_ != m_)
        throw Error(ErrorKind::kCountMismatch,
                    "problem line declares " + std::to_string(m_) + " arcs, found " + std::to_string(arcs_seen_));
      continue;
    }
    if (tok[0] != "a") {
      if (tok[0] == "p") fail("second problem line");
      emit_pending();
      handle_node_line(tok);
      continue;
    }
    if (tok.size() != 4) fail("expected 'a <u> <v> <cap>'");
    Vertex u = parse_id(tok[1]), v = parse_id(tok[2]);
    Cap c = parse_cap(tok[3]);
    ++arcs_seen_;
    if (options_.pair_arcs && pending_ && u == pv_ && v == pu_) {
      prc_ = c;
      emit_pending();
      continue;
    }
    emit_pending();
    if (u == v) continue;
    if (u == s_ && v == t_) {
      DimacsItem d{DimacsItem::Kind::kDirect};
      d.value = c;
      queued_.push_back(d);
    } else if (u == s_) {
      DimacsItem e{DimacsItem::Kind::kExcess};
      e.vertex = v;
      e.value = c;
      queued_.push_back(e);
    } else {
      pending_ = true;
      pu_ = u;
      pv_ = v;
      pc_ = c;
      prc_ = 0;
      if (!options_.pair_arcs) emit_pending();
    }
  }
  item = queued_[queue_head_++];
  return true;
}

Network parse_dimacs(std::istream& in, DimacsOptions options) {
  DimacsStream stream(in, options);
  stream.read_header();
  NetworkBuilder b(stream.vertex_count(), stream.source(), stream.sink());
  DimacsItem item;
  while (stream.next(item)) {
    switch (item.kind) {
      case DimacsItem::Kind::kPair:
        b.add_arc(item.pair.u, item.pair.v, item.pair.cap, item.pair.reverse_cap);
        break;
      case DimacsItem::Kind::kExcess:
        b.add_excess(item.vertex, item.value);
        break;
      case DimacsItem::Kind::kDirect:
        b.add_direct_capacity(item.value);
        break;
    }
  }
  return b.build();
}

Network read_dimacs_file(const std::filesystem::path& path, DimacsOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return parse_dimacs(in, options);
}

void write_dimacs(const Network& net, std::ostream& out) {
  const Vertex s = net.source(), t = net.sink();
  long long m = 0;
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!net.is_terminal(v) && net.excess(v) > 0) ++m;
  for (ArcId p = 0; p < net.pair_count(); ++p) m += net.cap(net.sister(net.pair_arc(p))) > 0 ? 2 : 1;
  if (net.direct_capacity() > 0) ++m;
  out << "p max " << net.vertex_count() << ' ' << m << '\n';
  out << "n " << s + 1 << " s\n";
  out << "n " << t + 1 << " t\n";
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (!net.is_terminal(v) && net.excess(v) > 0) out << "a " << s + 1 << ' ' << v + 1 << ' ' << net.excess(v) << '\n';
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    Vertex u = net.tail(a) + 1, v = net.head(a) + 1;
    out << "a " << u << ' ' << v << ' ' << net.cap(a) << '\n';
    Cap rc = net.cap(net.sister(a));
    if (rc > 0) out << "a " << v << ' ' << u << ' ' << rc << '\n';
  }
  if (net.direct_capacity() > 0) out << "a " << s + 1 << ' ' << t + 1 << ' ' << net.direct_capacity() << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed");
}

void write_partition(const Partition& part, std::ostream& out) {
  out << "p regions " << part.region_count << ' ' << part.vertex_count() << '\n';
  for (RegionId k = 0; k < part.region_count; ++k) {
    out << "r " << k;
    const auto& mem = part.members[k];
    for (std::size_t i = 0; i < mem.size();) {
      std::size_t j = i;
      while (j + 1 < mem.size() && mem[j + 1] == mem[j] + 1) ++j;
      out << ' ' << mem[i] + 1 << '-' << mem[j] + 1;
      i = j + 1;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed");
}

Partition read_partition(std::istream& in, Vertex source, Vertex sink) {
  std::string line;
  long long line_no = 0;
  auto bad = [&](const std::string& what) {
    return Error(ErrorKind::kMalformedLine, "partition line " + std::to_string(line_no) + ": " + what);
  };
  RegionId regions = -1;
  std::vector<RegionId> region_of;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind == "c") continue;
    if (kind == "p") {
      std::string word;
      long long k = 0, n = 0;
      if (!(ls >> word >> k >> n) || word != "regions" || k < 1 || n < 2) throw bad("expected 'p regions <K> <n>'");
      regions = static_cast<RegionId>(k);
      region_of.assign(static_cast<std::size_t>(n), kNoRegion);
    } else if (kind == "r") {
      if (regions < 0) throw bad("region before problem line");
      long long k = -1;
      if (!(ls >> k) || k < 0 || k >= regions) throw bad("bad region id");
      std::string range;
      while (ls >> range) {
        long long lo = 0, hi = 0;
        char dash = 0;
        std::istringstream rs(range);
        if (!(rs >> lo >> dash >> hi) || dash != '-' || lo < 1 || hi < lo ||
            hi > static_cast<long long>(region_of.size()))
          throw bad("bad range '" + range + "'");
        for (long long v = lo - 1; v < hi; ++v) {
          if (region_of[v] != kNoRegion) throw bad("vertex " + std::to_string(v + 1) + " assigned twice");
          region_of[v] = static_cast<RegionId>(k);
        }
      }
    } else {
      throw bad("unknown line type '" + kind + "'");
    }
  }
  if (regions < 0) throw Error(ErrorKind::kMalformedLine, "partition: missing problem line");
  if (source >= static_cast<Vertex>(region_of.size()) || sink >= static_cast<Vertex>(region_of.size()))
    throw Error(ErrorKind::kShapeMismatch, "partition smaller than the network");
  return make_partition(std::move(region_of), regions, source, sink);
}

void write_cut(const CutResult& cut, std::ostream& out) {
  out << "f " << cut.flow_value << '\n' << "c " << cut.cut_cost << '\n';
  for (std::size_t v = 0; v < cut.source_side.size(); ++v)
    if (cut.source_side[v]) out << v + 1 << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed");
}

CutFile read_cut(std::istream& in) {
  CutFile cut;
  std::string tag;
  if (!(in >> tag >> cut.flow) || tag != "f") throw Error(ErrorKind::kMalformedLine, "cut file: expected 'f <flow>'");
  if (!(in >> tag >> cut.cost) || tag != "c") throw Error(ErrorKind::kMalformedLine, "cut file: expected 'c <cost>'");
  long long v = 0;
  while (in >> v) {
    if (v < 1) throw Error(ErrorKind::kMalformedLine, "cut file: bad vertex id");
    cut.source_side.push_back(static_cast<Vertex>(v - 1));
  }
  if (!in.eof()) throw Error(ErrorKind::kMalformedLine, "cut file: trailing garbage");
  std::sort(cut.source_side.begin(), cut.source_side.end());
  return cut;
}

Cap stream_cut_cost(std::istream& dimacs, const CutFile& cut) {
  DimacsStream stream(dimacs);
  stream.read_header();
  auto in_cut = [&](Vertex v) {
    if (v == stream.source()) return true;
    if (v == stream.sink()) return false;
    return std::binary_search(cut.source_side.begin(), cut.source_side.end(), v);
  };
  Cap cost = 0;
  DimacsItem item;
  while (stream.next(item)) {
    switch (item.kind) {
      case DimacsItem::Kind::kPair:
        if (in_cut(item.pair.u) && !in_cut(item.pair.v)) cost = checked_add(cost, item.pair.cap);
        if (in_cut(item.pair.v) && !in_cut(item.pair.u)) cost = checked_add(cost, item.pair.reverse_cap);
        break;
      case DimacsItem::Kind::kExcess:
        if (!in_cut(item.vertex)) cost = checked_add(cost, item.value);
        break;
      case DimacsItem::Kind::kDirect:
        cost = checked_add(cost, item.value);
        break;
    }
  }
  return cost;
}

namespace {

constexpr char kPartMagic[8] = {'R', 'F', 'P', 'A', 'R', 'T', '0', '1'};
constexpr std::uint32_t kPartVersion = 1;

class PartWriter {
 public:
  PartWriter(const std::filesystem::path& path, RegionId region, Vertex n, Vertex s, Vertex t)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw Error(ErrorKind::kIo, "cannot create " + path.string());
    out_.write(kPartMagic, sizeof kPartMagic);
    put(kPartVersion, 4);
    put(static_cast<std::uint32_t>(region), 4);
    put(static_cast<std::uint32_t>(n), 4);
    put(static_cast<std::uint32_t>(s), 4);
    put(static_cast<std::uint32_t>(t), 4);
  }

  void pair(const PairRecord& p) {
    tag(1);
    put(static_cast<std::uint32_t>(p.u), 4);
    put(static_cast<std::uint32_t>(p.v), 4);
    put(static_cast<std::uint64_t>(p.cap), 8);
    put(static_cast<std::uint64_t>(p.reverse_cap), 8);
    put(static_cast<std::uint64_t>(p.id), 8);
  }
  void excess(Vertex v, Cap e) {
    tag(2);
    put(static_cast<std::uint32_t>(v), 4);
    put(static_cast<std::uint64_t>(e), 8);
  }
  void direct(Cap c) {
    tag(3);
    put(static_cast<std::uint64_t>(c), 8);
  }
  void close() {
    out_.put(0);
    put(records_, 8);
    out_.close();
    if (!out_) throw Error(ErrorKind::kIo, "write failed: " + path_.string());
  }

 private:
  void tag(char t) {
    out_.put(t);
    ++records_;
  }
  void put(std::uint64_t value, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out_.write(buf, bytes);
  }

  std::ofstream out_;
  std::filesystem::path path_;
  std::uint64_t records_ = 0;
};

class PartReader {
 public:
  explicit PartReader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  std::uint64_t get(int bytes) {
    unsigned char buf[8];
    if (!in_.read(reinterpret_cast<char*>(buf), bytes)) throw Error(ErrorKind::kIo, "truncated " + path_.string());
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }
  std::istream& stream() { return in_; }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

PartContents read_part(const std::filesystem::path& path) {
  PartReader r(path);
  char magic[8];
  if (!r.stream().read(magic, 8) || !std::equal(magic, magic + 8, kPartMagic))
    throw Error(ErrorKind::kIo, "not a part file: " + path.string());
  if (r.get(4) != kPartVersion) throw Error(ErrorKind::kIo, "unsupported part version: " + path.string());
  PartContents pc;
  pc.region = static_cast<RegionId>(static_cast<std::int32_t>(r.get(4)));
  pc.vertex_count = static_cast<Vertex>(r.get(4));
  pc.source = static_cast<Vertex>(r.get(4));
  pc.sink = static_cast<Vertex>(r.get(4));
  std::uint64_t records = 0;
  for (;;) {
    int tag = static_cast<int>(r.get(1));
    if (tag == 0) break;
    ++records;
    if (tag == 1) {
      PairRecord p;
      p.u = static_cast<Vertex>(r.get(4));
      p.v = static_cast<Vertex>(r.get(4));
      p.cap = static_cast<Cap>(r.get(8));
      p.reverse_cap = static_cast<Cap>(r.get(8));
      p.id = static_cast<ArcId>(r.get(8));
      pc.pairs.push_back(p);
    } else if (tag == 2) {
      Vertex v = static_cast<Vertex>(r.get(4));
      pc.excess.emplace_back(v, static_cast<Cap>(r.get(8)));
    } else if (tag == 3) {
      pc.direct = checked_add(pc.direct, static_cast<Cap>(r.get(8)));
    } else {
      throw Error(ErrorKind::kIo, "bad record tag in " + path.string());
    }
  }
  if (r.get(8) != records) throw Error(ErrorKind::kIo, "record count mismatch in " + path.string());
  return pc;
}

std::filesystem::path part_path(const std::filesystem::path& dir, RegionId k) {
  return dir / ("region_" + std::to_string(k) + ".part");
}

std::filesystem::path boundary_path(const std::filesystem::path& dir) { return dir / "boundary.part"; }

SplitStats split(DimacsStream& in, const Partition& part, const std::filesystem::path& dir) {
  if (part.vertex_count() != in.vertex_count() || part.source != in.source() || part.sink != in.sink())
    throw Error(ErrorKind::kShapeMismatch, "partition does not match the DIMACS header");
  std::filesystem::create_directories(dir);
  const Vertex n = in.vertex_count(), s = in.source(), t = in.sink();
  std::vector<PartWriter> writers;
  writers.reserve(static_cast<std::size_t>(part.region_count));
  for (RegionId k = 0; k < part.region_count; ++k) writers.emplace_back(part_path(dir, k), k, n, s, t);
  SplitStats stats;
  stats.region_pairs.assign(static_cast<std::size_t>(part.region_count), 0);
  std::vector<PairRecord> crossing;
  Cap direct = 0;
  DimacsItem item;
  while (in.next(item)) {
    switch (item.kind) {
      case DimacsItem::Kind::kPair: {
        RegionId ru = part.region_of[item.pair.u], rv = part.region_of[item.pair.v];
        RegionId home = ru == kNoRegion ? rv : ru;
        if (home != kNoRegion && (ru == rv || ru == kNoRegion || rv == kNoRegion)) {
          writers[home].pair(item.pair);
          ++stats.region_pairs[home];
        } else {
          crossing.push_back(item.pair);
          stats.peak_buffered_pairs = std::max<long long>(stats.peak_buffered_pairs, crossing.size());
        }
        break;
      }
      case DimacsItem::Kind::kExcess:
        writers[part.region_of[item.vertex]].excess(item.vertex, item.value);
        break;
      case DimacsItem::Kind::kDirect:
        direct = checked_add(direct, item.value);
        break;
    }
  }
  for (auto& w : writers) w.close();
  PartWriter bw(boundary_path(dir), kNoRegion, n, s, t);
  for (const PairRecord& p : crossing) bw.pair(p);
  if (direct > 0) bw.direct(direct);
  bw.close();
  stats.boundary_pairs = static_cast<long long>(crossing.size());
  return stats;
}

}  // namespace regionflow
