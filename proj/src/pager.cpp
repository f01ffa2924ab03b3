#include "regionflow/pager.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace regionflow {

namespace {

constexpr char kMagic[8] = {'R', 'F', 'P', 'A', 'G', 'E', '0', '1'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
  }
  template <typename T>
  void put_vec(const std::vector<T>& v) {
    put<std::uint64_t>(v.size());
    for (const T& x : v) put(x);
  }
  std::string out;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    if (in_.size() - pos_ < sizeof(T)) throw Error(ErrorKind::kPageCorrupt, "page truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  template <typename T>
  std::vector<T> get_vec() {
    auto n = get<std::uint64_t>();
    if (n > (in_.size() - pos_) / sizeof(T)) throw Error(ErrorKind::kPageCorrupt, "page vector length out of range");
    std::vector<T> v(n);
    for (auto& x : v) x = get<T>();
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void put_network(Writer& w, const Network& net) {
  w.put<Vertex>(net.vertex_count());
  w.put<Vertex>(net.source());
  w.put<Vertex>(net.sink());
  w.put<std::uint64_t>(static_cast<std::uint64_t>(net.pair_count()));
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    w.put<Vertex>(net.tail(a));
    w.put<Vertex>(net.head(a));
    w.put<Cap>(net.cap(a));
    w.put<Cap>(net.cap(net.sister(a)));
  }
  for (Vertex v = 0; v < net.vertex_count(); ++v) w.put<Cap>(net.excess(v));
  w.put<Cap>(net.flow_value());
  w.put<Cap>(net.direct_capacity());
}

Network get_network(Reader& r) {
  auto n = r.get<Vertex>();
  auto s = r.get<Vertex>();
  auto t = r.get<Vertex>();
  if (n < 2 || s < 0 || t < 0 || s >= n || t >= n || s == t) throw Error(ErrorKind::kPageCorrupt, "bad network header");
  NetworkBuilder b(n, s, t);
  auto pairs = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < pairs; ++i) {
    auto u = r.get<Vertex>();
    auto v = r.get<Vertex>();
    auto c = r.get<Cap>();
    auto rc = r.get<Cap>();
    if (u < 0 || v < 0 || u >= n || v >= n || u == v || c < 0 || rc < 0)
      throw Error(ErrorKind::kPageCorrupt, "bad arc record");
    b.add_arc(u, v, c, rc);
  }
  Network net = b.build();
  for (Vertex v = 0; v < n; ++v) net.set_excess(v, r.get<Cap>());
  net.add_flow_value(r.get<Cap>());
  net.set_direct_capacity(r.get<Cap>());
  return net;
}

}  // namespace

std::string save_page(const RegionPage& page) {
  Writer w;
  w.out.append(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kVersion);
  const RegionNetwork& rn = page.rn;
  w.put<RegionId>(rn.region);
  w.put<Vertex>(rn.inner_count);
  w.put<Vertex>(rn.boundary_count);
  put_network(w, rn.net);
  w.put_vec(rn.global);
  w.put_vec(rn.global_pair);
  w.put_vec(page.labels);
  w.put_vec(page.prd.current);
  w.put_vec(page.forest.mark);
  w.put_vec(page.forest.parent);
  w.put<std::uint64_t>(page.crossing.size());
  for (const CrossArc& c : page.crossing) {
    w.put<ArcId>(c.arc);
    w.put<std::int32_t>(c.index);
    w.put<std::uint8_t>(c.forward ? 1 : 0);
  }
  w.put<std::uint64_t>(fnv1a(w.out));
  return std::move(w.out);
}

RegionPage load_page(std::string_view bytes) {
  if (bytes.size() < sizeof kMagic + 12 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::kPageCorrupt, "not a region page");
  std::string_view body = bytes.substr(0, bytes.size() - 8);
  std::uint64_t sum;
  std::memcpy(&sum, bytes.data() + body.size(), 8);
  if (sum != fnv1a(body)) throw Error(ErrorKind::kPageCorrupt, "page checksum mismatch");
  Reader r(body.substr(sizeof kMagic));
  if (r.get<std::uint32_t>() != kVersion) throw Error(ErrorKind::kPageCorrupt, "unsupported page version");
  RegionPage page;
  RegionNetwork& rn = page.rn;
  rn.region = r.get<RegionId>();
  rn.inner_count = r.get<Vertex>();
  rn.boundary_count = r.get<Vertex>();
  rn.net = get_network(r);
  rn.global = r.get_vec<Vertex>();
  rn.global_pair = r.get_vec<ArcId>();
  page.labels = r.get_vec<Label>();
  page.prd.current = r.get_vec<ArcId>();
  page.forest.mark = r.get_vec<Label>();
  page.forest.parent = r.get_vec<ArcId>();
  auto n = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < n; ++i) {
    CrossArc c;
    c.arc = r.get<ArcId>();
    c.index = r.get<std::int32_t>();
    c.forward = r.get<std::uint8_t>() != 0;
    page.crossing.push_back(c);
  }
  if (r.pos() != body.size() - sizeof kMagic) throw Error(ErrorKind::kPageCorrupt, "trailing bytes in page");
  if (rn.inner_count < 0 || rn.boundary_count < 0 ||
      rn.inner_count + rn.boundary_count + 2 != rn.net.vertex_count() ||
      static_cast<Vertex>(rn.global.size()) != rn.net.vertex_count() ||
      static_cast<ArcId>(rn.global_pair.size()) != rn.net.pair_count() ||
      static_cast<Vertex>(page.labels.size()) != rn.inner_count)
    throw Error(ErrorKind::kPageCorrupt, "inconsistent page sizes");
  return page;
}

std::filesystem::path default_page_dir() {
  if (const char* env = std::getenv("REGIONFLOW_TMP"); env && *env) return env;
  static std::atomic<int> counter{0};
  std::ostringstream name;
  name << "regionflow-" << ::getpid() << "-" << counter++;
  return std::filesystem::temp_directory_path() / name.str();
}

Pager::Pager(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::exists(dir_)) {
    if (!std::filesystem::create_directories(dir_, ec) || ec)
      throw Error(ErrorKind::kPageIo, "cannot create page directory " + dir_.string());
    owns_dir_ = true;
  }
}

Pager::~Pager() {
  std::error_code ec;
  for (RegionId k : written_) std::filesystem::remove(file(k), ec);
  if (owns_dir_) std::filesystem::remove(dir_, ec);
}

std::filesystem::path Pager::file(RegionId k) const { return dir_ / ("page_" + std::to_string(k) + ".bin"); }

void Pager::save(RegionId k, const RegionPage& page) {
  std::string bytes = save_page(page);
  std::ofstream out(file(k), std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kPageIo, "cannot write " + file(k).string());
  if (std::find(written_.begin(), written_.end(), k) == written_.end()) written_.push_back(k);
  bytes_out_ += bytes.size();
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kPageIo, "cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kPageIo, "read failure on " + path.string());
  return bytes;
}

}  // namespace

RegionPage Pager::load(RegionId k) {
  std::string bytes = read_file(file(k));
  bytes_in_ += bytes.size();
  return load_page(bytes);
}

RegionPage Pager::peek(RegionId k) const { return load_page(read_file(file(k))); }

}  // namespace regionflow
