#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "regionflow/dimacs.hpp"
#include "regionflow/generators.hpp"
#include "regionflow/oracle.hpp"
#include "regionflow/reduction.hpp"
#include "regionflow/sweep.hpp"

using namespace regionflow;

namespace {

constexpr int kSolverError = 1;
constexpr int kUsageError = 2;

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::kUsage, what); }

bool on_off(const std::string& v) { return v == "on"; }

Network read_input(const std::string& path, const DimacsOptions& opts) {
  if (path.empty() || path == "-") return parse_dimacs(std::cin, opts);
  return read_dimacs_file(path, opts);
}

std::string slurp(const std::string& path) {
  std::ostringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

std::pair<int, int> parse_dims(const std::string& text) {
  int a = 0, b = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> a >> x >> b) || x != 'x' || a <= 0 || b <= 0 || in.peek() != EOF) usage("expected AxB, got '" + text + "'");
  return {a, b};
}

// Region specs: a sidecar file, "grid:WxH:SXxSY" for grid ids, or a region
// count K for contiguous id blocks.
Partition make_regions(const std::string& spec, Vertex n, Vertex s, Vertex t) {
  if (spec.rfind("grid:", 0) == 0) {
    auto colon = spec.find(':', 5);
    if (colon == std::string::npos) usage("grid spec is grid:WxH:SXxSY");
    auto [w, h] = parse_dims(spec.substr(5, colon - 5));
    auto [sx, sy] = parse_dims(spec.substr(colon + 1));
    if (static_cast<long long>(w) * h + 2 != n) usage("grid spec does not match the vertex count");
    return partition_grid({w, h}, {sx, sy}, s, t);
  }
  if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
    int k = std::stoi(spec);
    if (k < 1) usage("region count must be positive");
    return partition_by_id(n, s, t, k);
  }
  std::ifstream in(spec);
  if (!in) usage("no such partition file: " + spec);
  return read_partition(in, s, t);
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  body(out);
  if (!out) throw Error(ErrorKind::kIo, "write failure on " + path);
}

struct SolveArgs {
  std::string input = "-";
  std::string parts;
  std::string algo = "ard";
  std::string mode = "seq";
  int threads = 0;
  bool stream = false;
  std::string regions = "4";
  std::string partial = "on";
  std::string boundary_relabel = "on";
  std::string global_gap = "on";
  std::string backend = "forest";
  std::string prd_rule = "current";
  std::string prd_gap = "on";
  std::string prd_relabel = "on";
  std::string stats;
  std::string cut;
  bool pair_arcs = false;
  bool reduce = false;
  int max_sweeps = 0;
};

SolveConfig make_config(const SolveArgs& a) {
  SolveConfig c;
  c.variant = a.algo == "prd" ? Variant::kPrd : Variant::kArd;
  c.parallel = a.mode == "par";
  c.threads = a.threads;
  c.stream = a.stream;
  c.partial_discharge = on_off(a.partial);
  c.boundary_relabel = on_off(a.boundary_relabel);
  c.global_gap = on_off(a.global_gap);
  c.ard_backend = a.backend == "basic" ? ArdBackend::kBasic : ArdBackend::kForest;
  c.prd = PrdOptions{on_off(a.prd_relabel), on_off(a.prd_gap), a.prd_rule == "forward" ? ArcRule::kForward : ArcRule::kCurrentArc};
  c.max_sweeps = a.max_sweeps;
  if (c.parallel && c.stream) usage("--stream cannot be combined with --mode par");
  return c;
}

void report(const SolveResult& r, const Partition& part) {
  std::cout << "flow " << r.cut.flow_value << "\n"
            << "cost " << r.cut.cut_cost << "\n"
            << "sweeps " << r.stats.main_sweeps << "\n"
            << "extra_sweeps " << r.stats.extra_sweeps << "\n"
            << "regions " << part.region_count << "\n"
            << "boundary " << part.boundary_size() << "\n"
            << "discharges " << r.stats.discharges << "\n";
  if (r.stats.bytes_in || r.stats.bytes_out)
    std::cout << "bytes_in " << r.stats.bytes_in << "\nbytes_out " << r.stats.bytes_out << "\n";
  if (r.stats.many_extra_sweeps) std::cerr << "warning: more than 4 relabel-only sweeps\n";
  if (!r.finished) std::cout << "unfinished (sweep limit)\n";
}

int cmd_solve(const SolveArgs& a) {
  SolveConfig cfg = make_config(a);
  SolveResult r;
  Partition part;
  if (!a.parts.empty()) {
    if (a.reduce) usage("--reduce needs a DIMACS input");
    PartDirSource src(a.parts, 0);
    std::ifstream in(std::filesystem::path(a.parts) / "partition.txt");
    if (!in) usage("no partition.txt in " + a.parts);
    part = read_partition(in, src.source(), src.sink());
    PartDirSource checked(a.parts, part.region_count);
    Engine engine(checked, part, cfg);
    r = engine.run();
    part = engine.partition();
  } else {
    Network net = read_input(a.input, DimacsOptions{a.pair_arcs});
    part = make_regions(a.regions, net.vertex_count(), net.source(), net.sink());
    compute_boundary(part, net);
    std::optional<ReducedProblem> red;
    if (a.reduce) {
      red = reduce_network(init(net, Metric::kPushRelabel, net.vertex_count()).network, part);
      Vertex decided = 0, members = 0;
      for (const RegionDecided& d : red->regions) decided += d.decided, members += d.members;
      std::cerr << "reduce: decided " << decided << " of " << members << " vertices\n";
    }
    const Network& problem = red ? red->network : net;
    NetworkSource src(problem, part);
    Engine engine(src, part, cfg);
    r = engine.run();
    if (red) r.cut = resolve_cut(r.cut, red->cls, net);
  }
  if (r.finished && r.cut.cut_cost != r.cut.flow_value)
    throw Error(ErrorKind::kCostMismatch, "cut cost differs from flow value");
  report(r, part);
  if (!a.stats.empty()) write_to(a.stats, [&](std::ostream& out) { r.stats.write_csv(out); });
  if (!a.cut.empty()) write_to(a.cut, [&](std::ostream& out) { write_cut(r.cut, out); });
  return 0;
}

int cmd_split(const std::string& input, const std::string& regions, const std::string& out, bool pair_arcs) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) throw Error(ErrorKind::kIo, "cannot open " + input);
    in = &file;
  }
  DimacsStream stream(*in, DimacsOptions{pair_arcs});
  stream.read_header();
  Partition part = make_regions(regions, stream.vertex_count(), stream.source(), stream.sink());
  std::filesystem::create_directories(out);
  SplitStats st = split(stream, part, out);
  write_to((std::filesystem::path(out) / "partition.txt").string(), [&](std::ostream& o) { write_partition(part, o); });
  for (std::size_t k = 0; k < st.region_pairs.size(); ++k)
    std::cout << "region " << k << " pairs " << st.region_pairs[k] << "\n";
  std::cout << "boundary pairs " << st.boundary_pairs << "\n"
            << "peak buffered " << st.peak_buffered_pairs << "\n";
  return 0;
}

int cmd_reduce(const std::string& input, const std::string& regions, bool pair_arcs, bool verify) {
  Network net = read_input(input, DimacsOptions{pair_arcs});
  Partition part = make_regions(regions, net.vertex_count(), net.source(), net.sink());
  compute_boundary(part, net);
  Network folded = init(net, Metric::kPushRelabel, net.vertex_count()).network;
  ReducedProblem red = reduce_network(folded, part);
  std::cout << "region,members,decided,percent,strong_source,strong_sink,weak_source,weak_sink\n";
  Vertex members = 0, decided = 0;
  for (const RegionDecided& d : red.regions) {
    std::cout << d.region << ',' << d.members << ',' << d.decided << ',' << 100.0 * d.fraction() << ','
              << d.strong_source << ',' << d.strong_sink << ',' << d.weak_source << ',' << d.weak_sink << "\n";
    members += d.members;
    decided += d.decided;
  }
  std::cout << "total," << members << ',' << decided << ','
            << (members ? 100.0 * decided / members : 0.0) << ",,,,\n";
  if (verify) {
    if (auto err = verify_classification(folded, red.cls)) {
      std::cerr << "classification failed: " << err->message << "\n";
      return kSolverError;
    }
    std::cerr << "classification verified\n";
  }
  return 0;
}

int cmd_verify(const std::string& input, const std::string& cut_path, bool pair_arcs) {
  std::string text = slurp(input);
  std::istringstream in(text);
  Network net = parse_dimacs(in, DimacsOptions{pair_arcs});
  Cap flow = oracle::maxflow(net).flow_value;
  std::cout << "flow " << flow << "\n";
  if (cut_path.empty()) return 0;
  std::ifstream cf(cut_path);
  if (!cf) throw Error(ErrorKind::kIo, "cannot open " + cut_path);
  CutFile cut = read_cut(cf);
  std::istringstream again(text);
  Cap cost = stream_cut_cost(again, cut);
  std::cout << "cut cost " << cost << "\n";
  if (cost != cut.cost || cost != flow || cut.flow != flow) {
    std::cerr << "cut does not certify the maximum flow (flow " << cut.flow << ", stated cost " << cut.cost
              << ", recomputed " << cost << ", oracle " << flow << ")\n";
    return kSolverError;
  }
  std::cout << "ok\n";
  return 0;
}

struct BenchArgs {
  std::string param = "strength";
  std::vector<long long> values;
  int seeds = 3;
  int size = 100;
  int connectivity = 8;
  Cap strength = 150;
  int slices = 2;
  std::vector<std::string> algos{"ard", "prd"};
  std::string mode = "seq";
  int threads = 0;
};

int cmd_bench(BenchArgs a) {
  if (a.values.empty()) {
    if (a.param == "strength") a.values = {10, 50, 150, 500, 1000, 5000};
    else if (a.param == "connectivity") a.values = {4, 8, 12, 16, 20, 24, 28};
    else if (a.param == "size") a.values = {50, 100, 200, 400};
    else a.values = {1, 2, 3, 4, 6, 8};
  }
  std::cout << "param,value,seed,algo,width,height,connectivity,strength,regions,flow,sweeps,extra_sweeps,"
               "discharges,ms\n";
  for (long long value : a.values) {
    for (int seed = 0; seed < a.seeds; ++seed) {
      GridSpec g{a.size, a.size, a.connectivity, a.strength, static_cast<std::uint64_t>(seed)};
      int slices = a.slices;
      if (a.param == "strength") g.strength = value;
      else if (a.param == "connectivity") g.connectivity = static_cast<int>(value), g.strength = 150 * 8 / value;
      else if (a.param == "size") g.width = g.height = static_cast<int>(value);
      else slices = static_cast<int>(value);
      Network net = gen_grid(g);
      Partition part = grid_partition(g, std::min(slices, g.width), std::min(slices, g.height));
      compute_boundary(part, net);
      for (const std::string& algo : a.algos) {
        SolveConfig cfg;
        cfg.variant = algo == "prd" ? Variant::kPrd : Variant::kArd;
        cfg.parallel = a.mode == "par";
        cfg.threads = a.threads;
        auto t0 = std::chrono::steady_clock::now();
        SolveResult r = cfg.parallel ? run_parallel(net, part, cfg) : run_sequential(net, part, cfg);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::cout << a.param << ',' << value << ',' << seed << ',' << algo << ',' << g.width << ',' << g.height << ','
                  << g.connectivity << ',' << g.strength << ',' << part.region_count << ',' << r.cut.flow_value << ','
                  << r.stats.main_sweeps << ',' << r.stats.extra_sweeps << ',' << r.stats.discharges << ',' << ms
                  << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-based maximum flow and minimum cut"};
  app.require_subcommand(1);
  auto on_off_check = CLI::IsMember({"on", "off"});

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a DIMACS max-flow problem by region sweeps");
  solve->add_option("input", sa.input, "DIMACS file, - for stdin");
  solve->add_option("--parts", sa.parts, "Directory written by split (read region by region)");
  solve->add_option("--algo", sa.algo)->check(CLI::IsMember({"ard", "prd"}));
  solve->add_option("--mode", sa.mode)->check(CLI::IsMember({"seq", "par"}));
  solve->add_option("--threads", sa.threads, "Workers for --mode par (0: all cores)")->check(CLI::NonNegativeNumber);
  solve->add_flag("--stream", sa.stream, "Keep region pages on disk (REGIONFLOW_TMP)");
  solve->add_option("--regions", sa.regions, "Partition file, grid:WxH:SXxSY, or a region count");
  solve->add_option("--partial-discharge", sa.partial)->check(on_off_check);
  solve->add_option("--boundary-relabel", sa.boundary_relabel)->check(on_off_check);
  solve->add_option("--global-gap", sa.global_gap)->check(on_off_check);
  solve->add_option("--ard-backend", sa.backend)->check(CLI::IsMember({"forest", "basic"}));
  solve->add_option("--prd-rule", sa.prd_rule)->check(CLI::IsMember({"current", "forward"}));
  solve->add_option("--prd-gap", sa.prd_gap)->check(on_off_check);
  solve->add_option("--prd-region-relabel", sa.prd_relabel)->check(on_off_check);
  solve->add_option("--max-sweeps", sa.max_sweeps)->check(CLI::NonNegativeNumber);
  solve->add_option("--stats", sa.stats, "Per-sweep CSV");
  solve->add_option("--cut", sa.cut, "Write the cut file");
  solve->add_flag("--pair-arcs", sa.pair_arcs, "Merge consecutive reverse arc lines");
  solve->add_flag("--reduce", sa.reduce, "Run region reduction first");

  std::string split_in = "-", split_regions = "4", split_out;
  bool split_pair = false;
  auto* split_cmd = app.add_subcommand("split", "Split a DIMACS file into region part files");
  split_cmd->add_option("input", split_in);
  split_cmd->add_option("--regions", split_regions);
  split_cmd->add_option("--out", split_out)->required();
  split_cmd->add_flag("--pair-arcs", split_pair);

  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  GridSpec grid{0, 0, 4, 150, 0};
  std::string slices = "2x2", gen_out = "-", sidecar;
  auto* gen_grid_cmd = gen->add_subcommand("grid", "Random 2D grid");
  gen_grid_cmd->add_option("width", grid.width)->required()->check(CLI::PositiveNumber);
  gen_grid_cmd->add_option("height", grid.height)->required()->check(CLI::PositiveNumber);
  gen_grid_cmd->add_option("--conn", grid.connectivity)->check(CLI::IsMember({4, 8, 12, 16, 20, 24, 28}));
  gen_grid_cmd->add_option("--strength", grid.strength)->check(CLI::NonNegativeNumber);
  gen_grid_cmd->add_option("--seed", grid.seed);
  gen_grid_cmd->add_option("--slices", slices, "SXxSY blocks for the sidecar");
  gen_grid_cmd->add_option("--out", gen_out);
  gen_grid_cmd->add_option("--sidecar", sidecar, "Write the partition here");
  int adv_k = 1;
  auto* gen_adv = gen->add_subcommand("adversarial", "Chain family separating ARD from PRD");
  gen_adv->add_option("k", adv_k)->required()->check(CLI::PositiveNumber);
  gen_adv->add_option("--out", gen_out);
  gen_adv->add_option("--sidecar", sidecar);

  std::string red_in = "-", red_regions = "4";
  bool red_pair = false, red_verify = false;
  auto* reduce = app.add_subcommand("reduce", "Per-region reduction: share of decided vertices");
  reduce->add_option("input", red_in);
  reduce->add_option("--regions", red_regions);
  reduce->add_flag("--pair-arcs", red_pair);
  reduce->add_flag("--verify", red_verify, "Check every flag against the reference solver");

  std::string ver_in = "-", ver_cut;
  bool ver_pair = false;
  auto* verify = app.add_subcommand("verify", "Reference max flow, optionally checking a cut file");
  verify->add_option("input", ver_in);
  verify->add_option("--cut", ver_cut);
  verify->add_flag("--pair-arcs", ver_pair);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Parameter sweeps on random grids (CSV)");
  bench->add_option("--param", ba.param)->check(CLI::IsMember({"strength", "connectivity", "size", "regions"}));
  bench->add_option("--values", ba.values)->delimiter(',');
  bench->add_option("--seeds", ba.seeds)->check(CLI::PositiveNumber);
  bench->add_option("--size", ba.size)->check(CLI::PositiveNumber);
  bench->add_option("--conn", ba.connectivity);
  bench->add_option("--strength", ba.strength);
  bench->add_option("--slices", ba.slices)->check(CLI::PositiveNumber);
  bench->add_option("--algo", ba.algos)->delimiter(',')->check(CLI::IsMember({"ard", "prd"}));
  bench->add_option("--mode", ba.mode)->check(CLI::IsMember({"seq", "par"}));
  bench->add_option("--threads", ba.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*split_cmd) return cmd_split(split_in, split_regions, split_out, split_pair);
    if (*gen_grid_cmd) {
      Network net = gen_grid(grid);
      auto [sx, sy] = parse_dims(slices);
      Partition part = grid_partition(grid, std::min(sx, grid.width), std::min(sy, grid.height));
      write_to(gen_out, [&](std::ostream& o) { write_dimacs(net, o); });
      if (!sidecar.empty()) write_to(sidecar, [&](std::ostream& o) { write_partition(part, o); });
      return 0;
    }
    if (*gen_adv) {
      AdversarialInstance inst = gen_adversarial(adv_k);
      write_to(gen_out, [&](std::ostream& o) { write_dimacs(inst.net, o); });
      if (!sidecar.empty()) write_to(sidecar, [&](std::ostream& o) { write_partition(inst.part, o); });
      return 0;
    }
    if (*reduce) return cmd_reduce(red_in, red_regions, red_pair, red_verify);
    if (*verify) return cmd_verify(ver_in, ver_cut, ver_pair);
    if (*bench) return cmd_bench(ba);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? kUsageError : kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kUsageError;
}
