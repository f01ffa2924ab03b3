#include "regionflow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "regionflow/dimacs.hpp"

namespace regionflow {

// ---- sources ----

namespace {

Cap terminal_pair_constant(const Network& net) {
  Cap c = 0;
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    if (net.tail(a) == net.source() && net.head(a) == net.sink()) c += net.cap(a);
    if (net.tail(a) == net.sink() && net.head(a) == net.source()) c += net.cap(net.sister(a));
  }
  return c;
}

}  // namespace

NetworkSource::NetworkSource(const Network& net, const Partition& part)
    : net_(net), part_(part), region_pairs_(static_cast<std::size_t>(part.region_count)) {
  if (net.vertex_count() != part.vertex_count())
    throw Error(ErrorKind::kShapeMismatch, "partition and network vertex counts differ");
  for (ArcId p = 0; p < net.pair_count(); ++p) {
    ArcId a = net.pair_arc(p);
    RegionId ru = part.region_of[net.tail(a)], rv = part.region_of[net.head(a)];
    if (ru == kNoRegion && rv == kNoRegion) continue;  // s-t pairs are handled as a constant
    if (ru == kNoRegion || rv == kNoRegion || ru == rv) region_pairs_[ru == kNoRegion ? rv : ru].push_back(p);
    else crossing_.push_back(p);
  }
  constant_ = net.flow_value() + net.direct_capacity() + terminal_pair_constant(net);
}

PairRecord NetworkSource::record(ArcId p) const {
  ArcId a = net_.pair_arc(p);
  return {net_.tail(a), net_.head(a), net_.cap(a), net_.cap(net_.sister(a)), p};
}

std::vector<PairRecord> NetworkSource::crossing_pairs() const {
  std::vector<PairRecord> out;
  for (ArcId p : crossing_) out.push_back(record(p));
  return out;
}

RegionInput NetworkSource::region(RegionId k) const {
  RegionInput in;
  for (ArcId p : region_pairs_[k]) in.pairs.push_back(record(p));
  for (Vertex v : part_.members[k])
    if (net_.excess(v) > 0) in.excess.emplace_back(v, net_.excess(v));
  return in;
}

PartDirSource::PartDirSource(std::filesystem::path dir, RegionId regions) : dir_(std::move(dir)) {
  PartContents b = read_part(boundary_path(dir_));
  n_ = b.vertex_count;
  s_ = b.source;
  t_ = b.sink;
  direct_ = b.direct;
  crossing_ = std::move(b.pairs);
  for (RegionId k = 0; k < regions; ++k)
    if (!std::filesystem::exists(part_path(dir_, k)))
      throw Error(ErrorKind::kIo, "missing part file " + part_path(dir_, k).string());
}

RegionInput PartDirSource::region(RegionId k) const {
  PartContents pc = read_part(part_path(dir_, k));
  if (pc.region != k || pc.vertex_count != n_) throw Error(ErrorKind::kIo, "part file does not match region");
  return {std::move(pc.pairs), std::move(pc.excess)};
}

Partition with_boundary(Partition part, const std::vector<PairRecord>& crossing) {
  std::vector<PairEnds> ends;
  ends.reserve(crossing.size());
  for (const PairRecord& p : crossing) ends.push_back({p.u, p.v, p.id});
  compute_boundary(part, ends);
  return part;
}

void SweepStats::write_csv(std::ostream& out, bool header) const {
  if (header) out << "sweep,active_regions,flow_value,label_sum,bytes_in,bytes_out,ms\n";
  for (const SweepRecord& r : sweeps)
    out << r.sweep << ',' << r.active_regions << ',' << r.flow_value << ',' << r.label_sum << ',' << r.bytes_in
        << ',' << r.bytes_out << ',' << r.ms << '\n';
}

// ---- engine ----

namespace {

struct Push {
  std::int32_t index;
  bool forward;
  Cap amount;
};

struct Outcome {
  RegionId region = kNoRegion;
  std::vector<Push> pushes;
  std::vector<std::pair<Vertex, Label>> boundary_labels;  // (boundary index, label)
  std::map<Label, long long> old_counts, new_counts;
  Cap flow_delta = 0;
  bool active = false;
  bool changed = false;  // relabel sweeps
  DischargeStats stats;
};

}  // namespace

struct Engine::Impl {
  const RegionSource& src;
  Partition part;
  SolveConfig cfg;
  Label dinf = 0;
  long long bound = 0;

  std::vector<PairRecord> crossing;  // aligned with part.inter_region_pairs
  std::vector<Cap> cap_fwd, cap_rev;
  std::vector<Label> blabel;  // per boundary_set index
  std::vector<Cap> pending;   // excess on its way to a boundary vertex
  Cap flow = 0;

  std::vector<std::optional<RegionPage>> pages;
  std::unique_ptr<Pager> pager;
  std::vector<std::map<Label, long long>> counts;  // interior labels as they logically are
  std::vector<std::map<Label, Label>> remap;       // page label -> logical label, if pending
  std::vector<char> active;
  LabelHistogram hist;
  std::atomic<int> resident{0};
  std::atomic<int> peak{0};
  SweepStats stats;
  Engine* owner = nullptr;

  Impl(const RegionSource& s, Partition p, SolveConfig c) : src(s), cfg(std::move(c)) {
    crossing = src.crossing_pairs();
    std::sort(crossing.begin(), crossing.end(), [](const PairRecord& a, const PairRecord& b) { return a.id < b.id; });
    part = with_boundary(std::move(p), crossing);
    if (part.inter_region_pairs.size() != crossing.size())
      throw Error(ErrorKind::kShapeMismatch, "crossing pairs do not match the partition");
    if (part.vertex_count() != src.vertex_count() || part.source != src.source() || part.sink != src.sink())
      throw Error(ErrorKind::kShapeMismatch, "partition does not match the problem");
    const Vertex n = src.vertex_count();
    const auto B = static_cast<long long>(part.boundary_size());
    if (cfg.variant == Variant::kArd) {
      dinf = static_cast<Label>(std::max<long long>(1, B));
      bound = 2 * B * B + 1;
    } else {
      dinf = n;
      bound = 2LL * n * n;
    }
    stats.sweep_bound = bound;
    if (cfg.stream && cfg.parallel)
      throw Error(ErrorKind::kPreconditionViolated, "streaming runs are sequential");
    cap_fwd.resize(crossing.size());
    cap_rev.resize(crossing.size());
    for (std::size_t i = 0; i < crossing.size(); ++i) {
      cap_fwd[i] = crossing[i].cap;
      cap_rev[i] = crossing[i].reverse_cap;
    }
    blabel.assign(static_cast<std::size_t>(part.boundary_size()), 0);
    pending.assign(blabel.size(), 0);
    flow = src.constant();
    if (cfg.stream) pager = std::make_unique<Pager>(cfg.page_dir.empty() ? default_page_dir() : cfg.page_dir);
    const auto K = static_cast<std::size_t>(part.region_count);
    pages.resize(K);
    counts.resize(K);
    remap.resize(K);
    active.assign(K, 0);
    for (RegionId k = 0; k < part.region_count; ++k) build_page(k);
    if (cfg.variant == Variant::kArd) {
      hist = LabelHistogram(dinf);
      hist.add(0, B);
    } else {
      hist = LabelHistogram(dinf);
      for (const auto& c : counts)
        for (auto [l, m] : c) hist.add(l, m);
    }
  }

  Metric metric() const { return metric_of(cfg.variant); }
  Vertex bindex(Vertex g) const { return part.boundary_index[g]; }

  void build_page(RegionId k) {
    RegionInput in = src.region(k);
    for (const PairRecord& p : crossing)
      if (part.region_of[p.u] == k || part.region_of[p.v] == k) in.pairs.push_back(p);
    RegionPage page;
    page.rn = assemble_region(part, k, std::move(in.pairs), in.excess, BoundaryMode::kZeroIncoming);
    Network& net = page.rn.net;
    const Vertex s = net.source();
    for (ArcId a = net.first_arc(s); a < net.end_arc(s); ++a)
      if (net.cap(a) > 0) net.push(a, net.cap(a));
    page.labels.assign(static_cast<std::size_t>(page.rn.inner_count), 0);
    page.prd = make_prd_state(page.rn);
    for (ArcId lp = 0; lp < net.pair_count(); ++lp) {
      ArcId gp = page.rn.global_pair[lp];
      auto it = std::lower_bound(part.inter_region_pairs.begin(), part.inter_region_pairs.end(), gp);
      if (it == part.inter_region_pairs.end() || *it != gp) continue;
      auto idx = static_cast<std::int32_t>(it - part.inter_region_pairs.begin());
      ArcId a = net.pair_arc(lp);
      if (page.rn.is_inner(net.tail(a))) page.crossing.push_back({a, idx, true});
      else page.crossing.push_back({net.sister(a), idx, false});
    }
    for (Vertex v = 0; v < page.rn.inner_count; ++v)
      if (net.excess(v) > 0) active[k] = 1;
    if (page.rn.inner_count > 0) counts[k][0] = page.rn.inner_count;
    ++resident;
    store(k, std::move(page));
  }

  RegionPage fetch(RegionId k) {
    RegionPage page = pager ? pager->load(k) : std::move(*pages[k]);
    if (!pager) pages[k].reset();
    int r = ++resident;
    for (int p = peak.load(); r > p && !peak.compare_exchange_weak(p, r);) {
    }
    return page;
  }

  void store(RegionId k, RegionPage page) {
    if (pager) pager->save(k, page);
    else pages[k] = std::move(page);
    --resident;
  }

  // Brings the page up to date with the shared state: pending label maps,
  // boundary capacities, arriving excess.
  void refresh(RegionPage& page, const std::map<Label, Label>& map, bool take_pending) {
    RegionNetwork& rn = page.rn;
    Network& net = rn.net;
    if (!map.empty()) {
      for (Vertex v = 0; v < rn.inner_count; ++v) {
        auto it = map.find(page.labels[v]);
        if (it != map.end() && it->second != page.labels[v]) {
          page.labels[v] = it->second;
          if (!page.prd.current.empty()) page.prd.current[v] = net.first_arc(v);
        }
      }
    }
    for (const CrossArc& c : page.crossing) {
      net.set_cap(c.arc, c.forward ? cap_fwd[c.index] : cap_rev[c.index]);
      net.set_cap(net.sister(c.arc), 0);
    }
    for (Vertex v = 0; v < rn.inner_count; ++v) {
      Vertex bi = bindex(rn.global[v]);
      if (bi < 0) continue;
      if (page.labels[v] != blabel[bi])
        throw Error(ErrorKind::kInternalInconsistency, "boundary label out of step with its region");
      if (take_pending && pending[bi] != 0) {
        net.set_excess(v, net.excess(v) + pending[bi]);
        pending[bi] = 0;
      }
    }
  }

  RegionPage load(RegionId k) {
    RegionPage page = fetch(k);
    refresh(page, remap[k], true);
    remap[k].clear();
    return page;
  }

  Labeling local_labels(const RegionPage& page) const {
    const RegionNetwork& rn = page.rn;
    Labeling lab;
    lab.metric = metric();
    lab.d_inf = dinf;
    lab.d.assign(static_cast<std::size_t>(rn.net.vertex_count()), 0);
    for (Vertex v = 0; v < rn.inner_count; ++v) lab[v] = page.labels[v];
    for (Vertex w = rn.inner_count; w < rn.inner_count + rn.boundary_count; ++w) lab[w] = blabel[bindex(rn.global[w])];
    lab[rn.net.source()] = dinf;
    lab[rn.net.sink()] = 0;
    return lab;
  }

  // Writes labels back into the page and fills the outcome's label fields.
  void finish(RegionId k, RegionPage& page, const Labeling& lab, Outcome& out) {
    const RegionNetwork& rn = page.rn;
    out.region = k;
    out.old_counts = counts[k];
    std::map<Label, long long> fresh;
    for (Vertex v = 0; v < rn.inner_count; ++v) {
      if (lab[v] != page.labels[v]) out.changed = true;
      page.labels[v] = lab[v];
      ++fresh[lab[v]];
      Vertex bi = bindex(rn.global[v]);
      if (bi >= 0) out.boundary_labels.emplace_back(bi, lab[v]);
    }
    counts[k] = fresh;
    out.new_counts = std::move(fresh);
  }

  Outcome discharge(RegionId k, int sweep) {
    RegionPage page = load(k);
    Labeling lab = local_labels(page);
    RegionNetwork& rn = page.rn;
    Outcome out;
    const Cap before = rn.net.flow_value();
    if (cfg.variant == Variant::kArd) {
      ArdOptions o;
      o.max_stage = cfg.partial_discharge ? sweep : kAllStages;
      o.backend = cfg.ard_backend;
      out.stats = ard_discharge(rn, lab, o, &page.forest);
    } else {
      out.stats = prd_discharge(rn, lab, page.prd, cfg.prd);
    }
    out.flow_delta = rn.net.flow_value() - before;
    for (const CrossArc& c : page.crossing) {
      Cap shared = c.forward ? cap_fwd[c.index] : cap_rev[c.index];
      Cap moved = shared - rn.net.cap(c.arc);
      if (moved > 0) out.pushes.push_back({c.index, c.forward, moved});
    }
    out.active = has_active(rn, lab);
    finish(k, page, lab, out);
    store(k, std::move(page));
    return out;
  }

  Outcome relabel_region(RegionId k) {
    RegionPage page = load(k);
    Labeling lab = local_labels(page);
    Labeling fresh = region_relabel(page.rn, lab, cfg.variant);
    for (Vertex v = 0; v < page.rn.inner_count; ++v) lab[v] = std::max(lab[v], fresh[v]);
    Outcome out;
    out.active = has_active(page.rn, lab);
    finish(k, page, lab, out);
    store(k, std::move(page));
    return out;
  }

  void set_blabel(Vertex bi, Label l) {
    if (blabel[bi] == l) return;
    if (cfg.variant == Variant::kArd) hist.move(blabel[bi], l);
    blabel[bi] = l;
  }

  void deliver(Vertex to, Cap amount) {
    Vertex bi = bindex(to);
    pending[bi] += amount;
    if (blabel[bi] < dinf) active[part.region_of[to]] = 1;
  }

  // alpha(u, v) = [d(u) <= d(v) + 1]; `keep` decides per push.
  void apply(Outcome& out, bool fuse) {
    flow += out.flow_delta;
    if (cfg.variant == Variant::kPrd) {
      for (auto [l, c] : out.old_counts) hist.remove(l, c);
      for (auto [l, c] : out.new_counts) hist.add(l, c);
    }
    if (!fuse) {
      for (auto [bi, l] : out.boundary_labels) set_blabel(bi, l);
    }
    active[out.region] = out.active ? 1 : 0;
    if (!fuse) {
      for (const Push& p : out.pushes) move_flow(p);
    }
  }

  void move_flow(const Push& p) {
    const PairRecord& r = crossing[p.index];
    if (p.forward) {
      cap_fwd[p.index] -= p.amount;
      cap_rev[p.index] += p.amount;
      deliver(r.v, p.amount);
    } else {
      cap_rev[p.index] -= p.amount;
      cap_fwd[p.index] += p.amount;
      deliver(r.u, p.amount);
    }
  }

  void fuse(std::vector<Outcome>& outs) {
    for (Outcome& o : outs) apply(o, true);
    for (Outcome& o : outs)
      for (auto [bi, l] : o.boundary_labels) set_blabel(bi, l);
    for (Outcome& o : outs) {
      for (const Push& p : o.pushes) {
        const PairRecord& r = crossing[p.index];
        Vertex from = p.forward ? r.u : r.v, to = p.forward ? r.v : r.u;
        Label df = blabel[bindex(from)], dt = blabel[bindex(to)];
        if (dt <= df + 1) move_flow(p);
        else deliver(from, p.amount);  // cancelled: the excess goes back
      }
    }
  }

  // Applies a monotone label map to every region's interior labels (lazily)
  // and to the boundary labels.
  template <typename F>
  void map_labels(F f) {
    for (std::size_t bi = 0; bi < blabel.size(); ++bi) set_blabel(static_cast<Vertex>(bi), f(blabel[bi], part.region_of[part.boundary_set[bi]]));
    for (RegionId k = 0; k < part.region_count; ++k) {
      std::map<Label, long long> next;
      for (auto [l, c] : counts[k]) {
        Label nl = f(l, k);
        next[nl] += c;
        if (nl != l && cfg.variant == Variant::kPrd) hist.move(l, nl, c);
      }
      if (remap[k].empty())
        for (auto [l, c] : counts[k]) remap[k][l] = l;
      for (auto& [from, to] : remap[k]) to = f(to, k);
      counts[k] = std::move(next);
    }
  }

  bool global_gap() {
    if (!cfg.global_gap) return false;
    auto g = hist.find_gap();
    if (!g) return false;
    const Label gap = *g;
    map_labels([&](Label l, RegionId) { return l > gap && l < dinf ? dinf : l; });
    return true;
  }

  void boundary_relabel_all() {
    std::vector<BoundaryArc> arcs;
    for (std::size_t i = 0; i < crossing.size(); ++i) {
      if (cap_fwd[i] > 0) arcs.push_back({crossing[i].u, crossing[i].v});
      if (cap_rev[i] > 0) arcs.push_back({crossing[i].v, crossing[i].u});
    }
    BoundaryRelabelResult r = boundary_relabel(part, blabel, arcs, dinf);
    map_labels([&](Label l, RegionId k) { return apply_group_distances(r.groups[k], l, dinf); });
    for (std::size_t bi = 0; bi < blabel.size(); ++bi)
      if (blabel[bi] != r.labels[bi]) throw Error(ErrorKind::kInternalInconsistency, "boundary relabel disagrees with its groups");
  }

  long long label_sum() const {
    long long s = 0;
    for (const auto& c : counts)
      for (auto [l, m] : c) s += static_cast<long long>(l) * m;
    return s;
  }

  bool any_active() const { return std::any_of(active.begin(), active.end(), [](char a) { return a != 0; }); }

  void add_work(const DischargeStats& d) {
    stats.work.pushes += d.pushes;
    stats.work.relabels += d.relabels;
    stats.work.gaps += d.gaps;
    stats.work.augmentations += d.augmentations;
    stats.work.stages += d.stages;
    stats.work.relocations += d.relocations;
  }

  std::vector<Outcome> run_parallel_sweep(const std::vector<RegionId>& todo, int sweep) {
    std::vector<Outcome> outs(todo.size());
    int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::max(1, std::min<int>(workers, static_cast<int>(todo.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
      try {
        for (std::size_t i = next++; i < todo.size(); i = next++) outs[i] = discharge(todo[i], sweep);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(work, w);
    work(0);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return outs;
  }

  SweepRecord begin_record(int sweep, bool extra) const {
    SweepRecord r;
    r.sweep = sweep;
    r.extra = extra;
    r.bytes_in = pager ? pager->bytes_in() : 0;
    r.bytes_out = pager ? pager->bytes_out() : 0;
    return r;
  }

  void end_record(SweepRecord& r, long long sum_before, std::chrono::steady_clock::time_point t0) {
    r.flow_value = flow;
    r.label_sum = label_sum();
    r.label_increase = r.label_sum - sum_before;
    if (pager) {
      r.bytes_in = pager->bytes_in() - r.bytes_in;
      r.bytes_out = pager->bytes_out() - r.bytes_out;
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    stats.sweeps.push_back(r);
    if (owner && owner->after_sweep) owner->after_sweep(*owner, r);
  }

  bool main_sweep(int sweep) {
    auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec = begin_record(sweep, false);
    long long sum_before = label_sum();
    if (!cfg.parallel) {
      for (RegionId k = 0; k < part.region_count; ++k) {
        if (!active[k]) {
          ++rec.skipped_regions;
          continue;
        }
        ++rec.active_regions;
        Outcome o = discharge(k, sweep);
        add_work(o.stats);
        apply(o, false);
        global_gap();
      }
    } else {
      std::vector<RegionId> todo;
      for (RegionId k = 0; k < part.region_count; ++k) {
        if (active[k]) todo.push_back(k);
        else ++rec.skipped_regions;
      }
      rec.active_regions = static_cast<int>(todo.size());
      std::vector<Outcome> outs = run_parallel_sweep(todo, sweep);
      for (auto& o : outs) add_work(o.stats);
      fuse(outs);
      global_gap();
    }
    stats.discharges += rec.active_regions;
    if (cfg.variant == Variant::kArd && cfg.boundary_relabel) {
      boundary_relabel_all();
      global_gap();
    }
    end_record(rec, sum_before, t0);
    return true;
  }

  bool relabel_sweep(int sweep) {
    auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec = begin_record(sweep, true);
    long long sum_before = label_sum();
    bool changed = false;
    for (RegionId k = 0; k < part.region_count; ++k) {
      Outcome o = relabel_region(k);
      changed = changed || o.changed;
      ++rec.active_regions;
      apply(o, false);
      changed = global_gap() || changed;
    }
    end_record(rec, sum_before, t0);
    return changed;
  }

  CutResult extract() {
    CutResult cut;
    const Vertex n = src.vertex_count();
    cut.source_side.assign(static_cast<std::size_t>(n), false);
    cut.source_side[src.source()] = true;
    for (RegionId k = 0; k < part.region_count; ++k) {
      RegionPage page = load(k);
      for (Vertex v = 0; v < page.rn.inner_count; ++v)
        cut.source_side[page.rn.global[v]] = page.labels[v] >= dinf;
      store(k, std::move(page));
    }
    cut.flow_value = flow;
    cut.cut_cost = source_cut_cost(cut.source_side);
    if (cut.cut_cost != cut.flow_value)
      throw Error(ErrorKind::kCostMismatch, "cut cost " + std::to_string(cut.cut_cost) + " differs from flow value " +
                                                std::to_string(cut.flow_value));
    return cut;
  }

  Cap source_cut_cost(const std::vector<bool>& side) const {
    Cap total = src.constant();
    auto pair_cost = [&](const PairRecord& p) {
      if (side[p.u] && !side[p.v]) total = checked_add(total, p.cap);
      if (side[p.v] && !side[p.u]) total = checked_add(total, p.reverse_cap);
    };
    for (const PairRecord& p : crossing) pair_cost(p);
    for (RegionId k = 0; k < part.region_count; ++k) {
      RegionInput in = src.region(k);
      for (const PairRecord& p : in.pairs) pair_cost(p);
      for (auto [v, e] : in.excess)
        if (!side[v]) total = checked_add(total, e);
    }
    return total;
  }

  SolveResult run() {
    SolveResult res;
    int sweep = 0;
    for (; any_active(); ++sweep) {
      if (cfg.max_sweeps > 0 && sweep >= cfg.max_sweeps) {
        res.finished = false;
        break;
      }
      if (cfg.enforce_sweep_bound && sweep + 1 > bound)
        throw Error(ErrorKind::kSweepBoundExceeded, "sweep " + std::to_string(sweep + 1) + " exceeds the bound " +
                                                         std::to_string(bound));
      main_sweep(sweep);
      ++stats.main_sweeps;
    }
    if (res.finished) {
      while (relabel_sweep(sweep++)) ++stats.extra_sweeps;
      stats.many_extra_sweeps = stats.extra_sweeps > 4;
      res.cut = extract();
    } else {
      res.cut.flow_value = flow;
    }
    if (pager) {
      stats.bytes_in = pager->bytes_in();
      stats.bytes_out = pager->bytes_out();
    }
    stats.peak_resident = peak.load();
    res.stats = stats;
    return res;
  }

  RegionPage peek(RegionId k) const {
    RegionPage page = pager ? pager->peek(k) : *pages[k];
    return page;
  }

  Snapshot snapshot() const {
    const Network* orig = src.network();
    if (!orig) throw Error(ErrorKind::kPreconditionViolated, "snapshot needs an in-memory network");
    Snapshot snap;
    Network& res = snap.residual;
    res = *orig;
    snap.labels.metric = metric();
    snap.labels.d_inf = dinf;
    snap.labels.d.assign(static_cast<std::size_t>(res.vertex_count()), 0);
    snap.labels[res.source()] = dinf;
    for (RegionId k = 0; k < part.region_count; ++k) {
      RegionPage page = peek(k);
      const RegionNetwork& rn = page.rn;
      const Network& net = rn.net;
      for (Vertex v = 0; v < rn.inner_count; ++v) {
        Label l = page.labels[v];
        if (!remap[k].empty()) {
          auto it = remap[k].find(l);
          if (it != remap[k].end()) l = it->second;
        }
        Vertex g = rn.global[v];
        snap.labels[g] = l;
        Cap e = net.excess(v);
        if (Vertex bi = bindex(g); bi >= 0) e += pending[bi];
        res.set_excess(g, e);
      }
      for (ArcId lp = 0; lp < net.pair_count(); ++lp) {
        ArcId a = net.pair_arc(lp), ga = res.pair_arc(rn.global_pair[lp]);
        res.set_cap(ga, net.cap(a));
        res.set_cap(res.sister(ga), net.cap(net.sister(a)));
      }
    }
    for (std::size_t i = 0; i < crossing.size(); ++i) {
      ArcId ga = res.pair_arc(crossing[i].id);
      res.set_cap(ga, cap_fwd[i]);
      res.set_cap(res.sister(ga), cap_rev[i]);
    }
    for (ArcId p = 0; p < res.pair_count(); ++p) {
      ArcId a = res.pair_arc(p);
      bool st = (res.tail(a) == res.source() && res.head(a) == res.sink()) ||
                (res.tail(a) == res.sink() && res.head(a) == res.source());
      if (st) {
        res.set_cap(a, 0);
        res.set_cap(res.sister(a), 0);
      }
    }
    res.set_direct_capacity(0);
    res.add_flow_value(flow - res.flow_value());
    return snap;
  }
};

Engine::Engine(const RegionSource& source, Partition part, SolveConfig config)
    : impl_(std::make_unique<Impl>(source, std::move(part), std::move(config))) {
  impl_->owner = this;
}

Engine::~Engine() = default;

SolveResult Engine::run() { return impl_->run(); }
const Partition& Engine::partition() const { return impl_->part; }
Label Engine::d_inf() const { return impl_->dinf; }
Cap Engine::flow_value() const { return impl_->flow; }
bool Engine::has_active_region() const { return impl_->any_active(); }
Snapshot Engine::snapshot() const { return impl_->snapshot(); }
int Engine::resident_pages() const { return impl_->resident.load(); }

SolveResult run_sequential(const Network& net, const Partition& part, SolveConfig config) {
  config.parallel = false;
  NetworkSource src(net, part);
  Engine engine(src, part, std::move(config));
  return engine.run();
}

SolveResult run_parallel(const Network& net, const Partition& part, SolveConfig config) {
  config.parallel = true;
  config.stream = false;
  NetworkSource src(net, part);
  Engine engine(src, part, std::move(config));
  return engine.run();
}

}  // namespace regionflow
