#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "regionflow/ard.hpp"
#include "regionflow/pager.hpp"
#include "regionflow/prd.hpp"

namespace regionflow {

// Pairs of one region: both ends in the region, or one end a terminal.
struct RegionInput {
  std::vector<PairRecord> pairs;
  std::vector<std::pair<Vertex, Cap>> excess;
};

// Where the engine reads the problem from. Only the crossing pairs are ever
// held in memory at once; regions are fetched one by one.
class RegionSource {
 public:
  virtual ~RegionSource() = default;
  virtual Vertex vertex_count() const = 0;
  virtual Vertex source() const = 0;
  virtual Vertex sink() const = 0;
  // Direct s->t capacity plus flow already delivered.
  virtual Cap constant() const = 0;
  virtual std::vector<PairRecord> crossing_pairs() const = 0;
  virtual RegionInput region(RegionId k) const = 0;
  // The whole network, when it is in memory (enables snapshots).
  virtual const Network* network() const { return nullptr; }
};

class NetworkSource : public RegionSource {
 public:
  NetworkSource(const Network& net, const Partition& part);
  Vertex vertex_count() const override { return net_.vertex_count(); }
  Vertex source() const override { return net_.source(); }
  Vertex sink() const override { return net_.sink(); }
  Cap constant() const override { return constant_; }
  std::vector<PairRecord> crossing_pairs() const override;
  RegionInput region(RegionId k) const override;
  const Network* network() const override { return &net_; }

 private:
  PairRecord record(ArcId p) const;
  const Network& net_;
  const Partition& part_;
  std::vector<std::vector<ArcId>> region_pairs_;
  std::vector<ArcId> crossing_;
  Cap constant_ = 0;
};

// Output of split(): one part file per region plus the boundary file.
class PartDirSource : public RegionSource {
 public:
  PartDirSource(std::filesystem::path dir, RegionId regions);
  Vertex vertex_count() const override { return n_; }
  Vertex source() const override { return s_; }
  Vertex sink() const override { return t_; }
  Cap constant() const override { return direct_; }
  std::vector<PairRecord> crossing_pairs() const override { return crossing_; }
  RegionInput region(RegionId k) const override;

 private:
  std::filesystem::path dir_;
  Vertex n_ = 0, s_ = kNoVertex, t_ = kNoVertex;
  Cap direct_ = 0;
  std::vector<PairRecord> crossing_;
};

struct SweepRecord {
  int sweep = 0;
  bool extra = false;  // relabel-only sweep
  int active_regions = 0;
  int skipped_regions = 0;
  Cap flow_value = 0;
  long long label_sum = 0;
  long long label_increase = 0;
  std::uint64_t bytes_in = 0, bytes_out = 0;
  double ms = 0;
};

struct SweepStats {
  std::vector<SweepRecord> sweeps;
  int main_sweeps = 0;
  int extra_sweeps = 0;  // relabel-only sweeps that changed a label
  long long sweep_bound = 0;
  long long discharges = 0;
  std::uint64_t bytes_in = 0, bytes_out = 0;
  int peak_resident = 0;
  bool many_extra_sweeps = false;  // more than 4 extra sweeps
  DischargeStats work;             // summed discharge counters (paths dropped)

  // sweep,active_regions,flow_value,label_sum,bytes_in,bytes_out,ms
  void write_csv(std::ostream& out, bool header = true) const;
};

struct SolveConfig {
  Variant variant = Variant::kArd;
  bool parallel = false;
  int threads = 0;  // 0: hardware concurrency
  bool stream = false;
  std::filesystem::path page_dir;  // empty: default_page_dir()
  bool partial_discharge = true;   // ARD: stages up to the sweep index
  bool boundary_relabel = true;    // ARD, after every sweep
  bool global_gap = true;
  ArdBackend ard_backend = ArdBackend::kForest;
  PrdOptions prd{true, true, ArcRule::kCurrentArc};
  bool enforce_sweep_bound = true;
  int max_sweeps = 0;  // 0: unlimited (the sweep bound still applies)
};

class Engine;

struct SolveResult {
  CutResult cut;
  SweepStats stats;
  bool finished = true;  // false if max_sweeps stopped the run
};

// Global residual network and labeling, assembled from the pages.
struct Snapshot {
  Network residual;
  Labeling labels;
};

// Runs the sweep drivers over persistent region pages. In-memory, streaming
// and parallel runs share one code path; they differ only in where pages live
// and in how boundary flow is applied.
class Engine {
 public:
  Engine(const RegionSource& source, Partition part, SolveConfig config);
  ~Engine();

  SolveResult run();

  // Called after every sweep (main and extra).
  std::function<void(const Engine&, const SweepRecord&)> after_sweep;

  const Partition& partition() const;
  Label d_inf() const;
  Cap flow_value() const;
  bool has_active_region() const;
  // Requires a source with network(); pages are read without being changed.
  Snapshot snapshot() const;
  int resident_pages() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult run_sequential(const Network& net, const Partition& part, SolveConfig config = {});
SolveResult run_parallel(const Network& net, const Partition& part, SolveConfig config = {});

// The boundary structure of `part` recomputed from the crossing pairs.
Partition with_boundary(Partition part, const std::vector<PairRecord>& crossing);

}  // namespace regionflow
