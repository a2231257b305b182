#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irdp/bench.hpp"
#include "irdp/model.hpp"
#include "irdp/optimize.hpp"

namespace irdp {

// One benchmark instance: either a problem file or a generator invocation.
struct InstanceSpec {
  std::string name;
  std::string path;         // set for file-backed instances
  std::string family;       // set for generated instances
  std::string config_json;  // generator config
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::vector<InstanceSpec> instances;
  std::vector<OptKind> roster;
  std::map<OptKind, std::vector<OptimizerConfig>> grids;  // filled from default_grid when absent
  TerminationCriteria termination;
  int num_inits = 12;
  std::uint64_t master_seed = 0;
  int log_every = 1;
  int workers = 0;  // 0 = hardware concurrency
};

// The hyperparameter grids used when an experiment does not override them:
// eta in {1, 0.1, 0.01, 0.001} for PGD/OPTGD, the 27-point eta x beta1 x
// beta2 grid for AMS, nothing for the parameter-free RM family.
std::vector<OptimizerConfig> default_grid(OptKind kind);

ExperimentConfig parse_experiment(const std::string& json, const std::string& base_dir);

// Sweep output for one algorithm on one instance: the hyperparameter point
// that reached the gap tolerance earliest (ties broken by grid order;
// fallback to the smallest median final gap), with the lower median of the
// per-init results. Traces are kept for the selected configuration only.
struct AlgoSummary {
  OptKind kind{};
  OptimizerConfig selected;
  double median_value = 0.0;
  bool converged = false;         // median init reached the tolerance
  double median_seconds = -1.0;   // convergence wall time, when converged
  double median_final_gap = 0.0;
  std::vector<RunTrace> traces;   // one per init
};

struct SummaryRow {
  std::string instance;
  std::vector<AlgoSummary> algos;
};

struct SweepResult {
  std::vector<SummaryRow> rows;
};

SweepResult sweep(const ExperimentConfig& config);

struct AlgoAggregate {
  OptKind kind{};
  double pct_value_best = 0.0;
  double avg_value_rank = 0.0;
  double pct_converged = 0.0;
  double pct_convergence_best = 0.0;
  double avg_convergence_rank = 0.0;
};

// Per-instance value ranks share averaged positions for values tied within
// 1e-4 of the group leader; unconverged algorithms share the bottom
// convergence ranks.
std::vector<AlgoAggregate> aggregate(const std::vector<SummaryRow>& rows);

// Writes summary.csv (value/time/gap per algorithm), aggregate.csv, per-run
// JSONL traces and per-instance plot CSVs with min/median/max bands over the
// initializations. Timing columns aside, reruns of the same experiment
// produce byte-identical files.
void report(const SweepResult& result, const std::vector<OptKind>& roster, const std::string& out_dir);

// Exposed for tests: the lower median (index (n-1)/2 of the sorted values).
double lower_median(std::vector<double> values);

}  // namespace irdp
