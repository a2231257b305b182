#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irdp/eval.hpp"
#include "irdp/model.hpp"

namespace irdp {

enum class OptKind { Pgd, OptGd, Ams, Rm, RmPlus, PredRm, PredRmPlus };

inline constexpr OptKind kAllOptKinds[] = {OptKind::Pgd,  OptKind::OptGd,  OptKind::Ams, OptKind::Rm,
                                           OptKind::RmPlus, OptKind::PredRm, OptKind::PredRmPlus};

bool is_predictive(OptKind kind);
bool is_rm_family(OptKind kind);
bool is_gd_family(OptKind kind);
std::string to_string(OptKind kind);
OptKind parse_opt_kind(const std::string& name);

struct OptimizerConfig {
  OptKind kind = OptKind::RmPlus;
  std::optional<double> eta;     // PGD / OPTGD / AMS
  std::optional<double> beta1;   // AMS
  std::optional<double> beta2;   // AMS
  double div_epsilon = 1e-8;     // AMS divisor guard (the second moment starts at zero)
  bool ams_sqrt_divisor = true;  // divide the step by sqrt(v-hat) rather than v-hat
};

// Throws InvalidInput on inconsistent combinations; the RM family is
// parameter-free and rejects step-size settings.
void validate_config(const OptimizerConfig& config);
std::string config_label(const OptimizerConfig& config);

struct TerminationCriteria {
  double gap_tolerance = 1e-6;
  int max_iterations = 6000;
  double time_limit_secs = std::numeric_limits<double>::infinity();
};

enum class StopReason { GapReached, MaxIterations, TimeLimit };
std::string to_string(StopReason reason);

struct IterationRecord {
  int iteration = 0;
  double value = 0.0;
  double gap = 0.0;
  double seconds = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Strategy final_strategy;
  StopReason reason = StopReason::MaxIterations;
  int iterations = 0;
  double final_value = 0.0;
  double final_gap = 0.0;
  double total_seconds = 0.0;
  int convergence_iteration = -1;       // first iteration at or below tolerance
  double convergence_seconds = -1.0;
};

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex_euclidean(std::vector<double> v);

// argmin over the simplex of sum_i w_i (y_i - v_i)^2, weights strictly
// positive. Constant weights reduce to the Euclidean case.
std::vector<double> project_simplex_weighted(std::vector<double> v, std::span<const double> w);

// Per-infoset local optimizer: GetX proposes the next simplex point from a
// prediction, Step consumes the observed gradient.
class LocalOptimizer {
 public:
  LocalOptimizer(const OptimizerConfig& config, std::vector<double> x0);

  const std::vector<double>& get_x(std::span<const double> prediction);
  void step(std::span<const double> gradient);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& regrets() const { return regrets_; }      // RM family
  const std::vector<double>& moment1() const { return m_; }            // AMS
  const std::vector<double>& moment2_max() const { return vhat_; }     // AMS

 private:
  OptimizerConfig config_;
  std::vector<double> x_;        // last iterate handed out
  std::vector<double> anchor_;   // PGD / OPTGD
  std::vector<double> regrets_;  // RM family
  std::vector<double> m_, v_, vhat_;  // AMS moments
  std::vector<double> scratch_;
};

using IterationObserver = std::function<void(int iteration, const Strategy& x, const EvalReport& report)>;

// First-order optimization over the product of simplices: one local
// optimizer per infoset, one exact gradient evaluation per iteration, value
// and gap recorded every log_every iterations (plus the final one).
RunTrace solve(const DecisionProblem& problem, const OptimizerConfig& config,
               const TerminationCriteria& termination, Strategy initial, int log_every = 1,
               const IterationObserver& observer = {});

// Same, with the initial strategy drawn uniformly per infoset from the seed.
RunTrace solve_seeded(const DecisionProblem& problem, const OptimizerConfig& config,
                      const TerminationCriteria& termination, std::uint64_t init_seed,
                      int log_every = 1);

// Independent draw per infoset, uniform on its simplex (normalized
// exponentials); deterministic per seed.
Strategy uniform_random_strategy(const DecisionProblem& problem, std::uint64_t seed);

// One JSON object per logged iteration plus a final summary record.
std::string trace_to_jsonl(const RunTrace& trace);

}  // namespace irdp
