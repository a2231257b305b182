#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irdp/model.hpp"

namespace irdp {

// Everything one evaluation of a strategy yields: reach probabilities,
// continuation values, root utility, per-infoset gradients and the CDT gap.
struct EvalReport {
  std::vector<double> reach;                 // per node
  std::vector<double> cont;                  // per node, expected utility from the node on
  double value = 0.0;                        // utility at the root
  std::vector<std::vector<double>> grad;     // per infoset, per action
  std::vector<double> per_infoset_gap;
  double gap = 0.0;                          // max over infosets
};

// Reusable evaluator. Construction fixes the traversal order; evaluate()
// reuses internal buffers, so a tight optimization loop does two O(|nodes|)
// passes and no allocation per iteration.
class Evaluator {
 public:
  explicit Evaluator(const DecisionProblem& problem);

  const EvalReport& evaluate(const Strategy& strategy);
  // Skips gradient/gap assembly; enough for utility-only queries.
  double utility(const Strategy& strategy);

  const EvalReport& report() const { return report_; }
  const DecisionProblem& problem() const { return *problem_; }

 private:
  void passes(const Strategy& strategy);

  const DecisionProblem* problem_;
  Topology topo_;
  EvalReport report_;
};

// One-shot wrappers.
std::vector<double> reach_probabilities(const DecisionProblem& problem, const Strategy& strategy);
double expected_utility(const DecisionProblem& problem, const Strategy& strategy);
std::vector<std::vector<double>> gradient(const DecisionProblem& problem, const Strategy& strategy);
EvalReport evaluate(const DecisionProblem& problem, const Strategy& strategy);

// First-order deviation utility of playing alpha once at the given infoset
// while the rest of the strategy stays fixed.
double cdt_deviation_utility(const DecisionProblem& problem, const Strategy& strategy,
                             InfosetId infoset, const std::vector<double>& alpha);

// (gap, per-infoset gaps). The maximizing deviation is a vertex, so the gap
// at an infoset is max_a grad[a] - <x, grad>.
std::pair<double, std::vector<double>> cdt_gap(const DecisionProblem& problem, const Strategy& strategy);

// Exhaustive evaluation of all pure strategies. A global optimum certificate
// only when the problem has no absentmindedness.
struct PureOracleResult {
  double value = 0.0;
  Strategy strategy;
};
PureOracleResult oracle_pure_enumeration(const DecisionProblem& problem,
                                         std::uint64_t max_profiles = 10'000'000);

// Best utility over the uniform lattice with the given per-dimension
// resolution. Requires sum_I (|A_I|-1) <= 4 free dimensions.
double oracle_grid_search(const DecisionProblem& problem, int resolution);

std::string eval_report_to_json(const EvalReport& report, bool include_gradients = false);

}  // namespace irdp
