#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irdp/model.hpp"
#include "irdp/rng.hpp"

namespace irdp {

// ---- Simulation problems -------------------------------------------------
//
// An agent is tested in indistinguishable simulated rounds before deployment.
// A chance root either starts one of k simulation scenarios (total mass q,
// split equally) or deploys directly (mass 1-q). Acting bad in simulation
// ends the episode with caught_payoff; acting good continues to another
// simulation round (again mass q, scenario chosen uniformly) or to
// deployment, with the whole continue-mass redirected to deployment once the
// simulation budget n is spent. In deployment the agent acts up to m times,
// accruing good_payoff/bad_payoff of the active scenario per action; after
// each action chance stops with probability 1-q_dep. All decision nodes of a
// scenario share one infoset, in simulation and deployment alike.
struct SimulationConfig {
  int scenarios = 1;                 // k
  int max_sim_rounds = 2;            // n
  double sim_continue_prob = 0.8;    // q
  int deploy_rounds = 1;             // m
  double deploy_continue_prob = 0.5; // q_dep
  std::vector<double> good_payoffs;  // per scenario
  std::vector<double> bad_payoffs;   // per scenario
  double caught_payoff = 0.0;
  std::uint64_t seed = 0;            // unused: the structure is deterministic
  std::size_t max_nodes = 5'000'000;
};

DecisionProblem gen_simulation(const SimulationConfig& config);

// ---- Subgroup detection under privacy constraints ------------------------

struct GraphSpec {
  enum class Kind { Grid, Gnp, Gnm };
  Kind kind = Kind::Grid;
  int width = 0, height = 0;  // Grid
  int n = 0;                  // Gnp / Gnm vertex count
  double p = 0.0;             // Gnp edge probability
  long edges = 0;             // Gnm edge count
};

struct SubgroupSpec {
  enum class Shape { Line, Cycle, Clique, Star };
  Shape shape = Shape::Line;
  int size = 1;
  double weight = 1.0;  // payoff per distinct member found
};

struct DetectionConfig {
  GraphSpec graph;
  std::vector<SubgroupSpec> subgroups;
  int rounds = 1;  // R
  std::uint64_t seed = 0;
  std::size_t max_nodes = 5'000'000;
  int placement_retries = 10'000;
};

// The agent probes vertices for R rounds. Hitting an undiscovered subgroup
// member is observed forever; misses and repeats leave the knowledge state
// unchanged and are forgotten, so infosets are keyed by the ordered sequence
// of discoveries alone (which makes R >= 2 instances absentminded).
DecisionProblem gen_detection(const DetectionConfig& config);

struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  bool has_edge(int a, int b) const;
};

Graph build_graph(const GraphSpec& spec, Rng& rng);

// ---- Random decision problems --------------------------------------------

struct RandomConfig {
  int max_depth = 8;
  double terminal_prob_base = 0.1;         // P(terminal at depth d) = min(1, base + slope*d)
  double terminal_prob_depth_slope = 0.1;
  std::vector<std::pair<int, double>> action_count_weights = {{3, 1.0}, {4, 1.0}, {5, 1.0}};
  double chance_prob = 0.2;
  double infoset_exponent = 2.0 / 3.0;
  double payoff_min = 0.0, payoff_max = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_nodes = 5'000'000;
};

// Grows the tree top-down, then partitions decision nodes into infosets:
// bucketed by action count, shuffled, and chopped into groups of size
// round(#decisions^exponent / #buckets), clamped to >= 1.
DecisionProblem gen_random(const RandomConfig& config);

// ---- Instance statistics ---------------------------------------------------

struct InstanceStats {
  std::size_t total = 0;
  std::size_t decision = 0, chance = 0, terminal = 0;
  std::size_t infosets = 0;
  std::size_t max_infoset_size = 0;
  int depth = 0;  // edges on the longest root-to-leaf path
  RecallClass recall = RecallClass::PerfectRecall;
  std::string size_suffix;  // "245", "1.8k", "23m"
};

InstanceStats instance_stats(const DecisionProblem& problem);
std::string size_suffix(std::size_t node_count);
std::string stats_to_json(const InstanceStats& stats);

// Generator dispatch used by the CLI and the experiment harness. The family
// is "simulation", "detection" or "random"; config is the JSON form of the
// matching struct above.
DecisionProblem generate_instance(const std::string& family, const std::string& config_json,
                                  std::uint64_t seed);

SimulationConfig parse_simulation_config(const std::string& json);
DetectionConfig parse_detection_config(const std::string& json);
RandomConfig parse_random_config(const std::string& json);

}  // namespace irdp
