// Acceptance suite: end-to-end checks of the solver stack at pinned
// tolerances. Each criterion prints one PASS/FAIL line; the exit code is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "irdp/bench.hpp"
#include "irdp/encode.hpp"
#include "irdp/eval.hpp"
#include "irdp/harness.hpp"
#include "irdp/model.hpp"
#include "irdp/optimize.hpp"
#include "irdp/rng.hpp"

using namespace irdp;

namespace {

struct Failure {
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_secs;
  std::function<void(std::vector<std::string>&)> body;  // appends failure details
};

// ---- shared helpers --------------------------------------------------------

Strategy binary_strategy(double p) {
  Strategy x;
  x.probs.push_back({p, 1.0 - p});
  return x;
}

OptimizerConfig config_for(OptKind kind, double eta = 0.1) {
  OptimizerConfig c;
  c.kind = kind;
  if (!is_rm_family(kind)) c.eta = eta;
  if (kind == OptKind::Ams) {
    c.beta1 = 0.9;
    c.beta2 = 0.999;
  }
  return c;
}

RandomConfig tiny_random_config(std::uint64_t seed) {
  RandomConfig cfg;
  cfg.max_depth = 4;  // with <= 3 actions the tree caps at 121 nodes
  cfg.terminal_prob_base = 0.08;
  cfg.terminal_prob_depth_slope = 0.15;
  cfg.action_count_weights = {{2, 1.0}, {3, 1.0}};
  cfg.seed = seed;
  return cfg;
}

// multilinear extension evaluated without simplex checks, for finite
// differences in the ambient coordinates
double raw_value(const DecisionProblem& p, const Topology& topo, const Strategy& s) {
  std::vector<double> cont(p.num_nodes(), 0.0);
  for (std::size_t i = topo.preorder.size(); i-- > 0;) {
    const NodeId id = topo.preorder[i];
    const Node& node = p.nodes[static_cast<std::size_t>(id)];
    double v = 0.0;
    if (node.kind == NodeKind::Terminal) {
      v = node.payoff;
    } else if (node.kind == NodeKind::Chance) {
      for (std::size_t k = 0; k < node.children.size(); ++k)
        v += node.probs[k] * cont[static_cast<std::size_t>(node.children[k])];
    } else {
      const auto& probs = s.probs[static_cast<std::size_t>(node.infoset)];
      for (std::size_t a = 0; a < node.children.size(); ++a)
        v += probs[a] * cont[static_cast<std::size_t>(node.children[a])];
    }
    cont[static_cast<std::size_t>(id)] = v;
  }
  return cont[static_cast<std::size_t>(p.root)];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

// ---- criterion bodies --------------------------------------------------------

void gradient_oracle_equivalence(std::vector<std::string>& failures) {
  const double h = 1e-5;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DecisionProblem p = gen_random(tiny_random_config(seed));
    if (p.num_nodes() > 200) {
      failures.push_back("seed " + std::to_string(seed) + " exceeds 200 nodes");
      continue;
    }
    const Topology topo = topology(p);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Strategy x = uniform_random_strategy(p, seed * 31 + s);
      const auto grad = gradient(p, x);
      for (std::size_t i = 0; i < grad.size(); ++i)
        for (std::size_t a = 0; a < grad[i].size(); ++a) {
          Strategy hi = x, lo = x;
          hi.probs[i][a] += h;
          lo.probs[i][a] -= h;
          const double fd = (raw_value(p, topo, hi) - raw_value(p, topo, lo)) / (2.0 * h);
          if (std::fabs(grad[i][a] - fd) > 1e-5 * (1.0 + std::fabs(grad[i][a]))) {
            failures.push_back("seed " + std::to_string(seed) + " infoset " + std::to_string(i) +
                               " action " + std::to_string(a) + ": grad " + fmt(grad[i][a]) +
                               " vs fd " + fmt(fd));
            return;
          }
        }
    }
  }
}

void absentminded_chain_optimum(std::vector<std::string>& failures) {
  ProblemBuilder b;
  const InfosetId is = b.add_infoset({"c", "e"});
  const NodeId n0 = b.add_decision(is);
  const NodeId n1 = b.add_decision(is);
  const NodeId n2 = b.add_decision(is);
  b.link_decision(n0, 0, n1);
  b.link_decision(n0, 1, b.add_terminal(0.0));
  b.link_decision(n1, 0, n2);
  b.link_decision(n1, 1, b.add_terminal(0.0));
  b.link_decision(n2, 0, b.add_terminal(1.0));
  b.link_decision(n2, 1, b.add_terminal(10.0));
  b.set_root(n0);
  const DecisionProblem chain = b.finish();
  const double optimum = 4000.0 / 2187.0;

  // Per the 12-init protocol: every optimizer must reach the gap tolerance on
  // at least 11 of 12 initializations, and the reported (median) value must
  // be the stationary optimum. The regret-matching family can overshoot to
  // the zero vertex from starts above 20/27 (a gap-0 point), so the value
  // check is on the median, not on every single init.
  for (OptKind kind : kAllOptKinds) {
    const double eta = kind == OptKind::OptGd ? 0.05 : 0.1;
    int converged = 0;
    std::vector<double> finals;
    for (std::uint64_t init = 0; init < 12; ++init) {
      const RunTrace trace = solve(chain, config_for(kind, eta), TerminationCriteria{},
                                   uniform_random_strategy(chain, init));
      if (trace.reason == StopReason::GapReached) ++converged;
      finals.push_back(trace.final_value);
    }
    if (converged < 11)
      failures.push_back(to_string(kind) + ": only " + std::to_string(converged) +
                         "/12 inits reached the gap tolerance");
    const double median = lower_median(finals);
    if (std::fabs(median - optimum) > 1e-4)
      failures.push_back(to_string(kind) + ": median value " + fmt(median) + " vs optimum " +
                         fmt(optimum));
  }
}

void encoder_soundness(std::vector<std::string>& failures) {
  // 2 x^2 y - 3 x y z over the unit cube
  SparsePolynomial poly;
  poly.blocks.push_back({"x", {"hi", "lo"}});
  poly.blocks.push_back({"y", {"hi", "lo"}});
  poly.blocks.push_back({"z", {"hi", "lo"}});
  poly.monomials.push_back({2.0, {{0, 0, 2}, {1, 0, 1}}});
  poly.monomials.push_back({-3.0, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}});
  poly.canonicalize();

  const DecisionProblem compiled = poly_to_problem(poly);
  std::multiset<double> nonzero;
  for (const Node& node : compiled.nodes)
    if (node.kind == NodeKind::Terminal && node.payoff != 0.0) nonzero.insert(node.payoff);
  if (nonzero != std::multiset<double>{-6.0, 4.0})
    failures.push_back("compiled cube polynomial payoffs are not exactly {4, -6}");

  Rng rng(2024);
  auto check_poly = [&](const SparsePolynomial& q, const std::string& label) {
    const DecisionProblem problem = poly_to_problem(q);
    // blocks with no occurrence get no infoset; the compiled infosets follow
    // the occurring blocks in declaration order
    std::vector<char> occurs(q.blocks.size(), 0);
    for (const Monomial& m : q.monomials)
      for (const PowerTerm& t : m.powers) occurs[static_cast<std::size_t>(t.block)] = 1;
    for (int pt = 0; pt < 100; ++pt) {
      std::vector<std::vector<double>> block_probs;
      Strategy x;
      for (std::size_t b = 0; b < q.blocks.size(); ++b) {
        const double c = rng.next_double();
        block_probs.push_back({c, 1.0 - c});
        if (occurs[b]) x.probs.push_back({c, 1.0 - c});
      }
      const double direct = q.evaluate(block_probs);
      const double via_tree = expected_utility(problem, x);
      if (std::fabs(via_tree - direct) > 1e-12 * (1.0 + std::fabs(direct))) {
        failures.push_back(label + ": tree value " + fmt(via_tree) + " vs polynomial " + fmt(direct));
        return;
      }
    }
  };
  check_poly(poly, "cube polynomial");

  for (int trial = 0; trial < 20; ++trial) {
    SparsePolynomial q;
    const int vars = 1 + static_cast<int>(rng.next_below(5));
    for (int v = 0; v < vars; ++v) q.blocks.push_back({"v" + std::to_string(v), {"hi", "lo"}});
    const int monomials = 1 + static_cast<int>(rng.next_below(5));
    for (int m = 0; m < monomials; ++m) {
      Monomial mono;
      mono.coef = rng.next_in(-3.0, 3.0);
      if (mono.coef == 0.0) mono.coef = 0.5;
      int degree_left = 4;
      for (int v = 0; v < vars && degree_left > 0; ++v) {
        const int e = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(degree_left + 1)));
        if (e > 0) {
          mono.powers.push_back({v, static_cast<std::int32_t>(rng.next_below(2)), e});
          degree_left -= e;
        }
      }
      q.monomials.push_back(std::move(mono));
    }
    q.canonicalize();
    if (q.monomials.empty()) q.monomials.push_back({1.0, {}});
    check_poly(q, "random polynomial " + std::to_string(trial));
  }
}

void overshoot_dichotomy(std::vector<std::string>& failures) {
  const DecisionProblem trap = adversarial_instance({AdversarialKind::RmTrap});

  for (OptKind kind : {OptKind::Rm, OptKind::RmPlus}) {
    for (int i = 0; i < 20; ++i) {
      const double p0 = (i + 0.5) / 20.0;  // grid over (0,1), skips [0.499, 0.501]
      const RunTrace trace = solve(trap, config_for(kind), TerminationCriteria{}, binary_strategy(p0));
      if (std::fabs(trace.final_value) > 1e-9) {
        failures.push_back(to_string(kind) + " from " + fmt(p0) + " ended at value " +
                           fmt(trace.final_value) + ", expected 0");
        return;
      }
    }
  }

  for (int i = 0; i < 20; ++i) {
    const double p0 = 0.3 + 0.4 * (i + 0.5) / 20.0;
    const RunTrace trace =
        solve(trap, config_for(OptKind::Pgd, 0.01), TerminationCriteria{}, binary_strategy(p0));
    if (std::fabs(trace.final_value - 1.0) > 1e-3) {
      failures.push_back("PGD from " + fmt(p0) + " ended at value " + fmt(trace.final_value) +
                         ", expected 1");
      return;
    }
  }
}

void basin_trap(std::vector<std::string>& failures) {
  AdversarialSpec spec;
  spec.kind = AdversarialKind::BasinTrap;
  spec.epsilon = 0.1;
  spec.k = 4;
  const DecisionProblem trap = adversarial_instance(spec);

  for (OptKind kind : kAllOptKinds) {
    const RunTrace low = solve(trap, config_for(kind), TerminationCriteria{}, binary_strategy(0.2));
    if (std::fabs(low.final_value - 0.1) > 1e-6)
      failures.push_back(to_string(kind) + " from 0.2 ended at " + fmt(low.final_value) +
                         ", expected 0.1");
    const RunTrace high = solve(trap, config_for(kind), TerminationCriteria{}, binary_strategy(0.9));
    if (std::fabs(high.final_value - 8.1) > 1e-4)
      failures.push_back(to_string(kind) + " from 0.9 ended at " + fmt(high.final_value) +
                         ", expected 8.1");
  }
}

void pure_oracle_consistency(std::vector<std::string>& failures) {
  std::vector<DecisionProblem> instances;
  for (std::uint64_t seed = 0; instances.size() < 20 && seed < 4000; ++seed) {
    RandomConfig cfg;
    cfg.max_depth = 3;
    cfg.terminal_prob_base = 0.35;
    cfg.terminal_prob_depth_slope = 0.15;
    cfg.action_count_weights = {{2, 1.0}, {3, 1.0}};
    cfg.chance_prob = 0.25;
    cfg.seed = seed;
    DecisionProblem p = gen_random(cfg);
    InstanceStats stats = instance_stats(p);
    if (stats.decision < 1 || stats.decision > 12) continue;
    if (stats.recall == RecallClass::Absentminded) continue;
    instances.push_back(std::move(p));
  }
  if (instances.size() < 20) {
    failures.push_back("could not assemble 20 absentmindedness-free instances");
    return;
  }

  int near_optimal = 0;
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const DecisionProblem& p = instances[idx];
    const double oracle = oracle_pure_enumeration(p).value;
    double best = -std::numeric_limits<double>::infinity();
    for (OptKind kind : kAllOptKinds) {
      const RunTrace trace = solve(p, config_for(kind), TerminationCriteria{},
                                   uniform_random_strategy(p, 1000 + idx));
      if (trace.final_value > oracle + 1e-6) {
        failures.push_back("instance " + std::to_string(idx) + ": " + to_string(kind) +
                           " exceeded the pure oracle by " + fmt(trace.final_value - oracle));
        return;
      }
      best = std::max(best, trace.final_value);
    }
    if (best >= oracle - 1e-3) ++near_optimal;
  }
  if (near_optimal < 16)
    failures.push_back("only " + std::to_string(near_optimal) +
                       "/20 instances reached the oracle value");
}

void simulation_structure(std::vector<std::string>& failures) {
  SimulationConfig cfg;
  cfg.scenarios = 1;
  cfg.max_sim_rounds = 2;
  cfg.sim_continue_prob = 0.8;
  cfg.deploy_rounds = 1;
  cfg.good_payoffs = {1.0};
  cfg.bad_payoffs = {10.0};
  const DecisionProblem p = gen_simulation(cfg);

  const InstanceStats stats = instance_stats(p);
  if (stats.infosets != 1) failures.push_back("expected a single infoset");
  if (stats.decision != 5 || stats.chance != 2)
    failures.push_back("node counts " + std::to_string(stats.decision) + " decision / " +
                       std::to_string(stats.chance) + " chance, expected 5 / 2");
  if (stats.recall != RecallClass::Absentminded) failures.push_back("instance is not absentminded");

  std::multiset<double> payoffs;
  for (const Node& node : p.nodes)
    if (node.kind == NodeKind::Terminal) payoffs.insert(node.payoff);
  if (payoffs != std::multiset<double>{0, 0, 1, 1, 1, 10, 10, 10})
    failures.push_back("terminal payoff multiset mismatch");

  // The utility (10-9p)(1/5 + 4p/25 + 16p^2/25) has a second, local CDT
  // equilibrium at the p=0 vertex (value 2); the regret-matching overshoot
  // lands there from roughly half of all inits, so the structure check uses
  // projected gradient ascent, which reaches the interior optimum from
  // everything outside the tiny p < 0.021 basin.
  const double grid_best = oracle_grid_search(p, 10'000);
  std::vector<double> finals;
  for (std::uint64_t init = 0; init < 12; ++init)
    finals.push_back(solve(p, config_for(OptKind::Pgd, 0.1), TerminationCriteria{},
                           uniform_random_strategy(p, init))
                         .final_value);
  const double median = lower_median(finals);
  if (std::fabs(median - grid_best) > 1e-4)
    failures.push_back("median optimizer value " + fmt(median) + " vs grid optimum " + fmt(grid_best));
}

void scale_invariance(std::vector<std::string>& failures) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomConfig cfg;
    cfg.max_depth = 8;
    cfg.terminal_prob_base = 0.15;
    cfg.terminal_prob_depth_slope = 0.1;
    cfg.seed = seed;
    const DecisionProblem p = gen_random(cfg);
    if (p.num_nodes() > 2000) {
      failures.push_back("seed " + std::to_string(seed) + " exceeds 2000 nodes (" +
                         std::to_string(p.num_nodes()) + ")");
      continue;
    }
    if (p.num_infosets() == 0) continue;
    DecisionProblem scaled = p;
    for (Node& node : scaled.nodes)
      if (node.kind == NodeKind::Terminal) node.payoff *= 10.0;

    TerminationCriteria term;
    term.max_iterations = 200;
    term.gap_tolerance = 0.0;
    const Strategy init = uniform_random_strategy(p, 77 + seed);
    for (OptKind kind : {OptKind::Rm, OptKind::RmPlus, OptKind::PredRm, OptKind::PredRmPlus}) {
      std::vector<Strategy> base, big;
      solve(p, config_for(kind), term, init, 1,
            [&](int, const Strategy& x, const EvalReport&) { base.push_back(x); });
      solve(scaled, config_for(kind), term, init, 1,
            [&](int, const Strategy& x, const EvalReport&) { big.push_back(x); });
      for (std::size_t t = 0; t < base.size(); ++t)
        for (std::size_t i = 0; i < base[t].probs.size(); ++i) {
          double sum = 0.0;
          for (std::size_t a = 0; a < base[t].probs[i].size(); ++a) {
            if (std::fabs(base[t].probs[i][a] - big[t].probs[i][a]) > 1e-9) {
              failures.push_back(to_string(kind) + " seed " + std::to_string(seed) +
                                 ": iterates diverge at iteration " + std::to_string(t + 1));
              return;
            }
            if (base[t].probs[i][a] < 0.0) {
              failures.push_back(to_string(kind) + ": negative iterate coordinate");
              return;
            }
            sum += base[t].probs[i][a];
          }
          if (std::fabs(sum - 1.0) > 1e-12) {
            failures.push_back(to_string(kind) + ": iterate off the simplex by " + fmt(sum - 1.0));
            return;
          }
        }
    }
  }
}

// ---- the desk-scale sweep (criteria 9 and 10) ------------------------------

ExperimentConfig desk_scale_experiment() {
  ExperimentConfig cfg;
  auto add = [&](const std::string& name, const std::string& family, const std::string& config,
                 std::uint64_t seed) {
    InstanceSpec spec;
    spec.name = name;
    spec.family = family;
    spec.config_json = config;
    spec.seed = seed;
    cfg.instances.push_back(std::move(spec));
  };

  add("sim-a", "simulation",
      R"({"scenarios":2,"max_sim_rounds":4,"sim_continue_prob":0.8,"deploy_rounds":2,)"
      R"("good_payoffs":[1,2],"bad_payoffs":[10,4]})",
      1);
  add("sim-b", "simulation",
      R"({"scenarios":2,"max_sim_rounds":7,"sim_continue_prob":0.8,"deploy_rounds":2,)"
      R"("good_payoffs":[1,0.5],"bad_payoffs":[10,7]})",
      2);
  add("sim-c", "simulation",
      R"({"scenarios":2,"max_sim_rounds":9,"sim_continue_prob":0.9,"deploy_rounds":2,)"
      R"("good_payoffs":[2,1],"bad_payoffs":[6,8]})",
      3);
  add("sim-d", "simulation",
      R"({"scenarios":2,"max_sim_rounds":11,"sim_continue_prob":0.8,"deploy_rounds":2,)"
      R"("good_payoffs":[1,1.5],"bad_payoffs":[10,5]})",
      4);

  add("det-a", "detection",
      R"({"graph":{"kind":"gnp","n":10,"p":0.5},"rounds":3,)"
      R"("subgroups":[{"shape":"line","size":2,"weight":1},{"shape":"star","size":3,"weight":2}]})",
      11);
  add("det-b", "detection",
      R"({"graph":{"kind":"gnp","n":14,"p":0.4},"rounds":3,)"
      R"("subgroups":[{"shape":"line","size":3,"weight":1},{"shape":"star","size":3,"weight":1.5}]})",
      12);
  add("det-c", "detection",
      R"({"graph":{"kind":"grid","width":3,"height":3},"rounds":4,)"
      R"("subgroups":[{"shape":"line","size":3,"weight":1},{"shape":"star","size":3,"weight":2}]})",
      13);
  add("det-d", "detection",
      R"({"graph":{"kind":"grid","width":4,"height":4},"rounds":4,)"
      R"("subgroups":[{"shape":"line","size":3,"weight":1},{"shape":"star","size":4,"weight":2},)"
      R"({"shape":"line","size":2,"weight":3}]})",
      14);

  add("rand-a", "random",
      R"({"max_depth":7,"terminal_prob_base":0.1,"terminal_prob_depth_slope":0.12})", 27);
  add("rand-b", "random",
      R"({"max_depth":8,"terminal_prob_base":0.1,"terminal_prob_depth_slope":0.1})", 24);
  add("rand-c", "random",
      R"({"max_depth":9,"terminal_prob_base":0.08,"terminal_prob_depth_slope":0.09})", 20);
  add("rand-d", "random",
      R"({"max_depth":11,"terminal_prob_base":0.06,"terminal_prob_depth_slope":0.07})", 27);

  cfg.roster = {OptKind::Pgd, OptKind::RmPlus};
  OptimizerConfig pgd_a = config_for(OptKind::Pgd, 0.1);
  OptimizerConfig pgd_b = config_for(OptKind::Pgd, 0.01);
  cfg.grids[OptKind::Pgd] = {pgd_a, pgd_b};
  cfg.num_inits = 12;
  cfg.master_seed = 99;
  cfg.log_every = 25;
  return cfg;
}

ExperimentConfig simulation_roster_experiment() {
  ExperimentConfig full = desk_scale_experiment();
  ExperimentConfig cfg;
  for (const InstanceSpec& spec : full.instances)
    if (spec.family == "simulation") cfg.instances.push_back(spec);
  cfg.roster = {OptKind::Pgd,  OptKind::OptGd,  OptKind::Ams,       OptKind::Rm,
                OptKind::RmPlus, OptKind::PredRm, OptKind::PredRmPlus};
  cfg.grids[OptKind::Pgd] = {config_for(OptKind::Pgd, 0.1), config_for(OptKind::Pgd, 0.01)};
  cfg.grids[OptKind::OptGd] = {config_for(OptKind::OptGd, 0.1), config_for(OptKind::OptGd, 0.01)};
  cfg.grids[OptKind::Ams] = {config_for(OptKind::Ams, 0.1), config_for(OptKind::Ams, 0.01)};
  cfg.num_inits = 12;
  cfg.master_seed = 99;
  cfg.log_every = 25;
  return cfg;
}

std::filesystem::path acceptance_dir() {
  return std::filesystem::temp_directory_path() / "irdp_acceptance";
}

void desk_scale_sweep(std::vector<std::string>& failures) {
  const ExperimentConfig cfg = desk_scale_experiment();

  // pin the advertised size range before running
  for (const InstanceSpec& spec : cfg.instances) {
    const DecisionProblem p = generate_instance(spec.family, spec.config_json, spec.seed);
    const std::size_t n = p.num_nodes();
    if (n < 1000 || n > 200'000)
      failures.push_back(spec.name + " has " + std::to_string(n) + " nodes, outside [1e3, 2e5]");
  }
  if (!failures.empty()) return;

  const SweepResult result = sweep(cfg);
  report(result, cfg.roster, (acceptance_dir() / "sweep_main_a").string());

  int rm_at_least_pgd = 0;
  for (const SummaryRow& row : result.rows) {
    double pgd_value = 0.0, rm_value = 0.0;
    for (const AlgoSummary& algo : row.algos) {
      if (algo.kind == OptKind::Pgd) pgd_value = algo.median_value;
      if (algo.kind == OptKind::RmPlus) rm_value = algo.median_value;
    }
    if (rm_value >= pgd_value - 1e-3) ++rm_at_least_pgd;
  }
  if (rm_at_least_pgd < 9)
    failures.push_back("RM+ matched PGD on only " + std::to_string(rm_at_least_pgd) + "/12 instances");

  const ExperimentConfig sim_cfg = simulation_roster_experiment();
  const SweepResult sim_result = sweep(sim_cfg);
  report(sim_result, sim_cfg.roster, (acceptance_dir() / "sweep_sim_a").string());
  for (const SummaryRow& row : sim_result.rows) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const AlgoSummary& algo : row.algos) {
      lo = std::min(lo, algo.median_value);
      hi = std::max(hi, algo.median_value);
    }
    if (hi - lo > 1e-3)
      failures.push_back(row.instance + ": method values spread " + fmt(hi - lo) + " > 1e-3");
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string strip_time_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  std::vector<std::size_t> keep;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].find("_time") == std::string::npos) keep.push_back(i);
      header = false;
    }
    for (std::size_t i : keep)
      if (i < cells.size()) out += cells[i] + ",";
    out += "\n";
  }
  return out;
}

void sweep_determinism(std::vector<std::string>& failures) {
  const ExperimentConfig cfg = desk_scale_experiment();
  const SweepResult rerun = sweep(cfg);
  report(rerun, cfg.roster, (acceptance_dir() / "sweep_main_b").string());

  const std::string a = slurp(acceptance_dir() / "sweep_main_a" / "summary.csv");
  const std::string b = slurp(acceptance_dir() / "sweep_main_b" / "summary.csv");
  if (a.empty() || strip_time_columns(a) != strip_time_columns(b))
    failures.push_back("summary value/gap columns differ between reruns");

  // plot files carry no timing at all and must match byte for byte
  namespace fs = std::filesystem;
  for (const auto& entry : fs::directory_iterator(acceptance_dir() / "sweep_main_a" / "plots")) {
    const fs::path other = acceptance_dir() / "sweep_main_b" / "plots" / entry.path().filename();
    if (slurp(entry.path()) != slurp(other)) {
      failures.push_back("plot data differs between reruns: " + entry.path().filename().string());
      return;
    }
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"gradients match central finite differences on 50 random instances", 10.0,
       gradient_oracle_equivalence},
      {"all seven optimizers find the absentminded-chain optimum (>= 11/12 inits)", 5.0,
       absentminded_chain_optimum},
      {"polynomial encoder is pointwise sound; cube example pays exactly {4, -6}", 5.0,
       encoder_soundness},
      {"overshoot trap: regret matching lands on 0, gradient descent on 1", 10.0,
       overshoot_dichotomy},
      {"basin trap: every optimizer follows its initialization basin", 10.0, basin_trap},
      {"optimizer values never exceed the pure-strategy oracle; best reaches it", 60.0,
       pure_oracle_consistency},
      {"generated simulation instance reproduces the reference shape and optimum", 5.0,
       simulation_structure},
      {"payoff scaling leaves regret-matching iterates unchanged", 30.0, scale_invariance},
      {"desk-scale sweep: RM+ matches PGD; simulation values agree across methods", 900.0,
       desk_scale_sweep},
      {"rerunning the sweep reproduces value/gap outputs byte for byte", 900.0, sweep_determinism},
  };

  std::filesystem::remove_all(acceptance_dir());
  std::filesystem::create_directories(acceptance_dir());

  int failures_total = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    try {
      criteria[i].body(failures);
    } catch (const std::exception& e) {
      failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[i].budget_secs)
      failures.push_back("runtime " + fmt(secs) + "s exceeds budget " + fmt(criteria[i].budget_secs) +
                         "s");
    if (failures.empty()) {
      std::printf("[PASS] %zu. %s (%.1fs, budget %.0fs)\n", i + 1, criteria[i].name.c_str(), secs,
                  criteria[i].budget_secs);
    } else {
      ++failures_total;
      std::printf("[FAIL] %zu. %s (%.1fs, budget %.0fs)\n", i + 1, criteria[i].name.c_str(), secs,
                  criteria[i].budget_secs);
      for (const std::string& detail : failures) std::printf("       - %s\n", detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures_total;
}
