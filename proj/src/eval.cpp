#include "irdp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace irdp {

Evaluator::Evaluator(const DecisionProblem& problem) : problem_(&problem), topo_(topology(problem)) {
  report_.reach.assign(problem.num_nodes(), 0.0);
  report_.cont.assign(problem.num_nodes(), 0.0);
  report_.grad.resize(problem.num_infosets());
  for (std::size_t i = 0; i < problem.num_infosets(); ++i)
    report_.grad[i].assign(problem.infosets[i].actions.size(), 0.0);
  report_.per_infoset_gap.assign(problem.num_infosets(), 0.0);
}

void Evaluator::passes(const Strategy& strategy) {
  const DecisionProblem& p = *problem_;
  std::vector<double>& reach = report_.reach;
  std::vector<double>& cont = report_.cont;

  // Down: reach probabilities, parents before children in pre-order.
  reach[static_cast<std::size_t>(p.root)] = 1.0;
  for (NodeId id : topo_.preorder) {
    const Node& node = p.nodes[static_cast<std::size_t>(id)];
    const double r = reach[static_cast<std::size_t>(id)];
    if (node.kind == NodeKind::Decision) {
      const std::vector<double>& x = strategy.probs[static_cast<std::size_t>(node.infoset)];
      for (std::size_t a = 0; a < node.children.size(); ++a)
        reach[static_cast<std::size_t>(node.children[a])] = r * x[a];
    } else if (node.kind == NodeKind::Chance) {
      for (std::size_t k = 0; k < node.children.size(); ++k)
        reach[static_cast<std::size_t>(node.children[k])] = r * node.probs[k];
    }
  }

  // Up: continuation values, children before parents in reverse pre-order.
  for (std::size_t i = topo_.preorder.size(); i-- > 0;) {
    const NodeId id = topo_.preorder[i];
    const Node& node = p.nodes[static_cast<std::size_t>(id)];
    double v = 0.0;
    switch (node.kind) {
      case NodeKind::Terminal:
        v = node.payoff;
        break;
      case NodeKind::Chance:
        for (std::size_t k = 0; k < node.children.size(); ++k)
          v += node.probs[k] * cont[static_cast<std::size_t>(node.children[k])];
        break;
      case NodeKind::Decision: {
        const std::vector<double>& x = strategy.probs[static_cast<std::size_t>(node.infoset)];
        for (std::size_t a = 0; a < node.children.size(); ++a)
          v += x[a] * cont[static_cast<std::size_t>(node.children[a])];
        break;
      }
    }
    cont[static_cast<std::size_t>(id)] = v;
  }

  report_.value = cont[static_cast<std::size_t>(p.root)];
}

double Evaluator::utility(const Strategy& strategy) {
  require_strategy(*problem_, strategy);
  passes(strategy);
  return report_.value;
}

const EvalReport& Evaluator::evaluate(const Strategy& strategy) {
  require_strategy(*problem_, strategy);
  passes(strategy);

  const DecisionProblem& p = *problem_;
  // grad[I][a] = sum over members h of reach(h) * cont(child of h under a);
  // this is the exact partial derivative of the utility polynomial, also
  // under absentmindedness.
  for (std::size_t i = 0; i < p.num_infosets(); ++i)
    std::fill(report_.grad[i].begin(), report_.grad[i].end(), 0.0);
  for (std::size_t i = 0; i < p.num_infosets(); ++i) {
    const InfoSet& is = p.infosets[i];
    std::vector<double>& g = report_.grad[i];
    for (NodeId m : is.members) {
      const Node& node = p.nodes[static_cast<std::size_t>(m)];
      const double r = report_.reach[static_cast<std::size_t>(m)];
      for (std::size_t a = 0; a < node.children.size(); ++a)
        g[a] += r * report_.cont[static_cast<std::size_t>(node.children[a])];
    }
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < p.num_infosets(); ++i) {
    const std::vector<double>& g = report_.grad[i];
    const std::vector<double>& x = strategy.probs[i];
    double best = g.empty() ? 0.0 : g[0];
    double mix = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      best = std::max(best, g[a]);
      mix += x[a] * g[a];
    }
    const double gap_i = best - mix;
    report_.per_infoset_gap[i] = gap_i;
    worst = std::max(worst, gap_i);
  }
  report_.gap = worst;
  return report_;
}

std::vector<double> reach_probabilities(const DecisionProblem& problem, const Strategy& strategy) {
  Evaluator ev(problem);
  ev.utility(strategy);
  return ev.report().reach;
}

double expected_utility(const DecisionProblem& problem, const Strategy& strategy) {
  Evaluator ev(problem);
  return ev.utility(strategy);
}

std::vector<std::vector<double>> gradient(const DecisionProblem& problem, const Strategy& strategy) {
  Evaluator ev(problem);
  return ev.evaluate(strategy).grad;
}

EvalReport evaluate(const DecisionProblem& problem, const Strategy& strategy) {
  Evaluator ev(problem);
  return ev.evaluate(strategy);
}

double cdt_deviation_utility(const DecisionProblem& problem, const Strategy& strategy,
                             InfosetId infoset, const std::vector<double>& alpha) {
  if (infoset < 0 || static_cast<std::size_t>(infoset) >= problem.num_infosets())
    throw InvalidInput("unknown infoset " + std::to_string(infoset));
  if (alpha.size() != problem.num_actions(infoset))
    throw InvalidInput("deviation vector has wrong dimension");
  Evaluator ev(problem);
  const EvalReport& rep = ev.evaluate(strategy);
  const std::vector<double>& g = rep.grad[static_cast<std::size_t>(infoset)];
  const std::vector<double>& x = strategy.probs[static_cast<std::size_t>(infoset)];
  double out = rep.value;
  for (std::size_t a = 0; a < g.size(); ++a) out += (alpha[a] - x[a]) * g[a];
  return out;
}

std::pair<double, std::vector<double>> cdt_gap(const DecisionProblem& problem, const Strategy& strategy) {
  Evaluator ev(problem);
  const EvalReport& rep = ev.evaluate(strategy);
  return {rep.gap, rep.per_infoset_gap};
}

PureOracleResult oracle_pure_enumeration(const DecisionProblem& problem, std::uint64_t max_profiles) {
  double profiles = 1.0;
  for (const InfoSet& is : problem.infosets) profiles *= static_cast<double>(is.actions.size());
  if (profiles > static_cast<double>(max_profiles))
    throw InvalidInput("pure strategy count exceeds cap");

  Evaluator ev(problem);
  Strategy x;
  x.probs.resize(problem.num_infosets());
  std::vector<std::size_t> choice(problem.num_infosets(), 0);
  for (std::size_t i = 0; i < problem.num_infosets(); ++i) {
    x.probs[i].assign(problem.infosets[i].actions.size(), 0.0);
    x.probs[i][0] = 1.0;
  }

  PureOracleResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (;;) {
    const double v = ev.utility(x);
    if (v > best.value) {
      best.value = v;
      best.strategy = x;
    }
    // odometer over action choices
    std::size_t i = 0;
    for (; i < choice.size(); ++i) {
      x.probs[i][choice[i]] = 0.0;
      if (++choice[i] < x.probs[i].size()) {
        x.probs[i][choice[i]] = 1.0;
        break;
      }
      choice[i] = 0;
      x.probs[i][0] = 1.0;
    }
    if (i == choice.size()) break;
  }
  if (problem.num_infosets() == 0) best.strategy = Strategy{};
  return best;
}

namespace {

// All points of the resolution-R lattice on the (m-1)-simplex.
void lattice_points(std::size_t m, int resolution, std::vector<std::vector<double>>& out) {
  std::vector<int> counts(m, 0);
  std::vector<double> point(m, 0.0);
  const double inv = 1.0 / static_cast<double>(resolution);
  // recursive composition enumeration
  auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
    if (idx + 1 == m) {
      counts[idx] = remaining;
      for (std::size_t k = 0; k < m; ++k) point[k] = counts[k] * inv;
      out.push_back(point);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      self(self, idx + 1, remaining - c);
    }
  };
  rec(rec, 0, resolution);
}

}  // namespace

double oracle_grid_search(const DecisionProblem& problem, int resolution) {
  if (resolution < 1) throw InvalidInput("resolution must be >= 1");
  std::size_t free_dims = 0;
  for (const InfoSet& is : problem.infosets) free_dims += is.actions.size() - 1;
  if (free_dims > 4) throw InvalidInput("grid search limited to 4 free dimensions");

  std::vector<std::vector<std::vector<double>>> grids(problem.num_infosets());
  for (std::size_t i = 0; i < problem.num_infosets(); ++i)
    lattice_points(problem.infosets[i].actions.size(), resolution, grids[i]);

  Evaluator ev(problem);
  Strategy x;
  x.probs.resize(problem.num_infosets());
  std::vector<std::size_t> cursor(problem.num_infosets(), 0);
  for (std::size_t i = 0; i < problem.num_infosets(); ++i) x.probs[i] = grids[i][0];

  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::max(best, ev.utility(x));
    std::size_t i = 0;
    for (; i < cursor.size(); ++i) {
      if (++cursor[i] < grids[i].size()) {
        x.probs[i] = grids[i][cursor[i]];
        break;
      }
      cursor[i] = 0;
      x.probs[i] = grids[i][0];
    }
    if (i == cursor.size()) break;
  }
  return best;
}

std::string eval_report_to_json(const EvalReport& report, bool include_gradients) {
  nlohmann::ordered_json j;
  j["value"] = report.value;
  j["gap"] = report.gap;
  j["per_infoset_gap"] = report.per_infoset_gap;
  if (include_gradients) j["grad"] = report.grad;
  return j.dump();
}

}  // namespace irdp
