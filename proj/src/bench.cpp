#include "irdp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include <json.hpp>

namespace irdp {

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput(message);
}

}  // namespace

// ---- Simulation ------------------------------------------------------------

namespace {

struct SimulationBuilder {
  const SimulationConfig& cfg;
  ProblemBuilder builder;
  std::vector<InfosetId> scenario_infoset;

  explicit SimulationBuilder(const SimulationConfig& c) : cfg(c) {
    scenario_infoset.reserve(static_cast<std::size_t>(cfg.scenarios));
    for (int i = 0; i < cfg.scenarios; ++i)
      scenario_infoset.push_back(builder.add_infoset({"good", "bad"}));
  }

  void guard() { check(builder.node_count() <= cfg.max_nodes, "simulation tree exceeds max_nodes"); }

  // Deployment after `done` actions with `accrued` payoff so far.
  NodeId deploy_after_action(int done, double accrued) {
    guard();
    if (done == cfg.deploy_rounds) return builder.add_terminal(accrued);
    const NodeId chance = builder.add_chance();
    builder.link_chance(chance, "stop", 1.0 - cfg.deploy_continue_prob, builder.add_terminal(accrued));
    const double p = cfg.deploy_continue_prob / cfg.scenarios;
    for (int s = 0; s < cfg.scenarios; ++s)
      builder.link_chance(chance, "s" + std::to_string(s), p, deploy_decision(s, done, accrued));
    return chance;
  }

  NodeId deploy_decision(int scenario, int done, double accrued) {
    guard();
    const NodeId node = builder.add_decision(scenario_infoset[static_cast<std::size_t>(scenario)]);
    builder.link_decision(node, 0, deploy_after_action(done + 1, accrued + cfg.good_payoffs[static_cast<std::size_t>(scenario)]));
    builder.link_decision(node, 1, deploy_after_action(done + 1, accrued + cfg.bad_payoffs[static_cast<std::size_t>(scenario)]));
    return node;
  }

  // Entry to the deployment phase: chance picks the scenario; degenerate
  // single-scenario problems skip the selector.
  NodeId deployment() {
    guard();
    if (cfg.scenarios == 1) return deploy_decision(0, 0, 0.0);
    const NodeId chance = builder.add_chance();
    const double p = 1.0 / cfg.scenarios;
    for (int s = 0; s < cfg.scenarios; ++s)
      builder.link_chance(chance, "s" + std::to_string(s), p, deploy_decision(s, 0, 0.0));
    return chance;
  }

  // Chance choosing a simulation scenario (mass q split equally) or
  // deployment (mass 1-q); used at the root and after each good answer.
  NodeId sim_or_deploy(int rounds_done) {
    guard();
    if (rounds_done == cfg.max_sim_rounds) return deployment();  // budget spent: full mass deploys
    const NodeId chance = builder.add_chance();
    const double p = cfg.sim_continue_prob / cfg.scenarios;
    for (int s = 0; s < cfg.scenarios; ++s)
      builder.link_chance(chance, "sim" + std::to_string(s), p, sim_decision(s, rounds_done));
    builder.link_chance(chance, "deploy", 1.0 - cfg.sim_continue_prob, deployment());
    return chance;
  }

  NodeId sim_decision(int scenario, int rounds_done) {
    guard();
    const NodeId node = builder.add_decision(scenario_infoset[static_cast<std::size_t>(scenario)]);
    const int done = rounds_done + 1;
    const NodeId after_good = (done == cfg.max_sim_rounds) ? deployment() : sim_or_deploy(done);
    builder.link_decision(node, 0, after_good);
    builder.link_decision(node, 1, builder.add_terminal(cfg.caught_payoff));
    return node;
  }
};

}  // namespace

DecisionProblem gen_simulation(const SimulationConfig& config) {
  check(config.scenarios >= 1, "scenarios must be >= 1");
  check(config.max_sim_rounds >= 0, "max_sim_rounds must be >= 0");
  check(config.deploy_rounds >= 1, "deploy_rounds must be >= 1");
  check(config.sim_continue_prob >= 0.0 && config.sim_continue_prob <= 1.0,
        "sim_continue_prob must lie in [0,1]");
  check(config.deploy_continue_prob >= 0.0 && config.deploy_continue_prob <= 1.0,
        "deploy_continue_prob must lie in [0,1]");
  check(config.good_payoffs.size() == static_cast<std::size_t>(config.scenarios),
        "good_payoffs must list one value per scenario");
  check(config.bad_payoffs.size() == static_cast<std::size_t>(config.scenarios),
        "bad_payoffs must list one value per scenario");

  SimulationBuilder sim(config);
  const NodeId root = (config.max_sim_rounds == 0) ? sim.deployment() : sim.sim_or_deploy(0);
  sim.builder.set_root(root);
  return sim.builder.finish();
}

// ---- Detection -------------------------------------------------------------

bool Graph::has_edge(int a, int b) const {
  const std::vector<int>& nb = adj[static_cast<std::size_t>(a)];
  return std::find(nb.begin(), nb.end(), b) != nb.end();
}

Graph build_graph(const GraphSpec& spec, Rng& rng) {
  Graph g;
  auto add_edge = [&](int a, int b) {
    g.adj[static_cast<std::size_t>(a)].push_back(b);
    g.adj[static_cast<std::size_t>(b)].push_back(a);
  };
  switch (spec.kind) {
    case GraphSpec::Kind::Grid: {
      check(spec.width >= 1 && spec.height >= 1, "grid dimensions must be positive");
      g.n = spec.width * spec.height;
      g.adj.resize(static_cast<std::size_t>(g.n));
      for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c) {
          const int v = r * spec.width + c;
          if (c + 1 < spec.width) add_edge(v, v + 1);
          if (r + 1 < spec.height) add_edge(v, v + spec.width);
        }
      break;
    }
    case GraphSpec::Kind::Gnp: {
      check(spec.n >= 1, "vertex count must be positive");
      check(spec.p >= 0.0 && spec.p <= 1.0, "edge probability must lie in [0,1]");
      g.n = spec.n;
      g.adj.resize(static_cast<std::size_t>(g.n));
      for (int a = 0; a < g.n; ++a)
        for (int b = a + 1; b < g.n; ++b)
          if (rng.next_double() < spec.p) add_edge(a, b);
      break;
    }
    case GraphSpec::Kind::Gnm: {
      check(spec.n >= 1, "vertex count must be positive");
      const long max_edges = static_cast<long>(spec.n) * (spec.n - 1) / 2;
      check(spec.edges >= 0 && spec.edges <= max_edges, "edge count out of range");
      g.n = spec.n;
      g.adj.resize(static_cast<std::size_t>(g.n));
      // sample edge indices without replacement
      std::vector<long> all(static_cast<std::size_t>(max_edges));
      for (long i = 0; i < max_edges; ++i) all[static_cast<std::size_t>(i)] = i;
      rng.shuffle(all);
      for (long i = 0; i < spec.edges; ++i) {
        long idx = all[static_cast<std::size_t>(i)];
        // unrank (a, b), a < b
        int a = 0;
        long row = spec.n - 1;
        while (idx >= row) {
          idx -= row;
          --row;
          ++a;
        }
        const int b = a + 1 + static_cast<int>(idx);
        add_edge(a, b);
      }
      break;
    }
  }
  return g;
}

namespace {

// Random placement of one subgroup shape on free vertices; returns the
// member set or empty on a failed attempt.
std::vector<int> try_place(const Graph& g, const SubgroupSpec& spec, const std::vector<char>& taken,
                           Rng& rng) {
  std::vector<int> free_vertices;
  for (int v = 0; v < g.n; ++v)
    if (!taken[static_cast<std::size_t>(v)]) free_vertices.push_back(v);
  if (free_vertices.empty()) return {};
  auto pick_free = [&]() { return free_vertices[rng.next_below(free_vertices.size())]; };

  const std::size_t size = static_cast<std::size_t>(spec.size);
  std::vector<int> members;
  std::unordered_set<int> used;
  auto walk = [&](std::size_t steps) {
    members.clear();
    used.clear();
    int cur = pick_free();
    members.push_back(cur);
    used.insert(cur);
    while (members.size() < steps) {
      std::vector<int> options;
      for (int nb : g.adj[static_cast<std::size_t>(cur)])
        if (!taken[static_cast<std::size_t>(nb)] && !used.count(nb)) options.push_back(nb);
      if (options.empty()) return false;
      cur = options[rng.next_below(options.size())];
      members.push_back(cur);
      used.insert(cur);
    }
    return true;
  };

  switch (spec.shape) {
    case SubgroupSpec::Shape::Line:
      if (!walk(size)) return {};
      return members;
    case SubgroupSpec::Shape::Cycle:
      if (!walk(size)) return {};
      if (!g.has_edge(members.back(), members.front())) return {};
      return members;
    case SubgroupSpec::Shape::Clique: {
      members.clear();
      used.clear();
      members.push_back(pick_free());
      used.insert(members[0]);
      while (members.size() < size) {
        std::vector<int> options;
        for (int nb : g.adj[static_cast<std::size_t>(members[0])]) {
          if (taken[static_cast<std::size_t>(nb)] || used.count(nb)) continue;
          bool connected = true;
          for (int m : members)
            if (!g.has_edge(nb, m)) connected = false;
          if (connected) options.push_back(nb);
        }
        if (options.empty()) return {};
        const int next = options[rng.next_below(options.size())];
        members.push_back(next);
        used.insert(next);
      }
      return members;
    }
    case SubgroupSpec::Shape::Star: {
      const int center = pick_free();
      std::vector<int> options;
      for (int nb : g.adj[static_cast<std::size_t>(center)])
        if (!taken[static_cast<std::size_t>(nb)]) options.push_back(nb);
      if (options.size() + 1 < size) return {};
      rng.shuffle(options);
      members.assign(1, center);
      members.insert(members.end(), options.begin(), options.begin() + static_cast<long>(size - 1));
      return members;
    }
  }
  return {};
}

}  // namespace

DecisionProblem gen_detection(const DetectionConfig& config) {
  check(config.rounds >= 1, "rounds must be >= 1");
  check(!config.subgroups.empty(), "at least one subgroup required");
  for (const SubgroupSpec& s : config.subgroups) {
    check(s.size >= 1, "subgroup size must be >= 1");
    check(s.weight > 0.0, "subgroup weight must be positive");
    if (s.shape == SubgroupSpec::Shape::Cycle) check(s.size >= 3, "cycle size must be >= 3");
    if (s.shape == SubgroupSpec::Shape::Star) check(s.size >= 2, "star size must be >= 2");
  }

  Rng rng(config.seed);
  Rng graph_rng = rng.split(1);
  const Graph graph = build_graph(config.graph, graph_rng);

  std::size_t total_members = 0;
  for (const SubgroupSpec& s : config.subgroups) total_members += static_cast<std::size_t>(s.size);
  check(total_members <= static_cast<std::size_t>(graph.n), "subgroups do not fit the graph");

  // Disjoint placement with rejection.
  Rng place_rng = rng.split(2);
  std::vector<char> taken(static_cast<std::size_t>(graph.n), 0);
  std::vector<double> vertex_weight(static_cast<std::size_t>(graph.n), 0.0);  // 0 = not a member
  for (const SubgroupSpec& spec : config.subgroups) {
    std::vector<int> members;
    for (int attempt = 0; attempt < config.placement_retries && members.empty(); ++attempt)
      members = try_place(graph, spec, taken, place_rng);
    check(!members.empty(), "subgroup placement infeasible within retry budget");
    for (int v : members) {
      taken[static_cast<std::size_t>(v)] = 1;
      vertex_weight[static_cast<std::size_t>(v)] = spec.weight;
    }
  }

  // Tree over R rounds; infosets keyed by the ordered discovery sequence.
  const std::size_t vertex_count = static_cast<std::size_t>(graph.n);
  double projected = 1.0;
  for (int r = 0; r < config.rounds; ++r) projected = projected * static_cast<double>(vertex_count) + 1.0;
  check(projected <= static_cast<double>(config.max_nodes), "detection tree exceeds max_nodes");

  ProblemBuilder builder;
  std::vector<std::string> actions;
  actions.reserve(vertex_count);
  for (int v = 0; v < graph.n; ++v) actions.push_back("v" + std::to_string(v));

  std::map<std::vector<int>, InfosetId> infoset_of;
  auto infoset_for = [&](const std::vector<int>& knowledge) {
    auto it = infoset_of.find(knowledge);
    if (it != infoset_of.end()) return it->second;
    const InfosetId id = builder.add_infoset(actions);
    infoset_of.emplace(knowledge, id);
    return id;
  };

  std::vector<int> knowledge;
  auto rec = [&](auto&& self, int round, double payoff) -> NodeId {
    if (round == config.rounds) return builder.add_terminal(payoff);
    const NodeId node = builder.add_decision(infoset_for(knowledge));
    for (int v = 0; v < graph.n; ++v) {
      const bool discovered =
          std::find(knowledge.begin(), knowledge.end(), v) != knowledge.end();
      const bool member = vertex_weight[static_cast<std::size_t>(v)] > 0.0;
      NodeId child;
      if (member && !discovered) {
        knowledge.push_back(v);
        child = self(self, round + 1, payoff + vertex_weight[static_cast<std::size_t>(v)]);
        knowledge.pop_back();
      } else {
        child = self(self, round + 1, payoff);
      }
      builder.link_decision(node, static_cast<std::size_t>(v), child);
    }
    return node;
  };
  builder.set_root(rec(rec, 0, 0.0));
  return builder.finish();
}

// ---- Random ----------------------------------------------------------------

DecisionProblem gen_random(const RandomConfig& config) {
  check(config.max_depth >= 1 && config.max_depth <= 64, "max_depth must lie in [1, 64]");
  check(config.terminal_prob_base >= 0.0 && config.terminal_prob_base <= 1.0,
        "terminal_prob_base must lie in [0,1]");
  check(config.chance_prob >= 0.0 && config.chance_prob <= 1.0, "chance_prob must lie in [0,1]");
  check(!config.action_count_weights.empty(), "action_count_weights must be non-empty");
  double weight_total = 0.0;
  for (const auto& [count, weight] : config.action_count_weights) {
    check(count >= 1, "action counts must be >= 1");
    check(weight >= 0.0, "action count weights must be >= 0");
    weight_total += weight;
  }
  check(weight_total > 0.0, "action count weights must not all be zero");
  check(config.payoff_max >= config.payoff_min, "empty payoff range");

  Rng rng(config.seed);
  auto sample_action_count = [&]() {
    double roll = rng.next_double() * weight_total;
    for (const auto& [count, weight] : config.action_count_weights) {
      roll -= weight;
      if (roll < 0.0) return count;
    }
    return config.action_count_weights.back().first;
  };

  ProblemBuilder builder;

  // The final infoset partition only exists after the whole tree is grown,
  // so growth attaches every decision node to a per-arity scratch infoset
  // and the partition below replaces it.
  struct RawDecision {
    NodeId node = kNoNode;
    int action_count = 0;
  };
  std::vector<RawDecision> raw_decisions;
  std::map<int, InfosetId> scratch_infoset;
  auto labels_for = [&](int count) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for (int a = 0; a < count; ++a) labels.push_back("a" + std::to_string(a));
    return labels;
  };

  auto grow = [&](auto&& self, int depth) -> NodeId {
    check(builder.node_count() <= config.max_nodes, "random tree exceeds max_nodes");
    const double p_term =
        std::min(1.0, config.terminal_prob_base + config.terminal_prob_depth_slope * depth);
    if (depth >= config.max_depth || rng.next_double() < p_term)
      return builder.add_terminal(rng.next_in(config.payoff_min, config.payoff_max));

    const int branches = sample_action_count();
    if (rng.next_double() < config.chance_prob) {
      const NodeId node = builder.add_chance();
      std::vector<double> raw(static_cast<std::size_t>(branches));
      double total = 0.0;
      for (double& r : raw) {
        r = rng.next_exponential();
        total += r;
      }
      for (int k = 0; k < branches; ++k)
        builder.link_chance(node, "o" + std::to_string(k), raw[static_cast<std::size_t>(k)] / total,
                            self(self, depth + 1));
      return node;
    }

    auto [it, inserted] = scratch_infoset.try_emplace(branches, -1);
    if (inserted) it->second = builder.add_infoset(labels_for(branches));
    const NodeId node = builder.add_decision(it->second);
    raw_decisions.push_back({node, branches});
    for (int a = 0; a < branches; ++a)
      builder.link_decision(node, static_cast<std::size_t>(a), self(self, depth + 1));
    return node;
  };

  builder.set_root(grow(grow, 0));
  DecisionProblem grown = builder.finish();

  // Re-partition the decision nodes: bucket by action count, shuffle each
  // bucket, chop into groups of round(#decisions^exponent / #buckets).
  std::map<int, std::vector<NodeId>> buckets;
  for (const RawDecision& d : raw_decisions) buckets[d.action_count].push_back(d.node);

  DecisionProblem out;
  out.nodes = grown.nodes;
  out.root = grown.root;

  if (!buckets.empty()) {
    const double total_decisions = static_cast<double>(raw_decisions.size());
    const double target = std::pow(total_decisions, config.infoset_exponent) /
                          static_cast<double>(buckets.size());
    const std::size_t group_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(target)));

    Rng shuffle_rng = Rng(config.seed).split(7);
    for (auto& [count, nodes] : buckets) {
      shuffle_rng.shuffle(nodes);
      for (std::size_t start = 0; start < nodes.size(); start += group_size) {
        InfoSet is;
        is.id = static_cast<InfosetId>(out.infosets.size());
        for (int a = 0; a < count; ++a) is.actions.push_back("a" + std::to_string(a));
        const std::size_t end = std::min(nodes.size(), start + group_size);
        for (std::size_t k = start; k < end; ++k) {
          is.members.push_back(nodes[k]);
          out.nodes[static_cast<std::size_t>(nodes[k])].infoset = is.id;
        }
        out.infosets.push_back(std::move(is));
      }
    }
    const Topology topo = topology(out);
    for (InfoSet& is : out.infosets)
      std::sort(is.members.begin(), is.members.end(), [&](NodeId a, NodeId b) {
        return topo.preorder_rank[static_cast<std::size_t>(a)] <
               topo.preorder_rank[static_cast<std::size_t>(b)];
      });
  }
  return out;
}

// ---- Stats -----------------------------------------------------------------

std::string size_suffix(std::size_t node_count) {
  char buf[32];
  auto trim = [&](double v, const char* unit) {
    const double rounded = std::round(v * 10.0) / 10.0;
    if (std::fabs(rounded - std::round(rounded)) < 1e-9)
      std::snprintf(buf, sizeof buf, "%.0f%s", rounded, unit);
    else
      std::snprintf(buf, sizeof buf, "%.1f%s", rounded, unit);
    return std::string(buf);
  };
  if (node_count < 1000) return std::to_string(node_count);
  if (node_count < 1'000'000) return trim(static_cast<double>(node_count) / 1e3, "k");
  return trim(static_cast<double>(node_count) / 1e6, "m");
}

InstanceStats instance_stats(const DecisionProblem& problem) {
  InstanceStats stats;
  stats.total = problem.num_nodes();
  for (const Node& node : problem.nodes) {
    switch (node.kind) {
      case NodeKind::Decision: ++stats.decision; break;
      case NodeKind::Chance: ++stats.chance; break;
      case NodeKind::Terminal: ++stats.terminal; break;
    }
  }
  stats.infosets = problem.num_infosets();
  for (const InfoSet& is : problem.infosets)
    stats.max_infoset_size = std::max(stats.max_infoset_size, is.members.size());
  const Topology topo = topology(problem);
  for (std::int32_t d : topo.depth) stats.depth = std::max(stats.depth, d);
  stats.recall = classify_recall(problem).overall;
  stats.size_suffix = size_suffix(stats.total);
  return stats;
}

std::string stats_to_json(const InstanceStats& stats) {
  nlohmann::ordered_json j;
  j["nodes"] = stats.total;
  j["decision_nodes"] = stats.decision;
  j["chance_nodes"] = stats.chance;
  j["terminal_nodes"] = stats.terminal;
  j["infosets"] = stats.infosets;
  j["max_infoset_size"] = stats.max_infoset_size;
  j["depth"] = stats.depth;
  j["recall"] = to_string(stats.recall);
  j["size_suffix"] = stats.size_suffix;
  return j.dump();
}

// ---- Config parsing ----------------------------------------------------------

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed ") + what + " config: " + e.what());
  }
}

}  // namespace

SimulationConfig parse_simulation_config(const std::string& json) {
  const nlohmann::json j = parse_json(json, "simulation");
  try {
  SimulationConfig cfg;
  cfg.scenarios = j.value("scenarios", cfg.scenarios);
  cfg.max_sim_rounds = j.value("max_sim_rounds", cfg.max_sim_rounds);
  cfg.sim_continue_prob = j.value("sim_continue_prob", cfg.sim_continue_prob);
  cfg.deploy_rounds = j.value("deploy_rounds", cfg.deploy_rounds);
  cfg.deploy_continue_prob = j.value("deploy_continue_prob", cfg.deploy_continue_prob);
  cfg.caught_payoff = j.value("caught_payoff", cfg.caught_payoff);
  if (j.contains("good_payoffs")) cfg.good_payoffs = j["good_payoffs"].get<std::vector<double>>();
  if (j.contains("bad_payoffs")) cfg.bad_payoffs = j["bad_payoffs"].get<std::vector<double>>();
  cfg.max_nodes = j.value("max_nodes", cfg.max_nodes);
  return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad simulation config: ") + e.what());
  }
}

DetectionConfig parse_detection_config(const std::string& json) {
  const nlohmann::json j = parse_json(json, "detection");
  try {
  DetectionConfig cfg;
  const auto& jg = j.at("graph");
  const std::string kind = jg.at("kind").get<std::string>();
  if (kind == "grid") {
    cfg.graph.kind = GraphSpec::Kind::Grid;
    cfg.graph.width = jg.at("width").get<int>();
    cfg.graph.height = jg.at("height").get<int>();
  } else if (kind == "gnp") {
    cfg.graph.kind = GraphSpec::Kind::Gnp;
    cfg.graph.n = jg.at("n").get<int>();
    cfg.graph.p = jg.at("p").get<double>();
  } else if (kind == "gnm") {
    cfg.graph.kind = GraphSpec::Kind::Gnm;
    cfg.graph.n = jg.at("n").get<int>();
    cfg.graph.edges = jg.at("edges").get<long>();
  } else {
    throw InvalidInput("unknown graph kind '" + kind + "'");
  }
  for (const auto& js : j.at("subgroups")) {
    SubgroupSpec s;
    const std::string shape = js.at("shape").get<std::string>();
    if (shape == "line")
      s.shape = SubgroupSpec::Shape::Line;
    else if (shape == "cycle")
      s.shape = SubgroupSpec::Shape::Cycle;
    else if (shape == "clique")
      s.shape = SubgroupSpec::Shape::Clique;
    else if (shape == "star")
      s.shape = SubgroupSpec::Shape::Star;
    else
      throw InvalidInput("unknown subgroup shape '" + shape + "'");
    s.size = js.at("size").get<int>();
    s.weight = js.value("weight", 1.0);
    cfg.subgroups.push_back(s);
  }
  cfg.rounds = j.value("rounds", cfg.rounds);
  cfg.max_nodes = j.value("max_nodes", cfg.max_nodes);
  cfg.placement_retries = j.value("placement_retries", cfg.placement_retries);
  return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad detection config: ") + e.what());
  }
}

RandomConfig parse_random_config(const std::string& json) {
  const nlohmann::json j = parse_json(json, "random");
  try {
  RandomConfig cfg;
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.terminal_prob_base = j.value("terminal_prob_base", cfg.terminal_prob_base);
  cfg.terminal_prob_depth_slope = j.value("terminal_prob_depth_slope", cfg.terminal_prob_depth_slope);
  cfg.chance_prob = j.value("chance_prob", cfg.chance_prob);
  cfg.infoset_exponent = j.value("infoset_exponent", cfg.infoset_exponent);
  cfg.payoff_min = j.value("payoff_min", cfg.payoff_min);
  cfg.payoff_max = j.value("payoff_max", cfg.payoff_max);
  cfg.max_nodes = j.value("max_nodes", cfg.max_nodes);
  if (j.contains("action_count_weights")) {
    cfg.action_count_weights.clear();
    for (const auto& [key, weight] : j["action_count_weights"].items())
      cfg.action_count_weights.emplace_back(std::stoi(key), weight.get<double>());
    std::sort(cfg.action_count_weights.begin(), cfg.action_count_weights.end());
  }
  return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad random config: ") + e.what());
  }
}

DecisionProblem generate_instance(const std::string& family, const std::string& config_json,
                                  std::uint64_t seed) {
  if (family == "simulation") {
    SimulationConfig cfg = parse_simulation_config(config_json);
    cfg.seed = seed;
    return gen_simulation(cfg);
  }
  if (family == "detection") {
    DetectionConfig cfg = parse_detection_config(config_json);
    cfg.seed = seed;
    return gen_detection(cfg);
  }
  if (family == "random") {
    RandomConfig cfg = parse_random_config(config_json);
    cfg.seed = seed;
    return gen_random(cfg);
  }
  throw InvalidInput("unknown family '" + family + "'");
}

}  // namespace irdp
