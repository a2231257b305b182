#include "irdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace irdp {

namespace {

std::string node_ref(NodeId id) { return "node " + std::to_string(id); }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(RecallClass c) {
  switch (c) {
    case RecallClass::PerfectRecall: return "perfect-recall";
    case RecallClass::ImperfectRecallWithoutAbsentmindedness: return "imperfect-recall";
    case RecallClass::Absentminded: return "absentminded";
  }
  return "?";
}

Topology topology(const DecisionProblem& problem) {
  const std::size_t n = problem.nodes.size();
  Topology topo;
  topo.parent.assign(n, kNoNode);
  topo.parent_action.assign(n, -1);
  topo.depth.assign(n, 0);
  topo.preorder_rank.assign(n, -1);
  topo.preorder.reserve(n);

  // Iterative DFS, children visited in declaration order.
  std::vector<NodeId> stack;
  stack.push_back(problem.root);
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    topo.preorder_rank[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(topo.preorder.size());
    topo.preorder.push_back(id);
    const Node& node = problem.nodes[static_cast<std::size_t>(id)];
    for (std::size_t k = node.children.size(); k-- > 0;) {
      const NodeId child = node.children[k];
      topo.parent[static_cast<std::size_t>(child)] = id;
      topo.parent_action[static_cast<std::size_t>(child)] = static_cast<std::int32_t>(k);
      topo.depth[static_cast<std::size_t>(child)] = topo.depth[static_cast<std::size_t>(id)] + 1;
      stack.push_back(child);
    }
  }
  return topo;
}

std::vector<std::string> validate(const DecisionProblem& problem) {
  std::vector<std::string> out;
  const std::size_t n = problem.nodes.size();

  if (n == 0 || problem.root < 0 || static_cast<std::size_t>(problem.root) >= n) {
    out.push_back("root missing");
    return out;
  }

  auto in_range = [&](NodeId id) { return id >= 0 && static_cast<std::size_t>(id) < n; };

  bool references_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = problem.nodes[i];
    const NodeId id = static_cast<NodeId>(i);
    for (NodeId child : node.children) {
      if (!in_range(child)) {
        out.push_back(node_ref(id) + ": child id " + std::to_string(child) + " out of range");
        references_ok = false;
      }
    }
    switch (node.kind) {
      case NodeKind::Decision: {
        if (node.infoset < 0 || static_cast<std::size_t>(node.infoset) >= problem.infosets.size()) {
          out.push_back(node_ref(id) + ": unknown infoset " + std::to_string(node.infoset));
          references_ok = false;
          break;
        }
        const InfoSet& is = problem.infosets[static_cast<std::size_t>(node.infoset)];
        if (node.children.size() != is.actions.size()) {
          out.push_back(node_ref(id) + ": action set mismatch with infoset " + std::to_string(node.infoset) +
                        " (" + std::to_string(node.children.size()) + " children vs " +
                        std::to_string(is.actions.size()) + " actions)");
        }
        break;
      }
      case NodeKind::Chance: {
        if (node.probs.size() != node.children.size() || node.labels.size() != node.children.size()) {
          out.push_back(node_ref(id) + ": chance outcome lists are inconsistent");
          break;
        }
        double sum = 0.0;
        bool negative = false;
        for (double p : node.probs) {
          if (p < 0.0 || !std::isfinite(p)) negative = true;
          sum += p;
        }
        if (negative) out.push_back(node_ref(id) + ": chance probability below 0");
        if (std::fabs(sum - 1.0) > kProbTolerance)
          out.push_back(node_ref(id) + ": chance distribution sums to " + fmt(sum));
        break;
      }
      case NodeKind::Terminal: {
        if (!node.children.empty()) out.push_back(node_ref(id) + ": terminal node has children");
        if (!std::isfinite(node.payoff)) out.push_back(node_ref(id) + ": payoff is not finite");
        break;
      }
    }
  }

  bool tree_ok = references_ok;
  if (references_ok) {
    std::vector<int> indegree(n, 0);
    for (const Node& node : problem.nodes)
      for (NodeId child : node.children) indegree[static_cast<std::size_t>(child)]++;
    if (indegree[static_cast<std::size_t>(problem.root)] != 0) {
      out.push_back("root " + std::to_string(problem.root) + " has a parent");
      tree_ok = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<NodeId>(i) == problem.root) continue;
      if (indegree[i] != 1) {
        out.push_back(node_ref(static_cast<NodeId>(i)) + ": has " + std::to_string(indegree[i]) +
                      " parents, expected 1");
        tree_ok = false;
      }
    }
    if (tree_ok) {
      // With unit indegrees a stray cycle manifests as unreachable nodes.
      std::vector<char> seen(n, 0);
      std::vector<NodeId> stack{problem.root};
      std::size_t reached = 0;
      while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(id)]) continue;
        seen[static_cast<std::size_t>(id)] = 1;
        ++reached;
        for (NodeId child : problem.nodes[static_cast<std::size_t>(id)].children) stack.push_back(child);
      }
      if (reached != n) {
        out.push_back("tree: " + std::to_string(n - reached) + " nodes unreachable from root");
        tree_ok = false;
      }
    }
  }

  // Infosets partition exactly the decision nodes.
  std::vector<int> covered(n, 0);
  for (const InfoSet& is : problem.infosets) {
    const std::string ref = "infoset " + std::to_string(is.id);
    if (is.members.empty()) out.push_back(ref + ": empty member list");
    if (is.actions.empty()) out.push_back(ref + ": empty action list");
    for (NodeId m : is.members) {
      if (!in_range(m)) {
        out.push_back(ref + ": member id " + std::to_string(m) + " out of range");
        continue;
      }
      const Node& node = problem.nodes[static_cast<std::size_t>(m)];
      if (node.kind != NodeKind::Decision)
        out.push_back(ref + ": member " + std::to_string(m) + " is not a decision node");
      else if (node.infoset != is.id)
        out.push_back(ref + ": member " + std::to_string(m) + " declares infoset " +
                      std::to_string(node.infoset));
      covered[static_cast<std::size_t>(m)]++;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = problem.nodes[i];
    if (node.kind == NodeKind::Decision && covered[i] != 1)
      out.push_back(node_ref(static_cast<NodeId>(i)) + ": appears in " + std::to_string(covered[i]) +
                    " infoset member lists, expected 1");
    if (node.kind != NodeKind::Decision && covered[i] != 0)
      out.push_back(node_ref(static_cast<NodeId>(i)) + ": non-decision node listed in an infoset");
  }

  if (tree_ok && out.empty()) {
    const Topology topo = topology(problem);
    for (const InfoSet& is : problem.infosets) {
      bool sorted = true;
      for (std::size_t k = 1; k < is.members.size(); ++k)
        if (topo.preorder_rank[static_cast<std::size_t>(is.members[k - 1])] >=
            topo.preorder_rank[static_cast<std::size_t>(is.members[k])])
          sorted = false;
      if (!sorted)
        out.push_back("infoset " + std::to_string(is.id) + ": members not in pre-order");
    }
  }

  return out;
}

std::vector<SeqStep> player_sequence(const DecisionProblem& problem, const Topology& topo, NodeId node) {
  if (node < 0 || static_cast<std::size_t>(node) >= problem.nodes.size())
    throw InvalidInput("unknown node id " + std::to_string(node));
  std::vector<SeqStep> seq;
  NodeId cur = node;
  while (topo.parent[static_cast<std::size_t>(cur)] != kNoNode) {
    const NodeId up = topo.parent[static_cast<std::size_t>(cur)];
    const Node& parent = problem.nodes[static_cast<std::size_t>(up)];
    if (parent.kind == NodeKind::Decision)
      seq.push_back({parent.infoset, topo.parent_action[static_cast<std::size_t>(cur)]});
    cur = up;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

std::vector<SeqStep> player_sequence(const DecisionProblem& problem, NodeId node) {
  return player_sequence(problem, topology(problem), node);
}

RecallReport classify_recall(const DecisionProblem& problem) {
  const Topology topo = topology(problem);
  RecallReport report;
  report.per_infoset.resize(problem.infosets.size());

  for (std::size_t i = 0; i < problem.infosets.size(); ++i) {
    const InfoSet& is = problem.infosets[i];
    InfosetRecall& rec = report.per_infoset[i];

    const std::vector<SeqStep> first = player_sequence(problem, topo, is.members.front());
    for (std::size_t k = 1; k < is.members.size() && rec.perfect_recall; ++k)
      if (player_sequence(problem, topo, is.members[k]) != first) rec.perfect_recall = false;

    // Absentminded iff some member sits on the root path of another member.
    std::unordered_set<NodeId> member_set(is.members.begin(), is.members.end());
    for (NodeId m : is.members) {
      NodeId cur = topo.parent[static_cast<std::size_t>(m)];
      while (cur != kNoNode && !rec.absentminded) {
        if (member_set.count(cur)) rec.absentminded = true;
        cur = topo.parent[static_cast<std::size_t>(cur)];
      }
      if (rec.absentminded) break;
    }
  }

  report.overall = RecallClass::PerfectRecall;
  for (const InfosetRecall& rec : report.per_infoset) {
    if (rec.absentminded) {
      report.overall = RecallClass::Absentminded;
      break;
    }
    if (!rec.perfect_recall) report.overall = RecallClass::ImperfectRecallWithoutAbsentmindedness;
  }
  return report;
}

std::string save_problem(const DecisionProblem& problem) {
  const Topology topo = topology(problem);
  const auto rank = [&](NodeId id) { return topo.preorder_rank[static_cast<std::size_t>(id)]; };

  nlohmann::ordered_json doc;
  doc["format"] = "irdp-v1";
  doc["root"] = 0;

  nlohmann::ordered_json infosets = nlohmann::ordered_json::array();
  for (const InfoSet& is : problem.infosets) {
    nlohmann::ordered_json j;
    j["id"] = is.id;
    j["actions"] = is.actions;
    std::vector<std::int32_t> members;
    members.reserve(is.members.size());
    for (NodeId m : is.members) members.push_back(rank(m));
    std::sort(members.begin(), members.end());
    j["members"] = members;
    infosets.push_back(std::move(j));
  }
  doc["infosets"] = std::move(infosets);

  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (NodeId id : topo.preorder) {
    const Node& node = problem.nodes[static_cast<std::size_t>(id)];
    nlohmann::ordered_json j;
    j["id"] = rank(id);
    switch (node.kind) {
      case NodeKind::Decision: {
        j["kind"] = "decision";
        j["infoset"] = node.infoset;
        nlohmann::ordered_json children;
        const InfoSet& is = problem.infosets[static_cast<std::size_t>(node.infoset)];
        for (std::size_t a = 0; a < node.children.size(); ++a)
          children[is.actions[a]] = rank(node.children[a]);
        j["children"] = std::move(children);
        break;
      }
      case NodeKind::Chance: {
        j["kind"] = "chance";
        nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < node.children.size(); ++k)
          outcomes.push_back({node.labels[k], node.probs[k], rank(node.children[k])});
        j["outcomes"] = std::move(outcomes);
        break;
      }
      case NodeKind::Terminal: {
        j["kind"] = "terminal";
        j["payoff"] = node.payoff;
        break;
      }
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

namespace {
DecisionProblem load_problem_checked(const std::string& bytes);
}

DecisionProblem load_problem(const std::string& bytes) {
  try {
    return load_problem_checked(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed document: ") + e.what());
  }
}

namespace {

DecisionProblem load_problem_checked(const std::string& bytes) {
  nlohmann::json doc = nlohmann::json::parse(bytes);

  if (!doc.is_object() || doc.value("format", "") != "irdp-v1")
    throw InvalidInput("document is not an irdp-v1 problem");
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty())
    throw InvalidInput("root missing (empty nodes list)");
  if (!doc.contains("root") || !doc["root"].is_number_integer()) throw InvalidInput("root missing");

  DecisionProblem problem;

  std::unordered_map<std::int64_t, InfosetId> infoset_index;
  if (doc.contains("infosets")) {
    for (const auto& j : doc["infosets"]) {
      InfoSet is;
      const std::int64_t file_id = j.at("id").get<std::int64_t>();
      is.id = static_cast<InfosetId>(problem.infosets.size());
      if (!infoset_index.emplace(file_id, is.id).second)
        throw InvalidInput("duplicate infoset id " + std::to_string(file_id));
      is.actions = j.at("actions").get<std::vector<std::string>>();
      problem.infosets.push_back(std::move(is));
    }
  }

  std::unordered_map<std::int64_t, NodeId> node_index;
  std::vector<std::int64_t> file_ids;
  for (const auto& j : doc["nodes"]) {
    const std::int64_t file_id = j.at("id").get<std::int64_t>();
    const NodeId id = static_cast<NodeId>(file_ids.size());
    if (!node_index.emplace(file_id, id).second)
      throw InvalidInput("duplicate node id " + std::to_string(file_id));
    file_ids.push_back(file_id);
  }

  auto map_node = [&](std::int64_t file_id, const std::string& where) -> NodeId {
    auto it = node_index.find(file_id);
    if (it == node_index.end())
      throw InvalidInput(where + ": references missing node " + std::to_string(file_id));
    return it->second;
  };

  problem.nodes.resize(file_ids.size());
  std::size_t idx = 0;
  for (const auto& j : doc["nodes"]) {
    Node& node = problem.nodes[idx];
    const std::string where = "node " + std::to_string(file_ids[idx]);
    ++idx;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "decision") {
      node.kind = NodeKind::Decision;
      const std::int64_t is_file_id = j.at("infoset").get<std::int64_t>();
      auto it = infoset_index.find(is_file_id);
      if (it == infoset_index.end())
        throw InvalidInput(where + ": references missing infoset " + std::to_string(is_file_id));
      node.infoset = it->second;
      const InfoSet& is = problem.infosets[static_cast<std::size_t>(node.infoset)];
      const auto& children = j.at("children");
      if (!children.is_object() || children.size() != is.actions.size())
        throw InvalidInput(where + ": children keys do not match infoset " + std::to_string(is_file_id) +
                           " actions");
      node.children.reserve(is.actions.size());
      for (const std::string& action : is.actions) {
        if (!children.contains(action))
          throw InvalidInput(where + ": missing child for action '" + action + "'");
        node.children.push_back(map_node(children.at(action).get<std::int64_t>(), where));
      }
    } else if (kind == "chance") {
      node.kind = NodeKind::Chance;
      for (const auto& outcome : j.at("outcomes")) {
        if (!outcome.is_array() || outcome.size() != 3)
          throw InvalidInput(where + ": malformed chance outcome");
        node.labels.push_back(outcome[0].get<std::string>());
        node.probs.push_back(outcome[1].get<double>());
        node.children.push_back(map_node(outcome[2].get<std::int64_t>(), where));
      }
    } else if (kind == "terminal") {
      node.kind = NodeKind::Terminal;
      node.payoff = j.at("payoff").get<double>();
    } else {
      throw InvalidInput(where + ": unknown kind '" + kind + "'");
    }
  }

  const std::int64_t root_file_id = doc["root"].get<std::int64_t>();
  auto root_it = node_index.find(root_file_id);
  if (root_it == node_index.end()) throw InvalidInput("root missing (id " + std::to_string(root_file_id) + ")");
  problem.root = root_it->second;

  // members, mapped after nodes exist
  if (doc.contains("infosets")) {
    std::size_t k = 0;
    for (const auto& j : doc["infosets"]) {
      InfoSet& is = problem.infosets[k++];
      for (const auto& m : j.at("members"))
        is.members.push_back(map_node(m.get<std::int64_t>(), "infoset " + std::to_string(is.id)));
    }
  }

  const std::vector<std::string> violations = validate(problem);
  if (!violations.empty()) {
    std::string msg = "validation failed:";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw InvalidInput(msg);
  }
  return problem;
}

}  // namespace

DecisionProblem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str());
}

void save_problem_file(const DecisionProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << save_problem(problem) << '\n';
}

Strategy uniform_strategy(const DecisionProblem& problem) {
  Strategy x;
  x.probs.reserve(problem.infosets.size());
  for (const InfoSet& is : problem.infosets)
    x.probs.emplace_back(is.actions.size(), 1.0 / static_cast<double>(is.actions.size()));
  return x;
}

bool strategy_matches(const DecisionProblem& problem, const Strategy& strategy) {
  if (strategy.probs.size() != problem.infosets.size()) return false;
  for (std::size_t i = 0; i < strategy.probs.size(); ++i) {
    const std::vector<double>& v = strategy.probs[i];
    if (v.size() != problem.infosets[i].actions.size()) return false;
    double sum = 0.0;
    for (double p : v) {
      if (p < 0.0 || !std::isfinite(p)) return false;
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbTolerance) return false;
  }
  return true;
}

void require_strategy(const DecisionProblem& problem, const Strategy& strategy) {
  if (!strategy_matches(problem, strategy))
    throw InvalidInput("strategy does not match the problem's infosets");
}

InfosetId ProblemBuilder::add_infoset(std::vector<std::string> actions) {
  InfoSet is;
  is.id = static_cast<InfosetId>(problem_.infosets.size());
  is.actions = std::move(actions);
  problem_.infosets.push_back(std::move(is));
  return problem_.infosets.back().id;
}

NodeId ProblemBuilder::add_decision(InfosetId infoset) {
  Node node;
  node.kind = NodeKind::Decision;
  node.infoset = infoset;
  node.children.assign(problem_.infosets[static_cast<std::size_t>(infoset)].actions.size(), kNoNode);
  const NodeId id = static_cast<NodeId>(problem_.nodes.size());
  problem_.nodes.push_back(std::move(node));
  problem_.infosets[static_cast<std::size_t>(infoset)].members.push_back(id);
  return id;
}

NodeId ProblemBuilder::add_chance() {
  Node node;
  node.kind = NodeKind::Chance;
  const NodeId id = static_cast<NodeId>(problem_.nodes.size());
  problem_.nodes.push_back(std::move(node));
  return id;
}

NodeId ProblemBuilder::add_terminal(double payoff) {
  Node node;
  node.kind = NodeKind::Terminal;
  node.payoff = payoff;
  const NodeId id = static_cast<NodeId>(problem_.nodes.size());
  problem_.nodes.push_back(std::move(node));
  return id;
}

void ProblemBuilder::link_decision(NodeId parent, std::size_t action_index, NodeId child) {
  problem_.nodes[static_cast<std::size_t>(parent)].children[action_index] = child;
}

void ProblemBuilder::link_chance(NodeId parent, std::string label, double prob, NodeId child) {
  Node& node = problem_.nodes[static_cast<std::size_t>(parent)];
  node.labels.push_back(std::move(label));
  node.probs.push_back(prob);
  node.children.push_back(child);
}

DecisionProblem ProblemBuilder::finish() {
  DecisionProblem out = std::move(problem_);
  problem_ = DecisionProblem{};
  if (out.root == kNoNode && !out.nodes.empty()) out.root = 0;
  if (out.root != kNoNode && !out.nodes.empty()) {
    const Topology topo = topology(out);
    for (InfoSet& is : out.infosets)
      std::sort(is.members.begin(), is.members.end(), [&](NodeId a, NodeId b) {
        return topo.preorder_rank[static_cast<std::size_t>(a)] <
               topo.preorder_rank[static_cast<std::size_t>(b)];
      });
  }
  return out;
}

}  // namespace irdp
