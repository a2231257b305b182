#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irdp/errors.hpp"

namespace irdp {

using NodeId = std::int32_t;
using InfosetId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

// Absolute tolerance for probability sums (chance distributions, strategies).
inline constexpr double kProbTolerance = 1e-12;

enum class NodeKind : std::uint8_t { Decision, Chance, Terminal };

struct Node {
  NodeKind kind = NodeKind::Terminal;
  InfosetId infoset = -1;                // decision nodes
  double payoff = 0.0;                   // terminal nodes
  std::vector<NodeId> children;          // decision: one per infoset action; chance: one per outcome
  std::vector<double> probs;             // chance outcome probabilities
  std::vector<std::string> labels;       // chance outcome labels

  std::size_t num_children() const { return children.size(); }
};

struct InfoSet {
  InfosetId id = -1;
  std::vector<std::string> actions;
  std::vector<NodeId> members;           // in pre-order
};

// A tree-form decision problem: a flat node arena plus the infoset partition
// of decision nodes. Immutable after construction; safe to share across
// threads for read-only evaluation.
struct DecisionProblem {
  std::vector<Node> nodes;
  NodeId root = kNoNode;
  std::vector<InfoSet> infosets;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_infosets() const { return infosets.size(); }
  std::size_t num_actions(InfosetId i) const { return infosets[static_cast<std::size_t>(i)].actions.size(); }
};

// One probability vector per infoset, indexed like InfoSet.actions.
struct Strategy {
  std::vector<std::vector<double>> probs;
};

enum class RecallClass { PerfectRecall, ImperfectRecallWithoutAbsentmindedness, Absentminded };

std::string to_string(RecallClass c);

struct InfosetRecall {
  bool perfect_recall = true;
  bool absentminded = false;
};

struct RecallReport {
  RecallClass overall = RecallClass::PerfectRecall;
  std::vector<InfosetRecall> per_infoset;
};

// Parent pointers and pre-order, shared by evaluation, classification and
// serialization. Assumes the problem passes the tree checks of validate().
struct Topology {
  std::vector<NodeId> preorder;
  std::vector<NodeId> parent;                 // kNoNode at root
  std::vector<std::int32_t> parent_action;    // edge index taken from parent, -1 at root
  std::vector<std::int32_t> depth;            // edges from root
  std::vector<std::int32_t> preorder_rank;    // inverse of preorder
};

Topology topology(const DecisionProblem& problem);

// Structural validation. Returns one human-readable message per violated
// rule; empty means the problem satisfies every invariant. Violations are
// data, not failures.
std::vector<std::string> validate(const DecisionProblem& problem);

struct SeqStep {
  InfosetId infoset = -1;
  std::int32_t action = -1;
  friend bool operator==(const SeqStep&, const SeqStep&) = default;
};

// Player-only (infoset, action) pairs along the root-to-node path, in order.
// Chance steps are excluded.
std::vector<SeqStep> player_sequence(const DecisionProblem& problem, NodeId node);
std::vector<SeqStep> player_sequence(const DecisionProblem& problem, const Topology& topo, NodeId node);

// An infoset has perfect recall iff all members share an identical player
// sequence; it is absentminded iff one member is a strict ancestor of
// another. The problem class is the worst infoset class.
RecallReport classify_recall(const DecisionProblem& problem);

// JSON serialization (format "irdp-v1"). save() emits the canonical form:
// nodes renumbered and listed in pre-order, infosets in id order, members
// ascending, actions in declaration order. load() accepts arbitrary ids and
// rejects documents that fail validation.
DecisionProblem load_problem(const std::string& bytes);
std::string save_problem(const DecisionProblem& problem);
DecisionProblem load_problem_file(const std::string& path);
void save_problem_file(const DecisionProblem& problem, const std::string& path);

// Strategy helpers.
Strategy uniform_strategy(const DecisionProblem& problem);
bool strategy_matches(const DecisionProblem& problem, const Strategy& strategy);
void require_strategy(const DecisionProblem& problem, const Strategy& strategy);

// Incremental construction helper used by generators, encoders and tests.
// Nodes may be created in any order; finish() sorts infoset members into
// pre-order.
class ProblemBuilder {
 public:
  InfosetId add_infoset(std::vector<std::string> actions);
  NodeId add_decision(InfosetId infoset);
  NodeId add_chance();
  NodeId add_terminal(double payoff);

  void set_root(NodeId node) { problem_.root = node; }
  // Attaches child under the given action index of a decision node.
  void link_decision(NodeId parent, std::size_t action_index, NodeId child);
  void link_chance(NodeId parent, std::string label, double prob, NodeId child);

  std::size_t node_count() const { return problem_.nodes.size(); }

  DecisionProblem finish();

 private:
  DecisionProblem problem_;
};

}  // namespace irdp
