#pragma once

#include "irdp/model.hpp"

namespace irdp::fixtures {

// Chance flips a fair coin, then one forgetful choice between two actions.
// Left branch pays (2, 0), right branch pays (0, 1). Imperfect information
// about chance only; both members have an empty player sequence.
inline DecisionProblem coin_guess() {
  ProblemBuilder b;
  const InfosetId is = b.add_infoset({"l", "r"});
  const NodeId root = b.add_chance();
  const NodeId left = b.add_decision(is);
  const NodeId right = b.add_decision(is);
  b.link_chance(root, "l_chance", 0.5, left);
  b.link_chance(root, "r_chance", 0.5, right);
  b.link_decision(left, 0, b.add_terminal(2.0));
  b.link_decision(left, 1, b.add_terminal(0.0));
  b.link_decision(right, 0, b.add_terminal(0.0));
  b.link_decision(right, 1, b.add_terminal(1.0));
  b.set_root(root);
  return b.finish();
}

// Two decision levels; the second level forgets the first move.
// Payoffs: ll' -> 2, lr' -> 0, rl' -> 0, rr' -> 1.
inline DecisionProblem forgetful_two_step() {
  ProblemBuilder b;
  const InfosetId first = b.add_infoset({"l", "r"});
  const InfosetId second = b.add_infoset({"l2", "r2"});
  const NodeId root = b.add_decision(first);
  const NodeId after_l = b.add_decision(second);
  const NodeId after_r = b.add_decision(second);
  b.link_decision(root, 0, after_l);
  b.link_decision(root, 1, after_r);
  b.link_decision(after_l, 0, b.add_terminal(2.0));
  b.link_decision(after_l, 1, b.add_terminal(0.0));
  b.link_decision(after_r, 0, b.add_terminal(0.0));
  b.link_decision(after_r, 1, b.add_terminal(1.0));
  b.set_root(root);
  return b.finish();
}

// Absentminded chain of three indistinguishable decisions with actions
// (c, e): exiting early pays 0, exiting at the end pays 10, continuing to
// the last terminal pays 1. Utility p^3 + 10 p^2 (1-p) at x(c) = p.
inline DecisionProblem absentminded_chain() {
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
  return b.finish();
}

// Strategy with a single 2-action infoset set to (p, 1-p).
inline Strategy binary_strategy(double p) {
  Strategy x;
  x.probs.push_back({p, 1.0 - p});
  return x;
}

}  // namespace irdp::fixtures
