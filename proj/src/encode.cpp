#include "irdp/encode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <json.hpp>

namespace irdp {

namespace {
SparsePolynomial parse_polynomial_checked(const std::string& json);
}

void SparsePolynomial::canonicalize() {
  for (Monomial& m : monomials) {
    std::sort(m.powers.begin(), m.powers.end(), [](const PowerTerm& a, const PowerTerm& b) {
      return std::tie(a.block, a.action) < std::tie(b.block, b.action);
    });
    std::vector<PowerTerm> merged;
    for (const PowerTerm& t : m.powers) {
      if (!merged.empty() && merged.back().block == t.block && merged.back().action == t.action)
        merged.back().exponent += t.exponent;
      else
        merged.push_back(t);
    }
    m.powers = std::move(merged);
  }

  auto term_less = [](const PowerTerm& x, const PowerTerm& y) {
    return std::tie(x.block, x.action, x.exponent) < std::tie(y.block, y.action, y.exponent);
  };
  std::sort(monomials.begin(), monomials.end(), [&](const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare(a.powers.begin(), a.powers.end(), b.powers.begin(),
                                        b.powers.end(), term_less);
  });
  std::vector<Monomial> out;
  for (const Monomial& m : monomials) {
    if (!out.empty() && out.back().powers == m.powers)
      out.back().coef += m.coef;
    else
      out.push_back(m);
  }
  std::erase_if(out, [](const Monomial& m) { return m.coef == 0.0; });
  monomials = std::move(out);
}

double SparsePolynomial::evaluate(const std::vector<std::vector<double>>& block_probs) const {
  double total = 0.0;
  for (const Monomial& m : monomials) {
    double term = m.coef;
    for (const PowerTerm& t : m.powers) {
      const double p = block_probs[static_cast<std::size_t>(t.block)][static_cast<std::size_t>(t.action)];
      for (std::int32_t e = 0; e < t.exponent; ++e) term *= p;
    }
    total += term;
  }
  return total;
}

SparsePolynomial parse_polynomial(const std::string& json) {
  try {
    return parse_polynomial_checked(json);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed polynomial document: ") + e.what());
  }
}

namespace {

SparsePolynomial parse_polynomial_checked(const std::string& json) {
  nlohmann::json doc = nlohmann::json::parse(json);
  SparsePolynomial poly;
  std::unordered_map<std::string, std::pair<std::int32_t, std::int32_t>> key_index;  // "block.action"
  for (const auto& jb : doc.at("blocks")) {
    PolyBlock block;
    block.name = jb.at("name").get<std::string>();
    block.actions = jb.at("actions").get<std::vector<std::string>>();
    if (block.actions.empty()) throw InvalidInput("block '" + block.name + "' has no actions");
    const auto bi = static_cast<std::int32_t>(poly.blocks.size());
    for (std::size_t a = 0; a < block.actions.size(); ++a)
      key_index[block.name + "." + block.actions[a]] = {bi, static_cast<std::int32_t>(a)};
    poly.blocks.push_back(std::move(block));
  }
  for (const auto& jm : doc.at("monomials")) {
    Monomial m;
    m.coef = jm.at("coef").get<double>();
    if (jm.contains("powers")) {
      for (const auto& [key, exp] : jm.at("powers").items()) {
        auto it = key_index.find(key);
        if (it == key_index.end()) throw InvalidInput("monomial references unknown key '" + key + "'");
        m.powers.push_back({it->second.first, it->second.second, exp.get<std::int32_t>()});
      }
    }
    poly.monomials.push_back(std::move(m));
  }
  poly.canonicalize();
  return poly;
}

}  // namespace

std::string polynomial_to_json(const SparsePolynomial& poly) {
  nlohmann::ordered_json doc;
  doc["blocks"] = nlohmann::ordered_json::array();
  for (const PolyBlock& b : poly.blocks) {
    nlohmann::ordered_json jb;
    jb["name"] = b.name;
    jb["actions"] = b.actions;
    doc["blocks"].push_back(std::move(jb));
  }
  doc["monomials"] = nlohmann::ordered_json::array();
  for (const Monomial& m : poly.monomials) {
    nlohmann::ordered_json jm;
    jm["coef"] = m.coef;
    nlohmann::ordered_json powers;
    for (const PowerTerm& t : m.powers)
      powers[poly.blocks[static_cast<std::size_t>(t.block)].name + "." +
             poly.blocks[static_cast<std::size_t>(t.block)].actions[static_cast<std::size_t>(t.action)]] =
          t.exponent;
    jm["powers"] = std::move(powers);
    doc["monomials"].push_back(std::move(jm));
  }
  return doc.dump();
}

DecisionProblem poly_to_problem(const SparsePolynomial& input) {
  SparsePolynomial poly = input;
  poly.canonicalize();
  if (poly.monomials.empty()) throw InvalidInput("polynomial has no monomials");

  ProblemBuilder builder;
  // Infosets only for blocks that actually occur, in block declaration order.
  std::vector<char> occurs(poly.blocks.size(), 0);
  for (const Monomial& m : poly.monomials)
    for (const PowerTerm& t : m.powers) occurs[static_cast<std::size_t>(t.block)] = 1;
  std::vector<InfosetId> block_infoset(poly.blocks.size(), -1);
  for (std::size_t b = 0; b < poly.blocks.size(); ++b)
    if (occurs[b]) block_infoset[b] = builder.add_infoset(poly.blocks[b].actions);

  const double scale = static_cast<double>(poly.monomials.size());
  const NodeId root = builder.add_chance();
  builder.set_root(root);

  for (std::size_t mi = 0; mi < poly.monomials.size(); ++mi) {
    const Monomial& m = poly.monomials[mi];
    // Occurrences ordered by block name, then action declaration order.
    std::vector<PowerTerm> occurrences = m.powers;
    std::sort(occurrences.begin(), occurrences.end(), [&](const PowerTerm& a, const PowerTerm& b) {
      const std::string& na = poly.blocks[static_cast<std::size_t>(a.block)].name;
      const std::string& nb = poly.blocks[static_cast<std::size_t>(b.block)].name;
      return std::tie(na, a.action) < std::tie(nb, b.action);
    });

    // Chain of decision nodes, one per occurrence; the designated action
    // continues, every other action ends with payoff zero.
    NodeId head = kNoNode;
    NodeId tail = kNoNode;
    std::size_t tail_action = 0;
    for (const PowerTerm& t : occurrences) {
      for (std::int32_t e = 0; e < t.exponent; ++e) {
        const InfosetId infoset = block_infoset[static_cast<std::size_t>(t.block)];
        const NodeId node = builder.add_decision(infoset);
        const std::size_t action_count = poly.blocks[static_cast<std::size_t>(t.block)].actions.size();
        for (std::size_t a = 0; a < action_count; ++a)
          if (a != static_cast<std::size_t>(t.action))
            builder.link_decision(node, a, builder.add_terminal(0.0));
        if (head == kNoNode)
          head = node;
        else
          builder.link_decision(tail, tail_action, node);
        tail = node;
        tail_action = static_cast<std::size_t>(t.action);
      }
    }

    const NodeId payout = builder.add_terminal(m.coef * scale);
    if (head == kNoNode)
      head = payout;  // constant monomial: the chance branch pays directly
    else
      builder.link_decision(tail, tail_action, payout);
    builder.link_chance(root, "m" + std::to_string(mi), 1.0 / scale, head);
  }

  return builder.finish();
}

SparsePolynomial problem_to_poly(const DecisionProblem& problem, std::size_t terminal_cap) {
  std::size_t terminals = 0;
  for (const Node& node : problem.nodes)
    if (node.kind == NodeKind::Terminal) ++terminals;
  if (terminals > terminal_cap) throw InvalidInput("terminal count exceeds cap");

  SparsePolynomial poly;
  poly.blocks.reserve(problem.num_infosets());
  for (const InfoSet& is : problem.infosets)
    poly.blocks.push_back({"I" + std::to_string(is.id), is.actions});

  // DFS carrying the chance-probability product and the (infoset, action)
  // exponent counts along the current path.
  std::vector<Monomial> raw;
  std::vector<PowerTerm> path;
  auto rec = [&](auto&& self, NodeId id, double chance) -> void {
    const Node& node = problem.nodes[static_cast<std::size_t>(id)];
    switch (node.kind) {
      case NodeKind::Terminal: {
        if (node.payoff != 0.0 && chance != 0.0) raw.push_back({node.payoff * chance, path});
        break;
      }
      case NodeKind::Chance: {
        for (std::size_t k = 0; k < node.children.size(); ++k)
          self(self, node.children[k], chance * node.probs[k]);
        break;
      }
      case NodeKind::Decision: {
        for (std::size_t a = 0; a < node.children.size(); ++a) {
          path.push_back({node.infoset, static_cast<std::int32_t>(a), 1});
          self(self, node.children[a], chance);
          path.pop_back();
        }
        break;
      }
    }
  };
  rec(rec, problem.root, 1.0);

  poly.monomials = std::move(raw);
  poly.canonicalize();
  return poly;
}

SparsePolynomial adversarial_polynomial(const AdversarialSpec& spec) {
  SparsePolynomial poly;
  poly.blocks.push_back({"x", {"hi", "lo"}});
  auto power_of_x = [](double coef, std::int32_t exponent) {
    Monomial m;
    m.coef = coef;
    if (exponent > 0) m.powers.push_back({0, 0, exponent});
    return m;
  };

  switch (spec.kind) {
    case AdversarialKind::BasinTrap: {
      const double limit = (3.0 - std::sqrt(5.0)) / 2.0;
      if (!(spec.epsilon > 0.0 && spec.epsilon < limit))
        throw InvalidInput("epsilon must lie in (0, (3-sqrt(5))/2)");
      if (spec.k < 1) throw InvalidInput("k must be >= 1");
      // (1/eps) (x^k - eps)^2 = (1/eps) x^{2k} - 2 x^k + eps
      poly.monomials.push_back(power_of_x(1.0 / spec.epsilon, 2 * spec.k));
      poly.monomials.push_back(power_of_x(-2.0, spec.k));
      poly.monomials.push_back(power_of_x(spec.epsilon, 0));
      break;
    }
    case AdversarialKind::GdTrap: {
      // s (x - 1/4)^2 (x - 3/4)^2 with s = (1/4 * 3/4)^2
      const double s = (0.25 * 0.75) * (0.25 * 0.75);
      poly.monomials.push_back(power_of_x(s, 4));
      poly.monomials.push_back(power_of_x(-2.0 * s, 3));
      poly.monomials.push_back(power_of_x(s * 11.0 / 8.0, 2));
      poly.monomials.push_back(power_of_x(-s * 3.0 / 8.0, 1));
      poly.monomials.push_back(power_of_x(s * 9.0 / 256.0, 0));
      break;
    }
    case AdversarialKind::RmTrap: {
      // 16 x^2 (1-x)^2 = 16 x^2 - 32 x^3 + 16 x^4
      poly.monomials.push_back(power_of_x(16.0, 2));
      poly.monomials.push_back(power_of_x(-32.0, 3));
      poly.monomials.push_back(power_of_x(16.0, 4));
      break;
    }
  }
  poly.canonicalize();
  return poly;
}

DecisionProblem adversarial_instance(const AdversarialSpec& spec) {
  return poly_to_problem(adversarial_polynomial(spec));
}

}  // namespace irdp
