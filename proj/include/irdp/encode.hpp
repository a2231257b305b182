#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irdp/model.hpp"

namespace irdp {

struct PolyBlock {
  std::string name;
  std::vector<std::string> actions;  // simplex vertices; a [0,1] variable is a 2-action block
};

struct PowerTerm {
  std::int32_t block = 0;
  std::int32_t action = 0;
  std::int32_t exponent = 1;
  friend bool operator==(const PowerTerm&, const PowerTerm&) = default;
};

struct Monomial {
  double coef = 0.0;
  std::vector<PowerTerm> powers;  // canonical: sorted by (block, action), exponents merged
};

// A polynomial over a product of simplices, stored sparsely by monomial.
struct SparsePolynomial {
  std::vector<PolyBlock> blocks;
  std::vector<Monomial> monomials;

  // Sorts and merges power terms and like monomials; drops zero coefficients.
  void canonicalize();
  double evaluate(const std::vector<std::vector<double>>& block_probs) const;
  double evaluate(const Strategy& strategy) const { return evaluate(strategy.probs); }
};

SparsePolynomial parse_polynomial(const std::string& json);
std::string polynomial_to_json(const SparsePolynomial& poly);

// Compiles the polynomial into a decision problem whose root utility equals
// the polynomial everywhere: a uniform chance root over the monomials, one
// decision chain per monomial with a node per variable occurrence, payoff
// coefficient x monomial count at the end of the chain, zero elsewhere.
DecisionProblem poly_to_problem(const SparsePolynomial& poly);

// Inverse view: one monomial per terminal, coefficient = payoff times the
// chance probabilities on its history, exponents counting the (infoset,
// action) occurrences on the path. Like monomials merged.
SparsePolynomial problem_to_poly(const DecisionProblem& problem, std::size_t terminal_cap = 100'000);

// Univariate trap instances over [0,1] on which parts of the optimizer
// family provably stall.
enum class AdversarialKind { BasinTrap, GdTrap, RmTrap };

struct AdversarialSpec {
  AdversarialKind kind = AdversarialKind::RmTrap;
  double epsilon = 0.1;  // BasinTrap; must lie in (0, (3 - sqrt 5) / 2)
  int k = 4;             // BasinTrap; must be >= 1
};

SparsePolynomial adversarial_polynomial(const AdversarialSpec& spec);
DecisionProblem adversarial_instance(const AdversarialSpec& spec);

}  // namespace irdp
