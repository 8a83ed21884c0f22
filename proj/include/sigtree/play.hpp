#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigtree/tree.hpp"

namespace sigtree {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strategies in lexicographic order, the first decision set most significant.
// Throws CapExceeded when the product of branch counts exceeds `cap`.
std::vector<Strategy> enumerate_strategies(const DecisionTree& tree,
                                           std::size_t cap = kDefaultEnumerationCap);

// World states in the same lexicographic order over chance sets. Each state's
// probability is the product of Nature's branch probabilities.
std::vector<WorldState> enumerate_world_states(const DecisionTree& tree,
                                               std::size_t cap = kDefaultEnumerationCap);

struct Path {
  std::vector<NodeRef> nodes;
  double payoff = 0.0;
};

Path induced_path(const Strategy& s, const WorldState& w, const DecisionTree& tree);

double expected_payoff(const Strategy& s, const DecisionTree& tree);

struct DecisionMatrix {
  std::vector<Strategy> strategies;
  std::vector<double> payoffs;
};

DecisionMatrix decision_matrix(const DecisionTree& tree,
                               std::size_t cap = kDefaultEnumerationCap);

struct PureOptimum {
  double value = 0.0;
  std::vector<Strategy> argmax;  // every strategy within tol of the max
};

PureOptimum optimal_pure_payoff(const DecisionTree& tree, double tol = kDefaultTolerance,
                                std::size_t cap = kDefaultEnumerationCap);

// "U/u/T/t" style rendering using branch labels.
std::string describe(const Strategy& s, const DecisionTree& tree);

// Mixed-radix odometer shared by the enumerators: increments `digits` (each in
// 1..radix[i], last position fastest). Returns false after the final tuple.
bool next_tuple(std::vector<int>& digits, const std::vector<int>& radix);

}  // namespace sigtree
