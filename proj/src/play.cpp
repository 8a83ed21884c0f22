#include "sigtree/play.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigtree {

bool next_tuple(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < radix[i]) {
      ++digits[i];
      return true;
    }
    digits[i] = 1;
  }
  return false;
}

namespace {

std::size_t checked_product(const std::vector<int>& radix, std::size_t cap, const char* what) {
  std::size_t total = 1;
  for (int r : radix) {
    if (r <= 0) return 0;
    if (total > cap / static_cast<std::size_t>(r))
      throw CapExceeded(std::string(what) + " count exceeds cap " + std::to_string(cap));
    total *= static_cast<std::size_t>(r);
  }
  return total;
}

std::vector<int> radix_of(const DecisionTree& tree, std::span<const InfoSetRef> sets) {
  std::vector<int> radix;
  radix.reserve(sets.size());
  for (auto s : sets) radix.push_back(tree.branch_count(s));
  return radix;
}

}  // namespace

std::vector<Strategy> enumerate_strategies(const DecisionTree& tree, std::size_t cap) {
  auto radix = radix_of(tree, tree.decision_sets());
  std::vector<Strategy> out;
  std::size_t total = checked_product(radix, cap, "strategy");
  if (total == 0) return out;
  out.reserve(total);
  std::vector<int> digits(radix.size(), 1);
  do {
    out.push_back(Strategy{digits});
  } while (next_tuple(digits, radix));
  return out;
}

std::vector<WorldState> enumerate_world_states(const DecisionTree& tree, std::size_t cap) {
  auto sets = tree.chance_sets();
  auto radix = radix_of(tree, sets);
  std::vector<WorldState> out;
  std::size_t total = checked_product(radix, cap, "world state");
  if (total == 0) return out;
  out.reserve(total);
  std::vector<int> digits(radix.size(), 1);
  do {
    double p = 1.0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const auto& probs = tree.info_set(sets[i]).probs;
      p *= static_cast<std::size_t>(digits[i] - 1) < probs.size() ? probs[digits[i] - 1] : 0.0;
    }
    out.push_back(WorldState{digits, p});
  } while (next_tuple(digits, radix));
  return out;
}

Path induced_path(const Strategy& s, const WorldState& w, const DecisionTree& tree) {
  Path path;
  NodeRef cur = tree.root();
  // A finite tree bounds the path length; the guard catches malformed input.
  for (std::size_t steps = 0; steps <= tree.node_count(); ++steps) {
    path.nodes.push_back(cur);
    const auto& node = tree.node(cur);
    if (node.kind == NodeKind::terminal) {
      path.payoff = node.payoff;
      return path;
    }
    const auto& set = tree.info_set(*node.info_set);
    int choice = set.kind == NodeKind::decision ? s.choices.at(set.ordinal)
                                                : w.choices.at(set.ordinal);
    auto next = tree.child(cur, choice);
    if (!next) throw TreeError("choice " + std::to_string(choice) + " missing at '" + node.id + "'");
    cur = *next;
  }
  throw TreeError("path does not terminate");
}

double expected_payoff(const Strategy& s, const DecisionTree& tree) {
  double total = 0.0;
  for (const auto& w : enumerate_world_states(tree))
    if (w.probability > 0.0) total += w.probability * induced_path(s, w, tree).payoff;
  return total;
}

DecisionMatrix decision_matrix(const DecisionTree& tree, std::size_t cap) {
  DecisionMatrix m;
  m.strategies = enumerate_strategies(tree, cap);
  auto states = enumerate_world_states(tree, cap);
  m.payoffs.reserve(m.strategies.size());
  for (const auto& s : m.strategies) {
    double total = 0.0;
    for (const auto& w : states)
      if (w.probability > 0.0) total += w.probability * induced_path(s, w, tree).payoff;
    m.payoffs.push_back(total);
  }
  return m;
}

PureOptimum optimal_pure_payoff(const DecisionTree& tree, double tol, std::size_t cap) {
  auto m = decision_matrix(tree, cap);
  PureOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for (double v : m.payoffs) best.value = std::max(best.value, v);
  for (std::size_t i = 0; i < m.payoffs.size(); ++i)
    if (m.payoffs[i] >= best.value - tol) best.argmax.push_back(m.strategies[i]);
  return best;
}

std::string describe(const Strategy& s, const DecisionTree& tree) {
  std::string out;
  auto sets = tree.decision_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += '/';
    out += tree.branch_label(sets[i], s.choices.at(i));
  }
  return out;
}

}  // namespace sigtree
