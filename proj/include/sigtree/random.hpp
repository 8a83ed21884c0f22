#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "sigtree/signals.hpp"
#include "sigtree/tree.hpp"

namespace sigtree::gen {

using Rng = std::mt19937_64;

enum class Recall { any, perfect, imperfect };

struct TreeOptions {
  int max_depth = 4;
  int max_branching = 3;
  std::size_t max_nodes = 24;
  std::size_t max_decision_sets = 6;
  std::size_t max_world_states = 64;
  std::size_t max_policies = 20000;  // binary signal on every decision set
  int root_chance_branches = 0;      // 0: root kind drawn at random
  double merge_probability = 0.6;
  Recall recall = Recall::any;
  int payoff_range = 4;              // integer payoffs in [-range, range]
};

// Random Kuhn tree with non-trivial decision nodes. Information sets are
// formed by merging decision nodes with equal branch counts that never share
// a path; under Recall::perfect only nodes with identical own-choice
// histories merge. Draws until the requested recall class and size limits
// hold.
DecisionTree random_kuhn_tree(Rng& rng, const TreeOptions& options);

// Random probability vector with occasional exact zeros.
std::vector<double> random_distribution(Rng& rng, std::size_t n, double zero_probability = 0.15);

// One binary site per listed decision set ordinal, named after the set.
std::vector<Site> binary_sites(const DecisionTree& tree, const std::vector<int>& ordinals);

JointSignalMeasure random_joint(Rng& rng, std::vector<Site> sites);

struct RandomBox {
  EmpiricalModel model;
  bool has_pr_cycle = false;
  double pr_weight = 0.0;
};

// No-signaling model on one binary site per decision set. Contexts are the
// site sets met along root-to-terminal paths, filled from a classical joint
// whose marginals are uniform on four sites A, B, C, D chosen so that none
// of A-C, A-D, B-C, B-D share a path. Those four pairs get extra contexts
// mixing a PR box (weight lambda) into the classical marginal; lambda > 2/3
// makes the model non-extendable. Without such a quadruple the model stays
// classical.
RandomBox random_no_signaling_box(Rng& rng, const DecisionTree& tree);

// Distinct site sets seen along paths, with sets contained in another dropped.
std::vector<std::vector<int>> path_site_sets(const DecisionTree& tree);

}  // namespace sigtree::gen
