#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigtree/policy.hpp"
#include "sigtree/quantum.hpp"
#include "sigtree/signals.hpp"
#include "sigtree/tree.hpp"

namespace sigtree::fixtures {

// Four-context tree: Nature picks (W,N), (E,N), (W,S) or (E,S) with
// probability 1/4; the DM then moves at the first-named set (U/D at West, u/d
// at East) and at the second (T/B at North, t/b at South). Payoffs:
// (W,N): D,B -> -M; (E,N): u,T -> -M; (W,S): U,t -> -M; (E,S): u,t -> +m;
// every other terminal pays 0. Requires 0 < m < M.
DecisionTree four_context_tree(double m, double big_m);

// Same layout with the second-stage sets split by the first move, so the DM
// remembers it ("North|U", "North|D", ... ). Perfect recall.
DecisionTree perfect_recall_tree(double m, double big_m);

// Absent-minded driver: one set "Driver" met twice. In at both -> 1,
// Out at the first -> 0, Out at the second -> 4.
DecisionTree absent_minded_driver();

// Nature picks Left/Right (1/2 each) unseen; the DM then picks Left/Right and
// earns 1 on a match.
DecisionTree matching_tree();

// Nature root; one branch leads through I' (L/R) into set I, the other goes
// straight into I. The DM forgets the I' choice at I.
DecisionTree forgetful_tree();

// Nature glues the driver tree (1/2) to the four-context tree (1/2).
DecisionTree glued_tree(double m, double big_m);

// Hardy correlations bound to West/East/North/South.
EmpiricalModel hardy_model();

// Hardy policy: G -> first move, R -> second move at every set.
ResponsePolicy hardy_policy(const DecisionTree& tree);

// Two visit sites "Driver#1", "Driver#2" over {H, T}.
EmpiricalModel driver_coins(double p_hh, double p_ht, double p_th, double p_tt);
EmpiricalModel driver_iid_coins(double p_heads = 0.5);
EmpiricalModel driver_anticorrelated_coins();

// Coin at the matching tree's decision set, fair marginal.
EmpiricalModel matching_coin();
// Coin equal to Nature's draw: Heads with Left, Tails with Right.
std::vector<NatureSignalPoint> matching_coin_with_nature();

// Perfect-recall tree models: Hardy and PR-box correlations laid over the
// split second-stage sets, each including the four-cycle of contexts that
// makes it non-extendable.
EmpiricalModel perfect_recall_hardy_model();
EmpiricalModel perfect_recall_pr_model();

// Glued tree: driver coins anticorrelated, Hardy signals in the other half.
EmpiricalModel glued_quantum_model();

// Classical joint with one binary site per listed decision set.
EmpiricalModel single_context_model(const JointSignalMeasure& joint);

// ---- scenario bundles -------------------------------------------------------

struct ScenarioParams {
  double m = 1.0;
  double big_m = 2.0;
  std::uint64_t seed = 7;
  int classical_draws = 20;
};

enum class Relation { equal, greater };

struct ManifestEntry {
  std::string key;
  std::string description;
  double expected = 0.0;
  double tolerance = 1e-9;
  std::string origin;  // "reported", "derived" or "structural"
  Relation relation = Relation::equal;
  std::function<double()> compute;
};

struct ScenarioBundle {
  std::string name;
  std::string summary;
  DecisionTree tree;
  std::vector<ManifestEntry> manifest;
};

struct ManifestResult {
  std::string key;
  std::string description;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  std::string origin;
  Relation relation = Relation::equal;
  bool pass = false;
};

struct DemoReport {
  std::string name;
  std::string summary;
  std::vector<ManifestResult> results;
  bool pass = true;
};

std::vector<std::string> builtin_names();

// Throws std::invalid_argument for unknown names or m, M outside 0 < m < M.
ScenarioBundle builtin_scenario(const std::string& name, const ScenarioParams& params = {});

DemoReport run_demo(const ScenarioBundle& bundle);

// Best policy value over `draws` random classical joints on the tree's
// signal sites (one binary site per decision set, single context).
double best_classical_value(const DecisionTree& tree, int draws, std::uint64_t seed);

// ---- comparison table -------------------------------------------------------

struct TableCell {
  std::string label;
  double value = 0.0;
};

struct TableRow {
  std::string tree_class;
  std::string fixture;
  std::vector<TableCell> cells;
  std::vector<std::string> expected;  // "=" or "<" between neighbouring cells
  std::vector<std::string> observed;
  bool holds = true;
};

struct ComparisonTable {
  std::vector<TableRow> rows;
  bool holds = true;
};

ComparisonTable proposition_table(const ScenarioParams& params = {},
                                  double tol = kDefaultTolerance);

}  // namespace sigtree::fixtures
