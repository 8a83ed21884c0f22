#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigtree/play.hpp"
#include "sigtree/signals.hpp"
#include "sigtree/tree.hpp"

namespace sigtree {

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// f_I: signal outcome -> move, per decision set. moves[ordinal][outcome] is a
// 1-based branch index. A set without a signal has a one-entry map.
struct ResponsePolicy {
  std::vector<std::vector<int>> moves;
  auto operator<=>(const ResponsePolicy&) const = default;
};

// Randomized counterpart: mix[ordinal][outcome][move - 1] is a probability.
struct BehavioralPolicy {
  std::vector<std::vector<std::vector<double>>> mix;
};

// One point of a joint distribution of Nature's choices and all signals,
// used when signals are allowed to correlate with Nature.
struct NatureSignalPoint {
  std::vector<int> nature;   // per chance set ordinal, 1-based
  std::vector<int> signals;  // per model site, outcome index
  double probability = 0.0;
};

// Tree plus signal model. Sites attach to decision sets by name; a site with
// a visit index serves that visit of its set (exchangeable formulation), a
// site without one serves every visit. Decision sets without any site carry
// no signal.
class SignalScenario {
 public:
  SignalScenario(DecisionTree tree, EmpiricalModel model);

  const DecisionTree& tree() const { return tree_; }
  const EmpiricalModel& model() const { return model_; }

  // Site observed on the given 1-based visit, -1 when the set has no signal.
  // Throws PolicyError when the set has visit sites but none for this visit.
  int site_for(int ordinal, int visit) const;
  bool has_signal(int ordinal) const { return !bindings_.at(ordinal).empty(); }
  int alphabet_size(int ordinal) const;

  void set_nature_joint(std::vector<NatureSignalPoint> points);
  const std::optional<std::vector<NatureSignalPoint>>& nature_joint() const { return nature_joint_; }

  // Root-to-terminal site sets that no single context covers.
  std::vector<std::string> coverage_problems() const;

 private:
  DecisionTree tree_;
  EmpiricalModel model_;
  std::vector<std::vector<int>> bindings_;  // [ordinal][visit - 1] -> site
  bool visit_indexed_ = false;
  std::vector<bool> per_visit_;
  std::optional<std::vector<NatureSignalPoint>> nature_joint_;
};

double evaluate_policy(const SignalScenario& scenario, const ResponsePolicy& policy);
double evaluate_policy(const SignalScenario& scenario, const BehavioralPolicy& policy);

// Policies in lexicographic order over decision sets, then outcomes.
std::vector<ResponsePolicy> enumerate_policies(const SignalScenario& scenario,
                                               std::size_t cap = kDefaultEnumerationCap);

struct PolicyOptimum {
  double value = 0.0;
  std::vector<ResponsePolicy> argmax;
};

PolicyOptimum optimize_policy(const SignalScenario& scenario, double tol = kDefaultTolerance,
                              std::size_t cap = kDefaultEnumerationCap);

// sum over strategies m of (mu o f^-1)(m) * pi(m). Requires a Kuhn tree; each
// decision set reads the joint's site named after it (or none).
double pushforward_payoff(const JointSignalMeasure& joint, const ResponsePolicy& policy,
                          const DecisionTree& tree);

struct ExchangeableOptimum {
  double value = 0.0;
  JointSignalMeasure distribution;  // over the repeated set's visit sites
  ResponsePolicy policy;
  std::string info_set;             // the repeated set
};

// Best payoff over all exchangeable classical distributions of `alphabet`
// signals on the visits of the single repeated decision set, with one response
// map shared by its visits. Other decision sets play pure choices. Each
// candidate map is scored by an LP over the exchangeable polytope.
ExchangeableOptimum classical_exchangeable_optimum(const DecisionTree& tree, int alphabet,
                                                   int max_visits,
                                                   double tol = kDefaultTolerance,
                                                   std::size_t cap = kDefaultEnumerationCap);

// Max crossings of each decision set along any single path, by ordinal.
std::vector<int> max_visits_per_set(const DecisionTree& tree);

// Policies rendered as {site-or-set: {outcome: move}}.
std::string describe(const ResponsePolicy& policy, const SignalScenario& scenario);

}  // namespace sigtree
