#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sigtree/policy.hpp"
#include "sigtree/quantum.hpp"
#include "sigtree/signals.hpp"
#include "sigtree/tree.hpp"

namespace sigtree::io {

using Json = nlohmann::json;

// Unreadable file or JSON that does not fit the expected schema.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);

// { nodes: [{id, kind: "dm"|"nature"|"terminal", info_set?, payoff?}],
//   edges: [{from, to, branch_label, branch_index}],
//   nature_probs: {info_set: [p1..pk]} }
Json tree_to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const Json& j);

// { sites: [{id, info_set, visit_index?, alphabet}], contexts: [[site ids]],
//   distributions: {"W,N": {"GR": p, ...}} }. Missing outcomes read as 0.
Json model_to_json(const EmpiricalModel& model);
EmpiricalModel model_from_json(const Json& j);

Json joint_to_json(const JointSignalMeasure& joint);

Json hardy_to_json(const quantum::HardyInstance& h);

// {info_set: {outcome: move}}; sets without a signal use the key "*".
Json policy_to_json(const ResponsePolicy& policy, const SignalScenario& scenario);

Json strategy_to_json(const Strategy& s, const DecisionTree& tree);

}  // namespace sigtree::io
