#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigtree {

inline constexpr double kDefaultTolerance = 1e-9;

struct NodeRef {
  int index = -1;
  auto operator<=>(const NodeRef&) const = default;
};

struct InfoSetRef {
  int index = -1;
  auto operator<=>(const InfoSetRef&) const = default;
};

enum class NodeKind { decision, chance, terminal };

const char* to_string(NodeKind kind);

// Thrown for structurally unusable input: dangling references, unknown ids,
// malformed files. Def-level defects of a well-formed tree are reported by
// validate_tree() instead.
class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Branch {
  NodeRef child;
  std::string label;
  int index = 0;  // 1-based, shared across the nodes of an information set
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::terminal;
  std::optional<InfoSetRef> info_set;
  double payoff = 0.0;
  std::vector<Branch> branches;  // sorted by index
  std::vector<NodeRef> parents;
};

struct InfoSet {
  std::string name;
  NodeKind kind = NodeKind::decision;
  int ordinal = 0;  // position among sets of the same kind
  std::vector<NodeRef> members;
  std::vector<double> probs;  // chance sets only, one per branch index
};

class TreeBuilder;

// Immutable finite decision tree against Nature. Decision and chance sets are
// kept in declaration order; that order fixes the layout of Strategy and
// WorldState vectors.
class DecisionTree {
 public:
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeRef ref) const { return nodes_.at(ref.index); }
  std::span<const Node> nodes() const { return nodes_; }

  std::size_t info_set_count() const { return sets_.size(); }
  const InfoSet& info_set(InfoSetRef ref) const { return sets_.at(ref.index); }
  std::span<const InfoSetRef> decision_sets() const { return decision_sets_; }
  std::span<const InfoSetRef> chance_sets() const { return chance_sets_; }

  // First parentless node; validate_tree() reports when there is not exactly one.
  NodeRef root() const { return root_; }

  std::optional<NodeRef> find_node(const std::string& id) const;
  std::optional<InfoSetRef> find_info_set(const std::string& name) const;
  NodeRef node_ref(const std::string& id) const;
  InfoSetRef info_set_ref(const std::string& name) const;

  // Number of outgoing branches of the set's first member.
  int branch_count(InfoSetRef set) const;
  const std::string& branch_label(InfoSetRef set, int branch_index) const;
  // Child reached from `node` along 1-based branch index, if present.
  std::optional<NodeRef> child(NodeRef node, int branch_index) const;

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
  std::vector<InfoSet> sets_;
  std::vector<InfoSetRef> decision_sets_;
  std::vector<InfoSetRef> chance_sets_;
  NodeRef root_;
};

class TreeBuilder {
 public:
  NodeRef add_decision(const std::string& id, const std::string& info_set);
  NodeRef add_chance(const std::string& id, const std::string& info_set);
  NodeRef add_terminal(const std::string& id, double payoff);

  // branch_index 0 appends after the node's current branches.
  TreeBuilder& add_edge(NodeRef from, NodeRef to, const std::string& label,
                        int branch_index = 0);
  TreeBuilder& add_edge(const std::string& from, const std::string& to,
                        const std::string& label, int branch_index = 0);
  TreeBuilder& set_probs(const std::string& chance_set, std::vector<double> probs);

  // Rejects duplicate ids, dangling edges, duplicate branch indices and
  // probabilities attached to unknown or non-chance sets.
  DecisionTree build() const;

 private:
  struct PendingEdge {
    int from;
    int to;
    std::string label;
    int index;
  };
  NodeRef add_node(const std::string& id, NodeKind kind, const std::string& set,
                   double payoff);

  std::vector<Node> nodes_;
  std::vector<std::string> node_sets_;
  std::vector<PendingEdge> edges_;
  std::vector<std::pair<std::string, std::vector<double>>> probs_;
};

// ---- structural analysis ---------------------------------------------------

struct Violation {
  std::string code;  // e.g. "branch_count_mismatch"
  std::string message;
};

// Checks every tree condition except the at-most-once crossing condition,
// which is_kuhn() reports separately. An empty result means valid.
std::vector<Violation> validate_tree(const DecisionTree& tree,
                                     double tol = kDefaultTolerance);

struct KuhnReport {
  bool kuhn = true;
  std::vector<NodeRef> offending_path;  // root .. second crossing
  std::optional<InfoSetRef> offending_set;
};

KuhnReport is_kuhn(const DecisionTree& tree);

// Choice per decision set (1-based), indexed by InfoSet::ordinal.
struct Strategy {
  std::vector<int> choices;
  auto operator<=>(const Strategy&) const = default;
};

// Nature's choice per chance set (1-based), with the product probability.
struct WorldState {
  std::vector<int> choices;
  double probability = 1.0;
};

bool allowed_under(NodeRef node, const Strategy& s, const DecisionTree& tree);
bool allowed_under(InfoSetRef set, const Strategy& s, const DecisionTree& tree);

// Every node on some path consistent with `s` (and any Nature behaviour).
std::vector<bool> allowed_nodes(const Strategy& s, const DecisionTree& tree);

struct RecallReport {
  bool perfect_recall = true;
  std::optional<Strategy> strategy;
  std::optional<InfoSetRef> info_set;
  std::optional<NodeRef> allowed;      // n
  std::optional<NodeRef> not_allowed;  // n*
};

RecallReport has_perfect_recall(const DecisionTree& tree,
                                std::size_t strategy_cap = 1'000'000);

// Some node of `earlier` is a proper ancestor of some node of `later`.
// On non-Kuhn trees this can hold with earlier == later.
bool precedes(InfoSetRef earlier, InfoSetRef later, const DecisionTree& tree);

struct PredecessorResult {
  std::optional<InfoSetRef> predecessor;
  // Set when more than one immediate predecessor exists, which can only
  // happen without perfect recall or with trivial decision nodes.
  std::vector<InfoSetRef> ambiguous;
  bool ok() const { return ambiguous.empty(); }
};

PredecessorResult immediate_predecessor(InfoSetRef set, const DecisionTree& tree);

// Decision nodes with fewer than two branches.
bool all_decision_nodes_nontrivial(const DecisionTree& tree);

// [I]: the world states under which some strategy reaches the set, in the
// enumeration order of enumerate_world_states().
std::vector<WorldState> info_event(InfoSetRef set, const DecisionTree& tree,
                                   std::size_t cap = 1'000'000);

// Root-to-terminal node paths, left to right.
std::vector<std::vector<NodeRef>> all_paths(const DecisionTree& tree);

}  // namespace sigtree
