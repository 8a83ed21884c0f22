#include "sigtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "sigtree/play.hpp"

namespace sigtree {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::decision:
      return "dm";
    case NodeKind::chance:
      return "nature";
    case NodeKind::terminal:
      return "terminal";
  }
  return "?";
}

// ---- DecisionTree ----------------------------------------------------------

std::optional<NodeRef> DecisionTree::find_node(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return NodeRef{static_cast<int>(i)};
  return std::nullopt;
}

std::optional<InfoSetRef> DecisionTree::find_info_set(const std::string& name) const {
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (sets_[i].name == name) return InfoSetRef{static_cast<int>(i)};
  return std::nullopt;
}

NodeRef DecisionTree::node_ref(const std::string& id) const {
  auto ref = find_node(id);
  if (!ref) throw TreeError("unknown node '" + id + "'");
  return *ref;
}

InfoSetRef DecisionTree::info_set_ref(const std::string& name) const {
  auto ref = find_info_set(name);
  if (!ref) throw TreeError("unknown information set '" + name + "'");
  return *ref;
}

int DecisionTree::branch_count(InfoSetRef set) const {
  const auto& members = info_set(set).members;
  if (members.empty()) return 0;
  return static_cast<int>(node(members.front()).branches.size());
}

const std::string& DecisionTree::branch_label(InfoSetRef set, int branch_index) const {
  const auto& first = node(info_set(set).members.front());
  for (const auto& b : first.branches)
    if (b.index == branch_index) return b.label;
  throw TreeError("branch " + std::to_string(branch_index) + " out of range for '" +
                  info_set(set).name + "'");
}

std::optional<NodeRef> DecisionTree::child(NodeRef n, int branch_index) const {
  for (const auto& b : node(n).branches)
    if (b.index == branch_index) return b.child;
  return std::nullopt;
}

// ---- TreeBuilder -----------------------------------------------------------

NodeRef TreeBuilder::add_node(const std::string& id, NodeKind kind,
                              const std::string& set, double payoff) {
  Node n;
  n.id = id;
  n.kind = kind;
  n.payoff = payoff;
  nodes_.push_back(std::move(n));
  node_sets_.push_back(set);
  return NodeRef{static_cast<int>(nodes_.size() - 1)};
}

NodeRef TreeBuilder::add_decision(const std::string& id, const std::string& info_set) {
  return add_node(id, NodeKind::decision, info_set, 0.0);
}

NodeRef TreeBuilder::add_chance(const std::string& id, const std::string& info_set) {
  return add_node(id, NodeKind::chance, info_set, 0.0);
}

NodeRef TreeBuilder::add_terminal(const std::string& id, double payoff) {
  return add_node(id, NodeKind::terminal, "", payoff);
}

TreeBuilder& TreeBuilder::add_edge(NodeRef from, NodeRef to, const std::string& label,
                                   int branch_index) {
  edges_.push_back({from.index, to.index, label, branch_index});
  return *this;
}

TreeBuilder& TreeBuilder::add_edge(const std::string& from, const std::string& to,
                                   const std::string& label, int branch_index) {
  auto lookup = [&](const std::string& id) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].id == id) return static_cast<int>(i);
    throw TreeError("edge references unknown node '" + id + "'");
  };
  edges_.push_back({lookup(from), lookup(to), label, branch_index});
  return *this;
}

TreeBuilder& TreeBuilder::set_probs(const std::string& chance_set, std::vector<double> probs) {
  probs_.emplace_back(chance_set, std::move(probs));
  return *this;
}

DecisionTree TreeBuilder::build() const {
  DecisionTree tree;
  tree.nodes_ = nodes_;
  const int n = static_cast<int>(nodes_.size());

  std::map<std::string, int> ids;
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].id.empty()) throw TreeError("node " + std::to_string(i) + " has no id");
    if (!ids.emplace(nodes_[i].id, i).second)
      throw TreeError("duplicate node id '" + nodes_[i].id + "'");
  }

  for (int i = 0; i < n; ++i) {
    const auto& set_name = node_sets_[i];
    auto kind = nodes_[i].kind;
    if (kind == NodeKind::terminal) {
      if (!set_name.empty())
        throw TreeError("terminal node '" + nodes_[i].id + "' assigned to an information set");
      continue;
    }
    if (set_name.empty())
      throw TreeError("node '" + nodes_[i].id + "' has no information set");
    auto found = std::find_if(tree.sets_.begin(), tree.sets_.end(),
                              [&](const InfoSet& s) { return s.name == set_name; });
    if (found == tree.sets_.end()) {
      InfoSet s;
      s.name = set_name;
      s.kind = kind;
      auto& bucket = kind == NodeKind::decision ? tree.decision_sets_ : tree.chance_sets_;
      s.ordinal = static_cast<int>(bucket.size());
      bucket.push_back(InfoSetRef{static_cast<int>(tree.sets_.size())});
      tree.sets_.push_back(std::move(s));
      found = tree.sets_.end() - 1;
    } else if (found->kind != kind) {
      throw TreeError("information set '" + set_name + "' mixes decision and chance nodes");
    }
    found->members.push_back(NodeRef{i});
    tree.nodes_[i].info_set = InfoSetRef{static_cast<int>(found - tree.sets_.begin())};
  }

  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw TreeError("edge references a node outside the tree");
    auto& from = tree.nodes_[e.from];
    int index = e.index > 0 ? e.index : static_cast<int>(from.branches.size()) + 1;
    for (const auto& b : from.branches)
      if (b.index == index)
        throw TreeError("node '" + from.id + "' has two branches with index " +
                        std::to_string(index));
    from.branches.push_back({NodeRef{e.to}, e.label, index});
    tree.nodes_[e.to].parents.push_back(NodeRef{e.from});
  }
  for (auto& node : tree.nodes_)
    std::sort(node.branches.begin(), node.branches.end(),
              [](const Branch& a, const Branch& b) { return a.index < b.index; });

  for (const auto& [name, probs] : probs_) {
    auto found = std::find_if(tree.sets_.begin(), tree.sets_.end(),
                              [&](const InfoSet& s) { return s.name == name; });
    if (found == tree.sets_.end())
      throw TreeError("probabilities given for unknown information set '" + name + "'");
    if (found->kind != NodeKind::chance)
      throw TreeError("probabilities given for decision set '" + name + "'");
    found->probs = probs;
  }

  tree.root_ = NodeRef{0};
  for (int i = 0; i < n; ++i) {
    if (tree.nodes_[i].parents.empty()) {
      tree.root_ = NodeRef{i};
      break;
    }
  }
  return tree;
}

// ---- validation ------------------------------------------------------------

std::vector<Violation> validate_tree(const DecisionTree& tree, double tol) {
  std::vector<Violation> out;
  auto report = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  if (tree.node_count() == 0) {
    report("empty_tree", "tree has no nodes");
    return out;
  }

  int roots = 0;
  for (const auto& node : tree.nodes()) {
    if (node.parents.empty()) ++roots;
    if (node.parents.size() > 1)
      report("multiple_parents", "node '" + node.id + "' has " +
                                     std::to_string(node.parents.size()) + " parents");
    if (node.kind == NodeKind::terminal && !node.branches.empty())
      report("terminal_with_children", "terminal node '" + node.id + "' has outgoing branches");
    if (node.kind != NodeKind::terminal && node.branches.empty())
      report("nonterminal_leaf", "leaf '" + node.id + "' is not a terminal node");
    if (node.kind == NodeKind::terminal && !std::isfinite(node.payoff))
      report("bad_payoff", "terminal '" + node.id + "' has a non-finite payoff");
    for (std::size_t k = 0; k < node.branches.size(); ++k)
      if (node.branches[k].index != static_cast<int>(k) + 1) {
        report("branch_numbering", "branches of '" + node.id + "' are not numbered 1..k");
        break;
      }
  }
  if (roots != 1)
    report("root_count", "expected exactly one root, found " + std::to_string(roots));

  // Every node must be reachable from the root (rules out cycles once the
  // single-parent condition holds).
  if (roots == 1) {
    std::vector<bool> seen(tree.node_count(), false);
    std::vector<NodeRef> stack{tree.root()};
    std::size_t visited = 0;
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      if (seen[cur.index]) continue;
      seen[cur.index] = true;
      ++visited;
      for (const auto& b : tree.node(cur).branches) stack.push_back(b.child);
    }
    if (visited != tree.node_count())
      report("unreachable_nodes", std::to_string(tree.node_count() - visited) +
                                      " node(s) not reachable from the root");
  }

  for (std::size_t i = 0; i < tree.info_set_count(); ++i) {
    const auto& set = tree.info_set(InfoSetRef{static_cast<int>(i)});
    std::size_t expected = tree.node(set.members.front()).branches.size();
    for (auto m : set.members) {
      if (tree.node(m).branches.size() != expected) {
        report("branch_count_mismatch",
               "information set '" + set.name + "': node '" + tree.node(m).id + "' has " +
                   std::to_string(tree.node(m).branches.size()) + " branches, expected " +
                   std::to_string(expected));
        break;
      }
    }
    if (set.kind == NodeKind::chance) {
      if (set.probs.size() != expected) {
        report("nature_probs", "chance set '" + set.name + "' has " +
                                   std::to_string(set.probs.size()) + " probabilities for " +
                                   std::to_string(expected) + " branches");
        continue;
      }
      double sum = 0.0;
      bool negative = false;
      for (double p : set.probs) {
        sum += p;
        negative = negative || p < 0.0 || !std::isfinite(p);
      }
      if (negative)
        report("nature_probs", "chance set '" + set.name + "' has a negative probability");
      if (std::abs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << "chance set '" << set.name << "' probabilities sum to " << sum;
        report("nature_probs", msg.str());
      }
    }
  }
  return out;
}

// ---- paths -----------------------------------------------------------------

std::vector<std::vector<NodeRef>> all_paths(const DecisionTree& tree) {
  std::vector<std::vector<NodeRef>> out;
  std::vector<NodeRef> path;
  std::function<void(NodeRef)> walk = [&](NodeRef n) {
    path.push_back(n);
    const auto& node = tree.node(n);
    if (node.branches.empty()) out.push_back(path);
    for (const auto& b : node.branches) walk(b.child);
    path.pop_back();
  };
  walk(tree.root());
  return out;
}

KuhnReport is_kuhn(const DecisionTree& tree) {
  KuhnReport report;
  std::vector<int> crossings(tree.info_set_count(), 0);
  std::vector<NodeRef> path;
  std::function<bool(NodeRef)> walk = [&](NodeRef n) {
    path.push_back(n);
    const auto& node = tree.node(n);
    if (node.info_set && ++crossings[node.info_set->index] > 1) {
      report.kuhn = false;
      report.offending_set = node.info_set;
      report.offending_path = path;
      return true;
    }
    for (const auto& b : node.branches)
      if (walk(b.child)) return true;
    if (node.info_set) --crossings[node.info_set->index];
    path.pop_back();
    return false;
  };
  walk(tree.root());
  return report;
}

namespace {

// Marks every node lying on a path along which each information set's choice
// is either fixed (by the supplied vectors) or chosen once and then held.
// A -1 entry leaves the choice free. Holding choices per path makes this
// exact on non-Kuhn trees too.
void mark_reachable(const DecisionTree& tree, const std::vector<int>& dm_fixed,
                    const std::vector<int>& nature_fixed, std::vector<bool>& marks) {
  std::vector<int> dm = dm_fixed;
  std::vector<int> nature = nature_fixed;
  std::function<void(NodeRef)> walk = [&](NodeRef n) {
    marks[n.index] = true;
    const auto& node = tree.node(n);
    if (node.kind == NodeKind::terminal) return;
    const auto& set = tree.info_set(*node.info_set);
    auto& slot = (set.kind == NodeKind::decision ? dm : nature)[set.ordinal];
    if (slot > 0) {
      if (auto c = tree.child(n, slot)) walk(*c);
      return;
    }
    for (const auto& b : node.branches) {
      slot = b.index;
      walk(b.child);
    }
    slot = -1;
  };
  walk(tree.root());
}

}  // namespace

std::vector<bool> allowed_nodes(const Strategy& s, const DecisionTree& tree) {
  std::vector<bool> marks(tree.node_count(), false);
  std::vector<int> free(tree.chance_sets().size(), -1);
  mark_reachable(tree, s.choices, free, marks);
  return marks;
}

bool allowed_under(NodeRef node, const Strategy& s, const DecisionTree& tree) {
  return allowed_nodes(s, tree)[node.index];
}

bool allowed_under(InfoSetRef set, const Strategy& s, const DecisionTree& tree) {
  auto marks = allowed_nodes(s, tree);
  const auto& members = tree.info_set(set).members;
  return std::any_of(members.begin(), members.end(),
                     [&](NodeRef n) { return marks[n.index]; });
}

RecallReport has_perfect_recall(const DecisionTree& tree, std::size_t strategy_cap) {
  RecallReport report;
  for (const auto& s : enumerate_strategies(tree, strategy_cap)) {
    auto marks = allowed_nodes(s, tree);
    for (auto set_ref : tree.decision_sets()) {
      const auto& members = tree.info_set(set_ref).members;
      auto yes = std::find_if(members.begin(), members.end(),
                              [&](NodeRef n) { return marks[n.index]; });
      auto no = std::find_if(members.begin(), members.end(),
                             [&](NodeRef n) { return !marks[n.index]; });
      if (yes != members.end() && no != members.end()) {
        report.perfect_recall = false;
        report.strategy = s;
        report.info_set = set_ref;
        report.allowed = *yes;
        report.not_allowed = *no;
        return report;
      }
    }
  }
  return report;
}

namespace {

bool is_proper_ancestor(NodeRef ancestor, NodeRef n, const DecisionTree& tree) {
  NodeRef cur = n;
  while (!tree.node(cur).parents.empty()) {
    cur = tree.node(cur).parents.front();
    if (cur == ancestor) return true;
  }
  return false;
}

}  // namespace

bool precedes(InfoSetRef earlier, InfoSetRef later, const DecisionTree& tree) {
  for (auto n : tree.info_set(earlier).members)
    for (auto m : tree.info_set(later).members)
      if (is_proper_ancestor(n, m, tree)) return true;
  return false;
}

PredecessorResult immediate_predecessor(InfoSetRef set, const DecisionTree& tree) {
  std::vector<InfoSetRef> preds;
  for (auto other : tree.decision_sets())
    if (other != set && precedes(other, set, tree)) preds.push_back(other);

  std::vector<InfoSetRef> immediate;
  for (auto p : preds) {
    bool shadowed = std::any_of(preds.begin(), preds.end(), [&](InfoSetRef q) {
      return q != p && precedes(p, q, tree);
    });
    if (!shadowed) immediate.push_back(p);
  }

  PredecessorResult result;
  if (immediate.size() == 1) result.predecessor = immediate.front();
  if (immediate.size() > 1) result.ambiguous = std::move(immediate);
  return result;
}

bool all_decision_nodes_nontrivial(const DecisionTree& tree) {
  for (const auto& node : tree.nodes())
    if (node.kind == NodeKind::decision && node.branches.size() < 2) return false;
  return true;
}

std::vector<WorldState> info_event(InfoSetRef set, const DecisionTree& tree,
                                   std::size_t cap) {
  std::vector<WorldState> out;
  std::vector<int> free(tree.decision_sets().size(), -1);
  const auto& members = tree.info_set(set).members;
  for (auto& w : enumerate_world_states(tree, cap)) {
    std::vector<bool> marks(tree.node_count(), false);
    mark_reachable(tree, free, w.choices, marks);
    if (std::any_of(members.begin(), members.end(),
                    [&](NodeRef n) { return marks[n.index]; }))
      out.push_back(std::move(w));
  }
  return out;
}

}  // namespace sigtree
