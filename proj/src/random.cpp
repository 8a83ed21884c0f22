#include "sigtree/random.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

#include "sigtree/play.hpp"

namespace sigtree::gen {

namespace {

struct Proto {
  NodeKind kind = NodeKind::terminal;
  int parent = -1;
  int depth = 0;
  int branch_from_parent = 0;  // 1-based
  std::vector<int> children;
  double payoff = 0.0;
  std::vector<double> probs;
  int set = -1;
};

bool is_ancestor(const std::vector<Proto>& p, int anc, int n) {
  for (int cur = p[n].parent; cur >= 0; cur = p[cur].parent)
    if (cur == anc) return true;
  return false;
}

// Own-choice history: (set, branch) for every decision ancestor, root first.
std::vector<std::pair<int, int>> history(const std::vector<Proto>& p, int n) {
  std::vector<std::pair<int, int>> h;
  for (int child = n, cur = p[n].parent; cur >= 0; child = cur, cur = p[cur].parent)
    if (p[cur].kind == NodeKind::decision) h.emplace_back(p[cur].set, p[child].branch_from_parent);
  std::reverse(h.begin(), h.end());
  return h;
}

std::optional<DecisionTree> draw_once(Rng& rng, const TreeOptions& opt) {
  std::vector<Proto> protos;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> payoff(-opt.payoff_range, opt.payoff_range);

  std::function<int(int, int, int)> make = [&](int depth, int parent, int branch) {
    int idx = static_cast<int>(protos.size());
    protos.push_back(Proto{});
    protos[idx].parent = parent;
    protos[idx].depth = depth;
    protos[idx].branch_from_parent = branch;

    int fanout = std::uniform_int_distribution<int>(2, std::max(2, opt.max_branching))(rng);
    bool forced_chance = depth == 0 && opt.root_chance_branches > 0;
    if (forced_chance) fanout = opt.root_chance_branches;
    bool leaf = depth >= opt.max_depth || protos.size() + static_cast<std::size_t>(fanout) > opt.max_nodes ||
                (depth > 0 && unit(rng) < 0.3);
    if (leaf && depth > 0) {
      protos[idx].kind = NodeKind::terminal;
      protos[idx].payoff = payoff(rng);
      return idx;
    }
    protos[idx].kind = forced_chance || unit(rng) < 0.3 ? NodeKind::chance : NodeKind::decision;
    if (protos[idx].kind == NodeKind::chance) {
      std::vector<double> w(static_cast<std::size_t>(fanout));
      for (auto& x : w) x = 0.1 + unit(rng);
      double sum = 0.0;
      for (double x : w) sum += x;
      for (auto& x : w) x /= sum;
      protos[idx].probs = w;
    }
    for (int b = 1; b <= fanout; ++b) {
      int c = make(depth + 1, idx, b);
      protos[idx].children.push_back(c);
    }
    return idx;
  };
  make(0, -1, 0);
  if (protos.size() > opt.max_nodes) return std::nullopt;

  // Decision nodes by depth, so ancestors get their sets first.
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(protos.size()); ++i)
    if (protos[i].kind == NodeKind::decision) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return protos[a].depth < protos[b].depth; });

  std::vector<std::vector<int>> sets;
  for (int n : order) {
    std::vector<int> candidates;
    for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
      int rep = sets[s].front();
      if (protos[rep].children.size() != protos[n].children.size()) continue;
      bool related = std::any_of(sets[s].begin(), sets[s].end(), [&](int m) {
        return is_ancestor(protos, m, n) || is_ancestor(protos, n, m);
      });
      if (related) continue;
      if (opt.recall == Recall::perfect && history(protos, rep) != history(protos, n)) continue;
      candidates.push_back(s);
    }
    if (!candidates.empty() && unit(rng) < opt.merge_probability) {
      int s = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
      sets[s].push_back(n);
      protos[n].set = s;
    } else {
      protos[n].set = static_cast<int>(sets.size());
      sets.push_back({n});
    }
  }
  if (sets.size() > opt.max_decision_sets) return std::nullopt;

  // Build in preorder; names follow first appearance.
  TreeBuilder builder;
  std::vector<int> set_name(sets.size(), -1);
  int next_set = 0, next_chance = 0;
  std::vector<NodeRef> refs(protos.size());
  std::vector<std::pair<std::string, std::vector<double>>> chance_probs;
  std::function<void(int)> emit = [&](int i) {
    const auto& p = protos[i];
    std::string id = "n" + std::to_string(i);
    if (p.kind == NodeKind::terminal) {
      refs[i] = builder.add_terminal(id, p.payoff);
    } else if (p.kind == NodeKind::chance) {
      std::string name = "J" + std::to_string(next_chance++);
      refs[i] = builder.add_chance(id, name);
      chance_probs.emplace_back(name, p.probs);
    } else {
      if (set_name[p.set] < 0) set_name[p.set] = next_set++;
      refs[i] = builder.add_decision(id, "I" + std::to_string(set_name[p.set]));
    }
    for (int c : p.children) emit(c);
  };
  emit(0);
  for (int i = 0; i < static_cast<int>(protos.size()); ++i) {
    const auto& p = protos[i];
    for (std::size_t b = 0; b < p.children.size(); ++b) {
      std::string label = std::string(1, static_cast<char>('a' + b));
      builder.add_edge(refs[i], refs[p.children[b]], label, static_cast<int>(b) + 1);
    }
  }
  for (auto& [name, probs] : chance_probs) builder.set_probs(name, probs);
  DecisionTree tree = builder.build();

  std::size_t worlds = 1;
  for (auto s : tree.chance_sets()) worlds *= static_cast<std::size_t>(tree.branch_count(s));
  if (worlds > opt.max_world_states) return std::nullopt;
  std::size_t policies = 1;
  for (auto s : tree.decision_sets()) {
    auto b = static_cast<std::size_t>(tree.branch_count(s));
    policies *= b * b;
    if (policies > opt.max_policies) return std::nullopt;
  }

  if (opt.recall != Recall::any) {
    bool perfect = has_perfect_recall(tree).perfect_recall;
    if (perfect != (opt.recall == Recall::perfect)) return std::nullopt;
  }
  return tree;
}

}  // namespace

DecisionTree random_kuhn_tree(Rng& rng, const TreeOptions& options) {
  for (int attempt = 0; attempt < 100000; ++attempt)
    if (auto t = draw_once(rng, options)) return std::move(*t);
  throw std::runtime_error("random_kuhn_tree: no tree satisfied the options");
}

std::vector<double> random_distribution(Rng& rng, std::size_t n, double zero_probability) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  for (auto& x : w) {
    x = unit(rng) < zero_probability ? 0.0 : expo(rng);
    sum += x;
  }
  if (sum == 0.0) {
    w[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    return w;
  }
  for (auto& x : w) x /= sum;
  return w;
}

std::vector<Site> binary_sites(const DecisionTree& tree, const std::vector<int>& ordinals) {
  std::vector<Site> sites;
  for (int ord : ordinals) {
    const auto& name = tree.info_set(tree.decision_sets()[ord]).name;
    sites.push_back(Site{name, name, std::nullopt, {"0", "1"}});
  }
  return sites;
}

JointSignalMeasure random_joint(Rng& rng, std::vector<Site> sites) {
  std::size_t size = 1;
  for (const auto& s : sites) size *= s.alphabet.size();
  JointSignalMeasure mu{std::move(sites), {}};
  mu.probs = random_distribution(rng, size);
  return mu;
}

std::vector<std::vector<int>> path_site_sets(const DecisionTree& tree) {
  std::vector<std::vector<int>> sets;
  for (const auto& path : all_paths(tree)) {
    std::vector<int> s;
    for (auto n : path) {
      const auto& node = tree.node(n);
      if (node.kind != NodeKind::decision) continue;
      int ord = tree.info_set(*node.info_set).ordinal;
      if (std::find(s.begin(), s.end(), ord) == s.end()) s.push_back(ord);
    }
    if (!s.empty()) sets.push_back(std::move(s));
  }
  auto contains = [](const std::vector<int>& big, const std::vector<int>& small) {
    return std::all_of(small.begin(), small.end(), [&](int x) {
      return std::find(big.begin(), big.end(), x) != big.end();
    });
  };
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sets.size() && !dominated; ++j) {
      if (i == j || !contains(sets[j], sets[i])) continue;
      // Equal sets: keep the first copy only.
      dominated = sets[j].size() > sets[i].size() || j < i;
    }
    if (!dominated) out.push_back(sets[i]);
  }
  return out;
}

RandomBox random_no_signaling_box(Rng& rng, const DecisionTree& tree) {
  const int n = static_cast<int>(tree.decision_sets().size());
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[i] = i;
  auto mu = random_joint(rng, binary_sites(tree, all));
  auto contexts = path_site_sets(tree);

  std::vector<std::vector<bool>> together(n, std::vector<bool>(n, false));
  for (const auto& c : contexts)
    for (int a : c)
      for (int b : c) together[a][b] = true;

  std::vector<std::array<int, 4>> quads;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (c == a || c == b || d == a || d == b || a > c) continue;
          if (together[a][c] || together[a][d] || together[b][c] || together[b][d]) continue;
          quads.push_back({a, b, c, d});
        }

  RandomBox box;
  std::vector<Context> ctxs;
  if (quads.empty()) {
    for (const auto& c : contexts) ctxs.push_back(Context{c, joint_marginal(mu, c)});
    box.model = EmpiricalModel(mu.sites, std::move(ctxs));
    return box;
  }

  auto q = quads[std::uniform_int_distribution<std::size_t>(0, quads.size() - 1)(rng)];
  // Average with the all-four-flipped copy: uniform marginals on A, B, C, D.
  std::vector<int> flip_mask(static_cast<std::size_t>(n), 0);
  for (int s : q) flip_mask[s] = 1;
  std::vector<double> sym(mu.probs.size(), 0.0);
  for (std::size_t flat = 0; flat < mu.probs.size(); ++flat) {
    auto digits = mu.decode(flat);
    for (int s = 0; s < n; ++s) digits[s] ^= flip_mask[s];
    sym[flat] += 0.5 * mu.probs[flat];
    sym[mu.encode(digits)] += 0.5 * mu.probs[flat];
  }
  mu.probs = sym;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  box.has_pr_cycle = true;
  box.pr_weight = unit(rng) < 0.5 ? 1.0 : unit(rng);
  for (const auto& c : contexts) ctxs.push_back(Context{c, joint_marginal(mu, c)});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::vector<int> sites{q[x], q[2 + y]};
      auto classical = joint_marginal(mu, sites);
      std::vector<double> probs(4);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double pr = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
          probs[2 * a + b] = box.pr_weight * pr + (1.0 - box.pr_weight) * classical[2 * a + b];
        }
      ctxs.push_back(Context{sites, probs});
    }
  box.model = EmpiricalModel(mu.sites, std::move(ctxs));
  return box;
}

}  // namespace sigtree::gen
