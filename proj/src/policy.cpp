#include "sigtree/policy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "sigtree/lp.hpp"

namespace sigtree {

// ---- SignalScenario --------------------------------------------------------

SignalScenario::SignalScenario(DecisionTree tree, EmpiricalModel model)
    : tree_(std::move(tree)), model_(std::move(model)) {
  const auto dm_sets = tree_.decision_sets();
  bindings_.assign(dm_sets.size(), {});
  per_visit_.assign(dm_sets.size(), false);
  std::vector<std::vector<std::pair<int, int>>> visits(dm_sets.size());
  std::vector<int> plain(dm_sets.size(), -1);

  for (std::size_t i = 0; i < model_.sites().size(); ++i) {
    const auto& site = model_.site(static_cast<int>(i));
    auto set = tree_.find_info_set(site.info_set);
    if (!set) throw PolicyError("site '" + site.id + "' names unknown information set '" + site.info_set + "'");
    const auto& info = tree_.info_set(*set);
    if (info.kind != NodeKind::decision)
      throw PolicyError("site '" + site.id + "' is bound to chance set '" + site.info_set + "'");
    if (site.visit_index) {
      if (*site.visit_index < 1) throw PolicyError("site '" + site.id + "' has visit index < 1");
      visits[info.ordinal].emplace_back(*site.visit_index, static_cast<int>(i));
    } else {
      if (plain[info.ordinal] >= 0)
        throw PolicyError("information set '" + info.name + "' has two signal sites");
      plain[info.ordinal] = static_cast<int>(i);
    }
  }

  for (std::size_t k = 0; k < dm_sets.size(); ++k) {
    const auto& name = tree_.info_set(dm_sets[k]).name;
    if (plain[k] >= 0 && !visits[k].empty())
      throw PolicyError("information set '" + name + "' mixes plain and visit-indexed sites");
    if (plain[k] >= 0) {
      bindings_[k] = {plain[k]};
      continue;
    }
    std::sort(visits[k].begin(), visits[k].end());
    for (std::size_t j = 0; j < visits[k].size(); ++j) {
      if (visits[k][j].first != static_cast<int>(j) + 1)
        throw PolicyError("visit sites of '" + name + "' are not numbered 1..v");
      if (model_.site(visits[k][j].second).alphabet != model_.site(visits[k][0].second).alphabet)
        throw PolicyError("visit sites of '" + name + "' must share one alphabet");
      bindings_[k].push_back(visits[k][j].second);
    }
    per_visit_[k] = !visits[k].empty();
  }
}

int SignalScenario::site_for(int ordinal, int visit) const {
  const auto& b = bindings_.at(ordinal);
  if (b.empty()) return -1;
  if (!per_visit_[ordinal]) return b.front();
  if (visit < 1 || visit > static_cast<int>(b.size()))
    throw PolicyError("information set '" + tree_.info_set(tree_.decision_sets()[ordinal]).name +
                      "' reached on visit " + std::to_string(visit) + " with no site bound");
  return b[visit - 1];
}

int SignalScenario::alphabet_size(int ordinal) const {
  const auto& b = bindings_.at(ordinal);
  if (b.empty()) return 1;
  return static_cast<int>(model_.site(b.front()).alphabet.size());
}

void SignalScenario::set_nature_joint(std::vector<NatureSignalPoint> points) {
  const std::size_t chance = tree_.chance_sets().size();
  const std::size_t sites = model_.sites().size();
  double total = 0.0;
  for (const auto& p : points) {
    if (p.nature.size() != chance || p.signals.size() != sites)
      throw PolicyError("Nature-signal point has the wrong shape");
    if (p.probability < 0.0) throw PolicyError("negative Nature-signal probability");
    total += p.probability;
  }
  if (std::abs(total - 1.0) > kDefaultTolerance)
    throw PolicyError("Nature-signal joint does not sum to 1");
  nature_joint_ = std::move(points);
}

std::vector<std::string> SignalScenario::coverage_problems() const {
  std::vector<std::string> out;
  for (const auto& path : all_paths(tree_)) {
    std::vector<int> seen;
    std::vector<int> visits(bindings_.size(), 0);
    for (auto n : path) {
      const auto& node = tree_.node(n);
      if (node.kind != NodeKind::decision) continue;
      int ord = tree_.info_set(*node.info_set).ordinal;
      int site = -1;
      try {
        site = site_for(ord, ++visits[ord]);
      } catch (const PolicyError& e) {
        out.push_back(e.what());
        break;
      }
      if (site >= 0 && std::find(seen.begin(), seen.end(), site) == seen.end()) seen.push_back(site);
    }
    if (seen.empty()) continue;
    bool covered = std::any_of(model_.contexts().begin(), model_.contexts().end(), [&](const Context& c) {
      return std::all_of(seen.begin(), seen.end(), [&](int s) {
        return std::find(c.sites.begin(), c.sites.end(), s) != c.sites.end();
      });
    });
    if (!covered) {
      std::string sites;
      for (int s : seen) sites += (sites.empty() ? "" : ",") + model_.site(s).id;
      out.push_back("no context covers the sites {" + sites + "} seen on the path to '" +
                    tree_.node(path.back()).id + "'");
    }
  }
  return out;
}

// ---- evaluation ------------------------------------------------------------

namespace {

BehavioralPolicy as_behavioral(const ResponsePolicy& policy, const SignalScenario& scenario) {
  const auto sets = scenario.tree().decision_sets();
  if (policy.moves.size() != sets.size())
    throw PolicyError("policy covers " + std::to_string(policy.moves.size()) + " sets, tree has " +
                      std::to_string(sets.size()));
  BehavioralPolicy b;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    int moves = scenario.tree().branch_count(sets[k]);
    std::vector<std::vector<double>> per_outcome;
    for (int m : policy.moves[k]) {
      if (m < 1 || m > moves) throw PolicyError("policy move out of range");
      std::vector<double> mix(static_cast<std::size_t>(moves), 0.0);
      mix[m - 1] = 1.0;
      per_outcome.push_back(std::move(mix));
    }
    b.mix.push_back(std::move(per_outcome));
  }
  return b;
}

void check_shape(const BehavioralPolicy& policy, const SignalScenario& scenario) {
  const auto sets = scenario.tree().decision_sets();
  if (policy.mix.size() != sets.size()) throw PolicyError("policy does not cover every decision set");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (static_cast<int>(policy.mix[k].size()) != scenario.alphabet_size(static_cast<int>(k)))
      throw PolicyError("policy map for '" + scenario.tree().info_set(sets[k]).name +
                        "' does not match the signal alphabet");
    for (const auto& m : policy.mix[k])
      if (static_cast<int>(m.size()) != scenario.tree().branch_count(sets[k]))
        throw PolicyError("policy move distribution has the wrong length");
  }
}

// Conditionals depend only on (target, observations), so they are shared
// across every policy evaluated on one scenario.
class ConditionalCache {
 public:
  explicit ConditionalCache(const EmpiricalModel& model) : model_(model) {}

  const Conditional& get(int target, const std::vector<int>& observed) {
    key_.assign(1, target);
    key_.insert(key_.end(), observed.begin(), observed.end());
    auto it = cache_.find(key_);
    if (it != cache_.end()) return it->second;
    std::vector<Observation> obs;
    for (std::size_t s = 0; s < observed.size(); ++s)
      if (observed[s] >= 0) obs.push_back({static_cast<int>(s), observed[s]});
    return cache_.emplace(key_, conditional_at_site(model_, target, obs)).first->second;
  }

 private:
  const EmpiricalModel& model_;
  std::vector<int> key_;
  std::map<std::vector<int>, Conditional> cache_;
};

constexpr double kPrune = 1e-14;

class Evaluator {
 public:
  Evaluator(const SignalScenario& scenario, ConditionalCache& cache)
      : sc_(scenario), tree_(scenario.tree()), cache_(cache) {}

  double run(const BehavioralPolicy& policy) {
    policy_ = &policy;
    total_ = 0.0;
    visits_.assign(tree_.decision_sets().size(), 0);
    if (const auto& joint = sc_.nature_joint()) {
      for (const auto& point : *joint) {
        if (point.probability <= 0.0) continue;
        nature_ = &point.nature;
        fixed_signals_ = &point.signals;
        walk(tree_.root(), point.probability);
      }
      return total_;
    }
    fixed_signals_ = nullptr;
    observed_.assign(sc_.model().sites().size(), -1);
    for (const auto& w : enumerate_world_states(tree_)) {
      if (w.probability <= 0.0) continue;
      nature_ = &w.choices;
      walk(tree_.root(), w.probability);
    }
    return total_;
  }

 private:
  void choose(NodeRef n, int ord, int outcome, double weight) {
    const auto& mix = policy_->mix[ord][outcome];
    for (std::size_t m = 0; m < mix.size(); ++m) {
      if (mix[m] <= 0.0) continue;
      walk(*tree_.child(n, static_cast<int>(m) + 1), weight * mix[m]);
    }
  }

  void walk(NodeRef n, double weight) {
    const auto& node = tree_.node(n);
    if (node.kind == NodeKind::terminal) {
      total_ += weight * node.payoff;
      return;
    }
    const auto& set = tree_.info_set(*node.info_set);
    if (set.kind == NodeKind::chance) {
      walk(*tree_.child(n, (*nature_)[set.ordinal]), weight);
      return;
    }

    const int ord = set.ordinal;
    const int site = sc_.site_for(ord, ++visits_[ord]);
    if (site < 0) {
      choose(n, ord, 0, weight);
    } else if (fixed_signals_) {
      choose(n, ord, (*fixed_signals_)[site], weight);
    } else if (observed_[site] >= 0) {
      // Same site seen earlier on this path: the same physical signal.
      choose(n, ord, observed_[site], weight);
    } else {
      const auto& cond = cache_.get(site, observed_);
      if (cond.status == ConditionalStatus::no_covering_context)
        throw PolicyError("no context covers site '" + sc_.model().site(site).id +
                          "' together with the signals already seen at node '" + node.id + "'");
      if (cond.status == ConditionalStatus::ok) {
        for (std::size_t o = 0; o < cond.probs.size(); ++o) {
          if (cond.probs[o] <= kPrune) continue;
          observed_[site] = static_cast<int>(o);
          choose(n, ord, static_cast<int>(o), weight * cond.probs[o]);
        }
        observed_[site] = -1;
      }
    }
    --visits_[ord];
  }

  const SignalScenario& sc_;
  const DecisionTree& tree_;
  ConditionalCache& cache_;
  const BehavioralPolicy* policy_ = nullptr;
  const std::vector<int>* nature_ = nullptr;
  const std::vector<int>* fixed_signals_ = nullptr;
  std::vector<int> observed_;
  std::vector<int> visits_;
  double total_ = 0.0;
};

}  // namespace

double evaluate_policy(const SignalScenario& scenario, const BehavioralPolicy& policy) {
  check_shape(policy, scenario);
  ConditionalCache cache(scenario.model());
  return Evaluator(scenario, cache).run(policy);
}

double evaluate_policy(const SignalScenario& scenario, const ResponsePolicy& policy) {
  return evaluate_policy(scenario, as_behavioral(policy, scenario));
}

std::vector<ResponsePolicy> enumerate_policies(const SignalScenario& scenario, std::size_t cap) {
  const auto sets = scenario.tree().decision_sets();
  std::vector<int> radix;
  std::vector<int> owner;
  for (std::size_t k = 0; k < sets.size(); ++k)
    for (int o = 0; o < scenario.alphabet_size(static_cast<int>(k)); ++o) {
      radix.push_back(scenario.tree().branch_count(sets[k]));
      owner.push_back(static_cast<int>(k));
    }
  std::size_t total = 1;
  for (int r : radix) {
    if (r <= 0) return {};
    if (total > cap / static_cast<std::size_t>(r))
      throw CapExceeded("policy count exceeds cap " + std::to_string(cap));
    total *= static_cast<std::size_t>(r);
  }
  std::vector<ResponsePolicy> out;
  out.reserve(total);
  std::vector<int> digits(radix.size(), 1);
  do {
    ResponsePolicy p;
    p.moves.assign(sets.size(), {});
    for (std::size_t i = 0; i < digits.size(); ++i) p.moves[owner[i]].push_back(digits[i]);
    out.push_back(std::move(p));
  } while (next_tuple(digits, radix));
  return out;
}

namespace {

// A decision set is final when no member node has a decision node below it.
// Each path crosses at most one final node, so once the other sets' maps are
// fixed the payoff is a sum of one term per final set.
std::vector<bool> final_sets(const DecisionTree& tree) {
  const auto sets = tree.decision_sets();
  std::vector<bool> below(tree.node_count(), false);  // decision node strictly below
  std::function<bool(NodeRef)> visit = [&](NodeRef n) {
    bool any = false;
    for (const auto& br : tree.node(n).branches) {
      bool sub = visit(br.child);
      any = any || sub || tree.node(br.child).kind == NodeKind::decision;
    }
    below[n.index] = any;
    return any;
  };
  visit(tree.root());
  std::vector<bool> out(sets.size(), true);
  for (std::size_t k = 0; k < sets.size(); ++k)
    for (NodeRef n : tree.info_set(sets[k]).members)
      if (below[n.index]) out[k] = false;
  return out;
}

std::vector<std::vector<int>> all_maps(int outcomes, int moves) {
  std::vector<std::vector<int>> out;
  std::vector<int> radix(static_cast<std::size_t>(outcomes), moves);
  std::vector<int> digits(radix.size(), 1);
  do out.push_back(digits);
  while (next_tuple(digits, radix));
  return out;
}

constexpr std::size_t kArgmaxLimit = 4096;

PolicyOptimum exhaustive_optimum(const SignalScenario& scenario, double tol, std::size_t cap) {
  auto policies = enumerate_policies(scenario, cap);
  ConditionalCache cache(scenario.model());
  Evaluator eval(scenario, cache);
  std::vector<double> values;
  values.reserve(policies.size());
  PolicyOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& p : policies) {
    auto b = as_behavioral(p, scenario);
    check_shape(b, scenario);
    values.push_back(eval.run(b));
    best.value = std::max(best.value, values.back());
  }
  for (std::size_t i = 0; i < policies.size(); ++i)
    if (values[i] >= best.value - tol) best.argmax.push_back(policies[i]);
  return best;
}

// Used when full enumeration is over the cap: enumerate the non-final sets'
// maps jointly and pick each final set's map separately.
PolicyOptimum separable_optimum(const SignalScenario& scenario, double tol, std::size_t cap) {
  const auto& tree = scenario.tree();
  const auto sets = tree.decision_sets();
  for (auto s : sets)
    if (tree.branch_count(s) <= 0) return {};
  const auto is_final = final_sets(tree);

  std::vector<std::vector<std::vector<int>>> maps(sets.size());
  std::vector<int> outer;  // non-final sets, enumerated jointly
  std::vector<int> inner;  // final sets, optimized one at a time
  std::size_t outer_count = 1;
  std::size_t work = 1;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    int outcomes = scenario.alphabet_size(static_cast<int>(k));
    double count = std::pow(static_cast<double>(tree.branch_count(sets[k])), outcomes);
    if (count > static_cast<double>(cap)) throw CapExceeded("policy count exceeds cap " + std::to_string(cap));
    maps[k] = all_maps(outcomes, tree.branch_count(sets[k]));
    if (is_final[k]) {
      inner.push_back(static_cast<int>(k));
      work += maps[k].size();
    } else {
      outer.push_back(static_cast<int>(k));
      if (outer_count > cap / maps[k].size())
        throw CapExceeded("policy count exceeds cap " + std::to_string(cap));
      outer_count *= maps[k].size();
    }
  }
  if (outer_count > cap / work) throw CapExceeded("policy count exceeds cap " + std::to_string(cap));

  ConditionalCache cache(scenario.model());
  Evaluator eval(scenario, cache);
  auto value_of = [&](const std::vector<int>& pick) {
    ResponsePolicy p;
    p.moves.resize(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) p.moves[k] = maps[k][pick[k]];
    auto b = as_behavioral(p, scenario);
    check_shape(b, scenario);
    return std::pair{eval.run(b), p};
  };

  struct Candidate {
    double value;
    std::vector<int> pick;
    std::vector<std::vector<int>> ties;  // per inner set, maps within tol of its best
  };
  std::vector<Candidate> candidates;
  PolicyOptimum best;
  best.value = -std::numeric_limits<double>::infinity();

  std::vector<int> radix;
  for (int k : outer) radix.push_back(static_cast<int>(maps[k].size()));
  std::vector<int> digits(outer.size(), 1);
  do {
    std::vector<int> pick(sets.size(), 0);
    for (std::size_t i = 0; i < outer.size(); ++i) pick[outer[i]] = digits[i] - 1;
    const double base = value_of(pick).first;
    Candidate cand{base, pick, {}};
    for (int k : inner) {
      std::vector<double> gains(maps[k].size());
      for (std::size_t x = 0; x < maps[k].size(); ++x) {
        auto trial = pick;
        trial[k] = static_cast<int>(x);
        gains[x] = x == 0 ? 0.0 : value_of(trial).first - base;
      }
      double top = *std::max_element(gains.begin(), gains.end());
      std::vector<int> tied;
      for (std::size_t x = 0; x < gains.size(); ++x)
        if (gains[x] >= top - tol) tied.push_back(static_cast<int>(x));
      cand.value += top;
      cand.pick[k] = tied.front();
      cand.ties.push_back(std::move(tied));
    }
    best.value = std::max(best.value, cand.value);
    candidates.push_back(std::move(cand));
  } while (next_tuple(digits, radix));

  // Re-evaluate the chosen policies so the reported value is a direct sum.
  double exact = -std::numeric_limits<double>::infinity();
  for (auto& cand : candidates) {
    if (cand.value < best.value - tol) continue;
    exact = std::max(exact, value_of(cand.pick).first);
    std::vector<int> idx(inner.size(), 1);
    std::vector<int> tie_radix;
    for (const auto& t : cand.ties) tie_radix.push_back(static_cast<int>(t.size()));
    do {
      if (best.argmax.size() >= kArgmaxLimit) break;
      auto pick = cand.pick;
      for (std::size_t i = 0; i < inner.size(); ++i) pick[inner[i]] = cand.ties[i][idx[i] - 1];
      auto [v, p] = value_of(pick);
      if (v >= best.value - tol) best.argmax.push_back(std::move(p));
    } while (next_tuple(idx, tie_radix));
  }
  best.value = exact;
  std::sort(best.argmax.begin(), best.argmax.end(),
            [](const ResponsePolicy& a, const ResponsePolicy& b) { return a.moves < b.moves; });
  return best;
}

}  // namespace

PolicyOptimum optimize_policy(const SignalScenario& scenario, double tol, std::size_t cap) {
  const auto sets = scenario.tree().decision_sets();
  double total = 1.0;
  for (std::size_t k = 0; k < sets.size(); ++k)
    total *= std::pow(static_cast<double>(scenario.tree().branch_count(sets[k])),
                      scenario.alphabet_size(static_cast<int>(k)));
  if (total <= static_cast<double>(cap)) return exhaustive_optimum(scenario, tol, cap);
  return separable_optimum(scenario, tol, cap);
}

// ---- pushforward -----------------------------------------------------------

double pushforward_payoff(const JointSignalMeasure& joint, const ResponsePolicy& policy,
                          const DecisionTree& tree) {
  if (!is_kuhn(tree).kuhn) throw PolicyError("pushforward payoff requires a Kuhn tree");
  const auto sets = tree.decision_sets();
  if (policy.moves.size() != sets.size()) throw PolicyError("policy does not cover every decision set");

  std::vector<int> site_of(sets.size(), -1);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& name = tree.info_set(sets[k]).name;
    for (std::size_t s = 0; s < joint.sites.size(); ++s)
      if (joint.sites[s].info_set == name && joint.sites[s].visit_index.value_or(1) == 1) {
        site_of[k] = static_cast<int>(s);
        break;
      }
    std::size_t expect = site_of[k] < 0 ? 1 : joint.sites[site_of[k]].alphabet.size();
    if (policy.moves[k].size() != expect)
      throw PolicyError("policy map for '" + name + "' does not match the signal alphabet");
  }

  std::map<std::vector<int>, double> pi;
  double total = 0.0;
  for (std::size_t flat = 0; flat < joint.probs.size(); ++flat) {
    double mu = joint.probs[flat];
    if (mu <= 0.0) continue;
    auto point = joint.decode(flat);
    Strategy m;
    for (std::size_t k = 0; k < sets.size(); ++k)
      m.choices.push_back(policy.moves[k][site_of[k] < 0 ? 0 : point[site_of[k]]]);
    auto it = pi.find(m.choices);
    if (it == pi.end()) it = pi.emplace(m.choices, expected_payoff(m, tree)).first;
    total += mu * it->second;
  }
  return total;
}

// ---- exchangeable classical optimum -----------------------------------------

std::vector<int> max_visits_per_set(const DecisionTree& tree) {
  std::vector<int> best(tree.decision_sets().size(), 0);
  std::vector<int> count(best.size(), 0);
  std::function<void(NodeRef)> walk = [&](NodeRef n) {
    const auto& node = tree.node(n);
    int ord = -1;
    if (node.kind == NodeKind::decision) {
      ord = tree.info_set(*node.info_set).ordinal;
      best[ord] = std::max(best[ord], ++count[ord]);
    }
    for (const auto& b : node.branches) walk(b.child);
    if (ord >= 0) --count[ord];
  };
  walk(tree.root());
  return best;
}

namespace {

std::vector<std::string> default_labels(int k) {
  if (k == 2) return {"H", "T"};
  if (k == 1) return {"H"};
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

// Payoff when the repeated set answers visit j with f[x_j] and every other
// set plays its pure choice; averaged over Nature.
double signal_payoff(const DecisionTree& tree, int repeated, const std::vector<int>& map,
                     const std::vector<int>& others, const std::vector<int>& outcomes,
                     const std::vector<WorldState>& states) {
  double total = 0.0;
  for (const auto& w : states) {
    if (w.probability <= 0.0) continue;
    NodeRef cur = tree.root();
    int visit = 0;
    for (;;) {
      const auto& node = tree.node(cur);
      if (node.kind == NodeKind::terminal) {
        total += w.probability * node.payoff;
        break;
      }
      const auto& set = tree.info_set(*node.info_set);
      int choice;
      if (set.kind == NodeKind::chance)
        choice = w.choices[set.ordinal];
      else if (set.ordinal == repeated)
        choice = map[outcomes.at(visit++)];
      else
        choice = others[set.ordinal];
      cur = *tree.child(cur, choice);
    }
  }
  return total;
}

}  // namespace

ExchangeableOptimum classical_exchangeable_optimum(const DecisionTree& tree, int alphabet,
                                                   int max_visits, double tol, std::size_t cap) {
  if (alphabet < 1 || max_visits < 1) throw PolicyError("alphabet and visit count must be positive");
  const auto sets = tree.decision_sets();
  auto visits = max_visits_per_set(tree);
  int repeated = -1;
  for (std::size_t k = 0; k < visits.size(); ++k) {
    if (visits[k] < 2) continue;
    if (repeated >= 0) throw PolicyError("more than one decision set is crossed twice on a path");
    repeated = static_cast<int>(k);
  }
  if (repeated < 0) throw PolicyError("no decision set is crossed twice on a path (Kuhn tree)");
  if (visits[repeated] > max_visits)
    throw PolicyError("'" + tree.info_set(sets[repeated]).name + "' is visited " +
                      std::to_string(visits[repeated]) + " times, above the limit " +
                      std::to_string(max_visits));

  const int k = alphabet;
  const int v = max_visits;
  std::size_t outcomes = 1;
  for (int i = 0; i < v; ++i) {
    if (outcomes > cap / static_cast<std::size_t>(k)) throw CapExceeded("exchangeable outcome space exceeds cap");
    outcomes *= static_cast<std::size_t>(k);
  }

  // Exchangeable polytope: sum to 1, and each outcome tied to its sorted
  // representative.
  std::vector<std::vector<int>> tuples(outcomes);
  lp::EqualityProblem poly;
  poly.columns = outcomes;
  poly.rows.push_back(std::vector<double>(outcomes, 1.0));
  poly.rhs.push_back(1.0);
  for (std::size_t x = 0; x < outcomes; ++x) {
    std::vector<int> digits(static_cast<std::size_t>(v));
    std::size_t rest = x;
    for (int i = v; i-- > 0;) {
      digits[i] = static_cast<int>(rest % static_cast<std::size_t>(k));
      rest /= static_cast<std::size_t>(k);
    }
    tuples[x] = digits;
    auto sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    std::size_t rep = 0;
    for (int d : sorted) rep = rep * static_cast<std::size_t>(k) + static_cast<std::size_t>(d);
    if (rep == x) continue;
    std::vector<double> row(outcomes, 0.0);
    row[x] = 1.0;
    row[rep] = -1.0;
    poly.rows.push_back(std::move(row));
    poly.rhs.push_back(0.0);
  }

  std::vector<int> map_radix(static_cast<std::size_t>(k), tree.branch_count(sets[repeated]));
  std::vector<int> other_radix;
  for (std::size_t s = 0; s < sets.size(); ++s)
    other_radix.push_back(static_cast<int>(s) == repeated ? 1 : tree.branch_count(sets[s]));

  auto states = enumerate_world_states(tree, cap);
  ExchangeableOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  best.info_set = tree.info_set(sets[repeated]).name;
  std::size_t work = 0;

  std::vector<int> others(other_radix.size(), 1);
  do {
    std::vector<int> map(map_radix.size(), 1);
    do {
      if (++work > cap) throw CapExceeded("exchangeable search exceeds cap");
      std::vector<double> coeff(outcomes);
      for (std::size_t x = 0; x < outcomes; ++x)
        coeff[x] = signal_payoff(tree, repeated, map, others, tuples[x], states);
      auto res = lp::maximize(poly, coeff, tol);
      if (res.status != lp::Status::optimal) throw PolicyError("exchangeable LP failed");
      if (res.objective > best.value + tol) {
        best.value = res.objective;
        best.distribution.probs = res.x;
        best.policy.moves.assign(sets.size(), {});
        for (std::size_t s = 0; s < sets.size(); ++s)
          best.policy.moves[s] = static_cast<int>(s) == repeated ? map : std::vector<int>{others[s]};
      }
    } while (next_tuple(map, map_radix));
  } while (next_tuple(others, other_radix));

  auto labels = default_labels(k);
  for (int i = 1; i <= v; ++i)
    best.distribution.sites.push_back(
        Site{best.info_set + "#" + std::to_string(i), best.info_set, i, labels});
  return best;
}

std::string describe(const ResponsePolicy& policy, const SignalScenario& scenario) {
  const auto& tree = scenario.tree();
  const auto sets = tree.decision_sets();
  std::string out;
  for (std::size_t k = 0; k < sets.size() && k < policy.moves.size(); ++k) {
    if (k) out += ' ';
    out += tree.info_set(sets[k]).name + "{";
    int site = scenario.has_signal(static_cast<int>(k)) ? scenario.site_for(static_cast<int>(k), 1) : -1;
    for (std::size_t o = 0; o < policy.moves[k].size(); ++o) {
      if (o) out += ',';
      if (site >= 0) out += scenario.model().site(site).alphabet[o] + "->";
      out += tree.branch_label(sets[k], policy.moves[k][o]);
    }
    out += "}";
  }
  return out;
}

}  // namespace sigtree
