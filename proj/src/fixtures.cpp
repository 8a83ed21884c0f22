#include "sigtree/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sigtree/random.hpp"

namespace sigtree::fixtures {

namespace {

struct Stage {
  std::string set;
  std::string id;
  std::array<std::string, 2> moves;
};

const Stage kWest{"West", "W", {"U", "D"}};
const Stage kEast{"East", "E", {"u", "d"}};
const Stage kNorth{"North", "N", {"T", "B"}};
const Stage kSouth{"South", "S", {"t", "b"}};

struct FourContext {
  const Stage* first;
  const Stage* second;
};

const std::array<FourContext, 4> kContexts{{{&kWest, &kNorth}, {&kEast, &kNorth},
                                            {&kWest, &kSouth}, {&kEast, &kSouth}}};

double four_context_payoff(int ctx, int first, int second, double m, double big_m) {
  // first/second are 0 for the upper move (U/u, T/t), 1 for the lower.
  switch (ctx) {
    case 0:  // (W,N): D then B
      return first == 1 && second == 1 ? -big_m : 0.0;
    case 1:  // (E,N): u then T
      return first == 0 && second == 0 ? -big_m : 0.0;
    case 2:  // (W,S): U then t
      return first == 0 && second == 0 ? -big_m : 0.0;
    default:  // (E,S): u then t
      return first == 0 && second == 0 ? m : 0.0;
  }
}

void check_payoff_params(double m, double big_m) {
  if (!(m > 0.0 && big_m > m)) throw std::invalid_argument("four-context tree requires 0 < m < M");
}

// Adds the four-context subtree under `parent` (or as the root when parent is
// empty). `prefix` keeps node ids unique; `split_recall` names second-stage
// sets after the first move.
void add_four_context(TreeBuilder& b, const std::string& prefix, std::optional<NodeRef> parent,
                      const std::string& parent_label, double m, double big_m, bool split_recall) {
  NodeRef nature = b.add_chance(prefix + "nature", prefix + "Nature");
  b.set_probs(prefix + "Nature", {0.25, 0.25, 0.25, 0.25});
  if (parent) b.add_edge(*parent, nature, parent_label);

  std::array<NodeRef, 4> firsts;
  for (int c = 0; c < 4; ++c) {
    const auto& ctx = kContexts[c];
    std::string key = ctx.first->id + ctx.second->id;
    firsts[c] = b.add_decision(prefix + key, ctx.first->set);
    b.add_edge(nature, firsts[c], key);
  }
  for (int c = 0; c < 4; ++c) {
    const auto& ctx = kContexts[c];
    std::string key = ctx.first->id + ctx.second->id;
    for (int f = 0; f < 2; ++f) {
      std::string set = ctx.second->set;
      if (split_recall) set += "|" + ctx.first->moves[f];
      NodeRef second = b.add_decision(prefix + key + "." + ctx.first->moves[f], set);
      b.add_edge(firsts[c], second, ctx.first->moves[f]);
      for (int s = 0; s < 2; ++s) {
        NodeRef leaf = b.add_terminal(prefix + key + "." + ctx.first->moves[f] + "." + ctx.second->moves[s],
                                      four_context_payoff(c, f, s, m, big_m));
        b.add_edge(second, leaf, ctx.second->moves[s]);
      }
    }
  }
}

void add_driver(TreeBuilder& b, const std::string& prefix, std::optional<NodeRef> parent,
                const std::string& parent_label) {
  NodeRef d1 = b.add_decision(prefix + "d1", "Driver");
  if (parent) b.add_edge(*parent, d1, parent_label);
  NodeRef d2 = b.add_decision(prefix + "d2", "Driver");
  NodeRef exit1 = b.add_terminal(prefix + "exit1", 0.0);
  NodeRef pass = b.add_terminal(prefix + "pass", 1.0);
  NodeRef exit2 = b.add_terminal(prefix + "exit2", 4.0);
  b.add_edge(d1, d2, "In");
  b.add_edge(d1, exit1, "Out");
  b.add_edge(d2, pass, "In");
  b.add_edge(d2, exit2, "Out");
}

const quantum::HardyInstance& hardy() {
  static const quantum::HardyInstance instance = quantum::hardy_instance();
  return instance;
}

// Hardy context distribution for a (first, second) pair of stage ids.
std::vector<double> hardy_row(const std::string& first, const std::string& second) {
  const auto& model = hardy().model;
  int a = model.site_index(first);
  int b = model.site_index(second);
  for (const auto& ctx : model.contexts())
    if (ctx.sites[0] == a && ctx.sites[1] == b) return ctx.probs;
  throw std::logic_error("no Hardy context " + first + "," + second);
}

std::vector<double> pr_row(int x, int y) {
  std::vector<double> p(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p[2 * a + b] = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
  return p;
}

// Sites and contexts over the perfect-recall tree's sets, with a row
// function giving each (first stage, second stage) distribution.
template <typename RowFn>
EmpiricalModel split_second_stage_model(RowFn row, const std::vector<std::string>& labels) {
  std::vector<Site> sites{{"W", "West", std::nullopt, labels}, {"E", "East", std::nullopt, labels}};
  std::vector<Context> contexts;
  for (const auto* second : {&kNorth, &kSouth}) {
    for (const auto* first : {&kWest, &kEast}) {
      for (const auto& move : first->moves) {
        std::string set = second->set + "|" + move;
        sites.push_back(Site{second->id + "|" + move, set, std::nullopt, labels});
      }
    }
  }
  auto site_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < sites.size(); ++i)
      if (sites[i].id == id) return static_cast<int>(i);
    throw std::logic_error("missing site " + id);
  };
  for (const auto* second : {&kNorth, &kSouth}) {
    for (const auto* first : {&kWest, &kEast}) {
      for (const auto& move : first->moves) {
        int s = site_of(second->id + "|" + move);
        contexts.push_back(Context{{site_of(first->id), s}, row(first->id, second->id)});
      }
    }
  }
  // Close the four-cycle W - N|U - E - S|U - W.
  contexts.push_back(Context{{site_of("E"), site_of("N|U")}, row("E", "N")});
  contexts.push_back(Context{{site_of("E"), site_of("S|U")}, row("E", "S")});
  return EmpiricalModel(std::move(sites), std::move(contexts));
}

std::vector<int> all_ordinals(const DecisionTree& tree) {
  std::vector<int> v(tree.decision_sets().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  return v;
}

}  // namespace

// ---- trees -----------------------------------------------------------------

DecisionTree four_context_tree(double m, double big_m) {
  check_payoff_params(m, big_m);
  TreeBuilder b;
  add_four_context(b, "", std::nullopt, "", m, big_m, false);
  return b.build();
}

DecisionTree perfect_recall_tree(double m, double big_m) {
  check_payoff_params(m, big_m);
  TreeBuilder b;
  add_four_context(b, "", std::nullopt, "", m, big_m, true);
  return b.build();
}

DecisionTree absent_minded_driver() {
  TreeBuilder b;
  add_driver(b, "", std::nullopt, "");
  return b.build();
}

DecisionTree matching_tree() {
  TreeBuilder b;
  NodeRef root = b.add_chance("nature", "Nature");
  b.set_probs("Nature", {0.5, 0.5});
  NodeRef left = b.add_decision("after.Left", "DM");
  NodeRef right = b.add_decision("after.Right", "DM");
  b.add_edge(root, left, "Left");
  b.add_edge(root, right, "Right");
  for (auto [node, tag, match] : {std::tuple{left, "L", 1}, std::tuple{right, "R", 2}}) {
    NodeRef l = b.add_terminal(std::string(tag) + ".Left", match == 1 ? 1.0 : 0.0);
    NodeRef r = b.add_terminal(std::string(tag) + ".Right", match == 2 ? 1.0 : 0.0);
    b.add_edge(node, l, "Left");
    b.add_edge(node, r, "Right");
  }
  return b.build();
}

DecisionTree forgetful_tree() {
  TreeBuilder b;
  NodeRef root = b.add_chance("nature", "Nature");
  b.set_probs("Nature", {0.5, 0.5});
  NodeRef first = b.add_decision("x1", "I'");
  NodeRef after_l = b.add_decision("x2", "I");
  NodeRef after_r = b.add_decision("x3", "I");
  NodeRef direct = b.add_decision("y1", "I");
  b.add_edge(root, first, "a");
  b.add_edge(root, direct, "b");
  b.add_edge(first, after_l, "L");
  b.add_edge(first, after_r, "R");
  const std::array<std::pair<NodeRef, std::array<double, 2>>, 3> tails{
      {{after_l, {2.0, 0.0}}, {after_r, {0.0, 2.0}}, {direct, {1.0, 0.0}}}};
  int k = 0;
  for (const auto& [node, pay] : tails) {
    NodeRef l = b.add_terminal("z" + std::to_string(k++), pay[0]);
    NodeRef r = b.add_terminal("z" + std::to_string(k++), pay[1]);
    b.add_edge(node, l, "l");
    b.add_edge(node, r, "r");
  }
  return b.build();
}

DecisionTree glued_tree(double m, double big_m) {
  check_payoff_params(m, big_m);
  TreeBuilder b;
  NodeRef glue = b.add_chance("glue", "Glue");
  b.set_probs("Glue", {0.5, 0.5});
  add_driver(b, "amd.", glue, "driver");
  add_four_context(b, "fc.", glue, "contexts", m, big_m, false);
  return b.build();
}

// ---- models ----------------------------------------------------------------

EmpiricalModel hardy_model() { return hardy().model; }

ResponsePolicy hardy_policy(const DecisionTree& tree) {
  ResponsePolicy p;
  for (auto set : tree.decision_sets()) {
    (void)set;
    p.moves.push_back({1, 2});
  }
  return p;
}

EmpiricalModel driver_coins(double p_hh, double p_ht, double p_th, double p_tt) {
  std::vector<Site> sites{{"Driver#1", "Driver", 1, {"H", "T"}}, {"Driver#2", "Driver", 2, {"H", "T"}}};
  return EmpiricalModel(std::move(sites), {Context{{0, 1}, {p_hh, p_ht, p_th, p_tt}}});
}

EmpiricalModel driver_iid_coins(double p) {
  return driver_coins(p * p, p * (1 - p), (1 - p) * p, (1 - p) * (1 - p));
}

EmpiricalModel driver_anticorrelated_coins() { return driver_coins(0.0, 0.5, 0.5, 0.0); }

EmpiricalModel matching_coin() {
  std::vector<Site> sites{{"coin", "DM", std::nullopt, {"Heads", "Tails"}}};
  return EmpiricalModel(std::move(sites), {Context{{0}, {0.5, 0.5}}});
}

std::vector<NatureSignalPoint> matching_coin_with_nature() {
  return {NatureSignalPoint{{1}, {0}, 0.5}, NatureSignalPoint{{2}, {1}, 0.5}};
}

EmpiricalModel perfect_recall_hardy_model() {
  return split_second_stage_model(hardy_row, {"G", "R"});
}

EmpiricalModel perfect_recall_pr_model() {
  return split_second_stage_model(
      [](const std::string& first, const std::string& second) {
        return pr_row(first == "E" ? 1 : 0, second == "S" ? 1 : 0);
      },
      {"0", "1"});
}

EmpiricalModel glued_quantum_model() {
  auto coins = driver_anticorrelated_coins();
  const auto& h = hardy().model;
  std::vector<Site> sites(coins.sites().begin(), coins.sites().end());
  std::vector<Context> contexts(coins.contexts().begin(), coins.contexts().end());
  const int offset = static_cast<int>(sites.size());
  for (const auto& s : h.sites()) sites.push_back(s);
  for (auto ctx : h.contexts()) {
    for (int& s : ctx.sites) s += offset;
    contexts.push_back(std::move(ctx));
  }
  return EmpiricalModel(std::move(sites), std::move(contexts));
}

EmpiricalModel single_context_model(const JointSignalMeasure& joint) {
  std::vector<int> all(joint.sites.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (all.empty()) return EmpiricalModel({}, {});
  return classical_box_from_joint(joint, {all});
}

double best_classical_value(const DecisionTree& tree, int draws, std::uint64_t seed) {
  gen::Rng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < draws; ++i) {
    auto mu = gen::random_joint(rng, gen::binary_sites(tree, all_ordinals(tree)));
    SignalScenario sc(tree, single_context_model(mu));
    best = std::max(best, optimize_policy(sc).value);
  }
  return best;
}

// ---- bundles ---------------------------------------------------------------

std::vector<std::string> builtin_names() {
  return {"fig8", "fig10", "amd", "glued", "perfect_recall_demo"};
}

namespace {

double glued_classical(const DecisionTree& tree) {
  return classical_exchangeable_optimum(tree, 2, 2).value;
}

}  // namespace

ScenarioBundle builtin_scenario(const std::string& name, const ScenarioParams& params) {
  const double phi5 = std::pow(quantum::phi(), 5);
  const double m = params.m;
  const double big_m = params.big_m;
  ScenarioBundle bundle;
  bundle.name = name;

  if (name == "fig10") {
    bundle.tree = four_context_tree(m, big_m);
    bundle.summary = "Kuhn tree with imperfect recall; Hardy signals versus classical signals";
    auto tree = bundle.tree;
    bundle.manifest.push_back({"strategies", "pure strategies", 16, 0, "structural", Relation::equal,
                               [tree] { return static_cast<double>(enumerate_strategies(tree).size()); }});
    bundle.manifest.push_back({"pure_optimum", "optimum without signals", 0.0, 1e-12, "reported",
                               Relation::equal, [tree] { return optimal_pure_payoff(tree).value; }});
    bundle.manifest.push_back(
        {"classical_optimum", "best optimum over random classical joint signals", 0.0, 1e-9, "reported",
         Relation::equal,
         [tree, params] { return best_classical_value(tree, params.classical_draws, params.seed); }});
    bundle.manifest.push_back({"hardy_policy", "G->U/u/T/t, R->D/d/B/b under Hardy signals",
                               0.25 * phi5 * m, 1e-9, "reported", Relation::equal, [tree] {
                                 SignalScenario sc(tree, hardy_model());
                                 return evaluate_policy(sc, hardy_policy(tree));
                               }});
    bundle.manifest.push_back({"hardy_optimum", "optimum over all 256 policies under Hardy signals",
                               0.25 * phi5 * m, 1e-9, "reported", Relation::equal, [tree] {
                                 return optimize_policy(SignalScenario(tree, hardy_model())).value;
                               }});
    return bundle;
  }

  if (name == "amd") {
    bundle.tree = absent_minded_driver();
    bundle.summary = "absent-minded driver with per-visit coin signals";
    auto tree = bundle.tree;
    ResponsePolicy in_on_heads{{{1, 2}}};
    bundle.manifest.push_back({"pure_optimum", "optimum without signals", 1.0, 1e-12, "reported",
                               Relation::equal, [tree] { return optimal_pure_payoff(tree).value; }});
    bundle.manifest.push_back({"iid_policy", "In on H, Out on T with i.i.d. fair coins", 1.25, 1e-12,
                               "reported", Relation::equal, [tree, in_on_heads] {
                                 return evaluate_policy(SignalScenario(tree, driver_iid_coins()), in_on_heads);
                               }});
    bundle.manifest.push_back({"anticorrelated_policy", "In on H, Out on T with anticorrelated coins", 2.0,
                               1e-12, "reported", Relation::equal, [tree, in_on_heads] {
                                 return evaluate_policy(SignalScenario(tree, driver_anticorrelated_coins()),
                                                        in_on_heads);
                               }});
    bundle.manifest.push_back({"exchangeable_optimum", "best over all exchangeable classical coin pairs",
                               2.0, 1e-12, "reported", Relation::equal,
                               [tree] { return classical_exchangeable_optimum(tree, 2, 2).value; }});
    return bundle;
  }

  if (name == "fig8") {
    bundle.tree = matching_tree();
    bundle.summary = "signal correlated with Nature versus independent signal";
    auto tree = bundle.tree;
    bundle.manifest.push_back({"pure_optimum", "optimum without signals", 0.5, 1e-12, "reported",
                               Relation::equal, [tree] { return optimal_pure_payoff(tree).value; }});
    bundle.manifest.push_back({"independent_optimum", "optimum with a fair coin independent of Nature", 0.5,
                               1e-12, "reported", Relation::equal,
                               [tree] { return optimize_policy(SignalScenario(tree, matching_coin())).value; }});
    bundle.manifest.push_back({"correlated_optimum", "optimum with the coin equal to Nature's draw", 1.0,
                               1e-12, "reported", Relation::equal, [tree] {
                                 SignalScenario sc(tree, matching_coin());
                                 sc.set_nature_joint(matching_coin_with_nature());
                                 return optimize_policy(sc).value;
                               }});
    return bundle;
  }

  if (name == "glued") {
    bundle.tree = glued_tree(m, big_m);
    bundle.summary = "non-Kuhn tree: driver glued to the four-context tree";
    auto tree = bundle.tree;
    bundle.manifest.push_back({"pure_optimum", "optimum without signals", 0.5, 1e-12, "derived",
                               Relation::equal, [tree] { return optimal_pure_payoff(tree).value; }});
    bundle.manifest.push_back({"classical_exchangeable", "classical exchangeable optimum over no-signal optimum",
                               0.0, 1e-9, "derived", Relation::greater, [tree] {
                                 return glued_classical(tree) - optimal_pure_payoff(tree).value;
                               }});
    bundle.manifest.push_back({"quantum_gap", "quantum-augmented optimum over classical exchangeable optimum",
                               0.0, 1e-9, "derived", Relation::greater, [tree] {
                                 double quantum = optimize_policy(SignalScenario(tree, glued_quantum_model())).value;
                                 return quantum - glued_classical(tree);
                               }});
    return bundle;
  }

  if (name == "perfect_recall_demo") {
    bundle.tree = perfect_recall_tree(m, big_m);
    bundle.summary = "perfect-recall Kuhn tree; Hardy and PR-box signals add nothing";
    auto tree = bundle.tree;
    bundle.manifest.push_back({"pure_optimum", "optimum without signals", 0.25 * m, 1e-12, "derived",
                               Relation::equal, [tree] { return optimal_pure_payoff(tree).value; }});
    bundle.manifest.push_back(
        {"classical_optimum", "best optimum over random classical joint signals", 0.25 * m, 1e-9, "reported",
         Relation::equal,
         [tree, params] { return best_classical_value(tree, params.classical_draws, params.seed); }});
    bundle.manifest.push_back({"hardy_optimum", "optimum with Hardy correlations", 0.25 * m, 1e-9, "reported",
                               Relation::equal, [tree] {
                                 return optimize_policy(SignalScenario(tree, perfect_recall_hardy_model())).value;
                               }});
    bundle.manifest.push_back({"pr_box_optimum", "optimum with PR-box correlations", 0.25 * m, 1e-9,
                               "reported", Relation::equal, [tree] {
                                 return optimize_policy(SignalScenario(tree, perfect_recall_pr_model())).value;
                               }});
    return bundle;
  }

  throw std::invalid_argument("unknown scenario '" + name + "'");
}

DemoReport run_demo(const ScenarioBundle& bundle) {
  DemoReport report;
  report.name = bundle.name;
  report.summary = bundle.summary;
  for (const auto& entry : bundle.manifest) {
    ManifestResult r;
    r.key = entry.key;
    r.description = entry.description;
    r.expected = entry.expected;
    r.tolerance = entry.tolerance;
    r.origin = entry.origin;
    r.relation = entry.relation;
    r.computed = entry.compute();
    r.pass = entry.relation == Relation::equal ? std::abs(r.computed - r.expected) <= r.tolerance
                                               : r.computed > r.expected + r.tolerance;
    report.pass = report.pass && r.pass;
    report.results.push_back(std::move(r));
  }
  return report;
}

// ---- comparison table -------------------------------------------------------

namespace {

std::string relate(double a, double b, double tol) {
  if (std::abs(a - b) <= tol) return "=";
  return a < b ? "<" : ">";
}

void finish(TableRow& row, double tol) {
  for (std::size_t i = 0; i + 1 < row.cells.size(); ++i)
    row.observed.push_back(relate(row.cells[i].value, row.cells[i + 1].value, tol));
  row.holds = row.observed == row.expected;
}

}  // namespace

ComparisonTable proposition_table(const ScenarioParams& params, double tol) {
  ComparisonTable table;

  {
    auto tree = perfect_recall_tree(params.m, params.big_m);
    double quantum = std::max(optimize_policy(SignalScenario(tree, perfect_recall_hardy_model())).value,
                              optimize_policy(SignalScenario(tree, perfect_recall_pr_model())).value);
    TableRow row{"perfect recall", "perfect_recall_demo",
                 {{"none", optimal_pure_payoff(tree).value},
                  {"classical", best_classical_value(tree, params.classical_draws, params.seed)},
                  {"quantum/PR", quantum}},
                 {"=", "="}, {}, true};
    finish(row, tol);
    table.rows.push_back(std::move(row));
  }
  {
    auto tree = four_context_tree(params.m, params.big_m);
    TableRow row{"imperfect recall, Kuhn", "fig10",
                 {{"none", optimal_pure_payoff(tree).value},
                  {"classical", best_classical_value(tree, params.classical_draws, params.seed)},
                  {"quantum", optimize_policy(SignalScenario(tree, hardy_model())).value}},
                 {"=", "<"}, {}, true};
    finish(row, tol);
    table.rows.push_back(std::move(row));
  }
  {
    auto tree = absent_minded_driver();
    TableRow row{"non-Kuhn", "amd",
                 {{"none", optimal_pure_payoff(tree).value},
                  {"classical exchangeable", classical_exchangeable_optimum(tree, 2, 2).value}},
                 {"<"}, {}, true};
    finish(row, tol);
    table.rows.push_back(std::move(row));
  }
  {
    auto tree = glued_tree(params.m, params.big_m);
    TableRow row{"non-Kuhn", "glued",
                 {{"none", optimal_pure_payoff(tree).value},
                  {"classical exchangeable", classical_exchangeable_optimum(tree, 2, 2).value},
                  {"quantum", optimize_policy(SignalScenario(tree, glued_quantum_model())).value}},
                 {"<", "<"}, {}, true};
    finish(row, tol);
    table.rows.push_back(std::move(row));
  }
  for (const auto& r : table.rows) table.holds = table.holds && r.holds;
  return table;
}

}  // namespace sigtree::fixtures
