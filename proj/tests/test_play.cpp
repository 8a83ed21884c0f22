#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sigtree/fixtures.hpp"
#include "sigtree/io.hpp"
#include "sigtree/play.hpp"
#include "sigtree/random.hpp"

using namespace sigtree;
namespace fx = sigtree::fixtures;

namespace {

// Same tree with one set's branch numbering reversed and every id renamed.
DecisionTree relabeled(const DecisionTree& t, const std::string& set) {
  auto j = io::tree_to_json(t);
  std::map<std::string, int> count;
  std::set<std::string> members;
  for (auto& n : j["nodes"]) {
    if (n.contains("info_set") && n["info_set"] == set) members.insert(n["id"].get<std::string>());
  }
  for (auto& e : j["edges"]) count[e["from"].get<std::string>()]++;
  for (auto& e : j["edges"]) {
    auto from = e["from"].get<std::string>();
    if (members.count(from)) e["branch_index"] = count[from] + 1 - e["branch_index"].get<int>();
  }
  for (auto& n : j["nodes"]) {
    n["id"] = "v_" + n["id"].get<std::string>();
    if (n.contains("info_set")) n["info_set"] = "S_" + n["info_set"].get<std::string>();
  }
  for (auto& e : j["edges"]) {
    e["from"] = "v_" + e["from"].get<std::string>();
    e["to"] = "v_" + e["to"].get<std::string>();
  }
  io::Json probs = io::Json::object();
  for (auto& [k, v] : j["nature_probs"].items()) probs["S_" + k] = v;
  j["nature_probs"] = probs;
  return io::tree_from_json(j);
}

DecisionTree affine(const DecisionTree& t, double a, double b) {
  auto j = io::tree_to_json(t);
  for (auto& n : j["nodes"])
    if (n.contains("payoff")) n["payoff"] = a * n["payoff"].get<double>() + b;
  return io::tree_from_json(j);
}

}  // namespace

TEST_CASE("four-context tree: sixteen strategies, optimum 0") {
  auto t = fx::four_context_tree(1, 2);
  auto strategies = enumerate_strategies(t);
  CHECK(strategies.size() == 16);
  CHECK(strategies.front().choices == std::vector<int>{1, 1, 1, 1});
  CHECK(strategies.back().choices == std::vector<int>{2, 2, 2, 2});
  auto states = enumerate_world_states(t);
  REQUIRE(states.size() == 4);
  for (const auto& w : states) CHECK(w.probability == doctest::Approx(0.25));

  auto opt = optimal_pure_payoff(t);
  CHECK(opt.value == 0.0);
  // U/d/T/b avoids every penalty.
  Strategy safe{{1, 2, 1, 2}};
  CHECK(std::find(opt.argmax.begin(), opt.argmax.end(), safe) != opt.argmax.end());
}

TEST_CASE("reaching +m always costs -M in the four-context tree") {
  for (double m : {0.5, 1.0, 3.0}) {
    auto t = fx::four_context_tree(m, m + 1.0);
    for (const auto& s : enumerate_strategies(t)) {
      double v = expected_payoff(s, t);
      CHECK(v <= 1e-12);
      // u at East and t at South.
      if (s.choices[1] == 1 && s.choices[3] == 1) CHECK(v < 0.0);
    }
  }
}

TEST_CASE("driver and matching trees") {
  auto amd = fx::absent_minded_driver();
  CHECK(expected_payoff(Strategy{{1}}, amd) == 1.0);
  CHECK(expected_payoff(Strategy{{2}}, amd) == 0.0);
  CHECK(optimal_pure_payoff(amd).value == 1.0);
  CHECK(optimal_pure_payoff(fx::matching_tree()).value == 0.5);
}

TEST_CASE("induced path is unique and ends at a terminal") {
  auto t = fx::glued_tree(1, 2);
  for (const auto& s : enumerate_strategies(t))
    for (const auto& w : enumerate_world_states(t)) {
      auto p = induced_path(s, w, t);
      CHECK(p.nodes.front() == t.root());
      CHECK(t.node(p.nodes.back()).kind == NodeKind::terminal);
      CHECK(p.payoff == t.node(p.nodes.back()).payoff);
    }
}

TEST_CASE("enumeration cap") {
  auto t = fx::four_context_tree(1, 2);
  CHECK_THROWS_AS(enumerate_strategies(t, 15), CapExceeded);
  CHECK_NOTHROW(enumerate_strategies(t, 16));
}

TEST_CASE("decision matrix matches brute force") {
  gen::Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto dm = decision_matrix(t);
    auto brute = oracle::all_choices(t, true);
    REQUIRE(dm.strategies.size() == brute.size());
    for (std::size_t k = 0; k < brute.size(); ++k) {
      CHECK(dm.strategies[k].choices == brute[k]);
      CHECK(dm.payoffs[k] == doctest::Approx(oracle::payoff(t, brute[k])).epsilon(1e-12));
    }
  }
}

TEST_CASE("optimum is invariant under relabeling") {
  gen::Rng rng(17);
  for (int i = 0; i < 25; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto base = optimal_pure_payoff(t).value;
    for (auto s : t.decision_sets()) {
      auto r = relabeled(t, t.info_set(s).name);
      CHECK(optimal_pure_payoff(r).value == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("positive affine payoff maps carry the optimum and argmax") {
  gen::Rng rng(19);
  std::uniform_real_distribution<double> a_dist(0.1, 5.0), b_dist(-3.0, 3.0);
  for (int i = 0; i < 25; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    double a = a_dist(rng), b = b_dist(rng);
    auto base = optimal_pure_payoff(t);
    auto moved = optimal_pure_payoff(affine(t, a, b));
    CHECK(moved.value == doctest::Approx(a * base.value + b).epsilon(1e-12));
    CHECK(moved.argmax == base.argmax);
  }
}

TEST_CASE("enumeration optimum equals backward induction under perfect recall") {
  gen::Rng rng(29);
  gen::TreeOptions o;
  o.recall = gen::Recall::perfect;
  for (int i = 0; i < 60; ++i) {
    auto t = gen::random_kuhn_tree(rng, o);
    CHECK(optimal_pure_payoff(t).value == doctest::Approx(oracle::backward_induction(t)).epsilon(1e-12));
  }
  auto pr = fx::perfect_recall_tree(1, 2);
  CHECK(oracle::backward_induction(pr) == doctest::Approx(0.25));
}

TEST_CASE("strategy description") {
  auto t = fx::four_context_tree(1, 2);
  CHECK(describe(Strategy{{1, 1, 1, 1}}, t) == "U/u/T/t");
  CHECK(describe(Strategy{{2, 1, 2, 1}}, t) == "D/u/B/t");
}
