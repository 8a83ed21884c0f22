#include "doctest.h"

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "sigtree/fixtures.hpp"
#include "sigtree/policy.hpp"
#include "sigtree/quantum.hpp"
#include "sigtree/random.hpp"

using namespace sigtree;
namespace fx = sigtree::fixtures;

namespace {

ResponsePolicy random_policy(gen::Rng& rng, const SignalScenario& sc) {
  ResponsePolicy p;
  const auto sets = sc.tree().decision_sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::uniform_int_distribution<int> move(1, sc.tree().branch_count(sets[k]));
    std::vector<int> map(sc.alphabet_size(static_cast<int>(k)));
    for (auto& m : map) m = move(rng);
    p.moves.push_back(map);
  }
  return p;
}

BehavioralPolicy random_behavioral(gen::Rng& rng, const SignalScenario& sc) {
  BehavioralPolicy p;
  const auto sets = sc.tree().decision_sets();
  std::exponential_distribution<double> e;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::vector<std::vector<double>> per;
    for (int o = 0; o < sc.alphabet_size(static_cast<int>(k)); ++o) {
      std::vector<double> w(sc.tree().branch_count(sets[k]));
      for (auto& x : w) x = e(rng);
      double s = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& x : w) x /= s;
      per.push_back(w);
    }
    p.mix.push_back(per);
  }
  return p;
}

std::vector<int> ordinals(const DecisionTree& t, std::size_t limit) {
  std::vector<int> v;
  for (std::size_t k = 0; k < t.decision_sets().size() && k < limit; ++k) v.push_back(static_cast<int>(k));
  return v;
}

}  // namespace

TEST_CASE("Hardy policy on the four-context tree") {
  const double phi5 = std::pow(quantum::phi(), 5);
  for (double m : {1.0, 2.5}) {
    auto t = fx::four_context_tree(m, m + 1);
    SignalScenario sc(t, fx::hardy_model());
    CHECK(enumerate_policies(sc).size() == 256);
    CHECK(evaluate_policy(sc, fx::hardy_policy(t)) == doctest::Approx(0.25 * phi5 * m).epsilon(1e-12));
    auto opt = optimize_policy(sc);
    CHECK(opt.value == doctest::Approx(0.25 * phi5 * m).epsilon(1e-12));
    REQUIRE(opt.argmax.size() == 1);
    CHECK(opt.argmax.front() == fx::hardy_policy(t));
  }
}

TEST_CASE("driver values") {
  auto t = fx::absent_minded_driver();
  ResponsePolicy in_on_heads{{{1, 2}}};
  CHECK(evaluate_policy(SignalScenario(t, fx::driver_iid_coins()), in_on_heads) == doctest::Approx(1.25));
  CHECK(evaluate_policy(SignalScenario(t, fx::driver_anticorrelated_coins()), in_on_heads) == doctest::Approx(2));
  CHECK(optimize_policy(SignalScenario(t, fx::driver_anticorrelated_coins())).value == doctest::Approx(2));
  CHECK(classical_exchangeable_optimum(t, 1, 2).value == doctest::Approx(1));
  auto ex = classical_exchangeable_optimum(t, 2, 2);
  CHECK(ex.value == doctest::Approx(2));
  CHECK(ex.info_set == "Driver");
}

TEST_CASE("i.i.d. coins on the driver follow 4p - 3p^2") {
  auto t = fx::absent_minded_driver();
  double best = -1, arg = -1;
  for (int i = 0; i <= 300; ++i) {
    double p = i / 300.0;
    double v = optimize_policy(SignalScenario(t, fx::driver_iid_coins(p))).value;
    // In on H: first visit passes with p, second exits on T.
    double closed = std::max({4 * p - 3 * p * p, 4 * (1 - p) - 3 * (1 - p) * (1 - p), 1.0});
    CHECK(v == doctest::Approx(closed).epsilon(1e-12));
    if (v > best) best = v, arg = p;
  }
  CHECK(best == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
  CHECK(std::min(arg, 1 - arg) == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("exchangeable optimum equals the best orbit average") {
  // Extreme points of the exchangeable polytope are uniform measures on
  // permutation orbits, so the LP optimum is a max over orbit averages.
  auto t = fx::absent_minded_driver();
  for (int k = 1; k <= 3; ++k) {
    double oracle = -INFINITY;
    std::vector<int> map(k, 1);
    std::vector<int> radix(k, 2);
    do {
      for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
          std::vector<std::pair<int, int>> orbit{{a, b}};
          if (a != b) orbit.push_back({b, a});
          double v = 0;
          for (auto [x, y] : orbit) v += map[x] == 2 ? 0.0 : (map[y] == 2 ? 4.0 : 1.0);
          oracle = std::max(oracle, v / static_cast<double>(orbit.size()));
        }
    } while (next_tuple(map, radix));
    CHECK(classical_exchangeable_optimum(t, k, 2).value == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("exchangeable optimum rejects Kuhn trees") {
  CHECK_THROWS_AS(classical_exchangeable_optimum(fx::four_context_tree(1, 2), 2, 2), PolicyError);
}

TEST_CASE("signals correlated with Nature") {
  auto t = fx::matching_tree();
  SignalScenario plain(t, fx::matching_coin());
  CHECK(optimize_policy(plain).value == doctest::Approx(0.5));
  SignalScenario informed(t, fx::matching_coin());
  informed.set_nature_joint(fx::matching_coin_with_nature());
  auto opt = optimize_policy(informed);
  CHECK(opt.value == doctest::Approx(1.0));
  REQUIRE(opt.argmax.size() == 1);
  CHECK(opt.argmax.front().moves == std::vector<std::vector<int>>{{1, 2}});
}

TEST_CASE("glued tree: quantum above classical exchangeable") {
  auto t = fx::glued_tree(1, 2);
  double classical = classical_exchangeable_optimum(t, 2, 2).value;
  double quantum = optimize_policy(SignalScenario(t, fx::glued_quantum_model())).value;
  CHECK(classical == doctest::Approx(1.0));
  CHECK(quantum == doctest::Approx(1.0 + std::pow(quantum::phi(), 5) / 8).epsilon(1e-12));
  CHECK(quantum > classical + 1e-6);
}

TEST_CASE("coverage problems") {
  auto t = fx::four_context_tree(1, 2);
  auto h = fx::hardy_model();
  // Drop the (E,S) context but keep its sites covered elsewhere.
  std::vector<Context> ctx(h.contexts().begin(), h.contexts().begin() + 3);
  EmpiricalModel partial(std::vector<Site>(h.sites().begin(), h.sites().end()), ctx);
  SignalScenario sc(t, partial);
  CHECK_FALSE(sc.coverage_problems().empty());
  CHECK_THROWS_AS(evaluate_policy(sc, fx::hardy_policy(t)), PolicyError);

  auto amd = fx::absent_minded_driver();
  EmpiricalModel first_only({Site{"Driver#1", "Driver", 1, {"H", "T"}}}, {Context{{0}, {0.5, 0.5}}});
  SignalScenario one(amd, first_only);
  CHECK_THROWS_AS(one.site_for(0, 2), PolicyError);
}

TEST_CASE("evaluation equals the pushforward formula on Kuhn trees") {
  gen::Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto mu = gen::random_joint(rng, gen::binary_sites(t, ordinals(t, 3)));
    SignalScenario sc(t, fx::single_context_model(mu));
    auto p = random_policy(rng, sc);
    CHECK(std::abs(evaluate_policy(sc, p) - pushforward_payoff(mu, p, t)) < 1e-12);
  }
}

TEST_CASE("classical signals never help on Kuhn trees") {
  gen::Rng rng(202);
  gen::TreeOptions o;
  o.recall = gen::Recall::imperfect;
  o.max_nodes = 10;
  for (int i = 0; i < 30; ++i) {
    auto t = gen::random_kuhn_tree(rng, o);
    auto mu = gen::random_joint(rng, gen::binary_sites(t, ordinals(t, 3)));
    SignalScenario sc(t, fx::single_context_model(mu));
    CHECK(optimize_policy(sc).value == doctest::Approx(optimal_pure_payoff(t).value).epsilon(1e-9));
  }
}

TEST_CASE("no-signaling boxes never help under perfect recall") {
  gen::Rng rng(303);
  gen::TreeOptions o;
  o.recall = gen::Recall::perfect;
  for (int i = 0; i < 30; ++i) {
    auto t = gen::random_kuhn_tree(rng, o);
    auto box = gen::random_no_signaling_box(rng, t);
    SignalScenario sc(t, box.model);
    CHECK(optimize_policy(sc).value == doctest::Approx(optimal_pure_payoff(t).value).epsilon(1e-9));
  }
  auto pr = fx::perfect_recall_tree(1, 2);
  CHECK(optimize_policy(SignalScenario(pr, fx::perfect_recall_hardy_model())).value == doctest::Approx(0.25));
  CHECK(optimize_policy(SignalScenario(pr, fx::perfect_recall_pr_model())).value == doctest::Approx(0.25));
  CHECK_FALSE(is_extendable(fx::perfect_recall_pr_model()).extendable);
  CHECK_FALSE(is_extendable(fx::perfect_recall_hardy_model()).extendable);
}

TEST_CASE("randomized responses never beat the best deterministic one on Kuhn trees") {
  gen::Rng rng(404);
  std::vector<SignalScenario> scenarios{
      SignalScenario(fx::four_context_tree(1, 2), fx::hardy_model()),
      SignalScenario(fx::matching_tree(), fx::matching_coin()),
      SignalScenario(fx::perfect_recall_tree(1, 2), fx::perfect_recall_pr_model()),
  };
  for (int i = 0; i < 5; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto mu = gen::random_joint(rng, gen::binary_sites(t, ordinals(t, 3)));
    scenarios.emplace_back(t, fx::single_context_model(mu));
  }
  for (const auto& sc : scenarios) {
    double best = optimize_policy(sc).value;
    for (int i = 0; i < 1000; ++i) CHECK(evaluate_policy(sc, random_behavioral(rng, sc)) <= best + 1e-12);
  }
}

TEST_CASE("randomizing per visit beats every deterministic map in the driver tree") {
  // Independent randomization at each visit acts as a private i.i.d. signal.
  auto t = fx::absent_minded_driver();
  EmpiricalModel none({}, {});
  SignalScenario sc(t, none);
  CHECK(optimize_policy(sc).value == doctest::Approx(1.0));
  BehavioralPolicy two_thirds{{{{2.0 / 3.0, 1.0 / 3.0}}}};
  CHECK(evaluate_policy(sc, two_thirds) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("deterministic behavioral policy matches its response map") {
  gen::Rng rng(505);
  SignalScenario sc(fx::four_context_tree(1, 2), fx::hardy_model());
  for (int i = 0; i < 50; ++i) {
    auto p = random_policy(rng, sc);
    BehavioralPolicy b;
    for (std::size_t k = 0; k < p.moves.size(); ++k) {
      b.mix.emplace_back();
      for (int m : p.moves[k]) {
        std::vector<double> w(2, 0.0);
        w[m - 1] = 1.0;
        b.mix.back().push_back(w);
      }
    }
    CHECK(evaluate_policy(sc, b) == doctest::Approx(evaluate_policy(sc, p)).epsilon(1e-14));
  }
}

TEST_CASE("splitting an outcome into two copies leaves the optimum unchanged") {
  auto t = fx::four_context_tree(1, 2);
  auto h = fx::hardy_model();
  double base = optimize_policy(SignalScenario(t, h)).value;
  for (double share : {0.5, 0.2}) {
    std::vector<Site> sites(h.sites().begin(), h.sites().end());
    int w = h.site_index("W");
    sites[w].alphabet.push_back("G'");
    std::vector<Context> contexts;
    for (const auto& ctx : h.contexts()) {
      Context c{ctx.sites, {}};
      auto pos = std::find(ctx.sites.begin(), ctx.sites.end(), w);
      if (pos == ctx.sites.end()) {
        contexts.push_back(ctx);
        continue;
      }
      // W is listed first in its contexts; rows of the other site follow.
      REQUIRE(pos == ctx.sites.begin());
      std::size_t inner = ctx.probs.size() / 2;
      for (std::size_t o = 0; o < inner; ++o) c.probs.push_back(ctx.probs[o] * share);
      for (std::size_t o = 0; o < inner; ++o) c.probs.push_back(ctx.probs[inner + o]);
      for (std::size_t o = 0; o < inner; ++o) c.probs.push_back(ctx.probs[o] * (1 - share));
      contexts.push_back(c);
    }
    EmpiricalModel split(sites, contexts);
    CHECK(optimize_policy(SignalScenario(t, split)).value == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("permuting outcome labels leaves the optimum unchanged") {
  auto t = fx::four_context_tree(1, 2);
  auto h = fx::hardy_model();
  std::vector<Site> sites(h.sites().begin(), h.sites().end());
  for (auto& s : sites) std::swap(s.alphabet[0], s.alphabet[1]);
  std::vector<Context> contexts;
  for (const auto& ctx : h.contexts()) {
    Context c = ctx;
    // Reindex: both outcomes flip, so flat index o maps to 3 - o.
    for (std::size_t o = 0; o < 4; ++o) c.probs[o] = ctx.probs[3 - o];
    contexts.push_back(c);
  }
  EmpiricalModel flipped(sites, contexts);
  auto a = optimize_policy(SignalScenario(t, h));
  auto b = optimize_policy(SignalScenario(t, flipped));
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
  REQUIRE(b.argmax.size() == 1);
  // The optimal map now plays the first move on the relabeled second outcome.
  for (const auto& m : b.argmax.front().moves) CHECK(m == std::vector<int>{2, 1});
}

TEST_CASE("policy optimum at least the no-signal optimum") {
  gen::Rng rng(606);
  for (int i = 0; i < 30; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto mu = gen::random_joint(rng, gen::binary_sites(t, ordinals(t, 2)));
    SignalScenario sc(t, fx::single_context_model(mu));
    CHECK(optimize_policy(sc).value >= optimal_pure_payoff(t).value - 1e-12);
  }
}

TEST_CASE("large perfect-recall search agrees with full enumeration") {
  // 4^10 policies: above the default cap, so the separable search runs.
  auto t = fx::perfect_recall_tree(1, 2);
  SignalScenario sc(t, fx::perfect_recall_pr_model());
  auto fast = optimize_policy(sc);
  CHECK(fast.value == doctest::Approx(0.25));
  for (const auto& p : fast.argmax) CHECK(evaluate_policy(sc, p) == doctest::Approx(0.25));
  CHECK(std::is_sorted(fast.argmax.begin(), fast.argmax.end()));
}

TEST_CASE("separable search matches full enumeration") {
  // A cap just under the full policy count forces the separable route.
  auto t = fx::four_context_tree(1, 2);
  SignalScenario hardy(t, fx::hardy_model());
  auto full = optimize_policy(hardy);
  auto split = optimize_policy(hardy, kDefaultTolerance, 200);
  CHECK(split.value == doctest::Approx(full.value).epsilon(1e-14));
  CHECK(split.argmax == full.argmax);

  gen::Rng rng(707);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    auto r = gen::random_kuhn_tree(rng, {});
    auto mu = gen::random_joint(rng, gen::binary_sites(r, ordinals(r, 3)));
    SignalScenario sc(r, fx::single_context_model(mu));
    auto all = enumerate_policies(sc).size();
    if (all < 8) continue;
    auto a = optimize_policy(sc);
    PolicyOptimum b;
    try {
      b = optimize_policy(sc, kDefaultTolerance, all - 1);
    } catch (const CapExceeded&) {
      continue;
    }
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-12));
    CHECK(b.argmax == a.argmax);
    ++compared;
  }
  CHECK(compared > 10);
}

TEST_CASE("policy description") {
  auto t = fx::four_context_tree(1, 2);
  SignalScenario sc(t, fx::hardy_model());
  CHECK(describe(fx::hardy_policy(t), sc) == "West{G->U,R->D} East{G->u,R->d} North{G->T,R->B} South{G->t,R->b}");
}
