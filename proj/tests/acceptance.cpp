// Acceptance checks. One line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sigtree/fixtures.hpp"
#include "sigtree/policy.hpp"
#include "sigtree/quantum.hpp"
#include "sigtree/random.hpp"

using namespace sigtree;
namespace fx = sigtree::fixtures;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  bool pass = r.pass && in_time;
  if (!pass) ++failures;
  std::printf("%-5s %s  %s  [%s] (%.3f s%s)\n", id, pass ? "PASS" : "FAIL", title, r.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double context_prob(const EmpiricalModel& m, const char* a, const char* b, const char* outcome) {
  for (const auto& ctx : m.contexts()) {
    if (m.site(ctx.sites[0]).id != a || m.site(ctx.sites[1]).id != b) continue;
    for (std::size_t o = 0; o < ctx.probs.size(); ++o)
      if (m.outcome_string(ctx, o) == outcome) return ctx.probs[o];
  }
  throw std::runtime_error("missing context");
}

std::vector<int> first_ordinals(const DecisionTree& t, std::size_t n) {
  std::vector<int> v;
  for (std::size_t k = 0; k < t.decision_sets().size() && k < n; ++k) v.push_back(static_cast<int>(k));
  return v;
}

}  // namespace

int main() {
  const double phi = quantum::phi();
  const double phi5 = std::pow(phi, 5);

  criterion("AC1", "four-context tree, no signals: optimum 0 over 16 strategies", 1.0, [] {
    auto t = fx::four_context_tree(1, 2);
    auto n = enumerate_strategies(t).size();
    auto opt = optimal_pure_payoff(t);
    return Outcome{n == 16 && opt.value == 0.0, fmt("strategies %.0f, optimum %.17g", double(n), opt.value)};
  });

  criterion("AC2", "four-context tree, Hardy signals: optimum phi^5/4 by G->U/u/T/t", 1.0, [&] {
    auto t = fx::four_context_tree(1, 2);
    SignalScenario sc(t, fx::hardy_model());
    auto n = enumerate_policies(sc).size();
    auto opt = optimize_policy(sc);
    bool by_hardy = std::find(opt.argmax.begin(), opt.argmax.end(), fx::hardy_policy(t)) != opt.argmax.end();
    double hardy_value = evaluate_policy(sc, fx::hardy_policy(t));
    bool ok = n == 256 && std::abs(opt.value - phi5 / 4) < 1e-9 && by_hardy && std::abs(hardy_value - phi5 / 4) < 1e-9;
    return Outcome{ok, fmt("policies %.0f, optimum %.12f, target %.12f", double(n), opt.value, phi5 / 4)};
  });

  criterion("AC3", "100 imperfect-recall Kuhn trees x classical joints: signals add nothing", 60.0, [] {
    gen::Rng rng(6101);
    gen::TreeOptions o;
    o.recall = gen::Recall::imperfect;
    o.max_nodes = 10;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      auto t = gen::random_kuhn_tree(rng, o);
      auto mu = gen::random_joint(rng, gen::binary_sites(t, first_ordinals(t, 3)));
      SignalScenario sc(t, fx::single_context_model(mu));
      worst = std::max(worst, std::abs(optimize_policy(sc).value - optimal_pure_payoff(t).value));
    }
    return Outcome{worst <= 1e-9, fmt("max |signal - none| = %.3g", worst)};
  });

  criterion("AC4", "100 perfect-recall trees x no-signaling boxes: signals add nothing", 60.0, [] {
    gen::Rng rng(7202);
    gen::TreeOptions o;
    o.recall = gen::Recall::perfect;
    double worst = 0;
    int non_extendable = 0;
    for (int i = 0; i < 100; ++i) {
      auto t = gen::random_kuhn_tree(rng, o);
      auto box = gen::random_no_signaling_box(rng, t);
      if (!is_no_signaling(box.model).no_signaling) return Outcome{false, "generated box signals"};
      if (box.has_pr_cycle && !is_extendable(box.model).extendable) ++non_extendable;
      SignalScenario sc(t, box.model);
      worst = std::max(worst, std::abs(optimize_policy(sc).value - optimal_pure_payoff(t).value));
    }
    return Outcome{worst <= 1e-9 && non_extendable > 0,
                   fmt("max |signal - none| = %.3g, non-extendable boxes %.0f", worst, double(non_extendable))};
  });

  criterion("AC5", "Hardy model is not extendable; zero forcing pins rows 1-7,9,12,15,16", 1.0, [] {
    auto m = fx::hardy_model();
    auto v = is_extendable(m);
    auto z = zero_forcing_check(m);
    std::vector<int> rows;
    for (auto idx : z.forced_zero) rows.push_back(quantum::hardy_table_row(idx));
    std::sort(rows.begin(), rows.end());
    const std::vector<int> expected{1, 2, 3, 4, 5, 6, 7, 9, 12, 15, 16};
    bool at_es = z.contradiction && m.context_key(m.context(z.context)) == "E,S" &&
                 m.outcome_string(m.context(z.context), z.outcome) == "GG";
    bool ok = !v.extendable && v.witness && rows == expected && at_es;
    std::string list;
    for (int r : rows) list += (list.empty() ? "" : ",") + std::to_string(r);
    return Outcome{ok, "forced rows {" + list + "}, contradiction " + (at_es ? "at P(GG|E,S)" : "missing")};
  });

  criterion("AC6", "Hardy model is no-signaling; West marginal is phi in both contexts", 0, [&] {
    auto m = fx::hardy_model();
    auto ns = is_no_signaling(m);
    double wn = context_prob(m, "W", "N", "GG") + context_prob(m, "W", "N", "GR");
    double ws = context_prob(m, "W", "S", "GG") + context_prob(m, "W", "S", "GR");
    bool ok = ns.no_signaling && ns.max_gap < 1e-10 && std::abs(wn - phi) < 1e-9 && std::abs(ws - phi) < 1e-9;
    return Outcome{ok, fmt("max gap %.3g, P(W=G) = %.12f / %.12f", ns.max_gap, wn, ws)};
  });

  criterion("AC7", "Hardy table entries", 0, [&] {
    auto m = fx::hardy_model();
    double row[4] = {context_prob(m, "W", "N", "GG"), context_prob(m, "W", "N", "GR"),
                     context_prob(m, "W", "N", "RG"), context_prob(m, "W", "N", "RR")};
    double target[4] = {std::pow(phi, 3), phi * phi, phi * phi, 0};
    double err = 0;
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(row[i] - target[i]));
    err = std::max(err, std::abs(context_prob(m, "E", "N", "GG")));
    err = std::max(err, std::abs(context_prob(m, "W", "S", "GG")));
    double es = context_prob(m, "E", "S", "GG");
    err = std::max(err, std::abs(es - (5 * std::sqrt(5.0) - 11) / 2));
    err = std::max(err, std::abs(es - phi5));
    return Outcome{err < 1e-9, fmt("max error %.3g, P(GG|E,S) = %.12f", err, es)};
  });

  criterion("AC8", "driver: 1, 5/4, 2, exchangeable optimum 2", 1.0, [] {
    auto t = fx::absent_minded_driver();
    ResponsePolicy in_on_heads{{{1, 2}}};
    double none = optimal_pure_payoff(t).value;
    double iid = evaluate_policy(SignalScenario(t, fx::driver_iid_coins()), in_on_heads);
    double anti = evaluate_policy(SignalScenario(t, fx::driver_anticorrelated_coins()), in_on_heads);
    double ex = classical_exchangeable_optimum(t, 2, 2).value;
    bool ok = std::abs(none - 1) < 1e-12 && std::abs(iid - 1.25) < 1e-12 && std::abs(anti - 2) < 1e-12 &&
              std::abs(ex - 2) < 1e-12;
    return Outcome{ok, fmt("%.15g / %.15g / %.15g", none, iid, anti) + fmt(" / exchangeable %.15g", ex)};
  });

  criterion("AC9", "matching tree: 1 with signal tied to Nature, 1/2 with independent signal", 0, [] {
    auto t = fx::matching_tree();
    SignalScenario independent(t, fx::matching_coin());
    SignalScenario correlated(t, fx::matching_coin());
    correlated.set_nature_joint(fx::matching_coin_with_nature());
    double a = optimize_policy(correlated).value;
    double b = optimize_policy(independent).value;
    return Outcome{a == 1.0 && b == 0.5, fmt("correlated %.17g, independent %.17g", a, b)};
  });

  criterion("AC10", "evaluation = pushforward on 500 Kuhn scenarios; memory lemmas on 200 trees", 0, [] {
    gen::Rng rng(1010);
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
      auto t = gen::random_kuhn_tree(rng, {});
      auto mu = gen::random_joint(rng, gen::binary_sites(t, first_ordinals(t, 3)));
      SignalScenario sc(t, fx::single_context_model(mu));
      ResponsePolicy p;
      const auto sets = t.decision_sets();
      for (std::size_t k = 0; k < sets.size(); ++k) {
        std::uniform_int_distribution<int> move(1, t.branch_count(sets[k]));
        std::vector<int> map(sc.alphabet_size(static_cast<int>(k)));
        for (auto& x : map) x = move(rng);
        p.moves.push_back(map);
      }
      worst = std::max(worst, std::abs(evaluate_policy(sc, p) - pushforward_payoff(mu, p, t)));
    }

    gen::TreeOptions o;
    o.recall = gen::Recall::perfect;
    int lemma_failures = 0;
    for (int i = 0; i < 200; ++i) {
      auto t = gen::random_kuhn_tree(rng, o);
      auto strategies = enumerate_strategies(t);
      for (auto early : t.decision_sets())
        for (auto late : t.decision_sets()) {
          if (!precedes(early, late, t)) continue;
          int k = t.info_set(early).ordinal;
          for (const auto& a : strategies) {
            if (!allowed_under(late, a, t)) continue;
            for (const auto& b : strategies) {
              if (!allowed_under(late, b, t)) continue;
              if (!allowed_under(early, a, t) || !allowed_under(early, b, t) || a.choices[k] != b.choices[k])
                ++lemma_failures;
            }
          }
          auto ev_early = info_event(early, t);
          for (const auto& w : info_event(late, t))
            if (std::none_of(ev_early.begin(), ev_early.end(),
                             [&](const WorldState& x) { return x.choices == w.choices; }))
              ++lemma_failures;
        }
    }
    return Outcome{worst <= 1e-12 && lemma_failures == 0,
                   fmt("max |evaluate - pushforward| = %.3g, lemma failures %.0f", worst, double(lemma_failures))};
  });

  criterion("extra", "glued non-Kuhn tree: classical exchangeable < quantum-augmented", 0, [&] {
    auto t = fx::glued_tree(1, 2);
    double classical = classical_exchangeable_optimum(t, 2, 2).value;
    double quantum = optimize_policy(SignalScenario(t, fx::glued_quantum_model())).value;
    return Outcome{quantum > classical + 1e-9, fmt("classical %.12f < quantum %.12f", classical, quantum)};
  });

  std::printf("%s\n", failures == 0 ? "all acceptance criteria pass" : "acceptance failures present");
  return failures == 0 ? 0 : 1;
}
