#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigtree/play.hpp"
#include "sigtree/random.hpp"

using namespace sigtree;

TEST_CASE("generated trees respect the requested shape") {
  gen::Rng rng(1);
  for (auto recall : {gen::Recall::any, gen::Recall::perfect, gen::Recall::imperfect}) {
    gen::TreeOptions o;
    o.recall = recall;
    for (int i = 0; i < 30; ++i) {
      auto t = gen::random_kuhn_tree(rng, o);
      CHECK(validate_tree(t).empty());
      CHECK(is_kuhn(t).kuhn);
      CHECK(all_decision_nodes_nontrivial(t));
      CHECK(t.node_count() <= o.max_nodes);
      CHECK(t.decision_sets().size() <= o.max_decision_sets);
      CHECK(enumerate_world_states(t).size() <= o.max_world_states);
      for (const auto& n : t.nodes())
        if (n.kind == NodeKind::terminal) {
          CHECK(n.payoff == std::round(n.payoff));
          CHECK(std::abs(n.payoff) <= o.payoff_range);
        }
      if (recall != gen::Recall::any)
        CHECK(has_perfect_recall(t).perfect_recall == (recall == gen::Recall::perfect));
    }
  }
}

TEST_CASE("same seed, same tree") {
  gen::Rng a(99), b(99);
  for (int i = 0; i < 5; ++i) {
    auto x = gen::random_kuhn_tree(a, {});
    auto y = gen::random_kuhn_tree(b, {});
    REQUIRE(x.node_count() == y.node_count());
    for (std::size_t k = 0; k < x.node_count(); ++k) CHECK(x.nodes()[k].id == y.nodes()[k].id);
  }
}

TEST_CASE("random distributions are normalized") {
  gen::Rng rng(2);
  for (std::size_t n = 1; n < 10; ++n) {
    auto p = gen::random_distribution(rng, n);
    CHECK(p.size() == n);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : p) CHECK(x >= 0.0);
  }
}

TEST_CASE("path site sets cover every path") {
  gen::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto t = gen::random_kuhn_tree(rng, {});
    auto sets = gen::path_site_sets(t);
    for (const auto& path : all_paths(t)) {
      std::vector<int> on_path;
      for (NodeRef n : path)
        if (t.node(n).kind == NodeKind::decision) on_path.push_back(t.info_set(*t.node(n).info_set).ordinal);
      std::sort(on_path.begin(), on_path.end());
      bool covered = on_path.empty();
      for (auto s : sets) {
        std::sort(s.begin(), s.end());
        covered = covered || std::includes(s.begin(), s.end(), on_path.begin(), on_path.end());
      }
      CHECK(covered);
    }
  }
}
