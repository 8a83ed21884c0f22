#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sigtree/cli.hpp"
#include "sigtree/fixtures.hpp"
#include "sigtree/io.hpp"
#include "sigtree/random.hpp"
#include "sigtree/report.hpp"

using namespace sigtree;
namespace fx = sigtree::fixtures;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sigtree");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto dir = fs::temp_directory_path() / "sigtree_cli_test";
  fs::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("every built-in scenario reproduces its manifest") {
  for (const auto& name : fx::builtin_names()) {
    auto bundle = fx::builtin_scenario(name);
    CHECK(validate_tree(bundle.tree).empty());
    CHECK_FALSE(bundle.manifest.empty());
    auto r = fx::run_demo(bundle);
    CHECK_MESSAGE(r.pass, name);
    for (const auto& x : r.results) CHECK(!x.origin.empty());
  }
  CHECK_THROWS_AS(fx::builtin_scenario("fig99"), std::invalid_argument);
  fx::ScenarioParams bad;
  bad.m = 2;
  bad.big_m = 1;
  CHECK_THROWS_AS(fx::builtin_scenario("fig10", bad), std::invalid_argument);
}

TEST_CASE("a wrong expectation fails the demo") {
  auto bundle = fx::builtin_scenario("amd");
  bundle.manifest.front().expected = 7;
  auto r = fx::run_demo(bundle);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.results.front().pass);
}

TEST_CASE("comparison table holds") {
  auto t = fx::proposition_table();
  CHECK(t.holds);
  CHECK(t.rows.size() == 4);
}

TEST_CASE("tree JSON round trip") {
  gen::Rng rng(9);
  std::vector<DecisionTree> trees{fx::four_context_tree(1, 2), fx::absent_minded_driver(), fx::glued_tree(1, 2)};
  for (int i = 0; i < 20; ++i) trees.push_back(gen::random_kuhn_tree(rng, {}));
  for (const auto& t : trees) {
    auto j = io::tree_to_json(t);
    auto back = io::tree_from_json(io::Json::parse(j.dump()));
    CHECK(io::tree_to_json(back) == j);
    CHECK(optimal_pure_payoff(back).value == optimal_pure_payoff(t).value);
  }
}

TEST_CASE("model JSON round trip") {
  std::vector<EmpiricalModel> models{fx::hardy_model(), fx::driver_iid_coins(0.3), fx::perfect_recall_pr_model()};
  gen::Rng rng(10);
  gen::TreeOptions o;
  o.recall = gen::Recall::perfect;
  for (int i = 0; i < 10; ++i) models.push_back(gen::random_no_signaling_box(rng, gen::random_kuhn_tree(rng, o)).model);
  for (const auto& m : models) {
    auto j = io::model_to_json(m);
    auto back = io::model_from_json(io::Json::parse(j.dump()));
    REQUIRE(back.contexts().size() == m.contexts().size());
    for (std::size_t c = 0; c < m.contexts().size(); ++c)
      CHECK(back.context(static_cast<int>(c)).probs == m.context(static_cast<int>(c)).probs);
    CHECK(io::model_to_json(back) == j);
  }
}

TEST_CASE("malformed inputs are rejected with a message") {
  CHECK_THROWS_AS(io::tree_from_json(io::Json::parse(R"({"edges": []})")), io::InputError);
  CHECK_THROWS_AS(io::tree_from_json(io::Json::parse(R"({"nodes": [{"id": "a", "kind": "spooky"}]})")),
                  io::InputError);
  CHECK_THROWS_AS(io::tree_from_json(io::Json::parse(
                      R"({"nodes": [{"id": "a", "kind": "dm", "info_set": "I"}],
                          "edges": [{"from": "a", "to": "b", "branch_label": "x", "branch_index": 1}]})")),
                  io::InputError);
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(
                      R"({"sites": [{"id": "a", "info_set": "I", "alphabet": ["0", "1"]}],
                          "contexts": [["a"]], "distributions": {"a": {"2": 1.0}}})")),
                  io::InputError);
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(
                      R"({"sites": [{"id": "a", "info_set": "I", "alphabet": ["0", "1"]}],
                          "contexts": [["z"]], "distributions": {}})")),
                  io::InputError);
}

TEST_CASE("symbolic rendering") {
  const double f = quantum::phi();
  CHECK(report::symbolic(0.25 * std::pow(f, 5)) == "φ^5/4");
  CHECK(report::symbolic(std::pow(f, 5)) == "φ^5");
  CHECK(report::symbolic(1 + std::pow(f, 5) / 8) == "1 + φ^5/8");
  CHECK(report::symbolic(1.25) == "5/4");
  CHECK(report::symbolic(f) == "φ");
  CHECK(report::symbolic(2 * f * f) == "2φ^2");
  CHECK(report::symbolic(0.123456789).empty());
  CHECK(report::with_symbolic(1.25) == "1.25");
}

TEST_CASE("CSV quoting") {
  CHECK(report::csv_field("plain") == "plain");
  CHECK(report::csv_field("a,b") == "\"a,b\"");
  CHECK(report::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(report::csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("decision matrix CSV") {
  auto r = report::analyze(fx::four_context_tree(1, 2));
  auto csv = report::to_csv(r);
  std::size_t lines = 0;
  for (std::size_t p = 0; (p = csv.find("\r\n", p)) != std::string::npos; p += 2) ++lines;
  CHECK(lines == 17);
  CHECK(csv.rfind("West,East,North,South,payoff\r\n", 0) == 0);
}

TEST_CASE("report JSON parses back into the report schema") {
  auto a = report::analyze(fx::four_context_tree(1, 2));
  auto a2 = report::analyze_from_json(io::Json::parse(report::to_json(a).dump()));
  CHECK(report::to_json(a2) == report::to_json(a));

  auto b = report::inspect_box(fx::hardy_model());
  auto b2 = report::box_from_json(io::Json::parse(report::to_json(b).dump()));
  CHECK(report::to_json(b2) == report::to_json(b));
  CHECK_FALSE(b2.extendable);
  CHECK(b2.forced_zero.size() == 11);

  auto s = report::solve(fx::four_context_tree(1, 2), fx::hardy_model());
  auto s2 = report::solve_from_json(io::Json::parse(report::to_json(s).dump()));
  CHECK(report::to_json(s2) == report::to_json(s));
  CHECK(s2.symbolic == "φ^5/4");

  auto d = fx::run_demo(fx::builtin_scenario("fig8"));
  auto d2 = report::demo_from_json(io::Json::parse(report::to_json(d).dump()));
  CHECK(report::to_json(d2) == report::to_json(d));

  auto t = fx::proposition_table();
  auto t2 = report::table_from_json(io::Json::parse(report::to_json(t).dump()));
  CHECK(report::to_json(t2) == report::to_json(t));
}

TEST_CASE("command line: demos and table") {
  auto r = run({"demo", "fig10", "--m", "1", "--M", "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("φ^5/4") != std::string::npos);
  CHECK(r.out.find("0.02254248594") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);

  auto amd = run({"demo", "amd", "--format", "json"});
  CHECK(amd.code == cli::kExitOk);
  auto rep = report::demo_from_json(io::Json::parse(amd.out));
  CHECK(rep.pass);
  std::vector<double> got;
  for (const auto& x : rep.results) got.push_back(x.computed);
  CHECK(got == std::vector<double>{1, 1.25, 2, 2});

  CHECK(run({"table1"}).code == cli::kExitOk);
  CHECK(run({"demo", "perfect_recall_demo", "--format", "csv"}).code == cli::kExitOk);
}

TEST_CASE("command line: file subcommands") {
  auto tree = write_temp("fig10.json", io::tree_to_json(fx::four_context_tree(1, 2)).dump());
  auto box = write_temp("hardy.json", io::model_to_json(fx::hardy_model()).dump());
  auto amd = write_temp("amd.json", io::tree_to_json(fx::absent_minded_driver()).dump());

  auto a = run({"analyze", tree});
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out.find("perfect recall: no") != std::string::npos);

  auto b = run({"box", box});
  CHECK(b.code == cli::kExitOk);
  CHECK(b.out.find("no-signaling: yes; extendable: NO") != std::string::npos);
  CHECK(b.out.find("witness") != std::string::npos);

  auto s = run({"solve", tree, "--box", box, "--format", "json"});
  CHECK(s.code == cli::kExitOk);
  auto rep = report::solve_from_json(io::Json::parse(s.out));
  CHECK(rep.value == doctest::Approx(0.25 * std::pow(quantum::phi(), 5)));
  CHECK(rep.policies.front()["West"]["G"] == "U");

  auto e = run({"solve", amd, "--exchangeable"});
  CHECK(e.code == cli::kExitOk);
  CHECK(e.out.find("optimum: 2") != std::string::npos);
}

TEST_CASE("command line: input errors exit with 2") {
  CHECK(run({}).code == cli::kExitInputError);
  CHECK(run({"demo"}).code == cli::kExitInputError);
  CHECK(run({"demo", "nope"}).code == cli::kExitInputError);
  CHECK(run({"demo", "fig10", "--m", "3", "--M", "2"}).code == cli::kExitInputError);
  CHECK(run({"demo", "fig10", "--format", "xml"}).code == cli::kExitInputError);
  CHECK(run({"analyze", "/nonexistent/tree.json"}).code == cli::kExitInputError);
  auto broken = write_temp("broken.json", "{ not json");
  auto r = run({"analyze", broken});
  CHECK(r.code == cli::kExitInputError);
  CHECK_FALSE(r.err.empty());
  auto tree = write_temp("fig10b.json", io::tree_to_json(fx::four_context_tree(1, 2)).dump());
  CHECK(run({"solve", tree}).code == cli::kExitInputError);
  CHECK(run({"--help"}).code == cli::kExitOk);
}
