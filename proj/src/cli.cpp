#include "sigtree/cli.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sigtree/report.hpp"

namespace sigtree::cli {

namespace {

enum class Format { text, json, csv };

struct Options {
  double tol = kDefaultTolerance;
  Format format = Format::text;
  double m = 1.0;
  double big_m = 2.0;
  std::uint64_t seed = 7;
};

template <typename Report>
void emit(const Report& r, Format f, std::ostream& out) {
  switch (f) {
    case Format::json:
      out << report::to_json(r).dump(2) << "\n";
      break;
    case Format::csv:
      out << report::to_csv(r);
      break;
    default:
      out << report::to_text(r);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision trees with signal models: analysis, policy optimization and demos", "sigtree"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};
  app.add_option("--tol", opt.tol, "numerical tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "report format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--m", opt.m, "reward m of the four-context tree")->capture_default_str();
  app.add_option("--M", opt.big_m, "penalty M of the four-context tree")->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for randomized draws")->capture_default_str();

  std::string tree_path;
  std::string box_path;
  std::string scenario;
  bool exchangeable = false;

  auto* analyze = app.add_subcommand("analyze", "validity, Kuhn, recall, decision matrix, pure optimum");
  analyze->add_option("tree", tree_path, "tree JSON")->required();

  auto* box = app.add_subcommand("box", "no-signaling and extendability verdict with certificate");
  box->add_option("model", box_path, "model JSON")->required();

  auto* solve = app.add_subcommand("solve", "best signal-contingent policy");
  solve->add_option("tree", tree_path, "tree JSON")->required();
  solve->add_option("--box", box_path, "model JSON");
  solve->add_flag("--exchangeable", exchangeable,
                  "best classical exchangeable signals on the repeated decision set");

  auto* demo = app.add_subcommand("demo", "built-in scenario with its expected-value manifest");
  std::string names;
  for (const auto& n : fixtures::builtin_names()) names += (names.empty() ? "" : ", ") + n;
  demo->add_option("scenario", scenario, "one of: " + names)->required();

  auto* table = app.add_subcommand("table1", "recompute the signal-value comparison across tree classes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
      err << sub->help();
    else
      err << app.help();
    return kExitInputError;
  }

  fixtures::ScenarioParams params;
  params.m = opt.m;
  params.big_m = opt.big_m;
  params.seed = opt.seed;

  try {
    if (*analyze) {
      auto tree = io::tree_from_json(io::read_json_file(tree_path));
      emit(report::analyze(tree, opt.tol), opt.format, out);
      return kExitOk;
    }
    if (*box) {
      auto model = io::model_from_json(io::read_json_file(box_path));
      emit(report::inspect_box(model, opt.tol), opt.format, out);
      return kExitOk;
    }
    if (*solve) {
      auto tree = io::tree_from_json(io::read_json_file(tree_path));
      auto problems = validate_tree(tree, opt.tol);
      if (!problems.empty()) {
        for (const auto& p : problems) err << tree_path << ": " << p.code << ": " << p.message << "\n";
        return kExitInputError;
      }
      std::optional<EmpiricalModel> model;
      if (!box_path.empty()) model = io::model_from_json(io::read_json_file(box_path));
      if (exchangeable) {
        int alphabet = 2;
        if (model) {
          auto visits = max_visits_per_set(tree);
          const auto sets = tree.decision_sets();
          for (std::size_t k = 0; k < sets.size(); ++k) {
            if (visits[k] < 2) continue;
            for (const auto& s : model->sites())
              if (s.info_set == tree.info_set(sets[k]).name) alphabet = static_cast<int>(s.alphabet.size());
          }
        }
        emit(report::solve_exchangeable(tree, alphabet, opt.tol), opt.format, out);
        return kExitOk;
      }
      if (!model) {
        err << "solve: --box is required unless --exchangeable is given\n";
        return kExitInputError;
      }
      emit(report::solve(tree, *model, opt.tol), opt.format, out);
      return kExitOk;
    }
    if (*demo) {
      auto bundle = fixtures::builtin_scenario(scenario, params);
      auto problems = validate_tree(bundle.tree, opt.tol);
      if (!problems.empty()) {
        err << "fixture " << scenario << " failed validation: " << problems.front().message << "\n";
        return kExitManifestMismatch;
      }
      auto result = fixtures::run_demo(bundle);
      emit(result, opt.format, out);
      return result.pass ? kExitOk : kExitManifestMismatch;
    }
    if (*table) {
      auto t = fixtures::proposition_table(params, opt.tol);
      emit(t, opt.format, out);
      return t.holds ? kExitOk : kExitManifestMismatch;
    }
  } catch (const io::InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    // TreeError, ModelError, PolicyError, CapExceeded
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace sigtree::cli
