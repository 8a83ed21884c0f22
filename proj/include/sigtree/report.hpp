#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sigtree/fixtures.hpp"
#include "sigtree/io.hpp"

namespace sigtree::report {

using io::Json;

// "φ^5/4", "1 + φ^5/8", "5/4"; empty when no short form within 1e-12.
std::string symbolic(double x);

// Number followed by its symbolic form when that adds something.
std::string with_symbolic(double x);

struct MatrixReport {
  std::vector<std::string> sets;
  std::vector<std::vector<std::string>> rows;  // branch labels per strategy
  std::vector<double> payoffs;
};

struct AnalyzeReport {
  bool valid = true;
  std::vector<std::string> violations;
  bool kuhn = true;
  std::string kuhn_offending_set;
  std::vector<std::string> kuhn_offending_path;
  bool perfect_recall = true;
  std::string recall_detail;
  std::size_t strategy_count = 0;
  std::size_t world_state_count = 0;
  MatrixReport matrix;
  double pure_optimum = 0.0;
  std::vector<std::vector<std::string>> argmax;
};

struct WitnessTerm {
  std::string context;
  std::string outcome;
  double coefficient = 0.0;
};

struct OutcomeWeight {
  std::string outcome;
  double probability = 0.0;
};

struct BoxReport {
  bool no_signaling = true;
  double max_gap = 0.0;
  std::vector<std::string> signaling_violations;
  bool extendable = false;
  double infeasibility = 0.0;
  std::vector<WitnessTerm> witness;  // nonzero coefficients only
  double witness_required = 0.0;
  double witness_max_point = 0.0;
  std::vector<std::string> extension_sites;
  std::vector<OutcomeWeight> extension;  // nonzero points only
  bool zero_forcing_contradiction = false;
  std::vector<std::string> forced_zero;  // joint outcomes, labels in site order
  std::string zero_forcing_context;
  std::string zero_forcing_outcome;
};

struct SolveReport {
  std::string mode;  // "policy" or "exchangeable"
  double value = 0.0;
  std::string symbolic;
  double pure_optimum = 0.0;
  std::vector<Json> policies;  // {info_set: {outcome: move}}
  std::size_t optimal_policy_count = 0;
  std::vector<std::string> distribution_sites;
  std::vector<OutcomeWeight> distribution;  // exchangeable mode
};

AnalyzeReport analyze(const DecisionTree& tree, double tol = kDefaultTolerance);
BoxReport inspect_box(const EmpiricalModel& model, double tol = kDefaultTolerance);
// Throws PolicyError when the model does not cover the tree.
SolveReport solve(const DecisionTree& tree, const EmpiricalModel& model, double tol = kDefaultTolerance,
                  std::size_t listed_policies = 8);
SolveReport solve_exchangeable(const DecisionTree& tree, int alphabet, double tol = kDefaultTolerance);

Json to_json(const AnalyzeReport& r);
Json to_json(const BoxReport& r);
Json to_json(const SolveReport& r);
Json to_json(const fixtures::DemoReport& r);
Json to_json(const fixtures::ComparisonTable& t);

AnalyzeReport analyze_from_json(const Json& j);
BoxReport box_from_json(const Json& j);
SolveReport solve_from_json(const Json& j);
fixtures::DemoReport demo_from_json(const Json& j);
fixtures::ComparisonTable table_from_json(const Json& j);

std::string to_text(const AnalyzeReport& r);
std::string to_text(const BoxReport& r);
std::string to_text(const SolveReport& r);
std::string to_text(const fixtures::DemoReport& r);
std::string to_text(const fixtures::ComparisonTable& t);

// RFC 4180, CRLF line ends. The analyze CSV is the decision matrix.
std::string to_csv(const AnalyzeReport& r);
std::string to_csv(const BoxReport& r);
std::string to_csv(const SolveReport& r);
std::string to_csv(const fixtures::DemoReport& r);
std::string to_csv(const fixtures::ComparisonTable& t);

std::string csv_field(const std::string& s);

}  // namespace sigtree::report
