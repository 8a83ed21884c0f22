#include "sigtree/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace sigtree::fixtures {

NLOHMANN_JSON_SERIALIZE_ENUM(Relation, {{Relation::equal, "equal"}, {Relation::greater, "greater"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ManifestResult, key, description, expected, computed, tolerance, origin,
                                   relation, pass)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DemoReport, name, summary, results, pass)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TableCell, label, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TableRow, tree_class, fixture, cells, expected, observed, holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ComparisonTable, rows, holds)

}  // namespace sigtree::fixtures

namespace sigtree::report {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MatrixReport, sets, rows, payoffs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalyzeReport, valid, violations, kuhn, kuhn_offending_set,
                                   kuhn_offending_path, perfect_recall, recall_detail, strategy_count,
                                   world_state_count, matrix, pure_optimum, argmax)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WitnessTerm, context, outcome, coefficient)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OutcomeWeight, outcome, probability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoxReport, no_signaling, max_gap, signaling_violations, extendable,
                                   infeasibility, witness, witness_required, witness_max_point,
                                   extension_sites, extension, zero_forcing_contradiction, forced_zero,
                                   zero_forcing_context, zero_forcing_outcome)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SolveReport, mode, value, symbolic, pure_optimum, policies,
                                   optimal_policy_count, distribution_sites, distribution)

namespace {

std::string num(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

bool as_rational(double x, long& p, long& q) {
  for (q = 1; q <= 16; ++q) {
    double n = std::round(x * static_cast<double>(q));
    if (std::abs(n) > 256) continue;
    if (std::abs(x - n / static_cast<double>(q)) <= 1e-12 * std::max(1.0, std::abs(x))) {
      p = static_cast<long>(n);
      return true;
    }
  }
  return false;
}

std::string rational_text(long p, long q) {
  return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
}

// r * phi^k with r = p/q > 0, written as "3φ^2/4".
std::string phi_term(long p, long q, int k) {
  std::string power = k == 1 ? "φ" : "φ^" + std::to_string(k);
  std::string head = p == 1 ? power : std::to_string(p) + power;
  return q == 1 ? head : head + "/" + std::to_string(q);
}

std::string phi_multiple(double x) {
  const double phi = quantum::phi();
  for (int k = 1; k <= 8; ++k) {
    long p = 0, q = 1;
    if (as_rational(x / std::pow(phi, k), p, q) && p != 0) {
      if (p < 0) return "-" + phi_term(-p, q, k);
      return phi_term(p, q, k);
    }
  }
  return {};
}

// Columns padded to their widest entry.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  auto display = [](const std::string& s) {
    // UTF-8 continuation bytes take no column.
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  };
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], display(r[i]));
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - display(r[i]) + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string full_precision(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string symbolic(double x) {
  if (!std::isfinite(x)) return {};
  long p = 0, q = 1;
  if (as_rational(x, p, q)) return rational_text(p, q);
  if (auto s = phi_multiple(x); !s.empty()) return s;
  for (long a = 1; a <= 4; ++a)
    for (long sign : {1L, -1L}) {
      long whole = sign * a;
      auto rest = phi_multiple(x - static_cast<double>(whole));
      if (rest.empty()) continue;
      if (rest[0] == '-') return std::to_string(whole) + " - " + rest.substr(1);
      return std::to_string(whole) + " + " + rest;
    }
  return {};
}

std::string with_symbolic(double x) {
  auto s = symbolic(x);
  if (s.empty() || s.find("φ") == std::string::npos) return num(x);
  return num(x) + " (" + s + ")";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// ---- builders --------------------------------------------------------------

AnalyzeReport analyze(const DecisionTree& tree, double tol) {
  AnalyzeReport r;
  for (const auto& v : validate_tree(tree, tol)) r.violations.push_back(v.code + ": " + v.message);
  r.valid = r.violations.empty();
  auto kuhn = is_kuhn(tree);
  r.kuhn = kuhn.kuhn;
  if (kuhn.offending_set) r.kuhn_offending_set = tree.info_set(*kuhn.offending_set).name;
  for (NodeRef n : kuhn.offending_path) r.kuhn_offending_path.push_back(tree.node(n).id);
  if (!r.valid) return r;

  auto recall = has_perfect_recall(tree);
  r.perfect_recall = recall.perfect_recall;
  if (!recall.perfect_recall && recall.info_set && recall.allowed && recall.not_allowed && recall.strategy)
    r.recall_detail = "under " + describe(*recall.strategy, tree) + ", '" + tree.node(*recall.allowed).id +
                      "' in " + tree.info_set(*recall.info_set).name + " is allowed but '" +
                      tree.node(*recall.not_allowed).id + "' is not";

  const auto sets = tree.decision_sets();
  for (auto s : sets) r.matrix.sets.push_back(tree.info_set(s).name);
  auto dm = decision_matrix(tree);
  r.strategy_count = dm.strategies.size();
  r.world_state_count = enumerate_world_states(tree).size();
  auto labels = [&](const Strategy& s) {
    std::vector<std::string> row;
    for (std::size_t k = 0; k < sets.size(); ++k) row.push_back(tree.branch_label(sets[k], s.choices[k]));
    return row;
  };
  for (std::size_t i = 0; i < dm.strategies.size(); ++i) {
    r.matrix.rows.push_back(labels(dm.strategies[i]));
    r.matrix.payoffs.push_back(dm.payoffs[i]);
  }
  auto opt = optimal_pure_payoff(tree, tol);
  r.pure_optimum = opt.value;
  for (const auto& s : opt.argmax) r.argmax.push_back(labels(s));
  return r;
}

BoxReport inspect_box(const EmpiricalModel& model, double tol) {
  BoxReport r;
  auto ns = is_no_signaling(model, tol);
  r.no_signaling = ns.no_signaling;
  r.max_gap = ns.max_gap;
  for (const auto& v : ns.violations) {
    std::vector<std::string> ids;
    for (int s : v.shared_sites) ids.push_back(model.site(s).id);
    r.signaling_violations.push_back(model.context_key(model.context(v.context_a)) + " vs " +
                                     model.context_key(model.context(v.context_b)) + " on " + join(ids, ",") +
                                     ": gap " + num(v.gap));
  }

  auto verdict = is_extendable(model, tol);
  r.extendable = verdict.extendable;
  r.infeasibility = verdict.infeasibility;
  if (verdict.witness) {
    const auto& w = *verdict.witness;
    for (std::size_t c = 0; c < w.coefficients.size(); ++c)
      for (std::size_t o = 0; o < w.coefficients[c].size(); ++o)
        if (std::abs(w.coefficients[c][o]) > tol)
          r.witness.push_back({model.context_key(model.context(static_cast<int>(c))),
                               model.outcome_string(model.context(static_cast<int>(c)), o), w.coefficients[c][o]});
    r.witness_required = w.required_value;
    r.witness_max_point = w.max_point_value;
  }
  if (verdict.extension) {
    const auto& joint = *verdict.extension;
    for (const auto& s : joint.sites) r.extension_sites.push_back(s.id);
    for (std::size_t flat = 0; flat < joint.probs.size(); ++flat) {
      if (joint.probs[flat] <= tol) continue;
      auto d = joint.decode(flat);
      std::string label;
      for (std::size_t i = 0; i < d.size(); ++i) label += joint.sites[i].alphabet[d[i]];
      r.extension.push_back({label, joint.probs[flat]});
    }
  }

  auto zf = zero_forcing_check(model, tol);
  r.zero_forcing_contradiction = zf.contradiction;
  std::vector<int> radix;
  for (const auto& s : model.sites()) radix.push_back(static_cast<int>(s.alphabet.size()));
  for (std::size_t flat : zf.forced_zero) {
    std::string label;
    std::size_t rest = flat;
    std::vector<int> digits(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      digits[i] = static_cast<int>(rest % static_cast<std::size_t>(radix[i]));
      rest /= static_cast<std::size_t>(radix[i]);
    }
    for (std::size_t i = 0; i < digits.size(); ++i) label += model.site(static_cast<int>(i)).alphabet[digits[i]];
    r.forced_zero.push_back(label);
  }
  if (zf.contradiction) {
    const auto& ctx = model.context(zf.context);
    r.zero_forcing_context = model.context_key(ctx);
    r.zero_forcing_outcome = model.outcome_string(ctx, zf.outcome);
  }
  return r;
}

SolveReport solve(const DecisionTree& tree, const EmpiricalModel& model, double tol, std::size_t listed) {
  SignalScenario scenario(tree, model);
  auto problems = scenario.coverage_problems();
  if (!problems.empty()) throw PolicyError(join(problems, "; "));
  auto opt = optimize_policy(scenario, tol);
  SolveReport r;
  r.mode = "policy";
  r.value = opt.value;
  r.symbolic = symbolic(opt.value);
  r.pure_optimum = optimal_pure_payoff(tree, tol).value;
  r.optimal_policy_count = opt.argmax.size();
  for (std::size_t i = 0; i < opt.argmax.size() && i < listed; ++i)
    r.policies.push_back(io::policy_to_json(opt.argmax[i], scenario));
  return r;
}

SolveReport solve_exchangeable(const DecisionTree& tree, int alphabet, double tol) {
  auto visits = max_visits_per_set(tree);
  int most = visits.empty() ? 1 : *std::max_element(visits.begin(), visits.end());
  auto ex = classical_exchangeable_optimum(tree, alphabet, std::max(2, most), tol);
  SolveReport r;
  r.mode = "exchangeable";
  r.value = ex.value;
  r.symbolic = symbolic(ex.value);
  r.pure_optimum = optimal_pure_payoff(tree, tol).value;
  r.optimal_policy_count = 1;
  std::vector<int> all(ex.distribution.sites.size());
  std::iota(all.begin(), all.end(), 0);
  SignalScenario scenario(tree, classical_box_from_joint(ex.distribution, {all}));
  r.policies.push_back(io::policy_to_json(ex.policy, scenario));
  for (const auto& s : ex.distribution.sites) r.distribution_sites.push_back(s.id);
  for (std::size_t flat = 0; flat < ex.distribution.probs.size(); ++flat) {
    auto d = ex.distribution.decode(flat);
    std::string label;
    for (std::size_t i = 0; i < d.size(); ++i) label += ex.distribution.sites[i].alphabet[d[i]];
    r.distribution.push_back({label, ex.distribution.probs[flat]});
  }
  return r;
}

// ---- JSON ------------------------------------------------------------------

Json to_json(const AnalyzeReport& r) { return r; }
Json to_json(const BoxReport& r) { return r; }
Json to_json(const SolveReport& r) { return r; }
Json to_json(const fixtures::DemoReport& r) { return r; }
Json to_json(const fixtures::ComparisonTable& t) { return t; }

AnalyzeReport analyze_from_json(const Json& j) { return j.get<AnalyzeReport>(); }
BoxReport box_from_json(const Json& j) { return j.get<BoxReport>(); }
SolveReport solve_from_json(const Json& j) { return j.get<SolveReport>(); }
fixtures::DemoReport demo_from_json(const Json& j) { return j.get<fixtures::DemoReport>(); }
fixtures::ComparisonTable table_from_json(const Json& j) { return j.get<fixtures::ComparisonTable>(); }

// ---- text ------------------------------------------------------------------

std::string to_text(const AnalyzeReport& r) {
  std::ostringstream out;
  out << "valid: " << yes_no(r.valid) << "\n";
  for (const auto& v : r.violations) out << "  " << v << "\n";
  out << "kuhn: " << yes_no(r.kuhn);
  if (!r.kuhn) out << " (" << r.kuhn_offending_set << " crossed twice on " << join(r.kuhn_offending_path, " > ") << ")";
  out << "\n";
  if (!r.valid) return out.str();
  out << "perfect recall: " << yes_no(r.perfect_recall);
  if (!r.recall_detail.empty()) out << " (" << r.recall_detail << ")";
  out << "\n";
  out << "strategies: " << r.strategy_count << ", world states: " << r.world_state_count << "\n\n";
  std::vector<std::vector<std::string>> rows;
  auto head = r.matrix.sets;
  head.push_back("payoff");
  rows.push_back(head);
  for (std::size_t i = 0; i < r.matrix.rows.size(); ++i) {
    auto row = r.matrix.rows[i];
    row.push_back(with_symbolic(r.matrix.payoffs[i]));
    rows.push_back(row);
  }
  out << aligned(rows) << "\n";
  out << "pure optimum: " << with_symbolic(r.pure_optimum) << "\n";
  for (const auto& a : r.argmax) out << "  " << join(a, "/") << "\n";
  return out.str();
}

std::string to_text(const BoxReport& r) {
  std::ostringstream out;
  out << "no-signaling: " << yes_no(r.no_signaling) << "; extendable: " << (r.extendable ? "yes" : "NO") << "\n";
  out << "max marginal gap: " << num(r.max_gap) << "\n";
  for (const auto& v : r.signaling_violations) out << "  " << v << "\n";
  if (!r.witness.empty()) {
    out << "\nwitness (<= " << num(r.witness_max_point) << " on every joint point, " << num(r.witness_required)
        << " on this model):\n";
    std::vector<std::vector<std::string>> rows{{"context", "outcome", "coefficient"}};
    for (const auto& t : r.witness) rows.push_back({t.context, t.outcome, num(t.coefficient)});
    out << aligned(rows);
  }
  if (!r.extension.empty()) {
    out << "\njoint extension over " << join(r.extension_sites, ",") << ":\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : r.extension) rows.push_back({e.outcome, with_symbolic(e.probability)});
    out << aligned(rows);
  }
  out << "\nzero forcing: " << r.forced_zero.size() << " joint outcomes forced to 0";
  if (r.zero_forcing_contradiction)
    out << "; contradiction at " << r.zero_forcing_context << " outcome " << r.zero_forcing_outcome;
  out << "\n";
  if (!r.forced_zero.empty()) out << "  " << join(r.forced_zero, " ") << "\n";
  return out.str();
}

std::string to_text(const SolveReport& r) {
  std::ostringstream out;
  out << "mode: " << r.mode << "\n";
  out << "optimum: " << with_symbolic(r.value) << "\n";
  out << "no-signal optimum: " << with_symbolic(r.pure_optimum) << "\n";
  out << "optimal policies: " << r.optimal_policy_count << "\n";
  for (const auto& p : r.policies) {
    std::vector<std::string> parts;
    for (const auto& [set, map] : p.items()) {
      std::vector<std::string> moves;
      for (const auto& [o, m] : map.items()) moves.push_back(o + "->" + m.get<std::string>());
      parts.push_back(set + "{" + join(moves, ",") + "}");
    }
    out << "  " << join(parts, " ") << "\n";
  }
  if (!r.distribution.empty()) {
    out << "exchangeable distribution over " << join(r.distribution_sites, ",") << ":\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& d : r.distribution) rows.push_back({"  " + d.outcome, num(d.probability)});
    out << aligned(rows);
  }
  return out.str();
}

std::string to_text(const fixtures::DemoReport& r) {
  std::ostringstream out;
  out << r.name << ": " << r.summary << "\n\n";
  std::vector<std::vector<std::string>> rows{{"check", "expected", "computed", "tol", "origin", ""}};
  for (const auto& x : r.results) {
    std::string expected = (x.relation == fixtures::Relation::greater ? "> " : "") + with_symbolic(x.expected);
    rows.push_back({x.key, expected, num(x.computed), num(x.tolerance), x.origin, x.pass ? "ok" : "MISMATCH"});
  }
  out << aligned(rows) << "\n" << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string to_text(const fixtures::ComparisonTable& t) {
  std::ostringstream out;
  std::vector<std::vector<std::string>> rows{{"tree class", "fixture", "values", "expected", "observed", ""}};
  for (const auto& row : t.rows) {
    std::string values;
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      if (i) values += "  " + row.observed[i - 1] + "  ";
      values += row.cells[i].label + " " + with_symbolic(row.cells[i].value);
    }
    rows.push_back({row.tree_class, row.fixture, values, join(row.expected, " "), join(row.observed, " "),
                    row.holds ? "ok" : "MISMATCH"});
  }
  out << aligned(rows) << "\n" << (t.holds ? "PASS" : "FAIL") << "\n";
  return out.str();
}

// ---- CSV -------------------------------------------------------------------

std::string to_csv(const AnalyzeReport& r) {
  auto head = r.matrix.sets;
  head.push_back("payoff");
  std::string out = csv_row(head);
  for (std::size_t i = 0; i < r.matrix.rows.size(); ++i) {
    auto row = r.matrix.rows[i];
    row.push_back(full_precision(r.matrix.payoffs[i]));
    out += csv_row(row);
  }
  return out;
}

std::string to_csv(const BoxReport& r) {
  std::string out = csv_row({"context", "outcome", "coefficient"});
  for (const auto& t : r.witness) out += csv_row({t.context, t.outcome, full_precision(t.coefficient)});
  return out;
}

std::string to_csv(const SolveReport& r) {
  std::string out = csv_row({"policy", "info_set", "outcome", "move"});
  for (std::size_t i = 0; i < r.policies.size(); ++i)
    for (const auto& [set, map] : r.policies[i].items())
      for (const auto& [o, m] : map.items()) out += csv_row({std::to_string(i + 1), set, o, m.get<std::string>()});
  return out;
}

std::string to_csv(const fixtures::DemoReport& r) {
  std::string out = csv_row({"check", "expected", "computed", "tolerance", "origin", "relation", "pass"});
  for (const auto& x : r.results)
    out += csv_row({x.key, full_precision(x.expected), full_precision(x.computed), full_precision(x.tolerance),
                    x.origin, x.relation == fixtures::Relation::equal ? "equal" : "greater",
                    x.pass ? "true" : "false"});
  return out;
}

std::string to_csv(const fixtures::ComparisonTable& t) {
  std::string out = csv_row({"tree_class", "fixture", "cell", "value", "expected", "observed"});
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      out += csv_row({row.tree_class, row.fixture, row.cells[i].label, full_precision(row.cells[i].value),
                      i ? row.expected[i - 1] : "", i ? row.observed[i - 1] : ""});
  return out;
}

}  // namespace sigtree::report
