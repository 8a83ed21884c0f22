#include "sigtree/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sigtree/lp.hpp"
#include "sigtree/play.hpp"

namespace sigtree {

namespace {

// Conditional probabilities at or below this are treated as zero branches.
constexpr double kNegligible = 1e-14;

std::size_t product_size(const std::vector<Site>& sites, std::span<const int> which,
                         std::size_t cap) {
  std::size_t total = 1;
  for (int s : which) {
    std::size_t k = sites.at(s).alphabet.size();
    if (k == 0) return 0;
    if (total > cap / k)
      throw CapExceeded("joint signal space exceeds cap " + std::to_string(cap));
    total *= k;
  }
  return total;
}

std::vector<int> all_sites(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

// ---- EmpiricalModel --------------------------------------------------------

EmpiricalModel::EmpiricalModel(std::vector<Site> sites, std::vector<Context> contexts)
    : sites_(std::move(sites)), contexts_(std::move(contexts)) {
  const int n = static_cast<int>(sites_.size());
  std::vector<bool> covered(sites_.size(), false);
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i].alphabet.empty())
      throw ModelError("site '" + sites_[i].id + "' has an empty alphabet");
    for (std::size_t j = 0; j < i; ++j)
      if (sites_[j].id == sites_[i].id) throw ModelError("duplicate site id '" + sites_[i].id + "'");
  }
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    const auto& ctx = contexts_[c];
    if (ctx.sites.empty()) throw ModelError("context " + std::to_string(c) + " is empty");
    for (std::size_t a = 0; a < ctx.sites.size(); ++a) {
      int s = ctx.sites[a];
      if (s < 0 || s >= n) throw ModelError("context " + std::to_string(c) + " references a missing site");
      for (std::size_t b = 0; b < a; ++b)
        if (ctx.sites[b] == s) throw ModelError("context " + std::to_string(c) + " repeats a site");
      covered[s] = true;
    }
    if (ctx.probs.size() != outcome_count(ctx))
      throw ModelError("context " + context_key(ctx) + " has " + std::to_string(ctx.probs.size()) +
                       " probabilities, expected " + std::to_string(outcome_count(ctx)));
  }
  for (std::size_t i = 0; i < sites_.size(); ++i)
    if (!covered[i]) throw ModelError("site '" + sites_[i].id + "' appears in no context");
}

std::optional<int> EmpiricalModel::find_site(const std::string& id) const {
  for (std::size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

int EmpiricalModel::site_index(const std::string& id) const {
  auto s = find_site(id);
  if (!s) throw ModelError("unknown site '" + id + "'");
  return *s;
}

std::size_t EmpiricalModel::outcome_count(const Context& ctx) const {
  return product_size(sites_, ctx.sites, std::numeric_limits<std::size_t>::max());
}

std::vector<int> EmpiricalModel::decode(const Context& ctx, std::size_t flat) const {
  std::vector<int> out(ctx.sites.size());
  for (std::size_t i = ctx.sites.size(); i-- > 0;) {
    std::size_t k = sites_[ctx.sites[i]].alphabet.size();
    out[i] = static_cast<int>(flat % k);
    flat /= k;
  }
  return out;
}

std::size_t EmpiricalModel::encode(const Context& ctx, std::span<const int> outcomes) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < ctx.sites.size(); ++i)
    flat = flat * sites_[ctx.sites[i]].alphabet.size() + static_cast<std::size_t>(outcomes[i]);
  return flat;
}

std::string EmpiricalModel::outcome_string(const Context& ctx, std::size_t flat) const {
  auto digits = decode(ctx, flat);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) out += sites_[ctx.sites[i]].alphabet[digits[i]];
  return out;
}

std::string EmpiricalModel::context_key(const Context& ctx) const {
  std::string out;
  for (std::size_t i = 0; i < ctx.sites.size(); ++i) {
    if (i) out += ',';
    out += sites_.at(ctx.sites[i]).id;
  }
  return out;
}

std::vector<double> EmpiricalModel::marginal(const Context& ctx, std::span<const int> subset) const {
  std::vector<std::size_t> pos;
  std::size_t size = 1;
  for (int s : subset) {
    auto it = std::find(ctx.sites.begin(), ctx.sites.end(), s);
    if (it == ctx.sites.end()) throw ModelError("marginal over a site outside the context");
    pos.push_back(static_cast<std::size_t>(it - ctx.sites.begin()));
    size *= sites_[s].alphabet.size();
  }
  std::vector<double> out(size, 0.0);
  for (std::size_t flat = 0; flat < ctx.probs.size(); ++flat) {
    auto digits = decode(ctx, flat);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < subset.size(); ++i)
      idx = idx * sites_[subset[i]].alphabet.size() + static_cast<std::size_t>(digits[pos[i]]);
    out[idx] += ctx.probs[flat];
  }
  return out;
}

std::vector<std::string> EmpiricalModel::check(double tol) const {
  std::vector<std::string> out;
  for (const auto& ctx : contexts_) {
    double sum = 0.0;
    bool negative = false;
    for (double p : ctx.probs) {
      sum += p;
      negative = negative || p < -tol || !std::isfinite(p);
    }
    if (negative) out.push_back("context " + context_key(ctx) + " has a negative probability");
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "context " << context_key(ctx) << " sums to " << sum;
      out.push_back(msg.str());
    }
  }
  return out;
}

std::size_t EmpiricalModel::joint_size() const {
  return product_size(sites_, all_sites(sites_.size()), std::numeric_limits<std::size_t>::max());
}

// ---- JointSignalMeasure ----------------------------------------------------

std::vector<int> JointSignalMeasure::decode(std::size_t flat) const {
  std::vector<int> out(sites.size());
  for (std::size_t i = sites.size(); i-- > 0;) {
    std::size_t k = sites[i].alphabet.size();
    out[i] = static_cast<int>(flat % k);
    flat /= k;
  }
  return out;
}

std::size_t JointSignalMeasure::encode(std::span<const int> outcomes) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < sites.size(); ++i)
    flat = flat * sites[i].alphabet.size() + static_cast<std::size_t>(outcomes[i]);
  return flat;
}

std::vector<double> joint_marginal(const JointSignalMeasure& joint, std::span<const int> which) {
  std::size_t size = 1;
  for (int s : which) size *= joint.sites.at(s).alphabet.size();
  std::vector<double> out(size, 0.0);
  for (std::size_t flat = 0; flat < joint.probs.size(); ++flat) {
    auto digits = joint.decode(flat);
    std::size_t idx = 0;
    for (int s : which)
      idx = idx * joint.sites[s].alphabet.size() + static_cast<std::size_t>(digits[s]);
    out[idx] += joint.probs[flat];
  }
  return out;
}

EmpiricalModel classical_box_from_joint(const JointSignalMeasure& joint,
                                        const std::vector<std::vector<int>>& contexts) {
  std::size_t expected = 1;
  for (const auto& s : joint.sites) expected *= s.alphabet.size();
  if (joint.probs.size() != expected) throw ModelError("joint measure has the wrong length");
  std::vector<Context> ctxs;
  ctxs.reserve(contexts.size());
  for (const auto& sites : contexts) ctxs.push_back(Context{sites, joint_marginal(joint, sites)});
  return EmpiricalModel(joint.sites, std::move(ctxs));
}

// ---- no-signaling ----------------------------------------------------------

NoSignalingReport is_no_signaling(const EmpiricalModel& model, double tol) {
  NoSignalingReport report;
  auto contexts = model.contexts();
  for (std::size_t a = 0; a < contexts.size(); ++a) {
    for (std::size_t b = a + 1; b < contexts.size(); ++b) {
      std::vector<int> shared;
      for (int s : contexts[a].sites)
        if (std::find(contexts[b].sites.begin(), contexts[b].sites.end(), s) != contexts[b].sites.end())
          shared.push_back(s);
      if (shared.empty()) continue;
      auto ma = model.marginal(contexts[a], shared);
      auto mb = model.marginal(contexts[b], shared);
      double gap = 0.0;
      for (std::size_t i = 0; i < ma.size(); ++i) gap = std::max(gap, std::abs(ma[i] - mb[i]));
      report.max_gap = std::max(report.max_gap, gap);
      if (gap > tol) {
        report.no_signaling = false;
        report.violations.push_back({shared, static_cast<int>(a), static_cast<int>(b), gap});
      }
    }
  }
  return report;
}

// ---- extendability ---------------------------------------------------------

namespace {

// Projection of every joint point onto every context outcome.
struct Incidence {
  std::size_t points = 0;
  std::vector<std::vector<std::size_t>> outcome_of;  // [context][point]
};

Incidence incidence(const EmpiricalModel& model, std::size_t cap) {
  Incidence inc;
  auto sites = std::vector<Site>(model.sites().begin(), model.sites().end());
  inc.points = product_size(sites, all_sites(sites.size()), cap);
  JointSignalMeasure shape{sites, {}};
  for (const auto& ctx : model.contexts()) {
    std::vector<std::size_t> col(inc.points);
    std::vector<int> sub(ctx.sites.size());
    for (std::size_t p = 0; p < inc.points; ++p) {
      auto digits = shape.decode(p);
      for (std::size_t i = 0; i < ctx.sites.size(); ++i) sub[i] = digits[ctx.sites[i]];
      col[p] = model.encode(ctx, sub);
    }
    inc.outcome_of.push_back(std::move(col));
  }
  return inc;
}

}  // namespace

double witness_required_value(const Witness& w, const EmpiricalModel& model) {
  double v = 0.0;
  for (std::size_t c = 0; c < model.contexts().size(); ++c)
    for (std::size_t o = 0; o < model.context(c).probs.size(); ++o)
      v += w.coefficients[c][o] * model.context(c).probs[o];
  return v;
}

double witness_max_point_value(const Witness& w, const EmpiricalModel& model) {
  auto inc = incidence(model, kDefaultJointCap);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < inc.points; ++p) {
    double v = 0.0;
    for (std::size_t c = 0; c < inc.outcome_of.size(); ++c) v += w.coefficients[c][inc.outcome_of[c][p]];
    best = std::max(best, v);
  }
  return best;
}

FeasibilityVerdict is_extendable(const EmpiricalModel& model, double tol, std::size_t cap) {
  auto inc = incidence(model, cap);

  lp::EqualityProblem problem;
  problem.columns = inc.points;
  std::vector<std::pair<std::size_t, std::size_t>> row_of;  // (context, outcome)
  for (std::size_t c = 0; c < model.contexts().size(); ++c) {
    const auto& ctx = model.context(c);
    for (std::size_t o = 0; o < ctx.probs.size(); ++o) {
      std::vector<double> row(inc.points, 0.0);
      for (std::size_t p = 0; p < inc.points; ++p)
        if (inc.outcome_of[c][p] == o) row[p] = 1.0;
      problem.rows.push_back(std::move(row));
      problem.rhs.push_back(ctx.probs[o]);
      row_of.emplace_back(c, o);
    }
  }

  auto res = lp::find_feasible(problem, tol);
  FeasibilityVerdict verdict;
  verdict.infeasibility = res.infeasibility;
  if (res.status == lp::Status::optimal) {
    verdict.extendable = true;
    verdict.extension = JointSignalMeasure{
        std::vector<Site>(model.sites().begin(), model.sites().end()), std::move(res.x)};
    return verdict;
  }

  Witness w;
  for (const auto& ctx : model.contexts()) w.coefficients.emplace_back(ctx.probs.size(), 0.0);
  for (std::size_t r = 0; r < row_of.size(); ++r) {
    double y = res.farkas[r];
    w.coefficients[row_of[r].first][row_of[r].second] = std::abs(y) < 1e-12 ? 0.0 : y;
  }
  w.required_value = witness_required_value(w, model);
  w.max_point_value = witness_max_point_value(w, model);
  verdict.witness = std::move(w);
  return verdict;
}

ZeroForcing zero_forcing_check(const EmpiricalModel& model, double tol, std::size_t cap) {
  auto inc = incidence(model, cap);
  ZeroForcing out;
  std::vector<bool> forced(inc.points, false);
  for (std::size_t c = 0; c < inc.outcome_of.size(); ++c) {
    const auto& probs = model.context(c).probs;
    for (std::size_t p = 0; p < inc.points; ++p)
      if (probs[inc.outcome_of[c][p]] <= tol) forced[p] = true;
  }
  for (std::size_t p = 0; p < inc.points; ++p)
    if (forced[p]) out.forced_zero.push_back(p);

  for (std::size_t c = 0; c < inc.outcome_of.size() && !out.contradiction; ++c) {
    const auto& probs = model.context(c).probs;
    for (std::size_t o = 0; o < probs.size(); ++o) {
      if (probs[o] <= tol) continue;
      bool any_free = false;
      for (std::size_t p = 0; p < inc.points && !any_free; ++p)
        any_free = inc.outcome_of[c][p] == o && !forced[p];
      if (!any_free) {
        out.contradiction = true;
        out.context = static_cast<int>(c);
        out.outcome = o;
        out.required = probs[o];
        break;
      }
    }
  }
  return out;
}

// ---- exchangeability -------------------------------------------------------

ExchangeabilityReport is_exchangeable(const EmpiricalModel& model, const std::string& info_set,
                                      double tol) {
  ExchangeabilityReport report;
  std::vector<std::pair<int, int>> visits;
  for (std::size_t i = 0; i < model.sites().size(); ++i) {
    const auto& s = model.site(static_cast<int>(i));
    if (s.info_set == info_set && s.visit_index) visits.emplace_back(*s.visit_index, static_cast<int>(i));
  }
  std::sort(visits.begin(), visits.end());
  for (const auto& v : visits) report.sites.push_back(v.second);
  if (report.sites.size() < 2) {
    report.problem = "fewer than two visit-indexed sites for '" + info_set + "'";
    return report;
  }
  const auto& alphabet = model.site(report.sites.front()).alphabet;
  for (int s : report.sites)
    if (model.site(s).alphabet != alphabet) {
      report.problem = "visit sites of '" + info_set + "' use different alphabets";
      return report;
    }
  const Context* cover = nullptr;
  for (const auto& ctx : model.contexts()) {
    bool all = std::all_of(report.sites.begin(), report.sites.end(), [&](int s) {
      return std::find(ctx.sites.begin(), ctx.sites.end(), s) != ctx.sites.end();
    });
    if (all) {
      cover = &ctx;
      break;
    }
  }
  if (!cover) {
    report.problem = "no context contains every visit site of '" + info_set + "'";
    return report;
  }

  auto dist = model.marginal(*cover, report.sites);
  const std::size_t v = report.sites.size();
  const std::size_t k = alphabet.size();
  std::vector<int> digits(v);
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = v; i-- > 0;) {
        digits[i] = static_cast<int>(rest % k);
        rest /= k;
      }
      std::size_t permuted = 0;
      for (std::size_t i = 0; i < v; ++i) permuted = permuted * k + static_cast<std::size_t>(digits[perm[i]]);
      report.max_gap = std::max(report.max_gap, std::abs(dist[flat] - dist[permuted]));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  report.exchangeable = report.max_gap <= tol;
  return report;
}

// ---- conditionals ----------------------------------------------------------

Conditional conditional_at_site(const EmpiricalModel& model, int target,
                                std::span<const Observation> observed,
                                std::optional<int> context_hint) {
  Conditional out;
  auto covers = [&](const Context& ctx) {
    auto has = [&](int s) { return std::find(ctx.sites.begin(), ctx.sites.end(), s) != ctx.sites.end(); };
    if (!has(target)) return false;
    return std::all_of(observed.begin(), observed.end(), [&](const Observation& o) { return has(o.site); });
  };

  int chosen = -1;
  if (context_hint && *context_hint >= 0 &&
      static_cast<std::size_t>(*context_hint) < model.contexts().size() &&
      covers(model.context(*context_hint)))
    chosen = *context_hint;
  for (std::size_t c = 0; c < model.contexts().size() && chosen < 0; ++c)
    if (covers(model.context(static_cast<int>(c)))) chosen = static_cast<int>(c);
  if (chosen < 0) {
    out.status = ConditionalStatus::no_covering_context;
    return out;
  }
  out.context = chosen;

  std::vector<int> order;
  for (const auto& o : observed) order.push_back(o.site);
  order.push_back(target);
  auto dist = model.marginal(model.context(chosen), order);

  const std::size_t k = model.site(target).alphabet.size();
  std::size_t base = 0;
  for (const auto& o : observed) base = base * model.site(o.site).alphabet.size() + static_cast<std::size_t>(o.outcome);
  base *= k;

  out.probs.assign(dist.begin() + static_cast<std::ptrdiff_t>(base),
                   dist.begin() + static_cast<std::ptrdiff_t>(base + k));
  double mass = std::accumulate(out.probs.begin(), out.probs.end(), 0.0);
  if (mass <= kNegligible) {
    out.status = ConditionalStatus::unreachable;
    out.probs.clear();
    return out;
  }
  for (double& p : out.probs) p = std::max(0.0, p / mass);
  return out;
}

}  // namespace sigtree
