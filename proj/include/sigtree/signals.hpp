#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigtree/tree.hpp"

namespace sigtree {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A signal site: the signal shown at one information set, or at one visit of
// it in the exchangeable (per-node) formulation.
struct Site {
  std::string id;
  std::string info_set;
  std::optional<int> visit_index;  // 1-based
  std::vector<std::string> alphabet;
};

// Distribution over the product of the context's alphabets, row-major with the
// first listed site most significant.
struct Context {
  std::vector<int> sites;
  std::vector<double> probs;
};

// Contextual signal model: one distribution per jointly observable site set.
class EmpiricalModel {
 public:
  EmpiricalModel() = default;
  // Throws ModelError on dangling site indices, repeated sites within a
  // context, sites covered by no context, or distribution length mismatch.
  EmpiricalModel(std::vector<Site> sites, std::vector<Context> contexts);

  std::span<const Site> sites() const { return sites_; }
  std::span<const Context> contexts() const { return contexts_; }
  const Site& site(int index) const { return sites_.at(index); }
  const Context& context(int index) const { return contexts_.at(index); }

  std::optional<int> find_site(const std::string& id) const;
  int site_index(const std::string& id) const;

  std::size_t outcome_count(const Context& ctx) const;
  // Per-site outcome indices of a flat context outcome.
  std::vector<int> decode(const Context& ctx, std::size_t flat) const;
  std::size_t encode(const Context& ctx, std::span<const int> outcomes) const;
  // Concatenated labels in context site order, e.g. "GR".
  std::string outcome_string(const Context& ctx, std::size_t flat) const;
  std::string context_key(const Context& ctx) const;  // "W,N"

  // Distribution of a subset of the context's sites (subset order kept).
  std::vector<double> marginal(const Context& ctx, std::span<const int> subset) const;

  // Nonnegativity and normalization problems, one message each.
  std::vector<std::string> check(double tol = kDefaultTolerance) const;

  // Full product of all site alphabets.
  std::size_t joint_size() const;

 private:
  std::vector<Site> sites_;
  std::vector<Context> contexts_;
};

// Probability per point of the full product of site alphabets, row-major with
// site 0 most significant.
struct JointSignalMeasure {
  std::vector<Site> sites;
  std::vector<double> probs;

  std::vector<int> decode(std::size_t flat) const;
  std::size_t encode(std::span<const int> outcomes) const;
};

// ---- no-signaling ----------------------------------------------------------

struct SignalingViolation {
  std::vector<int> shared_sites;
  int context_a = -1;
  int context_b = -1;
  double gap = 0.0;
};

struct NoSignalingReport {
  bool no_signaling = true;
  double max_gap = 0.0;
  std::vector<SignalingViolation> violations;
};

// Compares marginals on the shared sites of every pair of overlapping contexts.
NoSignalingReport is_no_signaling(const EmpiricalModel& model, double tol = kDefaultTolerance);

// ---- extendability ---------------------------------------------------------

// Linear functional on context probabilities. It takes a value <= 0 on every
// deterministic joint assignment (hence on every nonnegative joint measure),
// while the model's own probabilities give it `required_value` > 0.
struct Witness {
  std::vector<std::vector<double>> coefficients;  // [context][outcome]
  double required_value = 0.0;
  double max_point_value = 0.0;
};

struct FeasibilityVerdict {
  bool extendable = false;
  std::optional<JointSignalMeasure> extension;
  std::optional<Witness> witness;
  double infeasibility = 0.0;  // phase-one residual
};

inline constexpr std::size_t kDefaultJointCap = 1'000'000;

// Throws CapExceeded when the joint space is larger than `cap` points.
FeasibilityVerdict is_extendable(const EmpiricalModel& model, double tol = kDefaultTolerance,
                                 std::size_t cap = kDefaultJointCap);

double witness_required_value(const Witness& w, const EmpiricalModel& model);
double witness_max_point_value(const Witness& w, const EmpiricalModel& model);

// Propagates the model's zero-probability context outcomes onto the joint
// space and looks for a positive outcome whose support has been wiped out.
// Independent of the LP route.
struct ZeroForcing {
  std::vector<std::size_t> forced_zero;  // joint indices, ascending
  bool contradiction = false;
  int context = -1;
  std::size_t outcome = 0;
  double required = 0.0;
};

ZeroForcing zero_forcing_check(const EmpiricalModel& model, double tol = kDefaultTolerance,
                               std::size_t cap = kDefaultJointCap);

// Context distributions are marginals of `joint`; sites are the joint's.
EmpiricalModel classical_box_from_joint(const JointSignalMeasure& joint,
                                        const std::vector<std::vector<int>>& contexts);

// Marginal of a joint measure onto a list of its sites.
std::vector<double> joint_marginal(const JointSignalMeasure& joint, std::span<const int> sites);

// ---- exchangeability -------------------------------------------------------

struct ExchangeabilityReport {
  bool exchangeable = false;
  std::vector<int> sites;  // visit-indexed sites of the set, by visit
  double max_gap = 0.0;
  std::string problem;     // why the check could not run, if it could not
};

ExchangeabilityReport is_exchangeable(const EmpiricalModel& model, const std::string& info_set,
                                      double tol = kDefaultTolerance);

// ---- sequential conditionals -----------------------------------------------

struct Observation {
  int site = -1;
  int outcome = -1;
};

enum class ConditionalStatus { ok, unreachable, no_covering_context };

struct Conditional {
  ConditionalStatus status = ConditionalStatus::ok;
  std::vector<double> probs;  // over the target's alphabet
  int context = -1;           // context used
};

// Distribution of `target` given observed outcomes at other sites, computed in
// a context containing all of them (the hint, if it covers, else the first
// that does). On a no-signaling model every covering context agrees.
Conditional conditional_at_site(const EmpiricalModel& model, int target,
                                std::span<const Observation> observed,
                                std::optional<int> context_hint = std::nullopt);

}  // namespace sigtree
