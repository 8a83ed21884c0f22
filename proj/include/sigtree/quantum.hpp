#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "sigtree/signals.hpp"

namespace sigtree::quantum {

using cplx = std::complex<double>;

// Inverse golden ratio, 2 / (sqrt(5) + 1).
double phi();

// Two two-level systems; amplitudes over |00>, |01>, |10>, |11> with the first
// particle most significant.
class PureState2x2 {
 public:
  // Throws std::invalid_argument unless the norm is 1 within 1e-12.
  explicit PureState2x2(std::array<cplx, 4> amplitudes);
  static PureState2x2 normalized(std::array<cplx, 4> amplitudes);

  const std::array<cplx, 4>& amplitudes() const { return amp_; }

 private:
  std::array<cplx, 4> amp_;
};

// Two-outcome projective measurement. The first outcome projects onto
// `first`; the second onto its orthogonal complement.
class BinaryMeasurement {
 public:
  BinaryMeasurement(std::array<cplx, 2> first, std::array<std::string, 2> labels = {"G", "R"});
  // Real rotation: first = (cos theta, sin theta).
  static BinaryMeasurement at_angle(double theta, std::array<std::string, 2> labels = {"G", "R"});

  // Unit vector for outcome 0 or 1.
  const std::array<cplx, 2>& vector(int outcome) const { return vecs_.at(outcome); }
  const std::array<std::string, 2>& labels() const { return labels_; }

 private:
  std::array<std::array<cplx, 2>, 2> vecs_;
  std::array<std::string, 2> labels_;
};

struct LayoutSite {
  std::string id;
  std::string info_set;
  int particle = 1;  // 1 or 2
  BinaryMeasurement measurement;
};

// Sites split between the two particles; each context pairs one site of
// particle 1 with one of particle 2.
struct MeasurementLayout {
  std::vector<LayoutSite> sites;
  std::vector<std::pair<int, int>> contexts;  // (particle-1 site, particle-2 site)

  // Every particle-1 site with every particle-2 site, particle-1 major.
  static MeasurementLayout all_pairs(std::vector<LayoutSite> sites);
};

// P(a, b | x, y) = |<u_x^a (x) u_y^b | psi>|^2 per context.
EmpiricalModel born_box(const PureState2x2& state, const MeasurementLayout& layout);

struct HardyInstance {
  double cos_weight = 0.0;   // c in c|00> + s|11>
  double sin_weight = 0.0;   // s (negative)
  double angle_first = 0.0;  // West and North measurement angle
  double angle_second = 0.0; // East and South measurement angle
  PureState2x2 state;
  MeasurementLayout layout;
  EmpiricalModel model;
};

// The Hardy correlations on sites West, East (particle 1) and North, South
// (particle 2), contexts (W,N), (E,N), (W,S), (E,S). The state c|00> + s|11>
// and symmetric measurement angles are solved so that P(RR|W,N),
// P(GG|E,N) and P(GG|W,S) vanish; c is then chosen to maximize P(GG|E,S).
HardyInstance hardy_instance();

// Paradox probability P(GG|E,S) as a function of c along the zero-constraint
// family. Templated so the solver can differentiate by complex step.
template <typename T>
T hardy_paradox_probability(T c);

// Row numbering of the 16-point joint table over (W, E, N, S): 1 is GGGG,
// 2-5 carry one R, 6-11 two, 12-15 three, 16 is RRRR. Entry i holds the
// joint index (W most significant, G = 0) of row i + 1.
std::array<std::size_t, 16> hardy_table_rows();

// 1-based table row of a joint index, or 0 if out of range.
int hardy_table_row(std::size_t joint_index);

}  // namespace sigtree::quantum
