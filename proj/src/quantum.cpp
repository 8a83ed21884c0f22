#include "sigtree/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace sigtree::quantum {

double phi() { return 2.0 / (std::sqrt(5.0) + 1.0); }

// ---- states and measurements ----------------------------------------------

namespace {

double norm_sq(const std::array<cplx, 4>& a) {
  double n = 0.0;
  for (const auto& x : a) n += std::norm(x);
  return n;
}

}  // namespace

PureState2x2::PureState2x2(std::array<cplx, 4> amplitudes) : amp_(amplitudes) {
  if (std::abs(norm_sq(amp_) - 1.0) > 1e-12)
    throw std::invalid_argument("two-particle state is not normalized");
}

PureState2x2 PureState2x2::normalized(std::array<cplx, 4> amplitudes) {
  double n = std::sqrt(norm_sq(amplitudes));
  if (n == 0.0) throw std::invalid_argument("zero state vector");
  for (auto& a : amplitudes) a /= n;
  return PureState2x2(amplitudes);
}

BinaryMeasurement::BinaryMeasurement(std::array<cplx, 2> first, std::array<std::string, 2> labels)
    : labels_(std::move(labels)) {
  double n = std::sqrt(std::norm(first[0]) + std::norm(first[1]));
  if (n == 0.0) throw std::invalid_argument("zero measurement vector");
  first[0] /= n;
  first[1] /= n;
  vecs_[0] = first;
  // Orthogonal complement: (-conj(b), conj(a)).
  vecs_[1] = {-std::conj(first[1]), std::conj(first[0])};
}

BinaryMeasurement BinaryMeasurement::at_angle(double theta, std::array<std::string, 2> labels) {
  return BinaryMeasurement({cplx(std::cos(theta), 0.0), cplx(std::sin(theta), 0.0)}, std::move(labels));
}

MeasurementLayout MeasurementLayout::all_pairs(std::vector<LayoutSite> sites) {
  MeasurementLayout layout;
  layout.sites = std::move(sites);
  for (std::size_t a = 0; a < layout.sites.size(); ++a) {
    if (layout.sites[a].particle != 1) continue;
    for (std::size_t b = 0; b < layout.sites.size(); ++b)
      if (layout.sites[b].particle == 2)
        layout.contexts.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return layout;
}

EmpiricalModel born_box(const PureState2x2& state, const MeasurementLayout& layout) {
  std::vector<Site> sites;
  for (const auto& ls : layout.sites) {
    if (ls.particle != 1 && ls.particle != 2)
      throw std::invalid_argument("site '" + ls.id + "' is not on particle 1 or 2");
    const auto& labels = ls.measurement.labels();
    sites.push_back(Site{ls.id, ls.info_set, std::nullopt, {labels[0], labels[1]}});
  }

  const auto& psi = state.amplitudes();
  std::vector<Context> contexts;
  for (const auto& [x, y] : layout.contexts) {
    if (layout.sites.at(x).particle != 1 || layout.sites.at(y).particle != 2)
      throw std::invalid_argument("context must pair a particle-1 site with a particle-2 site");
    Context ctx{{x, y}, std::vector<double>(4, 0.0)};
    for (int a = 0; a < 2; ++a) {
      const auto& u = layout.sites[x].measurement.vector(a);
      for (int b = 0; b < 2; ++b) {
        const auto& v = layout.sites[y].measurement.vector(b);
        cplx amp = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) amp += std::conj(u[i]) * std::conj(v[j]) * psi[2 * i + j];
        double p = std::norm(amp);
        // Exact zeros of the construction come out as ~1e-32 rounding residue.
        ctx.probs[2 * a + b] = p < 1e-15 ? 0.0 : p;
      }
    }
    contexts.push_back(std::move(ctx));
  }
  return EmpiricalModel(std::move(sites), std::move(contexts));
}

// ---- Hardy construction ----------------------------------------------------

namespace {

// Along the family c|00> + s|11> (s = -sqrt(1 - c^2)):
//   P(RR|W,N) = 0  fixes the shared W/N angle a via c sin^2 a + s cos^2 a = 0;
//   P(GG|E,N) = P(GG|W,S) = 0  fixes the E/S angle b via
//   c cos a cos b + s sin a sin b = 0.
template <typename T>
struct HardyAngles {
  T s;
  T a;
  T b;
};

template <typename T>
HardyAngles<T> hardy_angles(T c) {
  using std::atan;
  using std::cos;
  using std::sin;
  using std::sqrt;
  T s = -sqrt(T(1.0) - c * c);
  T a = atan(sqrt(-s / c));
  T b = atan(-c * cos(a) / (s * sin(a)));
  return {s, a, b};
}

}  // namespace

template <typename T>
T hardy_paradox_probability(T c) {
  using std::cos;
  using std::sin;
  auto [s, a, b] = hardy_angles(c);
  T amp = c * cos(b) * cos(b) + s * sin(b) * sin(b);
  return amp * amp;
}

template double hardy_paradox_probability<double>(double);
template cplx hardy_paradox_probability<cplx>(cplx);

namespace {

double paradox_slope(double c) {
  constexpr double h = 1e-30;
  return std::imag(hardy_paradox_probability(cplx(c, h))) / h;
}

double solve_hardy_weight() {
  // Golden-section bracket of the single interior maximum.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.05, hi = 0.95;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = hardy_paradox_probability(x1), f2 = hardy_paradox_probability(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = hardy_paradox_probability(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = hardy_paradox_probability(x1);
    }
  }
  // Function values are flat at the top, so refine on the exact slope.
  if (!(paradox_slope(lo) > 0.0 && paradox_slope(hi) < 0.0))
    throw std::runtime_error("hardy search: stationary point not bracketed");
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (paradox_slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

HardyInstance hardy_instance() {
  double c = solve_hardy_weight();
  auto [s, a, b] = hardy_angles(c);

  std::vector<LayoutSite> sites{
      {"W", "West", 1, BinaryMeasurement::at_angle(a)},
      {"E", "East", 1, BinaryMeasurement::at_angle(b)},
      {"N", "North", 2, BinaryMeasurement::at_angle(a)},
      {"S", "South", 2, BinaryMeasurement::at_angle(b)},
  };
  MeasurementLayout layout;
  layout.sites = std::move(sites);
  layout.contexts = {{0, 2}, {1, 2}, {0, 3}, {1, 3}};

  PureState2x2 state({cplx(c, 0.0), 0.0, 0.0, cplx(s, 0.0)});
  EmpiricalModel model = born_box(state, layout);
  return HardyInstance{c, s, a, b, state, std::move(layout), std::move(model)};
}

std::array<std::size_t, 16> hardy_table_rows() {
  // Bits: W=8, E=4, N=2, S=1; a set bit is R.
  return {0, 8, 2, 4, 1, 10, 6, 5, 9, 12, 3, 11, 7, 13, 14, 15};
}

int hardy_table_row(std::size_t joint_index) {
  auto rows = hardy_table_rows();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i] == joint_index) return static_cast<int>(i) + 1;
  return 0;
}

}  // namespace sigtree::quantum
