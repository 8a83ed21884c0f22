#include "sigtree/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace sigtree::lp {

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  explicit Tableau(const EqualityProblem& p)
      : m_(p.rows.size()), n_(p.columns), width_(n_ + m_ + 1), sign_(m_, 1.0) {
    if (p.rhs.size() != m_) throw std::invalid_argument("lp: rhs size mismatch");
    cells_.assign(m_ * width_, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (p.rows[i].size() != n_) throw std::invalid_argument("lp: row width mismatch");
      sign_[i] = p.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign_[i] * p.rows[i][j];
      at(i, n_ + i) = 1.0;
      at(i, width_ - 1) = sign_[i] * p.rhs[i];
      basis_[i] = n_ + i;
    }
  }

  double& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }
  double rhs(std::size_t i) const { return at(i, width_ - 1); }

  // Reduced costs for a minimization with per-column costs `cost`.
  std::vector<double> reduced(const std::vector<double>& cost) const {
    std::vector<double> r(cost);
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j + 1 < width_; ++j) r[j] -= cb * at(i, j);
    }
    return r;
  }

  double objective(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t i = 0; i < m_; ++i) z += cost[basis_[i]] * rhs(i);
    return z;
  }

  void pivot(std::size_t row, std::size_t col) {
    double p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
    }
    basis_[row] = col;
  }

  // Bland's rule simplex on columns [0, allowed). Returns false if unbounded.
  bool run(const std::vector<double>& cost, std::size_t allowed) {
    for (;;) {
      auto r = reduced(cost);
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (r[j] < -kPivotEps) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;

      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kPivotEps) continue;
        double ratio = rhs(i) / a;
        if (leave == m_ || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  // After phase one: pivot zero-level artificials out of the basis, dropping
  // rows that turn out to be linear combinations of others.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      if (col < n_) {
        pivot(i, col);
        ++i;
        continue;
      }
      drop_row(i);
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, rhs(i));
    return x;
  }

  std::vector<double> phase_one_costs() const {
    std::vector<double> c(width_ - 1, 0.0);
    for (std::size_t j = n_; j + 1 < width_; ++j) c[j] = 1.0;
    return c;
  }

  // y = c_B B^{-1} of phase one, mapped back through the row sign flips.
  std::vector<double> phase_one_dual(std::size_t original_rows) const {
    auto r = reduced(phase_one_costs());
    std::vector<double> y(original_rows);
    for (std::size_t i = 0; i < original_rows; ++i) y[i] = sign_[i] * (1.0 - r[n_ + i]);
    return y;
  }

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }
  std::size_t width() const { return width_; }

 private:
  void drop_row(std::size_t row) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(row * width_),
                 cells_.begin() + static_cast<std::ptrdiff_t>((row + 1) * width_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --m_;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<double> sign_;
};

Result phase_one(Tableau& t, std::size_t original_rows, double tol) {
  Result res;
  auto cost = t.phase_one_costs();
  t.run(cost, t.width() - 1);
  res.infeasibility = t.objective(cost);
  if (res.infeasibility > tol) {
    res.status = Status::infeasible;
    res.farkas = t.phase_one_dual(original_rows);
    return res;
  }
  res.status = Status::optimal;
  res.x = t.primal();
  return res;
}

}  // namespace

Result find_feasible(const EqualityProblem& problem, double tol) {
  Tableau t(problem);
  return phase_one(t, problem.rows.size(), tol);
}

Result maximize(const EqualityProblem& problem, const std::vector<double>& objective,
                double tol) {
  if (objective.size() != problem.columns)
    throw std::invalid_argument("lp: objective size mismatch");
  Tableau t(problem);
  Result res = phase_one(t, problem.rows.size(), tol);
  if (res.status != Status::optimal) return res;

  t.expel_artificials();
  std::vector<double> cost(t.width() - 1, 0.0);
  for (std::size_t j = 0; j < problem.columns; ++j) cost[j] = -objective[j];
  if (!t.run(cost, t.columns())) {
    res.status = Status::unbounded;
    return res;
  }
  res.x = t.primal();
  res.objective = 0.0;
  for (std::size_t j = 0; j < problem.columns; ++j) res.objective += objective[j] * res.x[j];
  return res;
}

}  // namespace sigtree::lp
