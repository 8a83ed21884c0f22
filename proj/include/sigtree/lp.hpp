#pragma once

#include <vector>

namespace sigtree::lp {

// Dense equality-form problem: A x = b, x >= 0.
struct EqualityProblem {
  std::vector<std::vector<double>> rows;  // A, one vector per constraint
  std::vector<double> rhs;                // b
  std::size_t columns = 0;
};

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Phase-one optimum: sum of residual slack (0 when feasible).
  double infeasibility = 0.0;
  // When infeasible: y with A^T y <= 0 componentwise and b^T y > 0.
  std::vector<double> farkas;
};

// Phase one only. Bland's rule throughout, so the pivot sequence is
// deterministic and cannot cycle.
Result find_feasible(const EqualityProblem& problem, double tol = 1e-9);

// Maximize c^T x over the feasible set (two-phase simplex).
Result maximize(const EqualityProblem& problem, const std::vector<double>& objective,
                double tol = 1e-9);

}  // namespace sigtree::lp
