#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tcheb {

enum class Sense { Max, Min };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOptions {
  // Phase-one residual accepted as feasible, relative to max(1, |b|_inf).
  double feasibility_tolerance = 1e-8;
  // Reduced costs and pivot elements below this magnitude count as zero.
  double zero_tolerance = 1e-11;
  std::size_t max_pivots = 200000;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  // Indices of the structural columns in the final basis.
  std::vector<std::size_t> basis;
  double infeasibility = 0.0;
  std::size_t pivots = 0;
};

/// Optimizes cost . x subject to A x = b, x >= 0 with a dense two-phase
/// tableau. Pricing is Dantzig's rule with a fall back to Bland's
/// smallest-index rule on degenerate stretches, so the method cannot cycle. Rows with b < 0
/// are negated internally; redundant equality rows are tolerated.
LpSolution solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& cost,
                             Sense sense, const LpOptions& options = {});

}  // namespace tcheb
