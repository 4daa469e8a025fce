#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace tcheb {

struct NelderMeadOptions {
  std::size_t max_iterations = 500;
  double initial_step = 1.0;
  // Stops when the spread of simplex values and the simplex diameter are
  // both below these.
  double value_tolerance = 1e-14;
  double point_tolerance = 1e-12;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes f from the axis-aligned simplex around x0. Non-finite values
/// are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace tcheb
