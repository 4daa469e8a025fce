#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace tcheb {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Sweeps stop once the off-diagonal Frobenius norm falls below
/// threshold times the Frobenius norm of the input.
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& symmetric, double threshold = 1e-12,
                                   std::size_t max_sweeps = 100);

}  // namespace tcheb
