#include "tcheb/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "tcheb/errors.hpp"

namespace tcheb {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& symmetric, double threshold, std::size_t max_sweeps) {
  if (symmetric.rows() != symmetric.cols()) throw DomainError("eigenvalues need a square matrix");
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  const Eigen::Index n = a.rows();
  const double stop = threshold * a.norm();

  for (std::size_t sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > stop; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p, q) (Golub & Van Loan, sym.schur2).
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

}  // namespace tcheb
