#include "tcheb/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcheb/errors.hpp"

namespace tcheb {

namespace {

// Row-major tableau: m constraint rows followed by one objective row. The
// last column holds the right-hand side. Objective row stores reduced costs
// of a minimization.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double cost(std::size_t c) const { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { Optimal, Unbounded, PivotLimit };

// Dantzig pricing (most negative reduced cost) while pivots make progress;
// after a run of degenerate pivots the entering column switches to Bland's
// smallest-index rule until progress resumes, which rules out cycling.
// The leaving row minimizes the ratio, ties broken by the smallest basic
// variable index.
PhaseResult run_simplex(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
                        const LpOptions& options, std::size_t& pivots) {
  constexpr std::size_t kDegenerateRun = 50;
  std::size_t degenerate = 0;
  for (;;) {
    const bool bland = degenerate >= kDegenerateRun;
    std::size_t entering = t.cols();
    double most_negative = -options.zero_tolerance;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (!allowed[c] || t.cost(c) >= -options.zero_tolerance) continue;
      if (bland) {
        entering = c;
        break;
      }
      if (t.cost(c) < most_negative) {
        most_negative = t.cost(c);
        entering = c;
      }
    }
    if (entering == t.cols()) return PhaseResult::Optimal;

    std::size_t leaving = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double coef = t.at(r, entering);
      if (coef <= options.zero_tolerance) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / coef;
      if (leaving == t.rows() || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leaving])) {
        best_ratio = ratio;
        leaving = r;
      }
    }
    if (leaving == t.rows()) return PhaseResult::Unbounded;
    if (++pivots > options.max_pivots) return PhaseResult::PivotLimit;
    degenerate = best_ratio <= options.zero_tolerance ? degenerate + 1 : 0;
    t.pivot(leaving, entering);
    basis[leaving] = entering;
  }
}

void price_out(Tableau& t, const std::vector<std::size_t>& basis) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double f = t.cost(basis[r]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) t.at(t.rows(), c) -= f * t.at(r, c);
  }
}

}  // namespace

LpSolution solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& cost,
                             Sense sense, const LpOptions& options) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (static_cast<std::size_t>(b.size()) != m || static_cast<std::size_t>(cost.size()) != n)
    throw DomainError("LP dimensions do not agree");

  // Columns: n structural variables, then m artificials.
  Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = b[static_cast<Eigen::Index>(r)] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c)
      t.at(r, c) = sign * a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * b[static_cast<Eigen::Index>(r)];
    basis[r] = n + r;
  }

  LpSolution sol;
  std::size_t pivots = 0;

  // Phase one: minimize the sum of artificials.
  for (std::size_t c = n; c < n + m; ++c) t.cost(c) = 1.0;
  price_out(t, basis);
  std::vector<bool> allowed(n + m, true);
  if (run_simplex(t, basis, allowed, options, pivots) != PhaseResult::Optimal)
    throw InternalError("phase one of the simplex method did not terminate");

  double infeasibility = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] >= n) infeasibility += std::abs(t.rhs(r));
  sol.infeasibility = infeasibility;
  sol.pivots = pivots;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (infeasibility > options.feasibility_tolerance * scale) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }

  // Drive zero-level artificials out of the basis where possible; rows
  // where that fails are redundant and keep their artificial at zero.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e3 * options.zero_tolerance) {
        t.pivot(r, c);
        basis[r] = c;
        ++pivots;
        break;
      }
    }
  }

  // Phase two.
  const double dir = sense == Sense::Max ? -1.0 : 1.0;
  for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.cost(c) = dir * cost[static_cast<Eigen::Index>(c)];
  price_out(t, basis);
  for (std::size_t c = n; c < n + m; ++c) allowed[c] = false;
  const auto phase2 = run_simplex(t, basis, allowed, options, pivots);
  sol.pivots = pivots;
  if (phase2 == PhaseResult::PivotLimit) throw InternalError("simplex pivot limit exceeded");
  if (phase2 == PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  // Recover the basic solution from the original data for accuracy.
  std::vector<std::size_t> structural;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) structural.push_back(basis[r]);
  }
  std::sort(structural.begin(), structural.end());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (!structural.empty()) {
    Eigen::MatrixXd cols(a.rows(), static_cast<Eigen::Index>(structural.size()));
    for (std::size_t j = 0; j < structural.size(); ++j)
      cols.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(structural[j]));
    const Eigen::VectorXd xb = cols.colPivHouseholderQr().solve(b);
    for (std::size_t j = 0; j < structural.size(); ++j)
      x[static_cast<Eigen::Index>(structural[j])] = std::max(0.0, xb[static_cast<Eigen::Index>(j)]);
  }
  sol.status = LpStatus::Optimal;
  sol.x = std::move(x);
  sol.basis = std::move(structural);
  sol.objective = cost.dot(sol.x);
  return sol;
}

}  // namespace tcheb
