#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tcheb {

using RealFunction = std::function<double(double)>;

/// Compact design interval [A, B].
class Interval {
 public:
  Interval(double lower, double upper);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double length() const noexcept { return upper_ - lower_; }
  bool contains(double x) const noexcept { return x >= lower_ && x <= upper_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_;
  double upper_;
};

/// An ordered basis Psi_0, ..., Psi_{k-1} on an interval, optionally with
/// analytic derivatives. Copies share the underlying functions and identity.
class ChebyshevSystem {
 public:
  ChebyshevSystem(Interval interval, std::vector<RealFunction> basis,
                  std::vector<RealFunction> derivatives = {}, std::string label = {});

  const Interval& interval() const noexcept { return interval_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::string& label() const noexcept { return label_; }
  bool has_derivatives() const noexcept { return !derivatives_.empty(); }

  // Identity token shared by copies; augment/scale produce a new one.
  std::uint64_t id() const noexcept { return id_; }

  const RealFunction& function(std::size_t i) const { return basis_.at(i); }
  const std::vector<RealFunction>& functions() const noexcept { return basis_; }
  const std::vector<RealFunction>& derivative_functions() const noexcept { return derivatives_; }

  /// (Psi_0(x), ..., Psi_{k-1}(x)); throws DomainError outside [A,B] and
  /// EvaluationError on a non-finite value.
  Eigen::VectorXd evaluate(double x) const;

  /// d/dx of every basis function. Uses the analytic derivatives when
  /// present, otherwise central differences with step 1e-6 (B-A), switching
  /// to second-order one-sided stencils near the endpoints.
  Eigen::VectorXd evaluate_derivative(double x) const;

 private:
  Interval interval_;
  std::vector<RealFunction> basis_;
  std::vector<RealFunction> derivatives_;
  std::string label_;
  std::uint64_t id_;
};

Eigen::VectorXd evaluate_basis(const ChebyshevSystem& system, double x);

/// Appends omega as the last function. No Chebyshev check is performed.
/// If the system carries derivatives, omega_derivative must be given too,
/// otherwise the result drops to finite differences for every function.
ChebyshevSystem augment(const ChebyshevSystem& system, RealFunction omega,
                        RealFunction omega_derivative = {}, std::string label = {});

/// Replaces Psi_{k-1} by factor * Psi_{k-1}.
ChebyshevSystem scale_last(const ChebyshevSystem& system, double factor);

/// {1, x, ..., x^{k-1}} with analytic derivatives.
ChebyshevSystem polynomial_system(Interval interval, std::size_t k);

/// x^power as a RealFunction.
RealFunction monomial(std::size_t power);
RealFunction monomial_derivative(std::size_t power);

struct CheckOptions {
  std::size_t grid_size = 512;
  std::size_t num_random_tuples = 2000;
  std::uint64_t seed = 0;
  // Relative (to the product of row norms) magnitude below which a
  // determinant is counted as numerically indeterminate.
  double indeterminate_ratio = 1e-12;
};

struct CheckReport {
  bool verified = false;
  std::size_t tuples_checked = 0;
  std::size_t indeterminate = 0;
  // Minimum over the determinate tuples; NaN when none were determinate.
  double min_determinant = 0.0;
  std::optional<std::vector<double>> witness;
};

/// Samples the determinant condition det[Psi_i(x_j)] > 0 over all adjacent
/// k-tuples of an equispaced grid and over random strictly increasing
/// tuples. A failing tuple is conclusive; a pass is only evidence.
CheckReport check_chebyshev(const ChebyshevSystem& system, const CheckOptions& options = {});

/// Collocation matrix [Psi_i(x_j)] (rows: functions, columns: points).
Eigen::MatrixXd collocation_matrix(const ChebyshevSystem& system, const std::vector<double>& points);

/// Sign of the determinant condition observed on the system: +1 if the
/// first determinate sampled tuple is positive, -1 if negative, 0 if none
/// was determinate.
int orientation(const ChebyshevSystem& system, const CheckOptions& options = {});

}  // namespace tcheb
