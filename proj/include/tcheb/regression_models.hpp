#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcheb/chebyshev_system.hpp"
#include "tcheb/moment_space.hpp"

namespace tcheb {

/// A regression function eta(x, theta) with its parameter gradient, the
/// design-independent transform P(theta) and the block size p1 used to
/// split C = P^{-1} M P^{-T}.
struct RegressionModel {
  std::string name;
  std::size_t p = 0;
  std::function<double(double, const Eigen::VectorXd&)> eta;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> gradient;
  // d/dx of the gradient; optional, enables analytic Psi derivatives.
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> gradient_dx;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> transform;
  std::size_t p1 = 1;
  Interval design_interval;
  // Symbolic name of the integrand entry (i, j) of C(x); "1" marks a
  // constant. Optional: used to cross-check the numerical deduplication.
  std::function<std::string(std::size_t, std::size_t)> entry_label;
  // Throws DomainError when theta is outside the admissible range.
  std::function<void(const Eigen::VectorXd&)> validate_theta;
};

RegressionModel michaelis_menten(Interval interval, std::size_t p1 = 1);
RegressionModel exponential(Interval interval, std::size_t p1 = 1);
RegressionModel exponential3(Interval interval, std::size_t p1 = 1);
RegressionModel polynomial(std::size_t degree, Interval interval, std::size_t p1 = 1);

/// Model-spec as read from JSON.
struct ModelSpec {
  std::string model;
  Eigen::VectorXd theta;
  double lower = 0.0;
  double upper = 1.0;
  std::size_t p1 = 1;
  // Only for "polynomial".
  std::size_t degree = 1;
};

const std::vector<std::string>& catalog_names();

/// Throws ConfigurationError naming the catalog on an unknown model.
RegressionModel make_catalog_model(const ModelSpec& spec);

struct InfoMatrix {
  Eigen::MatrixXd entries;
};

/// Position of an integrand entry of C11/C21 and the Psi it maps to.
struct ElementRef {
  std::size_t row = 0;
  std::size_t col = 0;
  // Index into the Psi system (>= 1), or nullopt for a constant entry.
  std::optional<std::size_t> psi;
  double constant = 0.0;
};

struct PsiSystem {
  ChebyshevSystem system;
  std::function<Eigen::MatrixXd(double)> c22;
  std::vector<ElementRef> element_index;
  // labels[i] names Psi_i; labels[0] is "1".
  std::vector<std::string> labels;
  std::size_t p = 0;
  std::size_t p1 = 0;
};

InfoMatrix information_matrix(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& design);

/// C = P^{-1} M P^{-T}; throws ConfigurationError if P is numerically singular.
Eigen::MatrixXd c_matrix(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& design);

/// Collects the distinct non-constant integrand entries of C11 and C21
/// (first-appearance order over rows, then columns), prepends Psi_0 = 1 and
/// returns the system together with the C22 block map.
PsiSystem psi_system(const RegressionModel& model, const Eigen::VectorXd& theta);

/// x -> Q^T C22(x) Q. Throws DomainError for Q = 0 or the wrong length.
RealFunction psi_k_Q(const PsiSystem& psi, const Eigen::VectorXd& q);

/// Directions sampled for the "every nonzero Q" hypothesis: {(1)} for
/// p1 = 1, otherwise `count` unit vectors from a Halton sequence.
std::vector<Eigen::VectorXd> q_directions(std::size_t p1, std::size_t count = 64);

}  // namespace tcheb
