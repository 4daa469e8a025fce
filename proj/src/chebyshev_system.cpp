#include "tcheb/chebyshev_system.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "tcheb/errors.hpp"

namespace tcheb {

namespace {

std::uint64_t next_system_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double checked(const RealFunction& f, double x, std::size_t index) {
  const double value = f(x);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "basis function " << index << " is not finite at x = " << x;
    throw EvaluationError(msg.str(), x);
  }
  return value;
}

}  // namespace

Interval::Interval(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    std::ostringstream msg;
    msg << "invalid interval [" << lower << ", " << upper << "]";
    throw DomainError(msg.str());
  }
}

ChebyshevSystem::ChebyshevSystem(Interval interval, std::vector<RealFunction> basis,
                                 std::vector<RealFunction> derivatives, std::string label)
    : interval_(interval),
      basis_(std::move(basis)),
      derivatives_(std::move(derivatives)),
      label_(std::move(label)),
      id_(next_system_id()) {
  if (basis_.empty()) throw DomainError("a Chebyshev system needs at least one function");
  if (!derivatives_.empty() && derivatives_.size() != basis_.size())
    throw DomainError("derivative list must match the basis length");
  for (const auto& f : basis_)
    if (!f) throw DomainError("empty basis function");
  for (const auto& f : derivatives_)
    if (!f) throw DomainError("empty derivative function");
}

Eigen::VectorXd ChebyshevSystem::evaluate(double x) const {
  if (!interval_.contains(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside [" << interval_.lower() << ", " << interval_.upper() << "]";
    throw DomainError(msg.str());
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) out[static_cast<Eigen::Index>(i)] = checked(basis_[i], x, i);
  return out;
}

Eigen::VectorXd ChebyshevSystem::evaluate_derivative(double x) const {
  if (!interval_.contains(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside [" << interval_.lower() << ", " << interval_.upper() << "]";
    throw DomainError(msg.str());
  }
  const auto k = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXd out(k);
  if (has_derivatives()) {
    for (Eigen::Index i = 0; i < k; ++i)
      out[i] = checked(derivatives_[static_cast<std::size_t>(i)], x, static_cast<std::size_t>(i));
    return out;
  }
  const double h = 1e-6 * interval_.length();
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& f = basis_[static_cast<std::size_t>(i)];
    const auto idx = static_cast<std::size_t>(i);
    if (x - h < interval_.lower()) {
      out[i] = (-3.0 * checked(f, x, idx) + 4.0 * checked(f, x + h, idx) - checked(f, x + 2 * h, idx)) / (2 * h);
    } else if (x + h > interval_.upper()) {
      out[i] = (3.0 * checked(f, x, idx) - 4.0 * checked(f, x - h, idx) + checked(f, x - 2 * h, idx)) / (2 * h);
    } else {
      out[i] = (checked(f, x + h, idx) - checked(f, x - h, idx)) / (2 * h);
    }
  }
  return out;
}

Eigen::VectorXd evaluate_basis(const ChebyshevSystem& system, double x) { return system.evaluate(x); }

ChebyshevSystem augment(const ChebyshevSystem& system, RealFunction omega, RealFunction omega_derivative,
                        std::string label) {
  if (!omega) throw DomainError("empty augmenting function");
  auto basis = system.functions();
  basis.push_back(std::move(omega));
  std::vector<RealFunction> derivatives;
  if (system.has_derivatives() && omega_derivative) {
    derivatives = system.derivative_functions();
    derivatives.push_back(std::move(omega_derivative));
  }
  if (label.empty() && !system.label().empty()) label = system.label() + "+omega";
  return ChebyshevSystem(system.interval(), std::move(basis), std::move(derivatives), std::move(label));
}

ChebyshevSystem scale_last(const ChebyshevSystem& system, double factor) {
  auto basis = system.functions();
  auto last = basis.back();
  basis.back() = [last, factor](double x) { return factor * last(x); };
  auto derivatives = system.derivative_functions();
  if (!derivatives.empty()) {
    auto dlast = derivatives.back();
    derivatives.back() = [dlast, factor](double x) { return factor * dlast(x); };
  }
  return ChebyshevSystem(system.interval(), std::move(basis), std::move(derivatives), system.label());
}

RealFunction monomial(std::size_t power) {
  return [power](double x) {
    double r = 1.0;
    for (std::size_t i = 0; i < power; ++i) r *= x;
    return r;
  };
}

RealFunction monomial_derivative(std::size_t power) {
  return [power](double x) {
    if (power == 0) return 0.0;
    double r = static_cast<double>(power);
    for (std::size_t i = 1; i < power; ++i) r *= x;
    return r;
  };
}

ChebyshevSystem polynomial_system(Interval interval, std::size_t k) {
  std::vector<RealFunction> basis;
  std::vector<RealFunction> derivatives;
  for (std::size_t i = 0; i < k; ++i) {
    basis.push_back(monomial(i));
    derivatives.push_back(monomial_derivative(i));
  }
  return ChebyshevSystem(interval, std::move(basis), std::move(derivatives), "polynomial");
}

Eigen::MatrixXd collocation_matrix(const ChebyshevSystem& system, const std::vector<double>& points) {
  const auto k = static_cast<Eigen::Index>(system.size());
  Eigen::MatrixXd m(k, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = system.evaluate(points[j]);
  return m;
}

namespace {

enum class TupleSign { Positive, NonPositive, Indeterminate };

struct TupleResult {
  TupleSign sign;
  double determinant;
};

TupleResult classify_tuple(const ChebyshevSystem& system, const std::vector<double>& tuple, double ratio) {
  const Eigen::MatrixXd m = collocation_matrix(system, tuple);
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) scale *= m.row(i).norm();
  const double det = m.rows() == 1 ? m(0, 0) : Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
  if (!(std::abs(det) >= ratio * scale) || scale == 0.0) return {TupleSign::Indeterminate, det};
  return {det > 0.0 ? TupleSign::Positive : TupleSign::NonPositive, det};
}

// Calls visit(tuple) for the adjacent grid tuples followed by the random
// tuples; stops early when visit returns false.
template <class Visit>
void for_each_tuple(const ChebyshevSystem& system, const CheckOptions& options, Visit&& visit) {
  const std::size_t k = system.size();
  if (options.grid_size < k) throw DomainError("grid_size must be at least k");
  const double a = system.interval().lower();
  const double b = system.interval().upper();
  const std::size_t n = options.grid_size;

  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) grid.back() = b;

  std::vector<double> tuple(k);
  for (std::size_t s = 0; s + k <= n; ++s) {
    std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(s), k, tuple.begin());
    if (!visit(tuple)) return;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(a, b);
  for (std::size_t t = 0; t < options.num_random_tuples; ++t) {
    for (;;) {
      for (auto& x : tuple) x = unif(rng);
      std::sort(tuple.begin(), tuple.end());
      if (std::adjacent_find(tuple.begin(), tuple.end()) == tuple.end()) break;
    }
    if (!visit(tuple)) return;
  }
}

}  // namespace

CheckReport check_chebyshev(const ChebyshevSystem& system, const CheckOptions& options) {
  CheckReport report;
  double min_det = std::numeric_limits<double>::infinity();
  bool failed = false;
  for_each_tuple(system, options, [&](const std::vector<double>& tuple) {
    ++report.tuples_checked;
    const auto r = classify_tuple(system, tuple, options.indeterminate_ratio);
    if (r.sign == TupleSign::Indeterminate) {
      ++report.indeterminate;
      return true;
    }
    min_det = std::min(min_det, r.determinant);
    if (r.sign == TupleSign::NonPositive && !failed) {
      failed = true;
      report.witness = tuple;
    }
    return true;
  });
  const bool any_determinate = report.indeterminate < report.tuples_checked;
  report.min_determinant = any_determinate ? min_det : std::numeric_limits<double>::quiet_NaN();
  report.verified = any_determinate && !failed;
  return report;
}

int orientation(const ChebyshevSystem& system, const CheckOptions& options) {
  int sign = 0;
  for_each_tuple(system, options, [&](const std::vector<double>& tuple) {
    const auto r = classify_tuple(system, tuple, options.indeterminate_ratio);
    if (r.sign == TupleSign::Indeterminate) return true;
    sign = r.determinant > 0.0 ? 1 : -1;
    return false;
  });
  return sign;
}

}  // namespace tcheb
