#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcheb/chebyshev_system.hpp"

namespace tcheb {

/// A finitely supported probability measure on an interval. Points are
/// strictly increasing, weights strictly positive and summing to one.
class Design {
 public:
  struct Options {
    // Points closer than merge_tolerance * (B - A) are merged and points that
    // close to A or B are snapped onto the endpoint.
    double merge_tolerance = 1e-10;
    // Accepted deviation of the weight sum from one before renormalizing.
    double weight_sum_tolerance = 1e-12;
  };

  /// Sorts, snaps, merges and drops zero weights. Throws DomainError for
  /// points outside the interval, negative or non-finite weights, or a
  /// weight sum off by more than the tolerance.
  static Design make(Interval interval, std::vector<double> points, std::vector<double> weights,
                     const Options& options);
  static Design make(Interval interval, std::vector<double> points, std::vector<double> weights);

  static Design dirac(Interval interval, double x);
  static Design uniform(Interval interval, std::vector<double> points);

  const Interval& interval() const noexcept { return interval_; }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }

  bool contains_point(double x) const;

  /// alpha * a + (1 - alpha) * b.
  static Design mixture(const Design& a, const Design& b, double alpha);

  friend bool operator==(const Design&, const Design&) = default;

 private:
  Design(Interval interval, std::vector<double> points, std::vector<double> weights)
      : interval_(interval), points_(std::move(points)), weights_(std::move(weights)) {}

  Interval interval_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Lexicographic comparison on (points, weights); used for deterministic
/// tie breaking.
bool lexicographically_less(const Design& a, const Design& b);

struct MomentPoint {
  Eigen::VectorXd coordinates;
  std::uint64_t system_id = 0;

  static MomentPoint for_system(const ChebyshevSystem& system, Eigen::VectorXd coordinates);
  std::size_t size() const noexcept { return static_cast<std::size_t>(coordinates.size()); }
};

/// Half-integer index, stored as twice its value.
class HalfIndex {
 public:
  constexpr explicit HalfIndex(int twice) : twice_(twice) {}
  static constexpr HalfIndex from_k_over_two(std::size_t k) { return HalfIndex(static_cast<int>(k)); }

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }

  friend constexpr auto operator<=>(HalfIndex, HalfIndex) = default;

 private:
  int twice_;
};

enum class Classification { Boundary, Interior };

struct BoundaryReport {
  Classification classification = Classification::Interior;
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  std::string probe;
};

/// A probe objective together with a human-readable description.
struct Probe {
  RealFunction function;
  std::string description;
};

MomentPoint moment_point(const ChebyshevSystem& system, const Design& design);

/// Interior support points count one, points at A or B count one half.
HalfIndex design_index(const Design& design);

struct ClassifyOptions {
  double tolerance = 1e-9;
  std::size_t grid_size = 2001;
  std::vector<double> extra_nodes;
  double feasibility_tolerance = 1e-8;
};

/// Computes the range [gamma_lower, gamma_upper] of integrals of the probe
/// over all grid measures reproducing c0 and classifies c0 as a boundary
/// point when the range collapses (relative to max(1, |gamma_upper|)).
BoundaryReport classify_point(const ChebyshevSystem& system, const MomentPoint& c0, const Probe& probe,
                              const ClassifyOptions& options = {});

}  // namespace tcheb
