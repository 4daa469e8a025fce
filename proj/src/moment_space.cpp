#include "tcheb/moment_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tcheb/errors.hpp"
#include "tcheb/principal_rep.hpp"

namespace tcheb {

Design Design::make(Interval interval, std::vector<double> points, std::vector<double> weights) {
  return make(interval, std::move(points), std::move(weights), Options{});
}

Design Design::make(Interval interval, std::vector<double> points, std::vector<double> weights,
                    const Options& options) {
  if (points.size() != weights.size()) throw DomainError("points and weights differ in length");
  const double a = interval.lower();
  const double b = interval.upper();
  const double snap = options.merge_tolerance * interval.length();

  std::vector<std::pair<double, double>> pw;
  pw.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double x = points[i];
    const double w = weights[i];
    if (!std::isfinite(x) || !std::isfinite(w)) throw DomainError("non-finite design entry");
    if (w < 0.0) throw DomainError("negative design weight");
    if (x < a - snap || x > b + snap) {
      std::ostringstream msg;
      msg << "design point " << x << " outside [" << a << ", " << b << "]";
      throw DomainError(msg.str());
    }
    if (std::abs(x - a) <= snap) x = a;
    if (std::abs(x - b) <= snap) x = b;
    if (w > 0.0) pw.emplace_back(x, w);
  }
  if (pw.empty()) throw DomainError("design has no positive weight");
  std::stable_sort(pw.begin(), pw.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  std::vector<double> xs;
  std::vector<double> ws;
  for (const auto& [x, w] : pw) {
    if (!xs.empty() && x - xs.back() <= snap) {
      const double total = ws.back() + w;
      const bool endpoint = xs.back() == a || xs.back() == b;
      if (x == b) {
        xs.back() = b;
      } else if (!endpoint) {
        xs.back() = (xs.back() * ws.back() + x * w) / total;
      }
      ws.back() = total;
      continue;
    }
    xs.push_back(x);
    ws.push_back(w);
  }

  const double sum = std::accumulate(ws.begin(), ws.end(), 0.0);
  if (std::abs(sum - 1.0) > options.weight_sum_tolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design weights sum to " << sum << ", not 1";
    throw DomainError(msg.str());
  }
  if (sum != 1.0)
    for (auto& w : ws) w /= sum;
  return Design(interval, std::move(xs), std::move(ws));
}

Design Design::dirac(Interval interval, double x) { return make(interval, {x}, {1.0}); }

Design Design::uniform(Interval interval, std::vector<double> points) {
  const std::size_t n = points.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return make(interval, std::move(points), std::move(w), Options{1e-10, 1e-12});
}

bool Design::contains_point(double x) const {
  return std::find(points_.begin(), points_.end(), x) != points_.end();
}

Design Design::mixture(const Design& a, const Design& b, double alpha) {
  if (!(a.interval() == b.interval())) throw DomainError("mixture of designs on different intervals");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("mixture weight outside [0,1]");
  std::vector<double> xs = a.points();
  std::vector<double> ws;
  for (double w : a.weights()) ws.push_back(alpha * w);
  xs.insert(xs.end(), b.points().begin(), b.points().end());
  for (double w : b.weights()) ws.push_back((1.0 - alpha) * w);
  return make(a.interval(), std::move(xs), std::move(ws), Options{1e-10, 1e-12});
}

bool lexicographically_less(const Design& a, const Design& b) {
  if (a.points() != b.points()) return a.points() < b.points();
  return a.weights() < b.weights();
}

MomentPoint MomentPoint::for_system(const ChebyshevSystem& system, Eigen::VectorXd coordinates) {
  if (static_cast<std::size_t>(coordinates.size()) != system.size())
    throw DomainError("moment point dimension does not match the system");
  return MomentPoint{std::move(coordinates), system.id()};
}

MomentPoint moment_point(const ChebyshevSystem& system, const Design& design) {
  if (!(design.interval() == system.interval())) throw DomainError("design and system live on different intervals");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system.size()));
  for (std::size_t j = 0; j < design.size(); ++j) c += design.weights()[j] * system.evaluate(design.points()[j]);
  return MomentPoint{std::move(c), system.id()};
}

HalfIndex design_index(const Design& design) {
  int twice = 0;
  for (double x : design.points())
    twice += (x == design.interval().lower() || x == design.interval().upper()) ? 1 : 2;
  return HalfIndex(twice);
}

BoundaryReport classify_point(const ChebyshevSystem& system, const MomentPoint& c0, const Probe& probe,
                              const ClassifyOptions& options) {
  GridLpOptions lp;
  lp.extra_nodes = options.extra_nodes;
  lp.feasibility_tolerance = options.feasibility_tolerance;
  const auto upper = grid_lp_extremum(system, c0, probe.function, Sense::Max, options.grid_size, lp);
  const auto lower = grid_lp_extremum(system, c0, probe.function, Sense::Min, options.grid_size, lp);

  BoundaryReport report;
  report.gamma_lower = lower.value;
  report.gamma_upper = upper.value;
  report.probe = probe.description;
  const double gap = report.gamma_upper - report.gamma_lower;
  report.classification = gap <= options.tolerance * std::max(1.0, std::abs(report.gamma_upper))
                              ? Classification::Boundary
                              : Classification::Interior;
  return report;
}

}  // namespace tcheb
