#include "tcheb/principal_rep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tcheb/errors.hpp"

namespace tcheb {

RepresentationStructure principal_structure(std::size_t k, Side side) {
  if (k == 0) throw DomainError("empty system");
  RepresentationStructure s;
  if (k % 2 == 0) {
    const std::size_t m = k / 2;
    s.parity = Parity::Even;
    if (side == Side::Upper) {
      s.num_points = m + 1;
      s.includes_a = s.includes_b = true;
    } else {
      s.num_points = m;
    }
  } else {
    const std::size_t m = (k + 1) / 2;
    s.parity = Parity::Odd;
    s.num_points = m;
    s.includes_b = side == Side::Upper;
    s.includes_a = side == Side::Lower;
  }
  return s;
}

namespace {

void require_same_system(const ChebyshevSystem& system, const MomentPoint& c0) {
  if (c0.size() != system.size()) throw DomainError("moment point dimension does not match the system");
  if (c0.system_id != system.id()) throw DomainError("moment point was generated by a different system");
}

std::vector<double> lp_nodes(const Interval& interval, std::size_t grid_size, const std::vector<double>& extra) {
  const double a = interval.lower();
  const double b = interval.upper();
  std::vector<double> nodes(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
  nodes.back() = b;
  for (double x : extra)
    if (interval.contains(x)) nodes.push_back(x);
  std::sort(nodes.begin(), nodes.end());
  const double eps = 1e-12 * interval.length();
  nodes.erase(std::unique(nodes.begin(), nodes.end(), [eps](double l, double r) { return r - l <= eps; }),
              nodes.end());
  return nodes;
}

}  // namespace

GridLpResult grid_lp_extremum(const ChebyshevSystem& system, const MomentPoint& c0, const RealFunction& objective,
                              Sense sense, std::size_t grid_size, const GridLpOptions& options) {
  require_same_system(system, c0);
  const std::size_t k = system.size();
  if (grid_size < 2 * k + 1) throw DomainError("grid_size must be at least 2k+1");
  if (!objective) throw DomainError("empty LP objective");

  const auto nodes = lp_nodes(system.interval(), grid_size, options.extra_nodes);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(k), n);
  Eigen::VectorXd cost(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = nodes[static_cast<std::size_t>(j)];
    a.col(j) = system.evaluate(x);
    cost[j] = objective(x);
    if (!std::isfinite(cost[j])) throw EvaluationError("LP objective is not finite", x);
  }

  LpOptions lp;
  lp.feasibility_tolerance = options.feasibility_tolerance;
  const auto sol = solve_standard_lp(a, c0.coordinates, cost, sense, lp);
  if (sol.status == LpStatus::Infeasible) {
    std::ostringstream msg;
    msg << "moment point is outside the discretized moment space (phase-one residual " << sol.infeasibility << ")";
    throw InfeasibleError(msg.str(), sol.infeasibility);
  }
  if (sol.status == LpStatus::Unbounded) throw InternalError("grid LP reported unbounded objective");

  // Degenerate basic variables come back as roundoff-level crumbs; weights
  // below the feasibility tolerance are not support.
  const double floor = options.feasibility_tolerance * std::max(1.0, std::abs(c0.coordinates[0]));
  std::vector<std::size_t> support;
  std::vector<double> weights;
  std::vector<double> points;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (sol.x[j] > floor) {
      support.push_back(static_cast<std::size_t>(j));
      weights.push_back(sol.x[j]);
      points.push_back(nodes[static_cast<std::size_t>(j)]);
    }
  }
  Design::Options dopt;
  dopt.weight_sum_tolerance = 1e-6;
  auto design = Design::make(system.interval(), points, weights, dopt);
  return GridLpResult{sol.objective, std::move(design), nodes, std::move(support), std::move(weights)};
}

namespace {

struct Layout {
  bool fix_a = false;
  bool fix_b = false;
  std::size_t interior = 0;

  std::size_t num_points() const { return interior + (fix_a ? 1 : 0) + (fix_b ? 1 : 0); }
  std::size_t unknowns() const { return interior + num_points(); }
};

struct Iterate {
  std::vector<double> interior;
  std::vector<double> weights;
};

std::vector<double> support_of(const Layout& layout, const Iterate& it, const Interval& interval) {
  std::vector<double> pts;
  if (layout.fix_a) pts.push_back(interval.lower());
  pts.insert(pts.end(), it.interior.begin(), it.interior.end());
  if (layout.fix_b) pts.push_back(interval.upper());
  return pts;
}

Eigen::VectorXd residual(const ChebyshevSystem& system, const Eigen::VectorXd& c, const Layout& layout,
                         const Iterate& it) {
  const auto pts = support_of(layout, it, system.interval());
  Eigen::VectorXd f = -c;
  for (std::size_t j = 0; j < pts.size(); ++j) f += it.weights[j] * system.evaluate(pts[j]);
  return f;
}

Eigen::MatrixXd jacobian(const ChebyshevSystem& system, const Layout& layout, const Iterate& it) {
  const auto pts = support_of(layout, it, system.interval());
  const auto k = static_cast<Eigen::Index>(system.size());
  Eigen::MatrixXd j(k, static_cast<Eigen::Index>(layout.unknowns()));
  const std::size_t offset = layout.fix_a ? 1 : 0;
  for (std::size_t i = 0; i < layout.interior; ++i) {
    const std::size_t p = offset + i;
    j.col(static_cast<Eigen::Index>(i)) = it.weights[p] * system.evaluate_derivative(pts[p]);
  }
  for (std::size_t p = 0; p < pts.size(); ++p)
    j.col(static_cast<Eigen::Index>(layout.interior + p)) = system.evaluate(pts[p]);
  return j;
}

// Largest step fraction in (0, 1] that keeps weights positive and the
// support strictly ordered inside the interval.
double admissible_step(const Layout& layout, const Iterate& it, const Eigen::VectorXd& dz, const Interval& interval) {
  constexpr double kFraction = 0.9;
  double alpha = 1.0;
  for (std::size_t p = 0; p < it.weights.size(); ++p) {
    const double dw = dz[static_cast<Eigen::Index>(layout.interior + p)];
    if (dw < 0.0) alpha = std::min(alpha, kFraction * it.weights[p] / -dw);
  }
  std::vector<double> s{interval.lower()};
  std::vector<double> ds{0.0};
  for (std::size_t i = 0; i < layout.interior; ++i) {
    s.push_back(it.interior[i]);
    ds.push_back(dz[static_cast<Eigen::Index>(i)]);
  }
  s.push_back(interval.upper());
  ds.push_back(0.0);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double gap = s[i + 1] - s[i];
    const double dgap = ds[i + 1] - ds[i];
    if (dgap < 0.0) alpha = std::min(alpha, kFraction * gap / -dgap);
  }
  return alpha;
}

Iterate step(const Layout& layout, const Iterate& it, const Eigen::VectorXd& dz, double alpha) {
  Iterate next = it;
  for (std::size_t i = 0; i < layout.interior; ++i) next.interior[i] += alpha * dz[static_cast<Eigen::Index>(i)];
  for (std::size_t p = 0; p < it.weights.size(); ++p)
    next.weights[p] += alpha * dz[static_cast<Eigen::Index>(layout.interior + p)];
  return next;
}

struct SolveOutcome {
  Iterate iterate;
  double residual_inf;
  std::size_t iterations;
};

// Damped Newton (square systems) or Gauss-Newton (least_squares) on the
// moment equations.
SolveOutcome solve_moments(const ChebyshevSystem& system, const Eigen::VectorXd& c, const Layout& layout,
                           Iterate it, const NewtonOptions& options, bool least_squares) {
  const double target = options.tolerance * std::max(1.0, c.cwiseAbs().maxCoeff());
  Eigen::VectorXd f = residual(system, c, layout, it);
  for (std::size_t iter = 0;; ++iter) {
    const double res = f.cwiseAbs().maxCoeff();
    if (res <= target) return {std::move(it), res, iter};
    if (iter == options.max_iterations) {
      std::ostringstream msg;
      msg << "Newton iteration did not converge in " << options.max_iterations << " steps (residual " << res << ")";
      throw ConvergenceError(msg.str(), res);
    }

    const Eigen::MatrixXd jac = jacobian(system, layout, it);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    const double smin = sv.size() ? sv[sv.size() - 1] : 0.0;
    if (!least_squares && (smax == 0.0 || smin / smax < options.singular_rcond)) {
      std::ostringstream msg;
      msg << "moment Jacobian is numerically singular (rcond " << (smax == 0.0 ? 0.0 : smin / smax)
          << "); the moment point is probably on the boundary";
      throw SingularityError(msg.str());
    }
    if (least_squares) svd.setThreshold(1e-12);
    const Eigen::VectorXd dz = svd.solve(-f);

    double alpha = admissible_step(layout, it, dz, system.interval());
    const double merit = f.squaredNorm();
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      Iterate trial = step(layout, it, dz, alpha);
      Eigen::VectorXd ft = residual(system, c, layout, trial);
      if (ft.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit || ft.cwiseAbs().maxCoeff() <= target) {
        it = std::move(trial);
        f = std::move(ft);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "Newton line search stalled (residual " << res << ")";
      throw ConvergenceError(msg.str(), res);
    }
  }
}

struct Cluster {
  double location;
  double weight;
  bool at_a;
  bool at_b;
};

std::vector<Cluster> clusters_of(const GridLpResult& lp, const Interval& interval, std::size_t grid_size) {
  std::vector<Cluster> out;
  const double half_step = 0.5 * interval.length() / static_cast<double>(grid_size - 1);
  const std::size_t last = lp.nodes.size() - 1;
  std::size_t i = 0;
  while (i < lp.support.size()) {
    std::size_t j = i;
    while (j + 1 < lp.support.size() && lp.support[j + 1] == lp.support[j] + 1) ++j;
    double w = 0.0;
    double mx = 0.0;
    for (std::size_t q = i; q <= j; ++q) {
      w += lp.support_weights[q];
      mx += lp.support_weights[q] * lp.nodes[lp.support[q]];
    }
    const double loc = mx / w;
    const bool touches_a = lp.support[i] == 0;
    const bool touches_b = lp.support[j] == last;
    out.push_back({loc, w, touches_a && loc - interval.lower() <= half_step,
                   touches_b && interval.upper() - loc <= half_step});
    i = j + 1;
  }
  return out;
}

bool matches(const std::vector<Cluster>& cs, const RepresentationStructure& s) {
  if (cs.empty()) return false;
  const bool has_a = cs.front().at_a;
  const bool has_b = cs.back().at_b;
  if (has_a != s.includes_a || has_b != s.includes_b) return false;
  const std::size_t interior = cs.size() - (has_a ? 1 : 0) - (has_b ? 1 : 0);
  return interior == s.interior_points();
}

// Coerces LP clusters into the requested structure: endpoints are added or
// reassigned and interior clusters merged or split to the right count.
Iterate fit_structure(std::vector<Cluster> cs, const RepresentationStructure& s, const Interval& interval,
                      double total_mass) {
  const double a = interval.lower();
  const double b = interval.upper();
  double wa = 0.0;
  double wb = 0.0;
  std::vector<Cluster> inner;
  for (const auto& c : cs) {
    if (c.at_a && s.includes_a) wa += c.weight;
    else if (c.at_b && s.includes_b) wb += c.weight;
    else inner.push_back(c);
  }
  for (auto& c : inner) {
    const double margin = 1e-4 * interval.length();
    c.location = std::clamp(c.location, a + margin, b - margin);
  }
  while (inner.size() > s.interior_points()) {
    std::size_t best = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < inner.size(); ++i) {
      if (inner[i + 1].location - inner[i].location < gap) {
        gap = inner[i + 1].location - inner[i].location;
        best = i;
      }
    }
    if (inner.size() == 1) {
      (s.includes_b ? wb : wa) += inner[0].weight;
      inner.clear();
      break;
    }
    auto& l = inner[best];
    const auto& r = inner[best + 1];
    l.location = (l.location * l.weight + r.location * r.weight) / (l.weight + r.weight);
    l.weight += r.weight;
    inner.erase(inner.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  while (inner.size() < s.interior_points()) {
    std::vector<double> edges{a};
    for (const auto& c : inner) edges.push_back(c.location);
    edges.push_back(b);
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < edges.size(); ++i)
      if (edges[i + 1] - edges[i] > edges[best + 1] - edges[best]) best = i;
    const double x = 0.5 * (edges[best] + edges[best + 1]);
    const double w = 1e-3 * total_mass;
    inner.insert(inner.begin() + static_cast<std::ptrdiff_t>(best), Cluster{x, w, false, false});
  }
  const double floor = 1e-6 * total_mass;
  Iterate it;
  if (s.includes_a) it.weights.push_back(std::max(wa, floor));
  for (const auto& c : inner) {
    it.interior.push_back(c.location);
    it.weights.push_back(std::max(c.weight, floor));
  }
  if (s.includes_b) it.weights.push_back(std::max(wb, floor));
  return it;
}

Design to_design(const ChebyshevSystem& system, const Layout& layout, const Iterate& it) {
  Design::Options opt;
  opt.weight_sum_tolerance = 1e-6;
  return Design::make(system.interval(), support_of(layout, it, system.interval()), it.weights, opt);
}

Layout layout_of(const RepresentationStructure& s) { return Layout{s.includes_a, s.includes_b, s.interior_points()}; }

RepresentationStructure structure_of(const Design& d, std::size_t k) {
  RepresentationStructure s;
  s.num_points = d.size();
  s.includes_a = d.points().front() == d.interval().lower();
  s.includes_b = d.points().back() == d.interval().upper();
  s.parity = k % 2 == 0 ? Parity::Even : Parity::Odd;
  return s;
}

// Boundary case: the representation is unique and given (up to grid bias)
// by the LP solution; merge adjacent grid nodes and polish the moments by
// Gauss-Newton on the merged support.
PrincipalResult boundary_result(const ChebyshevSystem& system, const MomentPoint& c0, const GridLpResult& lp,
                                std::size_t grid_size, const NewtonOptions& newton) {
  const auto cs = clusters_of(lp, system.interval(), grid_size);
  Layout layout;
  Iterate it;
  layout.fix_a = cs.front().at_a;
  layout.fix_b = cs.back().at_b;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const bool endpoint = (i == 0 && layout.fix_a) || (i + 1 == cs.size() && layout.fix_b);
    if (!endpoint) it.interior.push_back(cs[i].location);
    it.weights.push_back(cs[i].weight);
  }
  layout.interior = it.interior.size();
  // Merged interior points may sit exactly on the interval ends.
  for (auto& x : it.interior)
    x = std::clamp(x, system.interval().lower() + 1e-9 * system.interval().length(),
                   system.interval().upper() - 1e-9 * system.interval().length());

  std::size_t iterations = 0;
  double res = residual(system, c0.coordinates, layout, it).cwiseAbs().maxCoeff();
  try {
    auto outcome = solve_moments(system, c0.coordinates, layout, it, newton, true);
    it = std::move(outcome.iterate);
    res = outcome.residual_inf;
    iterations = outcome.iterations;
  } catch (const ConvergenceError& e) {
    // Keep the merged LP design; its residual is reported.
    (void)e;
  }
  auto design = to_design(system, layout, it);
  auto structure = structure_of(design, system.size());
  return PrincipalResult{std::move(design), res, lp.value, iterations, structure, false};
}

std::vector<Probe> default_probes(const ChebyshevSystem& system) {
  const double a = system.interval().lower();
  const double len = system.interval().length();
  const auto last = system.functions().back();
  const std::size_t k = system.size();
  return {
      Probe{[last, a, len](double x) { return last(x) * (x - a) / len; }, "psi_last*(x-A)/(B-A)"},
      Probe{monomial(k), "x^" + std::to_string(k)},
  };
}

}  // namespace

PrincipalResult refine_newton(const ChebyshevSystem& system, const MomentPoint& c0,
                              const RepresentationStructure& structure, const Design& initial,
                              const NewtonOptions& options) {
  require_same_system(system, c0);
  if (structure.unknowns() != system.size())
    throw DomainError("representation structure does not have k unknowns");
  if (initial.size() != structure.num_points) throw DomainError("initial design has the wrong number of points");
  const auto& pts = initial.points();
  const bool has_a = pts.front() == system.interval().lower();
  const bool has_b = pts.back() == system.interval().upper();
  if (has_a != structure.includes_a || has_b != structure.includes_b)
    throw DomainError("initial design does not have the mandated endpoint membership");

  const Layout layout = layout_of(structure);
  Iterate it;
  it.weights = initial.weights();
  it.interior.assign(pts.begin() + (has_a ? 1 : 0), pts.end() - (has_b ? 1 : 0));
  auto outcome = solve_moments(system, c0.coordinates, layout, std::move(it), options, false);
  auto design = to_design(system, layout, outcome.iterate);
  return PrincipalResult{std::move(design), outcome.residual_inf, 0.0, outcome.iterations, structure, true};
}

PrincipalResult principal_representation(const ChebyshevSystem& system, const MomentPoint& c0, Side side,
                                         const PrincipalOptions& options) {
  require_same_system(system, c0);
  const std::size_t k = system.size();
  const auto structure = principal_structure(k, side);
  const auto probes = options.probe ? std::vector<Probe>{*options.probe} : default_probes(system);

  GridLpOptions lp_opt;
  lp_opt.extra_nodes = options.extra_nodes;
  lp_opt.feasibility_tolerance = options.feasibility_tolerance;
  const double total_mass = c0.coordinates[0];
  const Layout layout = layout_of(structure);

  std::optional<GridLpResult> boundary_lp;
  std::optional<Error> last_error;
  for (const auto& probe : probes) {
    auto hi = grid_lp_extremum(system, c0, probe.function, Sense::Max, options.grid_size, lp_opt);
    auto lo = grid_lp_extremum(system, c0, probe.function, Sense::Min, options.grid_size, lp_opt);
    if (hi.value - lo.value <= options.boundary_tolerance * std::max(1.0, std::abs(hi.value))) {
      boundary_lp = std::move(hi);
      break;
    }

    std::vector<std::pair<const GridLpResult*, std::vector<Cluster>>> candidates;
    for (const GridLpResult* r : {&hi, &lo}) candidates.emplace_back(r, clusters_of(*r, system.interval(), options.grid_size));
    std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& l, const auto& r) {
      return matches(l.second, structure) && !matches(r.second, structure);
    });

    for (const auto& [lp, cs] : candidates) {
      if (!matches(cs, structure) && cs.back().at_b != structure.includes_b) continue;
      try {
        auto outcome = solve_moments(system, c0.coordinates, layout,
                                     fit_structure(cs, structure, system.interval(), total_mass), options.newton, false);
        auto design = to_design(system, layout, outcome.iterate);
        return PrincipalResult{std::move(design), outcome.residual_inf, lp->value, outcome.iterations, structure, true};
      } catch (const ConvergenceError& e) {
        last_error = e;
      } catch (const SingularityError& e) {
        last_error = e;
        boundary_lp = *lp;
      }
    }
  }
  if (boundary_lp) return boundary_result(system, c0, *boundary_lp, options.grid_size, options.newton);
  if (last_error) throw ConvergenceError(last_error->what(), std::numeric_limits<double>::quiet_NaN());
  throw ConvergenceError("no LP solution could be fitted to the principal structure",
                         std::numeric_limits<double>::quiet_NaN());
}

PrincipalResult upper_principal(const ChebyshevSystem& system, const MomentPoint& c0, const PrincipalOptions& options) {
  return principal_representation(system, c0, Side::Upper, options);
}

PrincipalResult lower_principal(const ChebyshevSystem& system, const MomentPoint& c0, const PrincipalOptions& options) {
  return principal_representation(system, c0, Side::Lower, options);
}

}  // namespace tcheb
