#include "tcheb/complete_class.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "tcheb/errors.hpp"
#include "tcheb/nelder_mead.hpp"
#include "tcheb/symmetric_eigen.hpp"

namespace tcheb {

std::string to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Identity:
      return "identity";
    case Branch::OddCase:
      return "odd";
    case Branch::EvenCase:
      return "even";
  }
  return "unknown";
}

std::string to_string(Criterion c) { return c == Criterion::D ? "D" : "A"; }

namespace {

std::string format_tuple(const std::vector<double>& xs) {
  std::ostringstream out;
  out.precision(15);
  out << '(';
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ", " : "") << xs[i];
  out << ')';
  return out.str();
}

struct Oriented {
  ChebyshevSystem system;
  bool flipped;
};

Oriented orient(const ChebyshevSystem& base, const CheckOptions& check) {
  if (base.size() < 2) return Oriented{base, false};
  const int o = orientation(base, check);
  if (o < 0) return Oriented{scale_last(base, -1.0), true};
  return Oriented{base, false};
}

double kth_sign(Direction direction, const ReductionOptions& options) {
  const double s = direction == Direction::Upper ? 1.0 : -1.0;
  return options.flip_kth ? -s : s;
}

Side side_of(Direction d) { return d == Direction::Upper ? Side::Upper : Side::Lower; }

double integrate(const RealFunction& f, const Design& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d.weights()[i] * f(d.points()[i]);
  return s;
}

}  // namespace

PreconditionReport check_preconditions(const PsiSystem& psi, Direction direction, const ReductionOptions& options) {
  PreconditionReport out;
  out.direction = direction;
  const Oriented base = orient(psi.system, options.check);
  out.base_flipped = base.flipped;
  out.base = check_chebyshev(base.system, options.check);
  if (!out.base.verified) {
    out.failure = out.base.witness ? "base system fails the Chebyshev check at " + format_tuple(*out.base.witness)
                                   : "base system has no determinate sampled tuple";
    return out;
  }
  const double sign = kth_sign(direction, options);
  for (const auto& q : q_directions(psi.p1)) {
    const RealFunction kth = psi_k_Q(psi, q);
    const ChebyshevSystem aug = augment(base.system, [kth, sign](double x) { return sign * kth(x); });
    AugmentedCheck entry{q, check_chebyshev(aug, options.check)};
    const bool ok = entry.report.verified;
    out.augmented.push_back(std::move(entry));
    if (!ok) {
      std::ostringstream msg;
      msg.precision(15);
      msg << to_string(direction) << " augmented system with Q = (";
      for (Eigen::Index i = 0; i < q.size(); ++i) msg << (i ? ", " : "") << q[i];
      msg << ") fails the Chebyshev check";
      const auto& w = out.augmented.back().report.witness;
      if (w) msg << " at " << format_tuple(*w);
      out.failure = msg.str();
      return out;
    }
  }
  out.passed = true;
  return out;
}

DominationReport verify_domination(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& xi1,
                                   const Design& xi2, double tolerance) {
  const Eigen::MatrixXd m1 = information_matrix(model, theta, xi1).entries;
  const Eigen::MatrixXd m2 = information_matrix(model, theta, xi2).entries;
  DominationReport out;
  out.tolerance = tolerance;
  out.difference_spectrum = jacobi_eigenvalues(m1 - m2);
  const double norm = std::max({1.0, jacobi_eigenvalues(m1).cwiseAbs().maxCoeff(),
                                jacobi_eigenvalues(m2).cwiseAbs().maxCoeff()});
  out.dominates = out.difference_spectrum.size() == 0 || out.difference_spectrum[0] >= -tolerance * norm;
  return out;
}

ReductionReport reduce_design(const RegressionModel& model, const Eigen::VectorXd& theta, const Design& xi,
                              Direction direction, const ReductionOptions& options) {
  if (!(xi.interval() == model.design_interval))
    throw DomainError("design interval differs from the model's design interval");
  const PsiSystem psi = psi_system(model, theta);
  ReductionReport rep{xi, xi, direction, Branch::Identity, design_index(xi), psi.system.size(),
                      moment_point(psi.system, xi), {}, 0.0, {}, {}, 0.0, true};
  rep.preconditions = check_preconditions(psi, direction, options);
  if (!rep.preconditions.passed) throw PreconditionError(rep.preconditions.failure);

  const std::size_t k = rep.k;
  if (static_cast<std::size_t>(rep.input_index.twice()) >= k) {
    rep.branch = k % 2 == 1 ? Branch::OddCase : Branch::EvenCase;
    const Oriented base = orient(psi.system, options.check);
    const MomentPoint c0 = moment_point(base.system, xi);
    PrincipalOptions popt = options.principal;
    if (!popt.probe) {
      const RealFunction kth = psi_k_Q(psi, q_directions(psi.p1).front());
      popt.probe = Probe{kth, "psi_k^Q"};
    }
    popt.extra_nodes.insert(popt.extra_nodes.end(), xi.points().begin(), xi.points().end());
    const PrincipalResult pr = principal_representation(base.system, c0, side_of(direction), popt);
    rep.output = pr.design;
    rep.residual_norm = pr.residual_norm;
    rep.refined = pr.refined;
  }
  rep.moments_out = moment_point(psi.system, rep.output);
  for (const auto& q : q_directions(psi.p1)) {
    const RealFunction kth = psi_k_Q(psi, q);
    rep.q_checks.push_back(QCheck{q, integrate(kth, rep.output) - integrate(kth, rep.input)});
  }
  const auto dom = verify_domination(model, theta, rep.output, rep.input, options.loewner_tolerance);
  rep.loewner_min_eigenvalue = dom.difference_spectrum.size() ? dom.difference_spectrum[0] : 0.0;
  return rep;
}

double criterion_value(Criterion criterion, const Eigen::MatrixXd& information) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Eigen::LLT<Eigen::MatrixXd> llt(information);
  if (llt.info() != Eigen::Success) return kNegInf;
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  if (diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) return kNegInf;
  if (criterion == Criterion::D) return 2.0 * diag.array().log().sum();
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(information.rows(), information.cols()));
  return -inv.trace();
}

namespace {

double radical_inverse(std::size_t n, unsigned base) {
  const double inv = 1.0 / base;
  double r = 0.0;
  double f = inv;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

// Parameter layout: interior point logits, then n - 1 weight logits (the
// first weight logit is pinned to zero).
class DesignMap {
 public:
  DesignMap(Interval interval, RepresentationStructure structure) : iv_(interval), s_(structure) {}

  std::size_t dimension() const { return s_.interior_points() + s_.num_points - 1; }

  Design operator()(const Eigen::VectorXd& z) const {
    const std::size_t m = s_.interior_points();
    std::vector<double> pts;
    if (s_.includes_a) pts.push_back(iv_.lower());
    for (std::size_t i = 0; i < m; ++i) {
      const double t = z[static_cast<Eigen::Index>(i)];
      pts.push_back(iv_.lower() + iv_.length() / (1.0 + std::exp(-t)));
    }
    if (s_.includes_b) pts.push_back(iv_.upper());
    std::vector<double> logits{0.0};
    for (std::size_t i = m; i < dimension(); ++i) logits.push_back(z[static_cast<Eigen::Index>(i)]);
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> w;
    double sum = 0.0;
    for (double l : logits) {
      w.push_back(std::exp(l - top));
      sum += w.back();
    }
    for (auto& wi : w) wi /= sum;
    // Interior points keep their slot; sort the pairs by location.
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    std::vector<double> sp;
    std::vector<double> sw;
    for (auto i : order) {
      sp.push_back(pts[i]);
      sw.push_back(w[i]);
    }
    return Design::make(iv_, sp, sw, Design::Options{1e-10, 1e-9});
  }

 private:
  Interval iv_;
  RepresentationStructure s_;
};

}  // namespace

OptimizeResult optimize_in_class(const RegressionModel& model, const Eigen::VectorXd& theta, Criterion criterion,
                                 Direction direction, const OptimizeOptions& options) {
  const PsiSystem psi = psi_system(model, theta);
  const PreconditionReport pre = check_preconditions(psi, direction, options.reduction);
  if (!pre.passed) throw PreconditionError(pre.failure);
  const RepresentationStructure structure = principal_structure(psi.system.size(), side_of(direction));
  const DesignMap map(model.design_interval, structure);
  const std::size_t dim = map.dimension();
  if (dim > std::size(kPrimes)) throw ConfigurationError("too many free design parameters for the start sequence");

  auto objective = [&](const Eigen::VectorXd& z) {
    const Design d = map(z);
    return -criterion_value(criterion, information_matrix(model, theta, d).entries);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd shift(static_cast<Eigen::Index>(dim));
  for (auto& s : shift) s = unit(rng);

  std::optional<Design> best_design;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z;
  auto consider = [&](const Eigen::VectorXd& z, double value) {
    if (!std::isfinite(value)) return;
    const Design d = map(z);
    const double tie = 1e-12 * std::max(1.0, std::abs(best));
    if (!best_design || value < best - tie || (value <= best + tie && lexicographically_less(d, *best_design))) {
      best = value;
      best_design = d;
      best_z = z;
    }
  };

  NelderMeadOptions nm;
  nm.max_iterations = options.iterations;
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    // Cranley-Patterson rotated Halton point over the box [-3, 3]^dim.
    Eigen::VectorXd z0(static_cast<Eigen::Index>(dim));
    for (std::size_t d = 0; d < dim; ++d) {
      const double u = std::fmod(radical_inverse(r + 1, kPrimes[d]) + shift[static_cast<Eigen::Index>(d)], 1.0);
      z0[static_cast<Eigen::Index>(d)] = -3.0 + 6.0 * u;
    }
    if (dim == 0) {
      consider(z0, objective(z0));
      break;
    }
    const NelderMeadResult res = nelder_mead(objective, z0, nm);
    consider(res.x, res.value);
  }
  if (!best_design) throw DegeneracyError("information matrix is singular for every design explored");
  if (dim > 0) {
    nm.initial_step = 0.1;
    const NelderMeadResult polish = nelder_mead(objective, best_z, nm);
    if (polish.value < best) {
      best = polish.value;
      best_design = map(polish.x);
    }
  }
  return OptimizeResult{*best_design, -best, structure};
}

}  // namespace tcheb
