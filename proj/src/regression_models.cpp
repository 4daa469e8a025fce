#include "tcheb/regression_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcheb/errors.hpp"

namespace tcheb {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

void require_size(const Vec& theta, std::size_t p, const std::string& name) {
  if (static_cast<std::size_t>(theta.size()) != p) {
    std::ostringstream msg;
    msg << name << " expects " << p << " parameters, got " << theta.size();
    throw DomainError(msg.str());
  }
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (!std::isfinite(theta[i])) throw DomainError(name + ": non-finite parameter");
}

void require_p1(std::size_t p1, std::size_t p) {
  if (p1 < 1 || p1 > p) throw ConfigurationError("block size p1 must satisfy 1 <= p1 <= p");
}

std::string power_label(const std::string& base, std::size_t power) {
  if (power == 0) return "1";
  if (power == 1) return base;
  return base + "^" + std::to_string(power);
}

}  // namespace

RegressionModel michaelis_menten(Interval interval, std::size_t p1) {
  require_p1(p1, 2);
  RegressionModel m{"michaelis_menten", 2, {}, {}, {}, {}, p1, interval, {}, {}};
  m.eta = [](double x, const Vec& t) { return t[0] * x / (t[1] + x); };
  m.gradient = [](double x, const Vec& t) {
    const double d = t[1] + x;
    return Vec{{x / d, -t[0] * x / (d * d)}};
  };
  m.gradient_dx = [](double x, const Vec& t) {
    const double d = t[1] + x;
    return Vec{{t[1] / (d * d), -t[0] * (t[1] - x) / (d * d * d)}};
  };
  m.transform = [](const Vec& t) {
    Mat p = Mat::Identity(2, 2);
    p(1, 1) = -t[0];
    return p;
  };
  // C(x)_{ij} = x^2 / (theta2 + x)^{i+j+2}.
  m.entry_label = [](std::size_t i, std::size_t j) { return "x^2/(t2+x)^" + std::to_string(i + j + 2); };
  const double a = interval.lower();
  m.validate_theta = [a](const Vec& t) {
    require_size(t, 2, "michaelis_menten");
    if (t[0] == 0.0) throw DomainError("michaelis_menten: theta1 must be nonzero");
    if (!(t[1] + a > 0.0)) throw DomainError("michaelis_menten: theta2 + A must be positive");
  };
  return m;
}

RegressionModel exponential(Interval interval, std::size_t p1) {
  require_p1(p1, 2);
  RegressionModel m{"exponential", 2, {}, {}, {}, {}, p1, interval, {}, {}};
  m.eta = [](double x, const Vec& t) { return t[0] * std::exp(t[1] * x); };
  m.gradient = [](double x, const Vec& t) {
    const double e = std::exp(t[1] * x);
    return Vec{{e, t[0] * x * e}};
  };
  m.gradient_dx = [](double x, const Vec& t) {
    const double e = std::exp(t[1] * x);
    return Vec{{t[1] * e, t[0] * (1.0 + t[1] * x) * e}};
  };
  m.transform = [](const Vec& t) {
    Mat p = Mat::Identity(2, 2);
    p(1, 1) = t[0];
    return p;
  };
  // C(x)_{ij} = x^{i+j} exp(2 theta2 x).
  m.entry_label = [](std::size_t i, std::size_t j) {
    const auto xp = power_label("x", i + j);
    return (xp == "1" ? std::string() : xp + "*") + "exp(2*t2*x)";
  };
  m.validate_theta = [](const Vec& t) {
    require_size(t, 2, "exponential");
    if (t[0] == 0.0) throw DomainError("exponential: theta1 must be nonzero");
    if (t[1] == 0.0) throw DomainError("exponential: theta2 must be nonzero");
  };
  return m;
}

RegressionModel exponential3(Interval interval, std::size_t p1) {
  require_p1(p1, 3);
  RegressionModel m{"exponential3", 3, {}, {}, {}, {}, p1, interval, {}, {}};
  m.eta = [](double x, const Vec& t) { return t[0] + t[1] * std::exp(t[2] * x); };
  m.gradient = [](double x, const Vec& t) {
    const double e = std::exp(t[2] * x);
    return Vec{{1.0, e, t[1] * x * e}};
  };
  m.gradient_dx = [](double x, const Vec& t) {
    const double e = std::exp(t[2] * x);
    return Vec{{0.0, t[2] * e, t[1] * (1.0 + t[2] * x) * e}};
  };
  m.transform = [](const Vec& t) {
    Mat p = Mat::Identity(3, 3);
    p(2, 2) = t[1];
    return p;
  };
  // f = (1, e^{t3 x}, x e^{t3 x}): entry (i, j) = x^{a_i+a_j} e^{(b_i+b_j) t3 x}.
  m.entry_label = [](std::size_t i, std::size_t j) {
    constexpr std::size_t xpow[] = {0, 0, 1};
    constexpr std::size_t epow[] = {0, 1, 1};
    const auto xp = power_label("x", xpow[i] + xpow[j]);
    const std::size_t e = epow[i] + epow[j];
    if (e == 0) return xp;
    const std::string ex = "exp(" + (e == 1 ? std::string() : std::to_string(e) + "*") + "t3*x)";
    return xp == "1" ? ex : xp + "*" + ex;
  };
  m.validate_theta = [](const Vec& t) {
    require_size(t, 3, "exponential3");
    if (t[1] == 0.0) throw DomainError("exponential3: theta2 must be nonzero");
    if (t[2] == 0.0) throw DomainError("exponential3: theta3 must be nonzero");
  };
  return m;
}

RegressionModel polynomial(std::size_t degree, Interval interval, std::size_t p1) {
  if (degree < 1) throw ConfigurationError("polynomial degree must be at least 1");
  const std::size_t p = degree + 1;
  require_p1(p1, p);
  RegressionModel m{"polynomial", p, {}, {}, {}, {}, p1, interval, {}, {}};
  m.eta = [p](double x, const Vec& t) {
    double r = 0.0;
    for (std::size_t i = p; i-- > 0;) r = r * x + t[static_cast<Eigen::Index>(i)];
    return r;
  };
  m.gradient = [p](double x, const Vec&) {
    Vec g(static_cast<Eigen::Index>(p));
    double v = 1.0;
    for (Eigen::Index i = 0; i < g.size(); ++i, v *= x) g[i] = v;
    return g;
  };
  m.gradient_dx = [p](double x, const Vec&) {
    Vec g = Vec::Zero(static_cast<Eigen::Index>(p));
    double v = 1.0;
    for (Eigen::Index i = 1; i < g.size(); ++i, v *= x) g[i] = static_cast<double>(i) * v;
    return g;
  };
  m.transform = [p](const Vec&) { return Mat::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)); };
  m.entry_label = [](std::size_t i, std::size_t j) { return power_label("x", i + j); };
  m.validate_theta = [p](const Vec& t) { require_size(t, p, "polynomial"); };
  return m;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"michaelis_menten", "exponential", "exponential3", "polynomial"};
  return names;
}

RegressionModel make_catalog_model(const ModelSpec& spec) {
  const Interval interval(spec.lower, spec.upper);
  if (spec.model == "michaelis_menten") return michaelis_menten(interval, spec.p1);
  if (spec.model == "exponential") return exponential(interval, spec.p1);
  if (spec.model == "exponential3") return exponential3(interval, spec.p1);
  if (spec.model == "polynomial") return polynomial(spec.degree, interval, spec.p1);
  std::ostringstream msg;
  msg << "unknown model '" << spec.model << "'; catalog:";
  for (const auto& n : catalog_names()) msg << ' ' << n;
  throw ConfigurationError(msg.str());
}

namespace {

void validate(const RegressionModel& model, const Vec& theta) {
  if (model.validate_theta) model.validate_theta(theta);
  else require_size(theta, model.p, model.name);
}

void require_interval(const RegressionModel& model, const Design& design) {
  if (!(design.interval() == model.design_interval))
    throw DomainError("design interval differs from the model's design interval");
}

Vec checked_gradient(const RegressionModel& model, double x, const Vec& theta) {
  Vec g = model.gradient(x, theta);
  if (static_cast<std::size_t>(g.size()) != model.p) throw ConfigurationError("gradient has the wrong length");
  if (!g.allFinite()) {
    std::ostringstream msg;
    msg << model.name << ": gradient not finite at x = " << x;
    throw EvaluationError(msg.str(), x);
  }
  return g;
}

// P^{-1} as a dense matrix after a conditioning check.
Mat inverse_transform(const RegressionModel& model, const Vec& theta) {
  const Mat p = model.transform(theta);
  if (static_cast<std::size_t>(p.rows()) != model.p || p.rows() != p.cols())
    throw ConfigurationError("transform P(theta) has the wrong shape");
  Eigen::JacobiSVD<Mat> svd(p);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 1e-14 * sv[0]) throw ConfigurationError("transform P(theta) is numerically singular");
  return p.inverse();
}

}  // namespace

InfoMatrix information_matrix(const RegressionModel& model, const Vec& theta, const Design& design) {
  validate(model, theta);
  require_interval(model, design);
  const auto p = static_cast<Eigen::Index>(model.p);
  Mat m = Mat::Zero(p, p);
  for (std::size_t j = 0; j < design.size(); ++j) {
    const Vec g = checked_gradient(model, design.points()[j], theta);
    m.noalias() += design.weights()[j] * g * g.transpose();
  }
  return InfoMatrix{0.5 * (m + m.transpose())};
}

Mat c_matrix(const RegressionModel& model, const Vec& theta, const Design& design) {
  const Mat pinv = inverse_transform(model, theta);
  const Mat m = information_matrix(model, theta, design).entries;
  const Mat c = pinv * m * pinv.transpose();
  return 0.5 * (c + c.transpose());
}

PsiSystem psi_system(const RegressionModel& model, const Vec& theta) {
  validate(model, theta);
  const Mat pinv = inverse_transform(model, theta);
  const std::size_t p = model.p;
  const std::size_t q = p - model.p1;
  const Interval iv = model.design_interval;

  auto f = [model, theta, pinv](double x) -> Vec { return pinv * checked_gradient(model, x, theta); };
  std::function<Vec(double)> fdx;
  if (model.gradient_dx) fdx = [model, theta, pinv](double x) -> Vec { return pinv * model.gradient_dx(x, theta); };

  // Chebyshev-spaced sample grid for deduplication.
  constexpr std::size_t kGrid = 256;
  std::vector<Vec> samples;
  samples.reserve(kGrid);
  for (std::size_t g = 0; g < kGrid; ++g) {
    const double x = 0.5 * (iv.lower() + iv.upper()) +
                     0.5 * iv.length() * std::cos(M_PI * (2.0 * static_cast<double>(g) + 1.0) / (2.0 * kGrid));
    samples.push_back(f(x));
  }
  auto entry_values = [&](std::size_t i, std::size_t j) {
    Vec v(static_cast<Eigen::Index>(kGrid));
    for (std::size_t g = 0; g < kGrid; ++g)
      v[static_cast<Eigen::Index>(g)] = samples[g][static_cast<Eigen::Index>(i)] * samples[g][static_cast<Eigen::Index>(j)];
    return v;
  };
  auto agree = [](const Vec& a, const Vec& b) {
    const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() <= 1e-10 * scale;
  };

  struct Group {
    std::size_t row;
    std::size_t col;
    Vec values;
    std::string label;
  };
  std::vector<Group> groups;
  std::vector<ElementRef> index;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q && j <= i; ++j) {
      const Vec v = entry_values(i, j);
      const std::string label = model.entry_label ? model.entry_label(i, j) : std::string();
      const bool constant = v.maxCoeff() - v.minCoeff() <= 1e-10 * std::max(1.0, v.cwiseAbs().maxCoeff());
      if (model.entry_label && (label == "1") != constant) {
        std::ostringstream msg;
        msg << model.name << ": entry (" << i << "," << j << ") declared " << (constant ? "non-constant" : "constant")
            << " but is " << (constant ? "constant" : "not constant") << " at this theta";
        throw ConfigurationError(msg.str());
      }
      if (constant) {
        index.push_back(ElementRef{i, j, std::nullopt, v[0]});
        continue;
      }
      std::optional<std::size_t> found;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const bool same_value = agree(groups[g].values, v);
        if (model.entry_label) {
          const bool same_label = groups[g].label == label;
          if (same_value != same_label) {
            std::ostringstream msg;
            msg << model.name << ": entries '" << groups[g].label << "' and '" << label << "' "
                << (same_value ? "coincide on the sample grid but are declared distinct"
                               : "are declared identical but differ");
            throw ConfigurationError(msg.str());
          }
        }
        if (same_value) {
          found = g;
          break;
        }
      }
      if (!found) {
        groups.push_back(Group{i, j, v, label.empty() ? "C(" + std::to_string(i) + "," + std::to_string(j) + ")" : label});
        found = groups.size() - 1;
      }
      index.push_back(ElementRef{i, j, *found + 1, 0.0});
    }
  }

  std::vector<RealFunction> basis{[](double) { return 1.0; }};
  std::vector<RealFunction> derivatives;
  if (fdx) derivatives.push_back([](double) { return 0.0; });
  std::vector<std::string> labels{"1"};
  for (const auto& g : groups) {
    const auto r = static_cast<Eigen::Index>(g.row);
    const auto c = static_cast<Eigen::Index>(g.col);
    basis.push_back([f, r, c](double x) {
      const Vec v = f(x);
      return v[r] * v[c];
    });
    if (fdx) {
      derivatives.push_back([f, fdx, r, c](double x) {
        const Vec v = f(x);
        const Vec d = fdx(x);
        return d[r] * v[c] + v[r] * d[c];
      });
    }
    labels.push_back(g.label);
  }

  const auto qi = static_cast<Eigen::Index>(q);
  const auto p1 = static_cast<Eigen::Index>(model.p1);
  auto c22 = [f, qi, p1](double x) -> Mat {
    const Vec v = f(x).segment(qi, p1);
    return v * v.transpose();
  };
  ChebyshevSystem system(iv, std::move(basis), std::move(derivatives), model.name);
  return PsiSystem{std::move(system), std::move(c22), std::move(index), std::move(labels), p, model.p1};
}

RealFunction psi_k_Q(const PsiSystem& psi, const Vec& q) {
  if (static_cast<std::size_t>(q.size()) != psi.p1) throw DomainError("Q must have p1 entries");
  if (q.cwiseAbs().maxCoeff() == 0.0) throw DomainError("Q must be nonzero");
  auto c22 = psi.c22;
  return [c22, q](double x) { return q.dot(c22(x) * q); };
}

std::vector<Vec> q_directions(std::size_t p1, std::size_t count) {
  if (p1 == 0) throw DomainError("p1 must be positive");
  if (p1 == 1) return {Vec::Ones(1)};
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (p1 > std::size(kPrimes)) throw DomainError("p1 too large for the Halton direction sample");
  auto radical_inverse = [](std::size_t n, unsigned base) {
    double inv = 1.0 / base;
    double r = 0.0;
    double f = inv;
    while (n > 0) {
      r += f * static_cast<double>(n % base);
      n /= base;
      f *= inv;
    }
    return r;
  };
  std::vector<Vec> out;
  for (std::size_t n = 1; out.size() < count; ++n) {
    Vec v(static_cast<Eigen::Index>(p1));
    for (std::size_t d = 0; d < p1; ++d) v[static_cast<Eigen::Index>(d)] = 2.0 * radical_inverse(n, kPrimes[d]) - 1.0;
    const double norm = v.norm();
    if (norm < 1e-3) continue;
    out.push_back(v / norm);
  }
  return out;
}

}  // namespace tcheb
