#include <cmath>
#include <random>

#include "doctest.h"
#include "tcheb/errors.hpp"
#include "tcheb/regression_models.hpp"
#include "tcheb/symmetric_eigen.hpp"

using namespace tcheb;

namespace {

const Interval kMm(0.0, 10.0);
const Interval kExp(0.0, 3.0);

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Design random_design(std::mt19937_64& rng, const Interval& iv, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  std::vector<double> w(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = iv.lower() + iv.length() * u(rng);
    w[i] = 0.05 + u(rng);
    s += w[i];
  }
  for (auto& wi : w) wi /= s;
  return Design::make(iv, x, w);
}

}  // namespace

TEST_CASE("information matrix of a one point design") {
  const auto mm = michaelis_menten(kMm);
  const auto m = information_matrix(mm, vec({1, 1}), Design::dirac(kMm, 1.0)).entries;
  CHECK(m(0, 0) == doctest::Approx(0.25));
  CHECK(m(0, 1) == doctest::Approx(-0.125));
  CHECK(m(1, 0) == doctest::Approx(-0.125));
  CHECK(m(1, 1) == doctest::Approx(0.0625));
  const auto ev = jacobi_eigenvalues(m);
  CHECK(std::abs(ev[0]) < 1e-14);
}

TEST_CASE("c matrix undoes the sign of the transform") {
  const auto mm = michaelis_menten(kMm);
  const Eigen::MatrixXd c = c_matrix(mm, vec({1, 1}), Design::dirac(kMm, 1.0));
  CHECK(c(0, 0) == doctest::Approx(0.25));
  CHECK(c(0, 1) == doctest::Approx(0.125));
  CHECK(c(1, 1) == doctest::Approx(0.0625));

  const auto poly = polynomial(2, kExp);
  const Design d = Design::uniform(kExp, {0.0, 1.0, 3.0});
  const Eigen::VectorXd t = vec({1, 2, 3});
  CHECK((c_matrix(poly, t, d) - information_matrix(poly, t, d).entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("information matrix is linear in the design") {
  const auto e3 = exponential3(kExp);
  const Eigen::VectorXd t = vec({1, 1, -1});
  const Design a = Design::uniform(kExp, {0.5, 1.5});
  const Design b = Design::uniform(kExp, {1.0, 2.0, 3.0});
  const Eigen::MatrixXd mix = information_matrix(e3, t, Design::mixture(a, b, 0.3)).entries;
  const Eigen::MatrixXd lin =
      0.3 * information_matrix(e3, t, a).entries + 0.7 * information_matrix(e3, t, b).entries;
  CHECK((mix - lin).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("factorization and semidefiniteness on random designs") {
  std::mt19937_64 rng(11);
  const std::vector<std::pair<RegressionModel, Eigen::VectorXd>> cases{
      {michaelis_menten(kMm), vec({1, 1})},
      {exponential(kExp), vec({1, -1})},
      {exponential3(kExp), vec({1, 1, -1})},
      {polynomial(3, kExp), vec({1, 0.5, -2, 1})},
  };
  for (const auto& [model, theta] : cases) {
    for (int trial = 0; trial < 20; ++trial) {
      const Design d = random_design(rng, model.design_interval, 2 + trial % 6);
      const Eigen::MatrixXd m = information_matrix(model, theta, d).entries;
      const Eigen::MatrixXd p = model.transform(theta);
      const Eigen::MatrixXd back = p * c_matrix(model, theta, d) * p.transpose();
      CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-10 * m.cwiseAbs().maxCoeff());
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(jacobi_eigenvalues(m)[0] >= -1e-10 * m.trace());
    }
  }
}

TEST_CASE("gradients match central differences of eta") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto check_model = [&](const RegressionModel& model, auto draw_theta) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd theta = draw_theta();
      const double x = model.design_interval.lower() + model.design_interval.length() * u(rng);
      const Eigen::VectorXd g = model.gradient(x, theta);
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta[i]));
        Eigen::VectorXd tp = theta;
        Eigen::VectorXd tm = theta;
        tp[i] += h;
        tm[i] -= h;
        const double fd = (model.eta(x, tp) - model.eta(x, tm)) / (2 * h);
        CHECK(std::abs(fd - g[i]) <= 1e-6 * std::max(1.0, std::abs(g[i])));
      }
      const Eigen::VectorXd gdx = model.gradient_dx(x, theta);
      const double hx = 1e-6 * model.design_interval.length();
      const Eigen::VectorXd fdx = (model.gradient(x + hx, theta) - model.gradient(x - hx, theta)) / (2 * hx);
      CHECK((fdx - gdx).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, gdx.cwiseAbs().maxCoeff()));
    }
  };
  check_model(michaelis_menten(kMm), [&] { return vec({0.5 + 2 * u(rng), 0.2 + 3 * u(rng)}); });
  check_model(exponential(kExp), [&] { return vec({0.5 + 2 * u(rng), -2 + 1.5 * u(rng)}); });
  check_model(exponential3(kExp), [&] { return vec({u(rng), 0.5 + u(rng), -2 + 1.5 * u(rng)}); });
  check_model(polynomial(3, kExp), [&] { return vec({u(rng), u(rng), u(rng), u(rng)}); });
}

TEST_CASE("psi system of michaelis menten") {
  const auto psi = psi_system(michaelis_menten(kMm), vec({1, 1}));
  REQUIRE(psi.system.size() == 3);
  for (double x : {0.0, 0.5, 1.0, 4.0, 10.0}) {
    const Eigen::VectorXd v = psi.system.evaluate(x);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(x * x / std::pow(1 + x, 2)).epsilon(1e-13));
    CHECK(v[2] == doctest::Approx(x * x / std::pow(1 + x, 3)).epsilon(1e-13));
    CHECK(psi.c22(x)(0, 0) == doctest::Approx(x * x / std::pow(1 + x, 4)).epsilon(1e-13));
  }
  CHECK(psi.element_index.size() == 2);
  CHECK(psi.element_index[0].psi == 1u);
  CHECK(psi.element_index[1].psi == 2u);
  CHECK(psi.labels[1] == "x^2/(t2+x)^2");
}

TEST_CASE("psi system of the exponential models") {
  const auto e2 = psi_system(exponential(kExp), vec({1, -1}));
  REQUIRE(e2.system.size() == 3);
  const auto e3 = psi_system(exponential3(kExp), vec({1, 1, -1}));
  REQUIRE(e3.system.size() == 5);
  for (double x : {0.0, 0.7, 3.0}) {
    const double e = std::exp(-x);
    const Eigen::VectorXd v2 = e2.system.evaluate(x);
    CHECK(v2[1] == doctest::Approx(e * e).epsilon(1e-13));
    CHECK(v2[2] == doctest::Approx(x * e * e).epsilon(1e-13));
    CHECK(e2.c22(x)(0, 0) == doctest::Approx(x * x * e * e).epsilon(1e-13));

    const Eigen::VectorXd v3 = e3.system.evaluate(x);
    CHECK(v3[1] == doctest::Approx(e).epsilon(1e-13));
    CHECK(v3[2] == doctest::Approx(e * e).epsilon(1e-13));
    CHECK(v3[3] == doctest::Approx(x * e).epsilon(1e-13));
    CHECK(v3[4] == doctest::Approx(x * e * e).epsilon(1e-13));
    CHECK(e3.c22(x)(0, 0) == doctest::Approx(x * x * e * e).epsilon(1e-13));
  }
  // (0,0) of the three-parameter model is the constant 1.
  CHECK_FALSE(e3.element_index[0].psi.has_value());
  CHECK(e3.element_index[0].constant == doctest::Approx(1.0));
  CHECK(e3.element_index.size() == 5);
}

TEST_CASE("analytic psi derivatives agree with differences") {
  const auto psi = psi_system(exponential3(kExp), vec({1, 1, -1}));
  REQUIRE(psi.system.has_derivatives());
  for (double x : {0.3, 1.1, 2.9}) {
    const double h = 1e-6;
    const Eigen::VectorXd fd = (psi.system.evaluate(x + h) - psi.system.evaluate(x - h)) / (2 * h);
    CHECK((fd - psi.system.evaluate_derivative(x)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("psi_k_Q") {
  const auto psi = psi_system(michaelis_menten(kMm), vec({1, 1}));
  const auto one = psi_k_Q(psi, vec({1}));
  const auto three = psi_k_Q(psi, vec({3}));
  CHECK(one(1.0) == doctest::Approx(1.0 / 16));
  for (double x : {0.2, 2.0, 7.0}) {
    CHECK(one(x) == doctest::Approx(psi.c22(x)(0, 0)));
    CHECK(three(x) == doctest::Approx(9 * psi.c22(x)(0, 0)));
  }
  CHECK_THROWS_AS(psi_k_Q(psi, vec({0})), DomainError);
  CHECK_THROWS_AS(psi_k_Q(psi, vec({1, 1})), DomainError);
}

TEST_CASE("larger blocks") {
  const auto psi = psi_system(exponential3(kExp, 2), vec({1, 1, -1}));
  CHECK(psi.p1 == 2);
  // Only column 0 feeds the system: 1 (constant), e, x e.
  CHECK(psi.system.size() == 3);
  CHECK(psi.c22(1.0).rows() == 2);
  const auto qs = q_directions(2);
  CHECK(qs.size() == 64);
  for (const auto& q : qs) CHECK(q.norm() == doctest::Approx(1.0));
  CHECK(q_directions(1).size() == 1);
}

TEST_CASE("model errors") {
  CHECK_THROWS_AS(information_matrix(michaelis_menten(kMm), vec({1}), Design::dirac(kMm, 1.0)), DomainError);
  CHECK_THROWS_AS(psi_system(michaelis_menten(kMm), vec({0, 1})), DomainError);
  CHECK_THROWS_AS(psi_system(exponential(kExp), vec({1, 0})), DomainError);
  CHECK_THROWS_AS(michaelis_menten(kMm, 3), ConfigurationError);
  ModelSpec spec;
  spec.model = "logistic";
  CHECK_THROWS_AS(make_catalog_model(spec), ConfigurationError);
  try {
    make_catalog_model(spec);
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("michaelis_menten") != std::string::npos);
  }
  auto broken = polynomial(1, kExp);
  broken.transform = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(2, 2); };
  CHECK_THROWS_AS(c_matrix(broken, vec({1, 1}), Design::dirac(kExp, 1.0)), ConfigurationError);

  // An entry whose declared label disagrees with its values.
  auto mislabeled = polynomial(2, kExp);
  mislabeled.entry_label = [](std::size_t, std::size_t) { return std::string("x"); };
  CHECK_THROWS_AS(psi_system(mislabeled, vec({1, 1, 1})), ConfigurationError);
}
