#include <cmath>
#include <random>

#include "doctest.h"
#include "tcheb/errors.hpp"
#include "tcheb/moment_space.hpp"

using namespace tcheb;

TEST_CASE("design construction normalizes and validates") {
  const Interval iv(0.0, 10.0);
  const auto d = Design::make(iv, {5.0, 1.0, 5.0 + 1e-12, 0.0 + 1e-13, 3.0}, {0.25, 0.25, 0.25, 0.25, 0.0});
  REQUIRE(d.size() == 3);
  CHECK(d.points()[0] == 0.0);
  CHECK(d.points()[1] == 1.0);
  CHECK(d.points()[2] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(d.weights()[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(Design::make(iv, {1.0, 2.0}, {0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(Design::make(iv, {11.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Design::make(iv, {1.0, 2.0}, {1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(Design::make(iv, {1.0}, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Design::make(iv, {}, {}), DomainError);
}

TEST_CASE("moment_point") {
  const auto poly = polynomial_system(Interval(0.0, 1.0), 3);
  auto c = moment_point(poly, Design::make(Interval(0.0, 1.0), {0.0, 1.0}, {0.5, 0.5}));
  CHECK(c.coordinates[0] == 1.0);
  CHECK(c.coordinates[1] == 0.5);
  CHECK(c.coordinates[2] == 0.5);
  c = moment_point(poly, Design::dirac(Interval(0.0, 1.0), 0.5));
  CHECK(c.coordinates[1] == 0.5);
  CHECK(c.coordinates[2] == 0.25);
  CHECK(c.system_id == poly.id());

  const ChebyshevSystem mm(Interval(0.0, 10.0), {[](double) { return 1.0; },
                                                 [](double x) { return x * x / ((1 + x) * (1 + x)); },
                                                 [](double x) { return x * x / std::pow(1 + x, 3); }});
  c = moment_point(mm, Design::dirac(Interval(0.0, 10.0), 1.0));
  CHECK(c.coordinates[1] == doctest::Approx(0.25));
  CHECK(c.coordinates[2] == doctest::Approx(0.125));

  CHECK_THROWS_AS(moment_point(poly, Design::dirac(Interval(0.0, 2.0), 0.5)), DomainError);
}

TEST_CASE("design_index counts endpoints as one half") {
  CHECK(design_index(Design::make(Interval(0.0, 1.0), {0.0, 1.0}, {0.5, 0.5})).value() == 1.0);
  CHECK(design_index(Design::dirac(Interval(0.0, 10.0), 2.0)).value() == 1.0);
  CHECK(design_index(Design::uniform(Interval(0.0, 10.0), {0.0, 5.0, 10.0})).value() == 2.0);
  CHECK(design_index(Design::dirac(Interval(0.0, 10.0), 10.0)).twice() == 1);
  // Points within the snapping distance count as endpoints.
  CHECK(design_index(Design::dirac(Interval(0.0, 10.0), 1e-11)).twice() == 1);
  CHECK(HalfIndex(3) < HalfIndex::from_k_over_two(4));
}

TEST_CASE("property: moment_point is linear in the design") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Interval iv(-1.0, 2.0);
  const auto poly = polynomial_system(iv, 5);
  for (int t = 0; t < 50; ++t) {
    auto random_design = [&] {
      std::vector<double> x(4);
      std::vector<double> w(4);
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        x[i] = -1.0 + 3.0 * u(rng);
        w[i] = u(rng) + 0.01;
        s += w[i];
      }
      for (auto& wi : w) wi /= s;
      return Design::make(iv, x, w);
    };
    const auto d1 = random_design();
    const auto d2 = random_design();
    const double alpha = u(rng);
    const Eigen::VectorXd mix = moment_point(poly, Design::mixture(d1, d2, alpha)).coordinates;
    const Eigen::VectorXd lin = alpha * moment_point(poly, d1).coordinates + (1 - alpha) * moment_point(poly, d2).coordinates;
    CHECK((mix - lin).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mix[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("property: small-support designs have distinct moment points") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Interval iv(0.0, 1.0);
  const auto poly = polynomial_system(iv, 6);
  for (int t = 0; t < 100; ++t) {
    // Supports jointly of size <= 6.
    std::vector<double> pts(6);
    for (auto& p : pts) p = u(rng);
    const double w1 = 0.2 + 0.6 * u(rng);
    const double w2 = 0.2 + 0.6 * u(rng);
    const auto d1 = Design::make(iv, {pts[0], pts[1], pts[2]}, {w1 / 2, w1 / 2, 1 - w1});
    const auto d2 = Design::make(iv, {pts[3], pts[4], pts[5]}, {w2 / 2, w2 / 2, 1 - w2});
    const auto diff = moment_point(poly, d1).coordinates - moment_point(poly, d2).coordinates;
    CHECK(diff.cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("classify_point") {
  const Interval unit(0.0, 1.0);
  const auto lin = polynomial_system(unit, 2);
  const Probe sq{monomial(2), "x^2"};
  ClassifyOptions opt;
  opt.grid_size = 1001;

  const auto edge = classify_point(lin, MomentPoint::for_system(lin, Eigen::Vector2d(1.0, 0.0)), sq, opt);
  CHECK(edge.classification == Classification::Boundary);
  CHECK(edge.gamma_lower == doctest::Approx(0.0));
  CHECK(edge.gamma_upper == doctest::Approx(0.0));
  CHECK(edge.probe == "x^2");

  const auto mid = classify_point(lin, MomentPoint::for_system(lin, Eigen::Vector2d(1.0, 0.5)), sq, opt);
  CHECK(mid.classification == Classification::Interior);
  CHECK(mid.gamma_lower == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mid.gamma_upper == doctest::Approx(0.5).epsilon(1e-12));

  const auto cubic = polynomial_system(Interval(-1.0, 1.0), 4);
  ClassifyOptions fine;
  fine.grid_size = 2001;
  const auto uni = classify_point(cubic, MomentPoint::for_system(cubic, Eigen::Vector4d(1.0, 0.0, 1.0 / 3, 0.0)),
                                  Probe{monomial(4), "x^4"}, fine);
  CHECK(uni.classification == Classification::Interior);
  CHECK(uni.gamma_lower == doctest::Approx(1.0 / 9).epsilon(1e-5));
  CHECK(uni.gamma_upper == doctest::Approx(1.0 / 3).epsilon(1e-9));

  CHECK_THROWS_AS(classify_point(lin, MomentPoint::for_system(lin, Eigen::Vector2d(1.0, 1.5)), sq, opt),
                  InfeasibleError);
}

TEST_CASE("property: designs of index below k/2 are classified as boundary") {
  std::mt19937_64 rng(8);
  const Interval iv(0.0, 1.0);
  const std::size_t grid = 401;
  std::uniform_int_distribution<int> node(0, grid - 1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto poly = polynomial_system(iv, k);
    const Probe probe{monomial(k), "x^k"};
    ClassifyOptions opt;
    opt.grid_size = grid;
    opt.tolerance = 1e-8;
    for (int t = 0; t < 10; ++t) {
      // Index < k/2: at most floor((k-1)/2) interior points, or fewer
      // points with endpoints.
      const std::size_t npts = (k - 1) / 2 == 0 ? 1 : (k - 1) / 2;
      std::vector<double> x;
      std::vector<double> w;
      for (std::size_t i = 0; i < npts; ++i) {
        x.push_back(node(rng) / static_cast<double>(grid - 1));
        w.push_back(u(rng));
      }
      if (k == 2) x = {0.0};
      double s = 0;
      for (double wi : w) s += wi;
      for (auto& wi : w) wi /= s;
      const auto d = Design::make(iv, x, w);
      if (2 * design_index(d).value() >= static_cast<double>(k)) continue;
      const auto r = classify_point(poly, moment_point(poly, d), probe, opt);
      CAPTURE(k);
      CHECK(r.classification == Classification::Boundary);
    }
  }
}
