#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "elegy/error.hpp"
#include "elegy/outlier.hpp"
#include "elegy/rng.hpp"

using namespace elegy;

namespace {

Eigen::MatrixXd normal_draws(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  return x;
}

}  // namespace

TEST_CASE("incomplete gamma against the Boost oracle") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 21.5, 50.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 9.9, 10.0, 11.0, 21.5, 30.0, 80.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(gamma_p(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
      const double q = boost::math::gamma_q(a, x);
      CHECK(gamma_q(a, x) == doctest::Approx(q).epsilon(1e-10).scale(q));
    }
  }
  CHECK(gamma_p(3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(gamma_p(0.0, 1.0), ParameterError);
}

TEST_CASE("chi-square tails") {
  CHECK(chi2_cdf(0.0, 43) == 0.0);
  CHECK(chi2_sf(0.0, 43) == 1.0);
  CHECK(chi2_cdf(1.0, 43) == doctest::Approx(boost::math::gamma_p(21.5, 0.5)).epsilon(1e-12));
  CHECK(chi2_sf(200.0, 43) > 0.0);
  CHECK(chi2_sf(200.0, 43) == doctest::Approx(boost::math::gamma_q(21.5, 100.0)).epsilon(1e-9));
}

TEST_CASE("identity-covariance fit") {
  const auto x = normal_draws(10000, 5, 2);
  const auto m = fit_style_model(x);
  CHECK(m.lambda == 0.0);
  CHECK((m.covariance - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 0.05);
  CHECK(m.centroid.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("identical vectors fall back to lambda I") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(6, 3, 2.5);
  const auto m = fit_style_model(x);
  CHECK(m.lambda > 0.0);
  CHECK(m.covariance.isApprox(m.lambda * Eigen::MatrixXd::Identity(3, 3)));
  CHECK_THROWS_AS(fit_style_model(x.topRows(1)), DataError);
}

TEST_CASE("ill-conditioned covariance climbs the ladder") {
  auto x = normal_draws(50, 4, 3);
  x.col(3) = x.col(2) * 1.0000001;  // nearly collinear
  const auto m = fit_style_model(x);
  CHECK(m.lambda > 0.0);
  CHECK(m.condition <= 1e6);
}

TEST_CASE("distance basics") {
  const auto x = normal_draws(200, 4, 4);
  const auto m = fit_style_model(x);
  const auto at_centre = mahalanobis_test(m, m.centroid, 0.99);
  CHECK(at_centre.d2 == doctest::Approx(0.0).scale(1.0));
  CHECK(at_centre.p_value == 1.0);
  CHECK_FALSE(at_centre.rejected);

  StyleModel unit;
  unit.centroid = Eigen::VectorXd::Zero(43);
  unit.covariance = Eigen::MatrixXd::Identity(43, 43);
  unit.whitener = unit.covariance;
  unit.dof = 43;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(43);
  e(7) = 1.0;
  const auto r = mahalanobis_test(unit, e, 0.99, 3);
  CHECK(r.d2 == doctest::Approx(1.0));
  CHECK(r.p_value == doctest::Approx(1.0 - boost::math::gamma_p(21.5, 0.5)).epsilon(1e-12));
  REQUIRE(r.top.size() == 3);
  CHECK(r.top[0].feature == 7);
}

TEST_CASE("p-values fall as distance grows") {
  const auto x = normal_draws(300, 3, 5);
  const auto m = fit_style_model(x);
  double prev_d2 = -1.0;
  double prev_p = 2.0;
  for (double t = 0.0; t < 8.0; t += 0.5) {
    Eigen::VectorXd v = m.centroid;
    v(0) += t;
    v(1) -= 0.3 * t;
    const auto r = mahalanobis_test(m, v, 0.95);
    CHECK(r.d2 > prev_d2);
    CHECK(r.p_value <= prev_p);
    prev_d2 = r.d2;
    prev_p = r.p_value;
  }
}

TEST_CASE("d2 is affine invariant without regularization") {
  const auto x = normal_draws(400, 4, 6);
  Eigen::MatrixXd a(4, 4);
  a << 2, 0.3, 0, 1, 0, 1, 0.5, 0, 0.1, 0, 3, 0, 0, 0, 0.2, 1;
  Eigen::RowVectorXd b(4);
  b << 5, -2, 0, 11;
  const Eigen::MatrixXd y = (x * a.transpose()).rowwise() + b;
  StyleModelOptions plain;
  plain.regularize = false;
  const auto mx = fit_style_model(x, plain);
  const auto my = fit_style_model(y, plain);
  const auto probe = normal_draws(10, 4, 7);
  for (Eigen::Index i = 0; i < probe.rows(); ++i) {
    const Eigen::VectorXd px = probe.row(i).transpose();
    const Eigen::VectorXd py = a * px + b.transpose();
    CHECK(mahalanobis_test(mx, px, 0.99).d2 == doctest::Approx(mahalanobis_test(my, py, 0.99).d2).epsilon(1e-8));
  }
}

TEST_CASE("mean d2 of draws from a 43-dof model is near 43") {
  // fit on structured data, then draw from the fitted Gaussian
  auto base = normal_draws(400, 43, 8);
  base.col(1) += 0.5 * base.col(0);
  const auto m = fit_style_model(base);
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(m.covariance).matrixL();
  const auto z = normal_draws(10000, 43, 9);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Eigen::VectorXd v = m.centroid + l * z.row(i).transpose();
    sum += mahalanobis_test(m, v, 0.99).d2;
  }
  CHECK(std::abs(sum / 10000.0 - 43.0) / 43.0 < 0.05);
}
