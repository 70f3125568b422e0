#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "elegy/error.hpp"
#include "elegy/rng.hpp"
#include "elegy/temporal.hpp"

using namespace elegy;

namespace {

struct Fixture {
  Eigen::MatrixXd x;
  std::vector<std::string> works;
  std::vector<std::size_t> targets;
};

// Early poems near -1, late near +1 on the first axis; letters drift from early to late.
Fixture drifting() {
  Rng rng(3);
  Fixture f;
  const int ref = 15, letters = 21, dim = 6;
  f.x.resize(2 * ref + letters, dim);
  Eigen::Index r = 0;
  for (int i = 0; i < 2 * ref; ++i, ++r) {
    for (int j = 0; j < dim; ++j) f.x(r, j) = 0.5 * rng.normal();
    f.x(r, 0) += i < ref ? -1.0 : 1.0;
    f.works.push_back(i < ref ? "Amores" : "Ex Ponto");
  }
  for (int l = 0; l < letters; ++l, ++r) {
    for (int j = 0; j < dim; ++j) f.x(r, j) = 0.5 * rng.normal();
    f.x(r, 0) += l < 15 ? -0.4 : 0.6;
    f.works.push_back("Heroides");
    f.targets.push_back(static_cast<std::size_t>(r));
  }
  return f;
}

// Weighted least squares by QR on the explicit design matrix.
double wls_oracle(const std::vector<double>& xs, const std::vector<double>& ys, double x0, double span) {
  const std::size_t n = xs.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::abs(xs[i] - x0);
  std::vector<double> s = d;
  std::sort(s.begin(), s.end());
  const double h = s[static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))) - 1];
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = d[i] / h;
    const double w = u < 1 ? std::pow(1 - u * u * u, 3) : 0.0;
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = std::sqrt(w);
    a(r, 1) = std::sqrt(w) * (xs[i] - x0);
    b(r) = std::sqrt(w) * ys[i];
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

double mean_of(const std::vector<TemporalScore>& s, std::size_t from, std::size_t to, bool svm) {
  double m = 0;
  for (std::size_t i = from; i < to; ++i) m += svm ? s[i].svm_score : s[i].centroid_score;
  return m / static_cast<double>(to - from);
}

}  // namespace

TEST_CASE("centroid score definitions") {
  Eigen::MatrixXd x(5, 2);
  x << -1, 0, -1, 2, 3, 0, 3, 2, 0, 0;
  const std::vector<std::string> works{"Amores", "Amores", "Ex Ponto", "Ex Ponto", "Heroides"};
  // early centroid (-1,1), late centroid (3,1)
  Eigen::MatrixXd probe = x;
  probe.row(4) << -1, 1;
  auto s = temporal_scores(probe, works, {4});
  CHECK(s[0].centroid_score == doctest::Approx(-4.0));
  CHECK(s[0].svm_score < 0.0);
  probe.row(4) << 1, 7;
  s = temporal_scores(probe, works, {4});
  CHECK(s[0].centroid_score == doctest::Approx(0.0).scale(1.0));
  probe.row(4) << 3, 1;
  s = temporal_scores(probe, works, {4});
  CHECK(s[0].centroid_score == doctest::Approx(4.0));
  CHECK(s[0].svm_score > 0.0);
}

TEST_CASE("centroid score is antisymmetric in the references") {
  const auto f = drifting();
  const auto a = temporal_scores(f.x, f.works, f.targets);
  const auto b = temporal_scores(f.x, f.works, f.targets, {"Ex Ponto", "Amores"});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].centroid_score == doctest::Approx(-b[i].centroid_score));
    CHECK(a[i].svm_score * b[i].svm_score <= 0.0);
  }
}

TEST_CASE("scores are invariant under feature permutation") {
  const auto f = drifting();
  Eigen::MatrixXd p(f.x.rows(), f.x.cols());
  const std::vector<Eigen::Index> perm{3, 0, 5, 1, 4, 2};
  for (Eigen::Index j = 0; j < f.x.cols(); ++j) p.col(j) = f.x.col(perm[static_cast<std::size_t>(j)]);
  const auto a = temporal_scores(f.x, f.works, f.targets);
  const auto b = temporal_scores(p, f.works, f.targets);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].centroid_score == doctest::Approx(b[i].centroid_score));
    CHECK(a[i].svm_score == doctest::Approx(b[i].svm_score).epsilon(1e-6));
  }
}

TEST_CASE("late-drifting letters score on the late side") {
  const auto f = drifting();
  const auto s = temporal_scores(f.x, f.works, f.targets);
  CHECK(mean_of(s, 15, 21, true) > mean_of(s, 0, 15, true));
  CHECK(mean_of(s, 15, 21, false) > mean_of(s, 0, 15, false));
  for (const auto& t : s) {
    CHECK(std::isfinite(t.svm_score));
    CHECK(std::isfinite(t.centroid_score));
  }
}

TEST_CASE("missing reference work is a data error") {
  auto f = drifting();
  std::replace(f.works.begin(), f.works.end(), std::string("Ex Ponto"), std::string("Tristia"));
  CHECK_THROWS_AS(temporal_scores(f.x, f.works, f.targets), DataError);
}

TEST_CASE("loess matches weighted least squares") {
  Rng rng(4);
  std::vector<double> xs, ys;
  for (int i = 1; i <= 21; ++i) {
    xs.push_back(i);
    ys.push_back(std::sin(i / 3.0) + 0.2 * rng.normal());
  }
  const std::vector<double> at{1.0, 4.5, 10.0, 15.2, 21.0};
  const auto fit = loess(xs, ys, at, 0.75);
  for (std::size_t i = 0; i < at.size(); ++i) {
    CAPTURE(at[i]);
    CHECK(fit[i] == doctest::Approx(wls_oracle(xs, ys, at[i], 0.75)).epsilon(1e-10));
  }
}

TEST_CASE("loess reproduces straight lines") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(i * 0.7);
    ys.push_back(2.0 - 0.3 * i * 0.7);
  }
  const auto fit = loess(xs, ys, xs, 0.5);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(fit[i] == doctest::Approx(ys[i]));
  CHECK_THROWS_AS(loess(xs, ys, xs, 0.0), ParameterError);
}

TEST_CASE("bootstrap band brackets the fit") {
  Rng rng(5);
  std::vector<double> xs, ys;
  for (int i = 1; i <= 21; ++i) {
    xs.push_back(i);
    ys.push_back(0.1 * i + rng.normal());
  }
  std::vector<double> grid;
  for (double g = 1; g <= 21; g += 0.5) grid.push_back(g);
  const auto band = loess_band(xs, ys, grid, 0.75, 100, 0.9, 7);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CHECK(band.lower[g] <= band.upper[g]);
    CHECK(std::isfinite(band.lower[g]));
  }
  const auto again = loess_band(xs, ys, grid, 0.75, 100, 0.9, 7);
  CHECK(again.lower == band.lower);
  CHECK(again.upper == band.upper);
}
