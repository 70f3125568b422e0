#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace elegy {

/// Regularized lower incomplete gamma P(a, x): power series for x < a + 1,
/// Lentz continued fraction for Q = 1 - P otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_cdf(double x, double dof);
double chi2_sf(double x, double dof);  // 1 - cdf, computed without cancellation

struct StyleModelOptions {
  /// Ridge rungs as multiples of the mean covariance diagonal; continues x100
  /// past the last rung until the condition number is acceptable.
  std::vector<double> ladder = {0.0, 1e-6, 1e-4, 1e-2};
  double max_condition = 1e6;
  bool regularize = true;  // false: plain sample covariance (must be positive definite)
};

struct StyleModel {
  Eigen::VectorXd centroid;
  Eigen::MatrixXd covariance;  // sample covariance + lambda I
  Eigen::MatrixXd whitener;    // symmetric inverse square root of `covariance`
  double lambda = 0.0;
  double condition = 0.0;
  std::size_t dof = 0;
  std::size_t samples = 0;
};

/// Rows of `vectors` are observations.
StyleModel fit_style_model(const Eigen::MatrixXd& vectors, const StyleModelOptions& options = {});

struct Contribution {
  std::size_t feature = 0;
  double value = 0.0;  // whitened residual component
};

struct OutlierEntry {
  double d2 = 0.0;
  double p_value = 1.0;
  bool rejected = false;
  std::vector<Contribution> top;  // by decreasing |value|
};

OutlierEntry mahalanobis_test(const StyleModel& model, const Eigen::VectorXd& x, double confidence,
                              std::size_t top_k = 5);

}  // namespace elegy
