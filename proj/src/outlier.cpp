#include "elegy/outlier.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "elegy/error.hpp"

namespace elegy {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double series_p(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double continued_fraction_q(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw ParameterError("incomplete gamma needs a > 0 and x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? series_p(a, x) : 1.0 - continued_fraction_q(a, x);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - series_p(a, x) : continued_fraction_q(a, x);
}

double chi2_cdf(double x, double dof) { return x <= 0.0 ? 0.0 : gamma_p(0.5 * dof, 0.5 * x); }

double chi2_sf(double x, double dof) { return x <= 0.0 ? 1.0 : gamma_q(0.5 * dof, 0.5 * x); }

StyleModel fit_style_model(const Eigen::MatrixXd& vectors, const StyleModelOptions& options) {
  const auto n = vectors.rows();
  if (n < 2) throw DataError("style model needs at least 2 vectors");
  StyleModel m;
  m.samples = static_cast<std::size_t>(n);
  m.dof = static_cast<std::size_t>(vectors.cols());
  m.centroid = vectors.colwise().mean().transpose();
  const Eigen::MatrixXd centred = vectors.rowwise() - m.centroid.transpose();
  const Eigen::MatrixXd sample = centred.transpose() * centred / static_cast<double>(n - 1);
  const double mean_diag = sample.diagonal().mean();
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;
  const auto p = sample.rows();

  std::vector<double> rungs = options.regularize ? options.ladder : std::vector<double>{0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (std::size_t r = 0;; ++r) {
    if (r == rungs.size()) {
      if (!options.regularize) break;
      const double last = rungs.empty() || rungs.back() == 0.0 ? 1e-6 : rungs.back() * 100.0;
      if (last > 1e12) break;
      rungs.push_back(last);
    }
    const double lambda = rungs[r] * scale;
    const Eigen::MatrixXd cov = sample + lambda * Eigen::MatrixXd::Identity(p, p);
    es.compute(cov);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (lo > 0.0 && (cond <= options.max_condition || !options.regularize)) {
      m.lambda = lambda;
      m.condition = cond;
      m.covariance = cov;
      m.whitener = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                   es.eigenvectors().transpose();
      return m;
    }
    if (!options.regularize) break;
  }
  throw DataError("covariance is singular and could not be regularized");
}

OutlierEntry mahalanobis_test(const StyleModel& model, const Eigen::VectorXd& x, double confidence,
                              std::size_t top_k) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("confidence must lie in (0, 1)");
  if (x.size() != model.centroid.size()) throw ParameterError("vector length differs from the model");
  const Eigen::VectorXd z = model.whitener * (x - model.centroid);
  OutlierEntry e;
  e.d2 = z.squaredNorm();
  e.p_value = chi2_sf(e.d2, static_cast<double>(model.dof));
  e.rejected = e.p_value < 1.0 - confidence;
  std::vector<std::size_t> order(static_cast<std::size_t>(z.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(z(static_cast<Eigen::Index>(a))) > std::abs(z(static_cast<Eigen::Index>(b)));
  });
  for (std::size_t i = 0; i < std::min(top_k, order.size()); ++i) {
    e.top.push_back({order[i], z(static_cast<Eigen::Index>(order[i]))});
  }
  return e;
}

}  // namespace elegy
