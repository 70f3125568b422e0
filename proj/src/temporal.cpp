#include "elegy/temporal.hpp"

#include <algorithm>
#include <cmath>

#include "elegy/error.hpp"
#include "elegy/rng.hpp"

namespace elegy {

std::vector<TemporalScore> temporal_scores(const Eigen::MatrixXd& x, const std::vector<std::string>& works,
                                           const std::vector<std::size_t>& targets,
                                           const TemporalReference& reference, const ClassifierOptions& options) {
  if (works.size() != static_cast<std::size_t>(x.rows())) throw ParameterError("one work label per row required");
  std::vector<std::size_t> early, late;
  for (std::size_t i = 0; i < works.size(); ++i) {
    if (works[i] == reference.early) early.push_back(i);
    if (works[i] == reference.late) late.push_back(i);
  }
  if (early.empty()) throw DataError("reference work '" + reference.early + "' has no poems");
  if (late.empty()) throw DataError("reference work '" + reference.late + "' has no poems");

  Eigen::MatrixXd train(static_cast<Eigen::Index>(early.size() + late.size()), x.cols());
  std::vector<int> y;
  Eigen::RowVectorXd ce = Eigen::RowVectorXd::Zero(x.cols());
  Eigen::RowVectorXd cl = Eigen::RowVectorXd::Zero(x.cols());
  Eigen::Index r = 0;
  for (std::size_t i : early) {
    train.row(r++) = x.row(static_cast<Eigen::Index>(i));
    ce += x.row(static_cast<Eigen::Index>(i));
    y.push_back(-1);
  }
  for (std::size_t i : late) {
    train.row(r++) = x.row(static_cast<Eigen::Index>(i));
    cl += x.row(static_cast<Eigen::Index>(i));
    y.push_back(1);
  }
  ce /= static_cast<double>(early.size());
  cl /= static_cast<double>(late.size());
  const auto svm = LinearSvm::train(train, y, options);

  std::vector<TemporalScore> out;
  for (std::size_t t : targets) {
    if (t >= works.size()) throw ParameterError("target row out of range");
    const Eigen::RowVectorXd v = x.row(static_cast<Eigen::Index>(t));
    TemporalScore s;
    s.row = t;
    s.svm_score = svm.w.norm() > 0.0 ? svm.distance(v) : 0.0;
    s.centroid_score = (v - ce).norm() - (v - cl).norm();
    out.push_back(s);
  }
  return out;
}

std::vector<double> loess(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<double>& at, double span) {
  const std::size_t n = xs.size();
  if (n == 0 || ys.size() != n) throw ParameterError("loess needs matching, non-empty x and y");
  if (!(span > 0.0 && span <= 1.0)) throw ParameterError("loess span must lie in (0, 1]");
  const auto q = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))), 1, n);
  std::vector<double> out;
  std::vector<double> dist(n);
  for (double x0 : at) {
    for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(xs[i] - x0);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q - 1), sorted.end());
    const double h = sorted[q - 1];
    double sw = 0, sx = 0, sy = 0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (h == 0.0) {
        w[i] = dist[i] == 0.0 ? 1.0 : 0.0;
      } else {
        const double u = dist[i] / h;
        w[i] = u < 1.0 ? std::pow(1.0 - u * u * u, 3) : 0.0;
      }
      sw += w[i];
      sx += w[i] * xs[i];
      sy += w[i] * ys[i];
    }
    if (sw == 0.0) {
      // every neighbour sits exactly at distance h: fall back to equal weights within h
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = dist[i] <= h ? 1.0 : 0.0;
        sw += w[i];
        sx += w[i] * xs[i];
        sy += w[i] * ys[i];
      }
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += w[i] * (xs[i] - mx) * (xs[i] - mx);
      sxy += w[i] * (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxx > 1e-12 * sw * (1.0 + mx * mx) ? sxy / sxx : 0.0;
    out.push_back(my + slope * (x0 - mx));
  }
  return out;
}

LoessBand loess_band(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& grid,
                     double span, std::size_t replicates, double level, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("band level must lie in (0, 1)");
  LoessBand band;
  band.grid = grid;
  band.fit = loess(xs, ys, grid, span);
  band.lower = band.upper = band.fit;
  if (replicates == 0) return band;
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> draws(grid.size());
  std::vector<double> bx(n), by(n);
  for (std::size_t b = 0; b < replicates; ++b) {
    Rng rng(seed, b);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rng.index(n);
      bx[i] = xs[j];
      by[i] = ys[j];
    }
    const auto f = loess(bx, by, grid, span);
    for (std::size_t g = 0; g < grid.size(); ++g) draws[g].push_back(f[g]);
  }
  const double alpha = 0.5 * (1.0 - level);
  auto quantile = [](std::vector<double>& v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  for (std::size_t g = 0; g < grid.size(); ++g) {
    band.lower[g] = quantile(draws[g], alpha);
    band.upper[g] = quantile(draws[g], 1.0 - alpha);
  }
  return band;
}

}  // namespace elegy
