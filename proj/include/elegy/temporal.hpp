#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "elegy/learn.hpp"

namespace elegy {

// Positive scores lean towards the late reference work, negative towards the early one.
struct TemporalScore {
  std::size_t row = 0;
  double svm_score = 0.0;       // signed hyperplane distance, +1 side = late
  double centroid_score = 0.0;  // dist(early centroid) - dist(late centroid)
};

struct TemporalReference {
  std::string early = "Amores";
  std::string late = "Ex Ponto";
};

/// Scores `targets` rows of `x` (already z-scaled) against models trained on
/// every row whose work is one of the two references. No train/test split.
std::vector<TemporalScore> temporal_scores(const Eigen::MatrixXd& x, const std::vector<std::string>& works,
                                           const std::vector<std::size_t>& targets,
                                           const TemporalReference& reference = {},
                                           const ClassifierOptions& options = {});

/// Tricube-weighted local linear regression evaluated at `at`.
std::vector<double> loess(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<double>& at, double span = 0.75);

struct LoessBand {
  std::vector<double> grid;
  std::vector<double> fit;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// LOESS fit with a percentile bootstrap band from resampled (x, y) pairs.
LoessBand loess_band(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& grid,
                     double span = 0.75, std::size_t replicates = 200, double level = 0.95,
                     std::uint64_t seed = 1);

}  // namespace elegy
