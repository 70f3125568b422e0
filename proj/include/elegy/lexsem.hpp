#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace elegy {

using NgramCounts = std::map<std::string, std::size_t, std::less<>>;

/// Sliding-window character n-grams within one line (spaces included).
NgramCounts count_ngrams(std::string_view line, const std::vector<std::size_t>& sizes = {2, 3, 4});

/// Sums line counts; windows never cross line boundaries.
NgramCounts count_poem_ngrams(const std::vector<std::string>& transcribed_lines,
                              const std::vector<std::size_t>& sizes = {2, 3, 4});

struct TfidfOptions {
  std::size_t min_df = 2;
  bool smooth_idf = true;  // ln((1+N)/(1+df)) + 1, else ln(N/df) + 1
  bool l2_normalize = true;
};

struct TfidfMatrix {
  std::vector<std::string> vocabulary;  // column order, lexicographic
  Eigen::VectorXd idf;
  Eigen::MatrixXd weights;  // documents x vocabulary

  /// Weights for new documents over this vocabulary and idf.
  Eigen::MatrixXd transform(const std::vector<NgramCounts>& docs, const TfidfOptions& options = {}) const;
};

TfidfMatrix tfidf(const std::vector<NgramCounts>& docs, const TfidfOptions& options = {});

struct LsaModel {
  Eigen::MatrixXd rows;  // documents x d, U_d * S_d
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd basis;  // vocabulary x d, V_d
  std::size_t requested_dims = 0;
  std::vector<std::string> warnings;

  /// Projects weighted rows onto the basis (x V_d).
  Eigen::MatrixXd project(const Eigen::MatrixXd& weighted) const { return weighted * basis; }
};

/// Dense truncated SVD (Eigen BDCSVD). Each basis column is signed so its
/// largest-magnitude entry is positive. d above the numerical rank is lowered
/// to the rank with a warning.
LsaModel reduce_svd(const Eigen::MatrixXd& matrix, std::size_t d = 50);

}  // namespace elegy
