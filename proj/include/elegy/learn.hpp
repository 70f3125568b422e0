#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace elegy {

enum class Model { NearestCentroid, Knn, LinearSvm, Logistic };

const char* model_name(Model m);      // "nearest_centroid", "knn", "linear_svm", "logistic"
Model parse_model(std::string_view);  // throws ParameterError
const std::vector<Model>& all_models();

struct Dataset {
  Eigen::MatrixXd x;
  std::vector<std::size_t> y;        // index into classes
  std::vector<std::string> classes;  // sorted

  static Dataset from_labels(Eigen::MatrixXd x, const std::vector<std::string>& labels);
  Dataset subset(const std::vector<std::size_t>& rows) const;  // keeps the class list
  std::size_t size() const { return y.size(); }
};

/// Per-feature standardisation with the population standard deviation;
/// constant features are centred only.
struct ZScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static ZScaler fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

Eigen::MatrixXd zscale(const Eigen::MatrixXd& x);

struct ClassifierOptions {
  std::size_t k = 3;        // knn
  double svm_c = 1.0;       // linear svm
  std::size_t svm_epochs = 1000;
  double svm_tolerance = 1e-4;
  double logistic_ridge = 1.0;
  std::size_t logistic_iterations = 100;
  std::uint64_t seed = 1;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  /// Every class in [0, n_classes) needs at least one training row.
  virtual void fit(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y, std::size_t n_classes) = 0;
  virtual std::vector<std::size_t> predict(const Eigen::MatrixXd& x) const = 0;
};

std::unique_ptr<Classifier> make_classifier(Model model, const ClassifierOptions& options = {});

std::vector<std::size_t> classify(Model model, const Eigen::MatrixXd& train_x, const std::vector<std::size_t>& train_y,
                                  std::size_t n_classes, const Eigen::MatrixXd& test_x,
                                  const ClassifierOptions& options = {});

/// Binary linear SVM (labels +1/-1), L1 hinge loss, dual coordinate descent
/// with the bias as an augmented constant feature.
struct LinearSvm {
  Eigen::VectorXd w;
  double b = 0.0;

  static LinearSvm train(const Eigen::MatrixXd& x, const std::vector<int>& y, const ClassifierOptions& options = {});
  double decision(const Eigen::RowVectorXd& x) const { return x.dot(w) + b; }
  /// Signed distance to the hyperplane.
  double distance(const Eigen::RowVectorXd& x) const { return decision(x) / w.norm(); }
};

struct HoldoutOptions {
  std::size_t trials = 100;
  double test_fraction = 0.2;
  bool stratified = true;
  bool zscale_per_trial = false;  // refit a z-scaler on each training split
  std::uint64_t seed = 1;
};

struct HoldoutResult {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<std::string> classes;  // rows/cols of the confusion matrix
  Eigen::MatrixXd confusion;         // mean row percentages
  std::vector<std::string> warnings;
  std::size_t rows_used = 0;
};

/// Repeated random train/test splits. Classes with fewer than two members are
/// dropped with a warning. Trial t draws from Rng(seed, t).
HoldoutResult repeated_holdout(const Dataset& data, Model model, const HoldoutOptions& options = {},
                               const ClassifierOptions& classifier = {});

struct CurvePoint {
  std::size_t threshold = 0;
  std::size_t rows = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

struct AccuracyCurves {
  std::map<Model, std::vector<CurvePoint>> curves;
  std::vector<std::string> warnings;
};

/// Holdout accuracy restricted to rows with length >= each threshold.
AccuracyCurves accuracy_vs_min_length(const Dataset& data, const std::vector<std::size_t>& lengths,
                                      const std::vector<Model>& models, const std::vector<std::size_t>& thresholds,
                                      const HoldoutOptions& options = {}, const ClassifierOptions& classifier = {});

}  // namespace elegy
