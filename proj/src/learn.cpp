#include "elegy/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "elegy/error.hpp"
#include "elegy/rng.hpp"

namespace elegy {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_training(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y, std::size_t n_classes) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw ParameterError("row count differs from label count");
  std::vector<std::size_t> counts(n_classes, 0);
  for (auto c : y) {
    if (c >= n_classes) throw ParameterError("label out of range");
    ++counts[c];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0) throw DataError("class " + std::to_string(c) + " has no training rows");
  }
}

class NearestCentroid final : public Classifier {
 public:
  void fit(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y, std::size_t n_classes) override {
    check_training(x, y, n_classes);
    centroids_ = Eigen::MatrixXd::Zero(idx(n_classes), x.cols());
    std::vector<double> counts(n_classes, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      centroids_.row(idx(y[i])) += x.row(idx(i));
      counts[y[i]] += 1.0;
    }
    for (std::size_t c = 0; c < n_classes; ++c) centroids_.row(idx(c)) /= counts[c];
  }

  std::vector<std::size_t> predict(const Eigen::MatrixXd& x) const override {
    std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
      Index best = 0;
      (centroids_.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return out;
  }

 private:
  Eigen::MatrixXd centroids_;
};

class Knn final : public Classifier {
 public:
  explicit Knn(std::size_t k) : k_(k) {
    if (k == 0) throw ParameterError("knn: k must be positive");
  }

  void fit(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y, std::size_t n_classes) override {
    check_training(x, y, n_classes);
    x_ = x;
    norms_ = x.rowwise().norm();
    y_ = y;
    n_classes_ = n_classes;
  }

  std::vector<std::size_t> predict(const Eigen::MatrixXd& x) const override {
    std::vector<std::size_t> out;
    const std::size_t n = y_.size();
    const std::size_t k = std::min(k_, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (Index i = 0; i < x.rows(); ++i) {
      const double qn = x.row(i).norm();
      for (std::size_t j = 0; j < n; ++j) {
        const double denom = qn * norms_(idx(j));
        const double cos = denom > 0.0 ? x.row(i).dot(x_.row(idx(j))) / denom : 0.0;
        dist[j] = {1.0 - cos, j};
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
      std::vector<std::size_t> votes(n_classes_, 0);
      std::vector<double> summed(n_classes_, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        ++votes[y_[dist[j].second]];
        summed[y_[dist[j].second]] += dist[j].first;
      }
      std::size_t best = 0;
      for (std::size_t c = 1; c < n_classes_; ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && votes[c] > 0 && summed[c] < summed[best])) best = c;
      }
      out.push_back(best);
    }
    return out;
  }

 private:
  std::size_t k_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd norms_;
  std::vector<std::size_t> y_;
  std::size_t n_classes_ = 0;
};

class OneVsRest final : public Classifier {
 public:
  OneVsRest(Model model, ClassifierOptions options) : model_(model), options_(options) {}

  void fit(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y, std::size_t n_classes) override {
    check_training(x, y, n_classes);
    w_ = Eigen::MatrixXd::Zero(x.cols(), idx(n_classes));
    b_ = Eigen::RowVectorXd::Zero(idx(n_classes));
    for (std::size_t c = 0; c < n_classes; ++c) {
      std::vector<int> yc(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) yc[i] = y[i] == c ? 1 : -1;
      if (model_ == Model::LinearSvm) {
        auto opts = options_;
        opts.seed = Rng(options_.seed, c).next();
        const auto svm = LinearSvm::train(x, yc, opts);
        w_.col(idx(c)) = svm.w;
        b_(idx(c)) = svm.b;
      } else {
        fit_logistic(x, yc, c);
      }
    }
  }

  std::vector<std::size_t> predict(const Eigen::MatrixXd& x) const override {
    const Eigen::MatrixXd scores = (x * w_).rowwise() + b_;
    std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
      Index best = 0;
      scores.row(i).maxCoeff(&best);
      out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return out;
  }

 private:
  // Newton / IRLS on the L2-penalised log-likelihood; the bias is not penalised.
  void fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y, std::size_t c) {
    const Index n = x.rows();
    const Index d = x.cols();
    Eigen::MatrixXd a(n, d + 1);
    a.leftCols(d) = x;
    a.col(d).setOnes();
    Eigen::VectorXd t(n);
    for (Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)] > 0 ? 1.0 : 0.0;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
    Eigen::VectorXd penalty = Eigen::VectorXd::Constant(d + 1, options_.logistic_ridge);
    penalty(d) = 1e-8;
    for (std::size_t it = 0; it < options_.logistic_iterations; ++it) {
      const Eigen::VectorXd eta = a * beta;
      Eigen::VectorXd p(n), wgt(n);
      for (Index i = 0; i < n; ++i) {
        p(i) = 1.0 / (1.0 + std::exp(-eta(i)));
        wgt(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
      }
      const Eigen::VectorXd grad = a.transpose() * (p - t) + penalty.cwiseProduct(beta);
      Eigen::MatrixXd hess = a.transpose() * wgt.asDiagonal() * a;
      hess.diagonal() += penalty;
      const Eigen::VectorXd step = hess.ldlt().solve(grad);
      beta -= step;
      if (step.lpNorm<Eigen::Infinity>() < 1e-10) break;
    }
    w_.col(idx(c)) = beta.head(d);
    b_(idx(c)) = beta(d);
  }

  Model model_;
  ClassifierOptions options_;
  Eigen::MatrixXd w_;
  Eigen::RowVectorXd b_;
};

std::size_t clamp_test_count(double fraction, std::size_t n) {
  const auto raw = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(raw, 1, n - 1);
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::NearestCentroid: return "nearest_centroid";
    case Model::Knn: return "knn";
    case Model::LinearSvm: return "linear_svm";
    case Model::Logistic: return "logistic";
  }
  return "?";
}

Model parse_model(std::string_view s) {
  for (Model m : all_models()) {
    if (s == model_name(m)) return m;
  }
  throw ParameterError("unknown model: " + std::string(s));
}

const std::vector<Model>& all_models() {
  static const std::vector<Model> models = {Model::NearestCentroid, Model::Knn, Model::LinearSvm, Model::Logistic};
  return models;
}

Dataset Dataset::from_labels(Eigen::MatrixXd x, const std::vector<std::string>& labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) throw ParameterError("row count differs from label count");
  Dataset d;
  d.x = std::move(x);
  std::set<std::string> unique(labels.begin(), labels.end());
  d.classes.assign(unique.begin(), unique.end());
  for (const auto& l : labels) {
    d.y.push_back(static_cast<std::size_t>(std::lower_bound(d.classes.begin(), d.classes.end(), l) - d.classes.begin()));
  }
  return d;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset d;
  d.classes = classes;
  d.x.resize(idx(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.x.row(idx(i)) = x.row(idx(rows[i]));
    d.y.push_back(y[rows[i]]);
  }
  return d;
}

ZScaler ZScaler::fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw DataError("cannot z-scale an empty matrix");
  ZScaler z;
  z.mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - z.mean;
  z.scale = (centred.colwise().squaredNorm() / static_cast<double>(x.rows())).cwiseSqrt();
  for (Index j = 0; j < z.scale.size(); ++j) {
    if (!(z.scale(j) > 0.0)) z.scale(j) = 1.0;
  }
  return z;
}

Eigen::MatrixXd ZScaler::transform(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

Eigen::MatrixXd zscale(const Eigen::MatrixXd& x) { return ZScaler::fit(x).transform(x); }

std::unique_ptr<Classifier> make_classifier(Model model, const ClassifierOptions& options) {
  switch (model) {
    case Model::NearestCentroid: return std::make_unique<NearestCentroid>();
    case Model::Knn: return std::make_unique<Knn>(options.k);
    case Model::LinearSvm:
    case Model::Logistic: return std::make_unique<OneVsRest>(model, options);
  }
  throw ParameterError("unknown model");
}

std::vector<std::size_t> classify(Model model, const Eigen::MatrixXd& train_x, const std::vector<std::size_t>& train_y,
                                  std::size_t n_classes, const Eigen::MatrixXd& test_x,
                                  const ClassifierOptions& options) {
  auto c = make_classifier(model, options);
  c->fit(train_x, train_y, n_classes);
  return c->predict(test_x);
}

LinearSvm LinearSvm::train(const Eigen::MatrixXd& x, const std::vector<int>& y, const ClassifierOptions& options) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (static_cast<std::size_t>(n) != y.size() || n == 0) throw ParameterError("svm: bad training set");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);  // last entry is the bias
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q(n);
  for (Index i = 0; i < n; ++i) q(i) = x.row(i).squaredNorm() + 1.0;
  const double c = options.svm_c;

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  for (std::size_t epoch = 0; epoch < options.svm_epochs; ++epoch) {
    rng.shuffle(order);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (auto oi : order) {
      const Index i = idx(oi);
      const double yi = y[oi] > 0 ? 1.0 : -1.0;
      const double g = yi * (x.row(i).dot(w.head(d)) + w(d)) - 1.0;
      double pg = g;
      if (alpha(i) <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha(i) >= c) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha(i);
      alpha(i) = std::clamp(old - g / q(i), 0.0, c);
      const double delta = (alpha(i) - old) * yi;
      w.head(d) += delta * x.row(i).transpose();
      w(d) += delta;
    }
    if (pg_max - pg_min < options.svm_tolerance) break;
  }
  LinearSvm svm;
  svm.w = w.head(d);
  svm.b = w(d);
  return svm;
}

HoldoutResult repeated_holdout(const Dataset& data, Model model, const HoldoutOptions& options,
                               const ClassifierOptions& classifier) {
  if (options.trials == 0) throw ParameterError("holdout: trials must be positive");
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
    throw ParameterError("holdout: test fraction must lie in (0, 1)");
  }
  HoldoutResult result;

  // Drop classes too small to split.
  std::vector<std::vector<std::size_t>> members(data.classes.size());
  for (std::size_t i = 0; i < data.size(); ++i) members[data.y[i]].push_back(i);
  std::vector<std::size_t> kept_class(data.classes.size(), SIZE_MAX);
  std::vector<std::size_t> kept_rows;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < 2) {
      if (!members[c].empty()) {
        result.warnings.push_back("class '" + data.classes[c] + "' has fewer than 2 members; excluded");
      }
      continue;
    }
    kept_class[c] = result.classes.size();
    result.classes.push_back(data.classes[c]);
  }
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (kept_class[c] == SIZE_MAX) continue;
    groups.push_back(members[c]);
    kept_rows.insert(kept_rows.end(), members[c].begin(), members[c].end());
  }
  std::sort(kept_rows.begin(), kept_rows.end());
  const std::size_t k = result.classes.size();
  if (k < 2) throw DataError("holdout needs at least two classes with two or more members");
  result.rows_used = kept_rows.size();

  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(idx(k), idx(k));
  std::vector<double> row_trials(k, 0.0);
  double acc_sum = 0.0;
  double f1_sum = 0.0;

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    Rng rng(options.seed, trial);
    std::vector<std::size_t> train, test;
    if (options.stratified) {
      for (const auto& g : groups) {
        auto shuffled = g;
        rng.shuffle(shuffled);
        const std::size_t nt = clamp_test_count(options.test_fraction, g.size());
        test.insert(test.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(nt));
        train.insert(train.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(nt), shuffled.end());
      }
    } else {
      auto shuffled = kept_rows;
      rng.shuffle(shuffled);
      const std::size_t nt = clamp_test_count(options.test_fraction, shuffled.size());
      test.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(nt));
      train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(nt), shuffled.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());

    auto remap = [&](const std::vector<std::size_t>& rows) {
      std::vector<std::size_t> out;
      for (auto r : rows) out.push_back(kept_class[data.y[r]]);
      return out;
    };
    const Dataset tr = data.subset(train);
    const Dataset te = data.subset(test);
    Eigen::MatrixXd xtr = tr.x;
    Eigen::MatrixXd xte = te.x;
    if (options.zscale_per_trial) {
      const auto z = ZScaler::fit(xtr);
      xtr = z.transform(xtr);
      xte = z.transform(xte);
    }
    auto opts = classifier;
    opts.seed = rng.next();
    const auto ytr = remap(train);
    const auto yte = remap(test);
    const auto pred = classify(model, xtr, ytr, k, xte, opts);

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(idx(k), idx(k));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < yte.size(); ++i) {
      counts(idx(yte[i]), idx(pred[i])) += 1.0;
      correct += yte[i] == pred[i];
    }
    acc_sum += static_cast<double>(correct) / static_cast<double>(yte.size());

    double f1 = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double support = counts.row(idx(c)).sum();
      if (support == 0.0) continue;
      ++present;
      const double tp = counts(idx(c), idx(c));
      const double predicted = counts.col(idx(c)).sum();
      const double precision = predicted > 0.0 ? tp / predicted : 0.0;
      const double recall = tp / support;
      if (precision + recall > 0.0) f1 += 2.0 * precision * recall / (precision + recall);
      confusion.row(idx(c)) += 100.0 * counts.row(idx(c)) / support;
      row_trials[c] += 1.0;
    }
    f1_sum += f1 / static_cast<double>(present);
  }

  for (std::size_t c = 0; c < k; ++c) {
    if (row_trials[c] > 0.0) confusion.row(idx(c)) /= row_trials[c];
  }
  result.confusion = confusion;
  result.accuracy = acc_sum / static_cast<double>(options.trials);
  result.macro_f1 = f1_sum / static_cast<double>(options.trials);
  return result;
}

AccuracyCurves accuracy_vs_min_length(const Dataset& data, const std::vector<std::size_t>& lengths,
                                      const std::vector<Model>& models, const std::vector<std::size_t>& thresholds,
                                      const HoldoutOptions& options, const ClassifierOptions& classifier) {
  if (lengths.size() != data.size()) throw ParameterError("one length per row is required");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw ParameterError("thresholds must be ascending");
  AccuracyCurves out;
  for (std::size_t t : thresholds) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] >= t) rows.push_back(i);
    }
    const Dataset sub = data.subset(rows);
    std::vector<std::size_t> per_class(sub.classes.size(), 0);
    for (auto y : sub.y) ++per_class[y];
    const auto usable = std::count_if(per_class.begin(), per_class.end(), [](std::size_t n) { return n >= 2; });
    if (usable < 2) {
      out.warnings.push_back("threshold " + std::to_string(t) + " leaves fewer than two classes; omitted");
      continue;
    }
    for (Model m : models) {
      const auto r = repeated_holdout(sub, m, options, classifier);
      out.curves[m].push_back({t, r.rows_used, r.accuracy, r.macro_f1});
    }
  }
  return out;
}

}  // namespace elegy
