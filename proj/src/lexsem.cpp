#include "elegy/lexsem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elegy/error.hpp"

namespace elegy {

NgramCounts count_ngrams(std::string_view line, const std::vector<std::size_t>& sizes) {
  NgramCounts counts;
  for (std::size_t n : sizes) {
    if (n == 0) throw ParameterError("n-gram size must be positive");
    for (std::size_t i = 0; i + n <= line.size(); ++i) ++counts[std::string(line.substr(i, n))];
  }
  return counts;
}

NgramCounts count_poem_ngrams(const std::vector<std::string>& lines, const std::vector<std::size_t>& sizes) {
  NgramCounts total;
  for (const auto& line : lines) {
    for (const auto& [gram, c] : count_ngrams(line, sizes)) total[gram] += c;
  }
  return total;
}

namespace {

double idf_value(std::size_t n_docs, std::size_t df, bool smooth) {
  const double n = static_cast<double>(n_docs);
  const double d = static_cast<double>(df);
  return smooth ? std::log((1.0 + n) / (1.0 + d)) + 1.0 : std::log(n / d) + 1.0;
}

Eigen::MatrixXd weigh(const std::vector<NgramCounts>& docs, const std::vector<std::string>& vocabulary,
                      const Eigen::VectorXd& idf, bool l2) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(docs.size()),
                                            static_cast<Eigen::Index>(vocabulary.size()));
  for (std::size_t r = 0; r < docs.size(); ++r) {
    // both sides are sorted: merge walk
    auto it = docs[r].begin();
    for (std::size_t c = 0; c < vocabulary.size() && it != docs[r].end(); ++c) {
      while (it != docs[r].end() && it->first < vocabulary[c]) ++it;
      if (it != docs[r].end() && it->first == vocabulary[c]) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            static_cast<double>(it->second) * idf(static_cast<Eigen::Index>(c));
      }
    }
    if (l2) {
      const double norm = m.row(static_cast<Eigen::Index>(r)).norm();
      if (norm > 0.0) m.row(static_cast<Eigen::Index>(r)) /= norm;
    }
  }
  return m;
}

}  // namespace

TfidfMatrix tfidf(const std::vector<NgramCounts>& docs, const TfidfOptions& options) {
  if (docs.empty()) throw DataError("tf-idf: empty corpus");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& d : docs) {
    for (const auto& [gram, c] : d) {
      if (c > 0) ++df[gram];
    }
  }
  TfidfMatrix out;
  const std::size_t min_df = std::min(options.min_df, docs.size());
  std::vector<double> idf;
  for (const auto& [gram, count] : df) {
    if (count < min_df) continue;
    out.vocabulary.push_back(gram);
    idf.push_back(idf_value(docs.size(), count, options.smooth_idf));
  }
  if (out.vocabulary.empty()) throw DataError("tf-idf: no term reaches the document-frequency threshold");
  out.idf = Eigen::Map<Eigen::VectorXd>(idf.data(), static_cast<Eigen::Index>(idf.size()));
  out.weights = weigh(docs, out.vocabulary, out.idf, options.l2_normalize);
  return out;
}

Eigen::MatrixXd TfidfMatrix::transform(const std::vector<NgramCounts>& docs, const TfidfOptions& options) const {
  return weigh(docs, vocabulary, idf, options.l2_normalize);
}

LsaModel reduce_svd(const Eigen::MatrixXd& matrix, std::size_t d) {
  if (d == 0) throw ParameterError("SVD dimension must be at least 1");
  if (matrix.size() == 0) throw DataError("SVD of an empty matrix");
  LsaModel model;
  model.requested_dims = d;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = static_cast<double>(std::max(matrix.rows(), matrix.cols())) *
                     std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  rank = std::max<std::size_t>(rank, 1);
  if (d > rank) {
    model.warnings.push_back("requested " + std::to_string(d) + " dimensions but the matrix has rank " +
                             std::to_string(rank) + "; using " + std::to_string(rank));
    d = rank;
  }
  const auto k = static_cast<Eigen::Index>(d);
  model.singular_values = s.head(k);
  Eigen::MatrixXd u = svd.matrixU().leftCols(k);
  model.basis = svd.matrixV().leftCols(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index arg = 0;
    model.basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (model.basis(arg, j) < 0.0) {
      model.basis.col(j) *= -1.0;
      u.col(j) *= -1.0;
    }
  }
  model.rows = u * model.singular_values.asDiagonal();
  return model;
}

}  // namespace elegy
