#include "elegy/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <thread>

#include "elegy/error.hpp"

namespace elegy {

std::vector<std::string> CorpusAnalysis::labels(const std::string& kind) const {
  if (kind != "work" && kind != "author") throw ParameterError("label must be 'work' or 'author'");
  std::vector<std::string> out;
  for (const auto& p : poems) out.push_back(kind == "work" ? p.id.work : p.id.author);
  return out;
}

std::vector<std::size_t> CorpusAnalysis::line_counts() const {
  std::vector<std::size_t> out;
  for (const auto& p : poems) out.push_back(p.line_count());
  return out;
}

CorpusAnalysis analyze_corpus(const Corpus& corpus, const MacronLexicon* lexicon, const RhymeWeights& weights,
                              unsigned threads) {
  const std::size_t n = corpus.poems.size();
  std::vector<std::optional<PoemAnalysis>> slots(n);
  std::vector<std::string> errors(n);
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < n; i += t) {
      try {
        slots[i] = analyze_poem(corpus.poems[i], lexicon, weights);
      } catch (const std::exception& e) {
        errors[i] = corpus.poems[i].id.label() + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < t; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();

  CorpusAnalysis out;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      out.poems.push_back(corpus.poems[i]);
      out.analyses.push_back(std::move(*slots[i]));
    } else {
      out.failures.push_back(errors[i]);
    }
  }
  return out;
}

Eigen::MatrixXd poetic_matrix(const CorpusAnalysis& analysis) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(analysis.analyses.size()), static_cast<Eigen::Index>(kPoeticFeatureCount));
  for (std::size_t i = 0; i < analysis.analyses.size(); ++i) {
    for (std::size_t j = 0; j < kPoeticFeatureCount; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = analysis.analyses[i].features[j];
    }
  }
  return m;
}

LsaModel lsa_features(const std::vector<Poem>& poems, std::size_t dims, const TfidfOptions& options) {
  if (poems.empty()) throw DataError("no poems to build LSA features from");
  std::vector<NgramCounts> docs;
  for (const auto& p : poems) {
    std::vector<std::string> lines;
    for (const auto& l : p.lines) lines.push_back(transcribe(l));
    docs.push_back(count_poem_ngrams(lines));
  }
  return reduce_svd(tfidf(docs, options).weights, dims);
}

std::optional<int> letter_number(const PoemId& id) {
  const auto& s = id.index;
  auto end = s.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(s[end - 1]))) --end;
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(s[begin - 1]))) --begin;
  if (begin == end) return std::nullopt;
  return std::stoi(s.substr(begin, end - begin));
}

}  // namespace elegy
