#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "elegy/corpus.hpp"
#include "elegy/lexsem.hpp"
#include "elegy/phonology.hpp"
#include "elegy/poetics.hpp"

namespace elegy {

/// Per-poem analyses of a corpus. Poems whose analysis throws are listed in
/// `failures` and left out of `analyses`; rows of every derived matrix follow
/// `analyses`.
struct CorpusAnalysis {
  std::vector<Poem> poems;  // parallel to `analyses`
  std::vector<PoemAnalysis> analyses;
  std::vector<std::string> failures;

  std::vector<std::string> labels(const std::string& kind) const;  // "work" or "author"
  std::vector<std::size_t> line_counts() const;
};

CorpusAnalysis analyze_corpus(const Corpus& corpus, const MacronLexicon* lexicon = nullptr,
                              const RhymeWeights& weights = {}, unsigned threads = 0);

/// Raw (unscaled) poems x 43 matrix.
Eigen::MatrixXd poetic_matrix(const CorpusAnalysis& analysis);

/// TF-IDF of 2/3/4-gram counts over transcribed lines, reduced by SVD.
LsaModel lsa_features(const std::vector<Poem>& poems, std::size_t dims = 50, const TfidfOptions& options = {});

/// Trailing integer of the poem index ("Ep. 15" -> 15).
std::optional<int> letter_number(const PoemId& id);

}  // namespace elegy
