#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "elegy/corpus.hpp"
#include "elegy/scansion.hpp"

namespace elegy {

inline constexpr std::size_t kPoeticFeatureCount = 43;

/// H1SP..H4SP, H1CF..H6CF, H1DI..H5DI, H1SC..H5SC, H1WC..H5WC,
/// P1SP, P2SP, P1CF..P4CF, P1DI, P1SC, P2SC, P1WC..P4WC, ELC, LEN, RS, LEO, PFSD.
const std::array<std::string, kPoeticFeatureCount>& poetic_feature_names();
std::size_t poetic_feature_index(std::string_view name);  // throws ParameterError

struct PoeticFeatureVector {
  std::array<double, kPoeticFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double get(std::string_view name) const { return values[poetic_feature_index(name)]; }
};

/// Tier weights for rhyme strength; a file holds `name value` lines with
/// names identical, skeleton, nucleus.
struct RhymeWeights {
  double identical = 1.0;
  double skeleton = 0.5;
  double nucleus = 0.25;

  static RhymeWeights parse(std::string_view text);
  static RhymeWeights read(const std::filesystem::path& file);
};

enum class RhymeKind { Vertical, Leonine };

struct RhymeScore {
  double strength = 0.0;
  RhymeKind kind = RhymeKind::Vertical;
};

/// Phonemes from the stressed vowel to the end of the word.
std::string rhyme_tail(const PhoneticWord& w);

double rhyme_score(const PhoneticWord& a, const PhoneticWord& b, const RhymeWeights& weights = {});

struct RhymeFeatures {
  double rs = 0.0;
  double leo = 0.0;
};

/// Vertical pairs compare each line's final word with the previous line's,
/// the first line wrapping to the last; horizontal pairs compare the word
/// before the main caesura with the final word.
RhymeFeatures poem_rhyme_features(const std::vector<ScannedCouplet>& couplets, const RhymeWeights& weights = {});

/// Throws DataError naming `poem_label` when no couplet is scannable.
PoeticFeatureVector extract_features(const std::vector<ScannedCouplet>& couplets, std::size_t line_count,
                                     std::string_view poem_label, const RhymeWeights& weights = {});

/// Word index ending at the main caesura, or npos if the line has none.
std::size_t main_caesura_word(const ScannedLine& line);

struct PoemAnalysis {
  PoemId id;
  std::size_t line_count = 0;
  std::vector<ScannedCouplet> couplets;
  std::size_t unscannable_lines = 0;
  std::size_t scannable_couplets = 0;
  PoeticFeatureVector features;
};

PoemAnalysis analyze_poem(const Poem& poem, const MacronLexicon* lexicon = nullptr,
                          const RhymeWeights& weights = {});

}  // namespace elegy
