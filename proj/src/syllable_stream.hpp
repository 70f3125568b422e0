#pragma once

// Shared syllable splitter for word-level syllabification and the metrical
// (line-level) stream used by the scanner.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace elegy::detail {

struct StreamChar {
  char c = 0;
  std::size_t word = 0;
  bool nucleus_start = false;
  bool nucleus_cont = false;  // second letter of a diphthong
  bool geminate = false;      // consonant counts double (intervocalic j, z, hoc)
};

struct RawSyllable {
  std::size_t begin = 0;  // char range [begin, end)
  std::size_t end = 0;
  std::size_t nucleus_begin = 0;
  std::size_t nucleus_end = 0;
  std::size_t word = 0;  // word of the nucleus
  bool diphthong = false;
  bool closed = false;        // non-h consonant after the nucleus
  bool before_mute_liquid = false;
  bool before_geminate = false;
  bool degenerate = false;
};

/// Marks nucleus letters of one word; diphthongs per the closed lists.
void mark_nuclei(std::string_view phonemes, std::vector<StreamChar>& out, std::size_t word);

/// Appends a word's characters (already nucleus-marked) and flags intervocalic j.
std::vector<StreamChar> word_stream(std::string_view phonemes, std::size_t word);

std::vector<RawSyllable> split_syllables(const std::vector<StreamChar>& s);

bool is_stop(char c);
bool is_liquid(char c);

}  // namespace elegy::detail
