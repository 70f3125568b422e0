#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elegy {

enum class Weight { Light, Heavy, Anceps };

char weight_code(Weight w);  // 'L', 'H', 'A'

struct Syllable {
  std::string onset;
  std::string nucleus;
  std::string coda;
  Weight weight = Weight::Anceps;

  std::string text() const { return onset + nucleus + coda; }
};

/// A transcribed word with its syllable structure.
///
/// `phonemes` is the transcription with any prodelision marker removed, so
/// "inspekta_st" is stored as "inspektast" with `prodelided` set. The
/// syllables concatenate to `phonemes`.
struct PhoneticWord {
  std::string phonemes;
  std::vector<Syllable> syllables;
  std::vector<Weight> quantity;  // vowel length per syllable from the lexicon, Anceps if unknown
  std::optional<std::size_t> stress;
  bool prodelided = false;
  bool degenerate = false;  // no vowel: a single syllable with empty nucleus

  std::size_t syllable_count() const { return syllables.size(); }
};

struct PhoneticLine {
  std::vector<PhoneticWord> words;
  std::vector<std::size_t> elisions;     // boundary i: word i elides into word i+1
  std::vector<std::size_t> prodelisions; // word i absorbed a following est/es

  bool elided_at(std::size_t boundary) const;
};

struct Transcription {
  std::string text;
  std::vector<std::string> flagged;  // non-Latin characters passed through unchanged
};

/// Rule-based phonetic transcription of one normalized lowercase line.
///
/// Rule order (digraphs before single letters):
///   qu -> kw, ph -> p, th -> t, ch -> k, gn -> nj, c -> k, x -> ks,
///   v -> w, consonantal u -> w, consonantal i -> j,
///   then est/es after a vowel or vowel+m is joined to the host as "_st"/"_s".
/// Geminates are kept. Idempotent on its own output.
Transcription transcribe_checked(std::string_view line);
std::string transcribe(std::string_view line);

/// Transcription of a single word without the cross-word prodelision step.
std::string transcribe_word(std::string_view word);

/// Optional per-word vowel-quantity overrides loaded from
/// `word<TAB>pattern` lines; the pattern has one symbol per syllable:
/// H or '-' (long), L or 'u' (short), A or 'x' (unknown).
class MacronLexicon {
 public:
  static MacronLexicon read(const std::filesystem::path& file);
  static MacronLexicon parse(std::string_view text);

  void add(std::string word, std::vector<Weight> pattern);
  const std::vector<Weight>* find(std::string_view transcribed_word) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::vector<Weight>, std::less<>> entries_;
};

/// Builds a word from transcribed text ("_" marks prodelision).
PhoneticWord make_word(std::string_view transcribed);

/// Maximal-onset syllabification with weights. Legal word-internal onsets are a
/// single consonant, stop+liquid, or kw/gw; 'h' never makes position. A syllable
/// is heavy if its nucleus is a diphthong or it is closed (an intervocalic j or
/// a z closes the preceding syllable); the syllable before a stop+liquid onset
/// is anceps; other open syllables are anceps unless the lexicon resolves them.
PhoneticWord syllabify(PhoneticWord word, const MacronLexicon* lexicon = nullptr);

/// Penult rule: monosyllables and disyllables stress the first syllable;
/// longer words stress the penult if heavy, else the antepenult (an anceps
/// penult counts as light until scansion resolves it).
std::optional<std::size_t> assign_stress(const PhoneticWord& word);

/// Marks elision where a word ends in a vowel or vowel+m and the next starts
/// with a vowel or h+vowel; prodelisions are the words carrying a joined est/es.
PhoneticLine detect_elisions(PhoneticLine line);

/// Transcribed text -> syllabified, stressed, elision-marked line.
PhoneticLine analyze_line(std::string_view transcribed, const MacronLexicon* lexicon = nullptr);

// Character classes over the transcription alphabet.
bool is_vowel(char c);
bool is_consonant(char c);

/// True when `phonemes` treats the vowel pair at position i as a diphthong.
bool diphthong_at(std::string_view phonemes, std::size_t i);

}  // namespace elegy
