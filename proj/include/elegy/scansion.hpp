#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "elegy/phonology.hpp"

namespace elegy {

enum class Meter { Hexameter, Pentameter };
enum class FootType { Dactyl, Spondee, Half };
enum class CaesuraKind { Strong, Weak };

char foot_code(FootType t);  // 'D', 'S', 'H'
const char* meter_name(Meter m);

struct Caesura {
  std::size_t foot = 0;  // 1-based full-foot number
  CaesuraKind kind = CaesuraKind::Strong;
  bool operator==(const Caesura&) const = default;
};

/// One metrical slot: a full foot, or a pentameter half-foot (number 0).
struct FootSlot {
  std::size_t number = 0;
  FootType type = FootType::Dactyl;
  std::size_t first_syllable = 0;
  std::size_t syllable_count = 0;
};

struct MetricalSyllable {
  std::string text;
  std::size_t word = 0;           // word holding the nucleus
  std::size_t word_syllable = 0;  // index within that word
  Weight prior = Weight::Anceps;  // weight before the parse
  bool is_long = false;           // length assigned by the parse
  std::size_t slot = 0;
};

struct ScannedLine {
  Meter meter = Meter::Hexameter;
  std::vector<FootType> feet;  // hexameter 6, pentameter 4 (third and fourth always dactyls)
  std::vector<FootSlot> slots;
  std::vector<MetricalSyllable> syllables;
  std::vector<std::size_t> syllable_to_foot;  // slot index per syllable
  std::vector<std::size_t> ictus_positions;   // first syllable of each slot
  std::vector<Caesura> caesurae;
  std::vector<std::size_t> diaereses;  // full-foot numbers, line end excluded
  bool midline_break = false;
  std::size_t elision_count = 0;
  std::size_t prodelision_count = 0;
  std::size_t hiatus_count = 0;
  std::size_t final_word_syllables = 0;
  bool ambiguous = false;
  bool unscannable = false;
  bool spondaic_fifth = false;
  bool midline_break_missing = false;
  std::size_t parse_count = 0;
  int cost = 0;
  std::vector<PhoneticWord> words;  // stress re-resolved after the parse

  std::string pattern() const;  // e.g. "DDSSDS", "DDDD"
  bool word_break_after(std::size_t syllable) const;
  bool has_caesura(std::size_t foot, CaesuraKind kind) const;
  bool has_diaeresis(std::size_t foot) const;
  /// Slot index of full foot n (1-based).
  std::size_t slot_of_foot(std::size_t n) const;
};

struct ScannedCouplet {
  ScannedLine hexameter;
  ScannedLine pentameter;

  bool scannable() const { return !hexameter.unscannable && !pentameter.unscannable; }
};

/// Metrical parse of one analysed line.
///
/// Candidates are the template's foot patterns in dactyl-first order from foot 1.
/// A candidate fails if a heavy syllable falls in a short position or a light
/// one in a long position. Among survivors the lowest total vowel-length hint
/// cost wins (final -e short, final -o long, vowel before vowel short, ...), the
/// first in order on ties. If nothing survives, hiatus is tried at the fewest
/// elision boundaries possible, and for the pentameter the mid-line break is
/// finally relaxed.
ScannedLine scan_line(const PhoneticLine& line, Meter meter, const MacronLexicon* lexicon = nullptr);

/// Convenience: normalized orthographic text -> scanned line.
ScannedLine scan_text(std::string_view text, Meter meter, const MacronLexicon* lexicon = nullptr);

/// Per full foot: true when the ictus syllable is not the stressed syllable of its word.
std::vector<bool> detect_ictus_conflicts(const ScannedLine& line);

std::size_t pentameter_final_word_length(const ScannedLine& line);

/// Pairs lines into couplets (hexameter first); a trailing odd line is dropped.
std::vector<ScannedCouplet> scan_poem(const std::vector<std::string>& lines,
                                      const MacronLexicon* lexicon = nullptr);

}  // namespace elegy
