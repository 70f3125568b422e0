#include "elegy/scansion.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "syllable_stream.hpp"

namespace elegy {

namespace {

enum class Pos { Long, Short, Anceps };

struct Hint {
  bool prefer_long = false;
  int strength = 0;  // 0 = no preference
};

constexpr int kStrong = 3;
constexpr int kMedium = 2;
constexpr int kWeak = 1;
constexpr int kSpondaicFifthCost = 2;
constexpr int kHiatusCost = 4;
constexpr std::size_t kMaxHiatusBoundaries = 4;

const std::set<std::string, std::less<>> kShortFinalI = {"mihi", "tibi", "sibi", "ibi", "ubi", "nisi", "kwasi"};
const std::set<std::string, std::less<>> kShortFinalO = {"ego", "modo", "duo", "kito", "homo", "neskio"};
// Genitives in -ius whose i may stand long before a vowel.
const std::set<std::string, std::less<>> kFreeIus = {
    "illius", "istius", "ipsius", "unius", "totius", "nullius", "solius", "ullius", "utrius", "alius",
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// A line's syllables for one choice of elided boundaries.
struct Stream {
  std::vector<detail::StreamChar> chars;
  std::vector<detail::RawSyllable> raw;
  std::vector<MetricalSyllable> syllables;
  std::vector<Hint> hints;
  bool degenerate = false;
};

Stream build_stream(const PhoneticLine& line, const std::vector<bool>& elide) {
  Stream st;
  for (std::size_t w = 0; w < line.words.size(); ++w) {
    const auto& word = line.words[w];
    auto chars = detail::word_stream(word.phonemes, w);
    if (word.phonemes == "hok" && !chars.empty()) chars.back().geminate = true;
    if (elide[w]) {
      std::size_t last = chars.size();
      for (std::size_t i = chars.size(); i-- > 0;) {
        if (chars[i].nucleus_start) {
          last = i;
          break;
        }
      }
      chars.resize(last);
    }
    st.chars.insert(st.chars.end(), chars.begin(), chars.end());
  }
  st.raw = detail::split_syllables(st.chars);
  if (st.raw.size() == 1 && st.raw.front().degenerate) {
    st.degenerate = true;
    return st;
  }

  std::vector<std::size_t> seen(line.words.size(), 0);
  for (std::size_t k = 0; k < st.raw.size(); ++k) {
    const auto& r = st.raw[k];
    MetricalSyllable m;
    for (std::size_t i = r.begin; i < r.end; ++i) m.text.push_back(st.chars[i].c);
    m.word = r.word;
    m.word_syllable = seen[r.word]++;
    const auto& word = line.words[r.word];
    if (r.diphthong || r.closed || r.before_geminate) {
      m.prior = Weight::Heavy;
    } else if (m.word_syllable < word.quantity.size()) {
      m.prior = word.quantity[m.word_syllable];
    }
    st.syllables.push_back(m);
  }

  st.hints.assign(st.syllables.size(), Hint{});
  for (std::size_t k = 0; k < st.syllables.size(); ++k) {
    const auto& m = st.syllables[k];
    const auto& r = st.raw[k];
    const auto& word = line.words[m.word];
    const std::string& p = word.phonemes;
    const std::size_t n = word.syllable_count();
    auto set = [&](bool prefer_long, int strength) { st.hints[k] = Hint{prefer_long, strength}; };

    if (k + 1 < st.raw.size() && st.raw[k + 1].word == m.word && !r.diphthong && !r.closed) {
      bool consonant_between = false;
      for (std::size_t i = r.nucleus_end; i < st.raw[k + 1].nucleus_begin; ++i) {
        if (st.chars[i].c != 'h') consonant_between = true;
      }
      if (!consonant_between && !kFreeIus.contains(p)) set(false, kStrong);
    }

    if (n >= 2 && m.word_syllable == n - 2) {
      if (ends_with(p, "orum") || ends_with(p, "arum")) set(true, kMedium);
      if (ends_with(p, "ibus")) set(false, kMedium);
    }

    const bool last = m.word_syllable + 1 == n && !elide[m.word] && !word.prodelided;
    if (!last || p.empty()) continue;
    const char fin = p.back();
    if (is_vowel(fin)) {
      if (n == 1) {
        set(true, kStrong);
      } else if (fin == 'e') {
        set(false, kMedium);
      } else if (fin == 'i') {
        if (!kShortFinalI.contains(p)) set(true, kMedium);
      } else if (fin == 'o') {
        if (!kShortFinalO.contains(p)) set(true, kWeak);
      } else if (fin == 'u') {
        set(true, kMedium);
      }
      continue;
    }
    if (r.closed) continue;
    if (p == "non" || p == "sik") {
      set(true, kMedium);
    } else if (p == "in" || p == "nek") {
      set(false, kMedium);
    } else if (ends_with(p, "us")) {
      set(false, kMedium);
    } else if (ends_with(p, "os") || ends_with(p, "as")) {
      set(true, kMedium);
    } else if (ends_with(p, "es")) {
      set(true, kWeak);
    } else if (fin == 't' || fin == 'd' || fin == 'b') {
      set(false, kMedium);
    } else if (fin == 'r') {
      set(false, kWeak);
    }
  }
  return st;
}

struct Template {
  std::vector<FootType> feet;  // variable feet only
  std::vector<Pos> positions;
  std::vector<std::size_t> slot_of_position;
  std::vector<FootSlot> slots;
  std::size_t midline_position = 0;  // pentameter half-foot position
};

Template make_template(Meter meter, const std::vector<FootType>& variable) {
  Template t;
  t.feet = variable;
  auto add_foot = [&](std::size_t number, FootType type) {
    FootSlot slot{number, type, t.positions.size(), 0};
    const std::size_t index = t.slots.size();
    auto push = [&](Pos p) {
      t.positions.push_back(p);
      t.slot_of_position.push_back(index);
      ++slot.syllable_count;
    };
    if (type == FootType::Dactyl) {
      push(Pos::Long), push(Pos::Short), push(Pos::Short);
    } else if (type == FootType::Spondee) {
      push(Pos::Long), push(Pos::Long);
    } else {
      push(number == 0 && t.slots.size() == 5 ? Pos::Anceps : Pos::Long);
    }
    t.slots.push_back(slot);
  };
  if (meter == Meter::Hexameter) {
    for (std::size_t f = 0; f < 5; ++f) add_foot(f + 1, variable[f]);
    FootSlot last{6, FootType::Spondee, t.positions.size(), 2};
    t.positions.push_back(Pos::Long);
    t.positions.push_back(Pos::Anceps);
    t.slot_of_position.push_back(5);
    t.slot_of_position.push_back(5);
    t.slots.push_back(last);
  } else {
    add_foot(1, variable[0]);
    add_foot(2, variable[1]);
    t.midline_position = t.positions.size();
    add_foot(0, FootType::Half);
    add_foot(3, FootType::Dactyl);
    add_foot(4, FootType::Dactyl);
    add_foot(0, FootType::Half);
  }
  return t;
}

std::vector<Template> all_templates(Meter meter) {
  const std::size_t variable = meter == Meter::Hexameter ? 5 : 2;
  std::vector<Template> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << variable); ++mask) {
    std::vector<FootType> feet(variable);
    // Foot 1 is the most significant choice; dactyl before spondee.
    for (std::size_t f = 0; f < variable; ++f) {
      feet[f] = (mask >> (variable - 1 - f)) & 1 ? FootType::Spondee : FootType::Dactyl;
    }
    out.push_back(make_template(meter, feet));
  }
  return out;
}

bool break_after(const std::vector<MetricalSyllable>& syl, std::size_t s) {
  return s + 1 < syl.size() && syl[s].word != syl[s + 1].word;
}

// Hard check plus soft cost; returns -1 when the template does not fit.
int evaluate(const Template& t, const Stream& st, Meter meter, bool need_break) {
  if (t.positions.size() != st.syllables.size()) return -1;
  int cost = 0;
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    const Weight w = st.syllables[i].prior;
    const Pos p = t.positions[i];
    if (p == Pos::Short && w == Weight::Heavy) return -1;
    if (p == Pos::Long && w == Weight::Light) return -1;
    if (w != Weight::Anceps || p == Pos::Anceps) continue;
    const Hint& h = st.hints[i];
    if (h.strength > 0 && h.prefer_long != (p == Pos::Long)) cost += h.strength;
  }
  if (meter == Meter::Pentameter && need_break && !break_after(st.syllables, t.midline_position)) return -1;
  if (meter == Meter::Hexameter && t.feet[4] == FootType::Spondee) cost += kSpondaicFifthCost;
  return cost;
}

// Subsets of `boundaries` with exactly k members, in lexicographic order.
void subsets(const std::vector<std::size_t>& boundaries, std::size_t k, std::size_t from,
             std::vector<std::size_t>& current, std::vector<std::vector<std::size_t>>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = from; i < boundaries.size(); ++i) {
    current.push_back(boundaries[i]);
    subsets(boundaries, k, i + 1, current, out);
    current.pop_back();
  }
}

void fill_structure(ScannedLine& out, const Template& t) {
  const std::size_t n = out.syllables.size();
  out.slots = t.slots;
  out.syllable_to_foot = t.slot_of_position;
  for (std::size_t i = 0; i < n; ++i) {
    out.syllables[i].slot = t.slot_of_position[i];
    const Pos p = t.positions[i];
    out.syllables[i].is_long = p == Pos::Long || (p == Pos::Anceps && out.syllables[i].prior != Weight::Light);
  }
  out.feet.clear();
  for (const auto& slot : out.slots) {
    out.ictus_positions.push_back(slot.first_syllable);
    if (slot.number > 0) out.feet.push_back(slot.type);
  }
  for (const auto& slot : out.slots) {
    if (slot.number == 0) continue;
    const std::size_t first = slot.first_syllable;
    const std::size_t last = first + slot.syllable_count - 1;
    const bool strong = slot.syllable_count > 1 && out.word_break_after(first);
    if (strong) out.caesurae.push_back({slot.number, CaesuraKind::Strong});
    if (!strong && slot.type == FootType::Dactyl && out.word_break_after(first + 1)) {
      out.caesurae.push_back({slot.number, CaesuraKind::Weak});
    }
    if (out.word_break_after(last)) out.diaereses.push_back(slot.number);
  }
  if (out.meter == Meter::Pentameter) {
    out.midline_break = out.word_break_after(t.midline_position);
    out.midline_break_missing = !out.midline_break;
  }
  out.spondaic_fifth = out.meter == Meter::Hexameter && out.feet[4] == FootType::Spondee;

  // Re-run stress with the parse's penult lengths.
  for (std::size_t w = 0; w < out.words.size(); ++w) {
    auto& word = out.words[w];
    const std::size_t count = word.syllable_count();
    if (count < 3 || word.degenerate) continue;
    for (const auto& s : out.syllables) {
      if (s.word == w && s.word_syllable == count - 2 && word.syllables[count - 2].weight == Weight::Anceps) {
        word.syllables[count - 2].weight = s.is_long ? Weight::Heavy : Weight::Light;
        word.stress = assign_stress(word);
      }
    }
  }
}

}  // namespace

char foot_code(FootType t) {
  switch (t) {
    case FootType::Dactyl: return 'D';
    case FootType::Spondee: return 'S';
    case FootType::Half: return 'H';
  }
  return '?';
}

const char* meter_name(Meter m) { return m == Meter::Hexameter ? "hexameter" : "pentameter"; }

std::string ScannedLine::pattern() const {
  std::string s;
  for (auto f : feet) s.push_back(foot_code(f));
  return s;
}

bool ScannedLine::word_break_after(std::size_t s) const { return break_after(syllables, s); }

bool ScannedLine::has_caesura(std::size_t foot, CaesuraKind kind) const {
  return std::find(caesurae.begin(), caesurae.end(), Caesura{foot, kind}) != caesurae.end();
}

bool ScannedLine::has_diaeresis(std::size_t foot) const {
  return std::find(diaereses.begin(), diaereses.end(), foot) != diaereses.end();
}

std::size_t ScannedLine::slot_of_foot(std::size_t n) const {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].number == n) return i;
  }
  return slots.size();
}

ScannedLine scan_line(const PhoneticLine& line, Meter meter, const MacronLexicon* lexicon) {
  (void)lexicon;  // quantities arrive through the words' syllabification
  ScannedLine out;
  out.meter = meter;
  out.words = line.words;
  out.prodelision_count = line.prodelisions.size();
  if (!line.words.empty()) out.final_word_syllables = line.words.back().syllable_count();

  const auto templates = all_templates(meter);
  const std::size_t hiatus_limit = std::min(line.elisions.size(), kMaxHiatusBoundaries);

  for (int relax = 0; relax < (meter == Meter::Pentameter ? 2 : 1); ++relax) {
    for (std::size_t k = 0; k <= hiatus_limit; ++k) {
      std::vector<std::vector<std::size_t>> kept;
      std::vector<std::size_t> current;
      subsets(line.elisions, k, 0, current, kept);
      for (const auto& hiatus : kept) {
        std::vector<bool> elide(line.words.size(), false);
        for (auto b : line.elisions) elide[b] = true;
        for (auto b : hiatus) elide[b] = false;
        const Stream st = build_stream(line, elide);
        if (st.degenerate) continue;

        int best_cost = std::numeric_limits<int>::max();
        const Template* best = nullptr;
        std::size_t count = 0;
        for (const auto& t : templates) {
          const int c = evaluate(t, st, meter, relax == 0);
          if (c < 0) continue;
          ++count;
          if (c < best_cost) {
            best_cost = c;
            best = &t;
          }
        }
        if (!best) continue;
        out.syllables = st.syllables;
        out.parse_count = count;
        out.ambiguous = count > 1;
        out.hiatus_count = k;
        out.elision_count = line.elisions.size() - k;
        out.cost = best_cost + static_cast<int>(k) * kHiatusCost;
        fill_structure(out, *best);
        return out;
      }
    }
  }

  out.unscannable = true;
  out.elision_count = line.elisions.size();
  std::vector<bool> elide(line.words.size(), false);
  for (auto b : line.elisions) elide[b] = true;
  const Stream st = build_stream(line, elide);
  if (!st.degenerate) out.syllables = st.syllables;
  return out;
}

ScannedLine scan_text(std::string_view text, Meter meter, const MacronLexicon* lexicon) {
  return scan_line(analyze_line(transcribe(text), lexicon), meter, lexicon);
}

std::vector<bool> detect_ictus_conflicts(const ScannedLine& line) {
  std::vector<bool> flags;
  if (line.unscannable) return flags;
  for (std::size_t i = 0; i < line.slots.size(); ++i) {
    if (line.slots[i].number == 0) continue;
    const auto& syl = line.syllables[line.ictus_positions[i]];
    const auto& word = line.words[syl.word];
    const bool conflict = word.syllable_count() > 1 && word.stress && *word.stress != syl.word_syllable;
    flags.push_back(conflict);
  }
  return flags;
}

std::size_t pentameter_final_word_length(const ScannedLine& line) { return line.final_word_syllables; }

std::vector<ScannedCouplet> scan_poem(const std::vector<std::string>& lines, const MacronLexicon* lexicon) {
  std::vector<ScannedCouplet> out;
  for (std::size_t i = 0; i + 1 < lines.size(); i += 2) {
    out.push_back({scan_text(lines[i], Meter::Hexameter, lexicon), scan_text(lines[i + 1], Meter::Pentameter, lexicon)});
  }
  return out;
}

}  // namespace elegy
