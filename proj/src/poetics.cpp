#include "elegy/poetics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "elegy/error.hpp"

namespace elegy {

namespace {

std::array<std::string, kPoeticFeatureCount> build_names() {
  std::array<std::string, kPoeticFeatureCount> names;
  std::size_t k = 0;
  auto family = [&](char meter, std::size_t from, std::size_t to, const char* code) {
    for (std::size_t n = from; n <= to; ++n) names[k++] = std::string(1, meter) + std::to_string(n) + code;
  };
  family('H', 1, 4, "SP");
  family('H', 1, 6, "CF");
  family('H', 1, 5, "DI");
  family('H', 1, 5, "SC");
  family('H', 1, 5, "WC");
  family('P', 1, 2, "SP");
  family('P', 1, 4, "CF");
  family('P', 1, 1, "DI");
  family('P', 1, 2, "SC");
  family('P', 1, 4, "WC");
  for (const char* s : {"ELC", "LEN", "RS", "LEO", "PFSD"}) names[k++] = s;
  return names;
}

std::string vowels_of(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (is_vowel(c)) out.push_back(c);
  }
  return out;
}

const PhoneticWord* final_word(const ScannedLine& line) {
  return line.words.empty() ? nullptr : &line.words.back();
}

}  // namespace

const std::array<std::string, kPoeticFeatureCount>& poetic_feature_names() {
  static const auto names = build_names();
  return names;
}

std::size_t poetic_feature_index(std::string_view name) {
  const auto& names = poetic_feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw ParameterError("unknown poetic feature: " + std::string(name));
}

RhymeWeights RhymeWeights::parse(std::string_view text) {
  RhymeWeights w;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    double value = 0.0;
    if (!(fields >> key) || key.front() == '#') continue;
    if (!(fields >> value)) throw DataError("rhyme weights: missing value for '" + key + "'");
    if (value < 0.0 || value > 1.0) throw DataError("rhyme weights: '" + key + "' must lie in [0, 1]");
    if (key == "identical") {
      w.identical = value;
    } else if (key == "skeleton") {
      w.skeleton = value;
    } else if (key == "nucleus") {
      w.nucleus = value;
    } else {
      throw DataError("rhyme weights: unknown tier '" + key + "'");
    }
  }
  return w;
}

RhymeWeights RhymeWeights::read(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read rhyme weights: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string rhyme_tail(const PhoneticWord& w) {
  if (!w.stress || w.degenerate) return {};
  std::string tail = w.syllables[*w.stress].nucleus + w.syllables[*w.stress].coda;
  for (std::size_t i = *w.stress + 1; i < w.syllables.size(); ++i) tail += w.syllables[i].text();
  return tail;
}

double rhyme_score(const PhoneticWord& a, const PhoneticWord& b, const RhymeWeights& weights) {
  const std::string ta = rhyme_tail(a);
  const std::string tb = rhyme_tail(b);
  if (ta.empty() || tb.empty()) return 0.0;
  if (ta == tb) return weights.identical;
  if (vowels_of(ta) == vowels_of(tb)) return weights.skeleton;
  if (a.syllables.back().nucleus == b.syllables.back().nucleus) return weights.nucleus;
  return 0.0;
}

std::size_t main_caesura_word(const ScannedLine& line) {
  if (line.unscannable) return std::numeric_limits<std::size_t>::max();
  if (line.meter == Meter::Pentameter) {
    if (!line.midline_break) return std::numeric_limits<std::size_t>::max();
    return line.syllables[line.slots[2].first_syllable].word;
  }
  for (std::size_t foot : {3, 4, 2}) {
    if (line.has_caesura(foot, CaesuraKind::Strong)) {
      return line.syllables[line.slots[line.slot_of_foot(foot)].first_syllable].word;
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

RhymeFeatures poem_rhyme_features(const std::vector<ScannedCouplet>& couplets, const RhymeWeights& weights) {
  std::vector<const ScannedLine*> lines;
  for (const auto& c : couplets) {
    if (!c.scannable()) continue;
    lines.push_back(&c.hexameter);
    lines.push_back(&c.pentameter);
  }
  RhymeFeatures f;
  if (lines.empty()) return f;
  double total = 0.0;
  double leonine = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const ScannedLine& line = *lines[i];
    const ScannedLine& prev = *lines[(i + lines.size() - 1) % lines.size()];
    const PhoneticWord* end = final_word(line);
    const PhoneticWord* prev_end = final_word(prev);
    if (!end) continue;
    if (prev_end && lines.size() > 1) total += rhyme_score(*end, *prev_end, weights);
    const std::size_t cw = main_caesura_word(line);
    if (cw < line.words.size() && cw + 1 != line.words.size()) {
      const double s = rhyme_score(line.words[cw], *end, weights);
      total += s;
      if (s >= 0.5) leonine += 1.0;
    }
  }
  f.rs = total / static_cast<double>(lines.size());
  f.leo = leonine / static_cast<double>(lines.size());
  return f;
}

PoeticFeatureVector extract_features(const std::vector<ScannedCouplet>& couplets, std::size_t line_count,
                                     std::string_view poem_label, const RhymeWeights& weights) {
  PoeticFeatureVector v;
  auto& x = v.values;
  std::size_t scannable = 0;
  std::size_t elisions = 0;
  std::size_t scannable_lines = 0;
  std::vector<double> final_lengths;

  for (const auto& c : couplets) {
    for (const ScannedLine* l : {&c.hexameter, &c.pentameter}) {
      if (l->unscannable) continue;
      ++scannable_lines;
      elisions += l->elision_count;
    }
    if (!c.scannable()) continue;
    ++scannable;
    const ScannedLine& h = c.hexameter;
    const ScannedLine& p = c.pentameter;
    std::size_t k = 0;
    for (std::size_t n = 1; n <= 4; ++n) x[k++] += h.feet[n - 1] == FootType::Spondee;
    const auto hcf = detect_ictus_conflicts(h);
    for (std::size_t n = 1; n <= 6; ++n) x[k++] += hcf[n - 1];
    for (std::size_t n = 1; n <= 5; ++n) x[k++] += h.has_diaeresis(n);
    for (std::size_t n = 1; n <= 5; ++n) x[k++] += h.has_caesura(n, CaesuraKind::Strong);
    for (std::size_t n = 1; n <= 5; ++n) x[k++] += h.has_caesura(n, CaesuraKind::Weak);
    for (std::size_t n = 1; n <= 2; ++n) x[k++] += p.feet[n - 1] == FootType::Spondee;
    const auto pcf = detect_ictus_conflicts(p);
    for (std::size_t n = 1; n <= 4; ++n) x[k++] += pcf[n - 1];
    x[k++] += p.has_diaeresis(1);
    for (std::size_t n = 1; n <= 2; ++n) x[k++] += p.has_caesura(n, CaesuraKind::Strong);
    for (std::size_t n = 1; n <= 4; ++n) x[k++] += p.has_caesura(n, CaesuraKind::Weak);
    final_lengths.push_back(static_cast<double>(pentameter_final_word_length(p)));
  }
  if (scannable == 0) {
    throw DataError("poem " + std::string(poem_label) + " has no scannable couplet");
  }
  const std::size_t positional = kPoeticFeatureCount - 5;
  for (std::size_t i = 0; i < positional; ++i) x[i] /= static_cast<double>(scannable);

  double mean = 0.0;
  for (double f : final_lengths) mean += f;
  mean /= static_cast<double>(final_lengths.size());
  double var = 0.0;
  for (double f : final_lengths) var += (f - mean) * (f - mean);
  var /= static_cast<double>(final_lengths.size());

  const auto rhyme = poem_rhyme_features(couplets, weights);
  x[positional + 0] = static_cast<double>(elisions) / static_cast<double>(scannable_lines);
  x[positional + 1] = static_cast<double>(line_count);
  x[positional + 2] = rhyme.rs;
  x[positional + 3] = rhyme.leo;
  x[positional + 4] = std::sqrt(var);
  return v;
}

PoemAnalysis analyze_poem(const Poem& poem, const MacronLexicon* lexicon, const RhymeWeights& weights) {
  PoemAnalysis a;
  a.id = poem.id;
  a.line_count = poem.line_count();
  a.couplets = scan_poem(poem.lines, lexicon);
  for (const auto& c : a.couplets) {
    a.unscannable_lines += c.hexameter.unscannable + c.pentameter.unscannable;
    a.scannable_couplets += c.scannable();
  }
  a.features = extract_features(a.couplets, a.line_count, poem.id.label(), weights);
  return a;
}

}  // namespace elegy
