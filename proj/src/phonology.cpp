#include "elegy/phonology.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "elegy/corpus.hpp"
#include "elegy/error.hpp"
#include "syllable_stream.hpp"

namespace elegy {

namespace {

// Words in which eu / ui / ei are diphthongs; elsewhere the pair is two syllables.
const std::set<std::string, std::less<>> kDiphthongWords = {
    "heu", "eheu", "seu", "ceu", "neu", "kui", "huik", "hei", "ei", "dein", "deinde",
};

// Forms of eo (and the interjection io) whose initial i is vocalic.
const std::set<std::string, std::less<>> kVocalicInitialI = {
    "ii",   "iit",   "iisse", "iissem", "iissent", "iere", "ierat", "ierant",
    "ieram", "ieras", "ierunt", "iens",  "io",
};

constexpr std::array<std::string_view, 6> kUPrefixes = {"ad", "kon", "in", "ob", "sub", "per"};
constexpr std::array<std::string_view, 8> kIPrefixes = {"ab", "ad", "kon", "in", "ob", "sub", "dis", "per"};

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

bool latin_letter(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

bool ends_vowelish(std::string_view w) {
  if (w.empty()) return false;
  if (is_vowel(w.back())) return true;
  return w.size() >= 2 && w.back() == 'm' && is_vowel(w[w.size() - 2]);
}

bool starts_vowelish(std::string_view w) {
  if (w.empty()) return false;
  if (is_vowel(w.front())) return true;
  return w.size() >= 2 && w.front() == 'h' && is_vowel(w[1]);
}

std::string strip_marker(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '_') out.push_back(c);
  }
  return out;
}

}  // namespace

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

char weight_code(Weight w) {
  switch (w) {
    case Weight::Light: return 'L';
    case Weight::Heavy: return 'H';
    case Weight::Anceps: return 'A';
  }
  return '?';
}

bool diphthong_at(std::string_view p, std::size_t i) {
  if (i + 1 >= p.size()) return false;
  const char a = p[i];
  const char b = p[i + 1];
  if (a == 'a' && (b == 'e' || b == 'u')) return true;
  if (a == 'o' && b == 'e') {
    // poeta, poema: hiatus
    return !(i + 2 < p.size() && (p[i + 2] == 't' || p[i + 2] == 'm') && i >= 1 && p[i - 1] == 'p');
  }
  if (a == 'e' && b == 'u' && i == 0 && i + 2 < p.size() && is_consonant(p[i + 2]) && p[i + 2] != 'n') {
    return true;  // Greek Eu- (Eurus, Europa); eunt, eundem stay disyllabic
  }
  if ((a == 'e' && b == 'u') || (a == 'u' && b == 'i') || (a == 'e' && b == 'i')) {
    return kDiphthongWords.contains(strip_marker(p));
  }
  return false;
}

std::string transcribe_word(std::string_view word) {
  std::string s(word);
  // Digraphs first, then single letters.
  replace_all(s, "qu", "kw");
  replace_all(s, "ph", "p");
  replace_all(s, "th", "t");
  replace_all(s, "ch", "k");
  replace_all(s, "gn", "nj");
  replace_all(s, "c", "k");
  replace_all(s, "x", "ks");
  replace_all(s, "v", "w");

  auto vowel_at = [&](std::size_t i) { return i < s.size() && is_vowel(s[i]); };

  // Word-initial consonantal i (iam, iuuenis), and after a prefix (adiuuo, coniunx).
  if (s.size() >= 2 && s[0] == 'i' && vowel_at(1) && !kVocalicInitialI.contains(s)) s[0] = 'j';
  for (auto prefix : kIPrefixes) {
    const auto n = prefix.size();
    if (starts_with(s, prefix) && s.size() > n + 1 && s[n] == 'i') {
      const char next = s[n + 1];
      if (next == 'a' || next == 'e' || next == 'o' || next == 'u') s[n] = 'j';
    }
  }

  // Consonantal u.
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 'u' || !vowel_at(i + 1)) continue;
    const char next = s[i + 1];
    bool consonantal = false;
    if (i == 0) {
      consonantal = true;
    } else if (s[i - 1] == 'g' && i >= 2 && s[i - 2] == 'n') {
      consonantal = true;  // lingua, sanguis
    } else if (is_vowel(s[i - 1])) {
      consonantal = true;  // noua, breue, auis
    } else if ((s[i - 1] == 'l' || s[i - 1] == 'r') && i >= 2 && is_vowel(s[i - 2]) && next != 'i' &&
               next != 'y') {
      consonantal = true;  // silua, parua, seruus
    } else if (s[i - 1] == 's') {
      const auto rest = std::string_view(s).substr(i + 1, 2);
      consonantal = rest == "ad" || rest == "aw" || rest == "au" || rest == "es" || rest == "et";
    }
    if (!consonantal) {
      for (auto prefix : kUPrefixes) {
        if (i == prefix.size() && starts_with(s, prefix)) consonantal = true;
      }
    }
    if (consonantal) s[i] = 'w';
  }

  // Intervocalic i (maior, eius, Troia).
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == 'i' && is_vowel(s[i - 1]) && is_vowel(s[i + 1])) s[i] = 'j';
  }
  return s;
}

Transcription transcribe_checked(std::string_view line) {
  Transcription result;
  std::vector<std::string> tokens;
  {
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    std::string flagged;
    for (char c : tok) {
      if (!latin_letter(c)) flagged.push_back(c);
    }
    if (!flagged.empty()) result.flagged.push_back(tok);

    const std::string word = transcribe_word(tok);
    if ((word == "est" || word == "es") && !out.empty() && out.back().find('_') == std::string::npos &&
        ends_vowelish(out.back())) {
      out.back() += "_" + word.substr(1);
      continue;
    }
    out.push_back(word);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result.text.push_back(' ');
    result.text += out[i];
  }
  return result;
}

std::string transcribe(std::string_view line) { return transcribe_checked(line).text; }

// --- macron lexicon -------------------------------------------------------

MacronLexicon MacronLexicon::parse(std::string_view text) {
  MacronLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("macron lexicon line " + std::to_string(lineno) + ": expected word<TAB>pattern");
    }
    std::vector<Weight> pattern;
    for (char c : line.substr(tab + 1)) {
      switch (c) {
        case 'H': case 'h': case '-': pattern.push_back(Weight::Heavy); break;
        case 'L': case 'l': case 'u': pattern.push_back(Weight::Light); break;
        case 'A': case 'a': case 'x': pattern.push_back(Weight::Anceps); break;
        case ' ': case '.': break;
        default:
          throw DataError("macron lexicon line " + std::to_string(lineno) + ": bad pattern symbol '" +
                          std::string(1, c) + "'");
      }
    }
    lex.add(transcribe_word(normalize_line(line.substr(0, tab))), std::move(pattern));
  }
  return lex;
}

MacronLexicon MacronLexicon::read(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read macron lexicon: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void MacronLexicon::add(std::string word, std::vector<Weight> pattern) {
  entries_[std::move(word)] = std::move(pattern);
}

const std::vector<Weight>* MacronLexicon::find(std::string_view w) const {
  const auto it = entries_.find(w);
  return it == entries_.end() ? nullptr : &it->second;
}

// --- syllables ------------------------------------------------------------

namespace detail {

bool is_stop(char c) { return c == 'b' || c == 'p' || c == 'd' || c == 't' || c == 'g' || c == 'k' || c == 'f'; }
bool is_liquid(char c) { return c == 'l' || c == 'r'; }

void mark_nuclei(std::string_view p, std::vector<StreamChar>& out, std::size_t word) {
  const std::size_t base = out.size();
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back({p[i], word});
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!is_vowel(p[i])) continue;
    out[base + i].nucleus_start = true;
    if (diphthong_at(p, i)) {
      out[base + i + 1].nucleus_cont = true;
      ++i;
    }
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const bool vowel_before = out[base + i - 1].nucleus_start || out[base + i - 1].nucleus_cont;
    const bool vowel_after = out[base + i + 1].nucleus_start;
    if ((p[i] == 'j' || p[i] == 'z') && vowel_before && vowel_after) out[base + i].geminate = true;
  }
}

std::vector<StreamChar> word_stream(std::string_view phonemes, std::size_t word) {
  std::vector<StreamChar> s;
  mark_nuclei(phonemes, s, word);
  return s;
}

std::vector<RawSyllable> split_syllables(const std::vector<StreamChar>& s) {
  std::vector<std::pair<std::size_t, std::size_t>> nuclei;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].nucleus_start) continue;
    std::size_t e = i + 1;
    if (e < s.size() && s[e].nucleus_cont) ++e;
    nuclei.emplace_back(i, e);
  }
  std::vector<RawSyllable> out;
  if (nuclei.empty()) {
    RawSyllable r;
    r.end = s.size();
    r.word = s.empty() ? 0 : s.front().word;
    r.degenerate = true;
    out.push_back(r);
    return out;
  }
  std::size_t begin = 0;
  for (std::size_t k = 0; k < nuclei.size(); ++k) {
    const auto [nb, ne] = nuclei[k];
    RawSyllable r;
    r.begin = begin;
    r.nucleus_begin = nb;
    r.nucleus_end = ne;
    r.word = s[nb].word;
    r.diphthong = ne - nb == 2;
    std::size_t split = s.size();
    if (k + 1 < nuclei.size()) {
      const std::size_t next = nuclei[k + 1].first;
      std::vector<std::size_t> real;
      for (std::size_t i = ne; i < next; ++i) {
        if (s[i].c != 'h') real.push_back(i);
      }
      if (real.size() <= 1) {
        split = ne;
        if (real.size() == 1 && s[real[0]].geminate) r.before_geminate = true;
      } else {
        const std::size_t a = real[real.size() - 2];
        const std::size_t b = real.back();
        const bool same_word = s[a].word == s[b].word;
        if (same_word && is_stop(s[a].c) && is_liquid(s[b].c)) {
          split = a;
          r.before_mute_liquid = real.size() == 2;
        } else if (same_word && (s[a].c == 'k' || s[a].c == 'g') && s[b].c == 'w') {
          split = a;
        } else {
          split = b;
        }
      }
    }
    r.end = split;
    for (std::size_t i = ne; i < split; ++i) {
      if (s[i].c != 'h') r.closed = true;
    }
    out.push_back(r);
    begin = split;
  }
  return out;
}

}  // namespace detail

PhoneticWord make_word(std::string_view transcribed) {
  PhoneticWord w;
  w.prodelided = transcribed.find('_') != std::string_view::npos;
  w.phonemes = strip_marker(transcribed);
  return w;
}

PhoneticWord syllabify(PhoneticWord word, const MacronLexicon* lexicon) {
  const auto stream = detail::word_stream(word.phonemes, 0);
  const auto raw = detail::split_syllables(stream);
  word.syllables.clear();
  word.quantity.assign(raw.size(), Weight::Anceps);
  word.degenerate = raw.size() == 1 && raw.front().degenerate;
  const std::vector<Weight>* quantities = lexicon ? lexicon->find(word.phonemes) : nullptr;
  if (quantities && quantities->size() != raw.size()) quantities = nullptr;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& r = raw[k];
    Syllable syl;
    const std::string_view p = word.phonemes;
    if (r.degenerate) {
      syl.onset = word.phonemes;
      syl.weight = Weight::Anceps;
      word.syllables.push_back(syl);
      continue;
    }
    syl.onset = std::string(p.substr(r.begin, r.nucleus_begin - r.begin));
    syl.nucleus = std::string(p.substr(r.nucleus_begin, r.nucleus_end - r.nucleus_begin));
    syl.coda = std::string(p.substr(r.nucleus_end, r.end - r.nucleus_end));
    if (r.diphthong || r.closed || r.before_geminate) {
      syl.weight = Weight::Heavy;
    } else {
      syl.weight = Weight::Anceps;
      if (quantities) syl.weight = (*quantities)[k];
    }
    if (quantities) word.quantity[k] = (*quantities)[k];
    word.syllables.push_back(syl);
  }
  word.stress = assign_stress(word);
  return word;
}

std::optional<std::size_t> assign_stress(const PhoneticWord& word) {
  const std::size_t n = word.syllables.size();
  if (n == 0 || word.degenerate) return std::nullopt;
  if (n <= 2) return 0;
  return word.syllables[n - 2].weight == Weight::Heavy ? n - 2 : n - 3;
}

bool PhoneticLine::elided_at(std::size_t boundary) const {
  return std::find(elisions.begin(), elisions.end(), boundary) != elisions.end();
}

PhoneticLine detect_elisions(PhoneticLine line) {
  line.elisions.clear();
  line.prodelisions.clear();
  for (std::size_t i = 0; i < line.words.size(); ++i) {
    if (line.words[i].prodelided) line.prodelisions.push_back(i);
  }
  for (std::size_t i = 0; i + 1 < line.words.size(); ++i) {
    const auto& a = line.words[i];
    const auto& b = line.words[i + 1];
    if (a.degenerate || b.degenerate || a.prodelided) continue;
    if (ends_vowelish(a.phonemes) && starts_vowelish(b.phonemes)) line.elisions.push_back(i);
  }
  return line;
}

PhoneticLine analyze_line(std::string_view transcribed, const MacronLexicon* lexicon) {
  PhoneticLine line;
  std::istringstream in{std::string(transcribed)};
  std::string tok;
  while (in >> tok) line.words.push_back(syllabify(make_word(tok), lexicon));
  return detect_elisions(std::move(line));
}

}  // namespace elegy
