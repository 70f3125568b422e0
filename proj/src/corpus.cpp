#include "elegy/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "elegy/error.hpp"

namespace elegy {

namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(trim(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

// Base letter for accented vowels of Latin-1 Supplement and Latin Extended-A
// (macrons, breves, diaereses, acutes, graves, circumflexes). Zero if none.
char fold_accent(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xC5) return 'a';
  if (cp >= 0xE0 && cp <= 0xE5) return 'a';
  if (cp >= 0xC8 && cp <= 0xCB) return 'e';
  if (cp >= 0xE8 && cp <= 0xEB) return 'e';
  if (cp >= 0xCC && cp <= 0xCF) return 'i';
  if (cp >= 0xEC && cp <= 0xEF) return 'i';
  if ((cp >= 0xD2 && cp <= 0xD6) || cp == 0xD8) return 'o';
  if ((cp >= 0xF2 && cp <= 0xF6) || cp == 0xF8) return 'o';
  if (cp >= 0xD9 && cp <= 0xDC) return 'u';
  if (cp >= 0xF9 && cp <= 0xFC) return 'u';
  if (cp == 0xDD || cp == 0xFD || cp == 0xFF || cp == 0x178) return 'y';
  if (cp == 0xC6 || cp == 0xE6) return '\x01';  // ae ligature, expanded by caller
  if (cp == 0x152 || cp == 0x153) return '\x02';  // oe ligature
  if (cp >= 0x100 && cp <= 0x105) return 'a';
  if (cp >= 0x112 && cp <= 0x11B) return 'e';
  if (cp >= 0x128 && cp <= 0x12F) return 'i';
  if (cp >= 0x14C && cp <= 0x151) return 'o';
  if (cp >= 0x168 && cp <= 0x173) return 'u';
  if (cp == 0x232 || cp == 0x233) return 'y';
  return 0;
}

// Decodes one UTF-8 sequence starting at s[i]; advances i. Invalid bytes are
// returned as themselves (one byte).
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1) >= 0) {
    const char32_t cp = ((b0 & 0x1F) << 6) | cont(1);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) >= 0 && cont(2) >= 0) {
    const char32_t cp = ((b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) >= 0 && cont(2) >= 0 && cont(3) >= 0) {
    const char32_t cp = ((b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
    i += 4;
    return cp;
  }
  ++i;
  return b0;
}

bool is_dropped_symbol(char32_t cp) {
  // General punctuation, quotation marks, daggers, brackets, dashes.
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  return cp == 0xA0 || cp == 0xAB || cp == 0xBB || cp == 0xB7 || cp == 0xA7 || cp == 0xB6;
}

}  // namespace

std::string normalize_line(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(piece);
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::size_t start = i;
    const char32_t cp = decode_utf8(raw, i);
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') {
        emit(std::string(1, static_cast<char>(c - 'A' + 'a')));
      } else if (c >= 'a' && c <= 'z') {
        emit(std::string(1, c));
      } else if (c == ' ' || c == '\t' || c == '-') {
        pending_space = true;
      }
      // other ASCII (punctuation, digits, brackets) is dropped
      continue;
    }
    if (const char folded = fold_accent(cp)) {
      if (folded == '\x01') {
        emit("ae");
      } else if (folded == '\x02') {
        emit("oe");
      } else {
        emit(std::string(1, folded));
      }
      continue;
    }
    if (is_dropped_symbol(cp)) {
      if (cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200A)) pending_space = true;
      continue;
    }
    emit(raw.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> read_poem_lines(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read poem file: " + file.string());
  std::vector<std::string> lines;
  std::string raw;
  bool first = true;
  while (std::getline(in, raw)) {
    if (first && raw.size() >= 3 && raw.compare(0, 3, "\xEF\xBB\xBF") == 0) raw.erase(0, 3);
    first = false;
    auto norm = normalize_line(raw);
    if (!norm.empty()) lines.push_back(std::move(norm));
  }
  return lines;
}

CorpusManifest CorpusManifest::parse(std::string_view text, const std::filesystem::path& base_dir) {
  CorpusManifest manifest;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw DataError("manifest line " + std::to_string(lineno) +
                      ": expected 4 tab-separated fields (path, author, work, index), got " +
                      std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw DataError("manifest line " + std::to_string(lineno) + ": empty field");
    }
    std::filesystem::path p(fields[0]);
    if (p.is_relative()) p = base_dir / p;
    manifest.entries.push_back({p, PoemId{fields[1], fields[2], fields[3]}});
  }
  return manifest;
}

CorpusManifest CorpusManifest::read(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read manifest: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), file.parent_path());
}

Corpus load_corpus(const CorpusManifest& manifest) {
  Corpus corpus;
  std::set<PoemId> seen;
  for (const auto& entry : manifest.entries) {
    if (!seen.insert(entry.id).second) {
      throw DataError("duplicate poem id: " + entry.id.author + " / " + entry.id.label());
    }
    if (!std::filesystem::exists(entry.path)) {
      throw DataError("missing poem file: " + entry.path.string());
    }
    Poem poem{entry.id, read_poem_lines(entry.path)};
    if (poem.lines.empty()) throw DataError("poem file has no verse lines: " + entry.path.string());
    corpus.poems.push_back(std::move(poem));
  }
  return corpus;
}

std::size_t Corpus::total_lines() const {
  std::size_t n = 0;
  for (const auto& p : poems) n += p.line_count();
  return n;
}

const Poem* Corpus::find(const PoemId& id) const {
  for (const auto& p : poems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

CorpusSummary Corpus::summary() const {
  CorpusSummary s;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  for (const auto& p : poems) {
    const auto key = std::make_pair(p.id.author, p.id.work);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, s.works.size()).first;
      s.works.push_back({p.id.author, p.id.work, 0, p.line_count(), p.line_count(), 0});
    }
    auto& w = s.works[it->second];
    ++w.poems;
    w.min_lines = std::min(w.min_lines, p.line_count());
    w.max_lines = std::max(w.max_lines, p.line_count());
    w.total_lines += p.line_count();
    s.total_lines += p.line_count();
    if (p.odd_length()) s.odd_length.push_back(p.id);
  }
  s.poems = poems.size();
  return s;
}

FilterResult filter_by_length(const Corpus& corpus, std::size_t min_lines) {
  FilterResult r;
  for (const auto& p : corpus.poems) {
    if (p.line_count() >= min_lines) {
      r.corpus.poems.push_back(p);
    } else {
      r.eliminated.push_back(p.id);
    }
  }
  return r;
}

}  // namespace elegy
