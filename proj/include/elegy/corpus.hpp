#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace elegy {

struct PoemId {
  std::string author;
  std::string work;
  std::string index;  // e.g. "Am. 2.18", "Ep. 15"

  std::string label() const { return work + " " + index; }
  auto operator<=>(const PoemId&) const = default;
};

struct Poem {
  PoemId id;
  std::vector<std::string> lines;  // normalized orthographic text

  std::size_t line_count() const { return lines.size(); }
  // Elegiac couplets give an even count; odd poems are kept but reported.
  bool odd_length() const { return lines.size() % 2 != 0; }
};

struct ManifestEntry {
  std::filesystem::path path;
  PoemId id;
};

/// Tab-separated manifest: `path<TAB>author<TAB>work<TAB>index`, one poem per
/// line. Blank lines and lines starting with '#' are ignored; relative paths
/// resolve against the manifest's directory.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::size_t filter_min_lines = 20;

  static CorpusManifest read(const std::filesystem::path& file);
  static CorpusManifest parse(std::string_view text, const std::filesystem::path& base_dir);
};

struct WorkSummary {
  std::string author;
  std::string work;
  std::size_t poems = 0;
  std::size_t min_lines = 0;
  std::size_t max_lines = 0;
  std::size_t total_lines = 0;
};

struct CorpusSummary {
  std::vector<WorkSummary> works;  // in order of first appearance
  std::size_t poems = 0;
  std::size_t total_lines = 0;
  std::vector<PoemId> odd_length;
};

struct Corpus {
  std::vector<Poem> poems;

  CorpusSummary summary() const;
  std::size_t total_lines() const;
  const Poem* find(const PoemId& id) const;
};

/// Lowercases, folds accented vowels to their base letter, and strips
/// punctuation, digits and brackets. Consonantal u/v and i/j are left alone.
/// Characters outside Latin script are kept so transcription can flag them.
std::string normalize_line(std::string_view raw);

/// Splits a text file into normalized, non-empty verse lines.
std::vector<std::string> read_poem_lines(const std::filesystem::path& file);

/// Throws DataError for a missing file (naming the path) or a duplicate id.
Corpus load_corpus(const CorpusManifest& manifest);

struct FilterResult {
  Corpus corpus;
  std::vector<PoemId> eliminated;
};

FilterResult filter_by_length(const Corpus& corpus, std::size_t min_lines);

}  // namespace elegy
