#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "elegy/corpus.hpp"
#include "elegy/error.hpp"

using namespace elegy;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("elegy_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  void write(const std::string& file, const std::string& text) const { std::ofstream(path / file) << text; }
};

std::string lines(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "arma uirumque cano\n";
  return s;
}

}  // namespace

TEST_CASE("normalization") {
  CHECK(normalize_line("Ecquid, ut inspecta est, studiosae littera dextrae?") ==
        "ecquid ut inspecta est studiosae littera dextrae");
  CHECK(normalize_line("  Āră  [uirum] 12; \xC3\xA6quor ") == "ara uirum aequor");
  CHECK(normalize_line("uix-que") == "uix que");
  CHECK(normalize_line("\xCE\xB1 beta") == "\xCE\xB1 beta");  // Greek alpha kept for flagging
  CHECK(normalize_line("") == "");
}

TEST_CASE("empty manifest gives an empty corpus") {
  const auto m = CorpusManifest::parse("# nothing here\n\n", ".");
  CHECK(m.entries.empty());
  const auto c = load_corpus(m);
  CHECK(c.poems.empty());
  CHECK(c.total_lines() == 0);
}

TEST_CASE("three synthetic poems") {
  TempDir d("three");
  for (int i = 1; i <= 3; ++i) d.write("p" + std::to_string(i) + ".txt", lines(4));
  d.write("manifest.tsv",
          "p1.txt\tOvid\tAmores\tAm. 1.1\np2.txt\tOvid\tAmores\tAm. 1.2\np3.txt\tTibullus\tElegies\tTib. 1.1\n");
  const auto c = load_corpus(CorpusManifest::read(d.path / "manifest.tsv"));
  CHECK(c.poems.size() == 3);
  CHECK(c.total_lines() == 12);
  const auto s = c.summary();
  REQUIRE(s.works.size() == 2);
  CHECK(s.works[0].work == "Amores");
  CHECK(s.works[0].poems == 2);
  CHECK(s.works[1].min_lines == 4);
  CHECK(c.find(PoemId{"Ovid", "Amores", "Am. 1.2"}) != nullptr);
}

TEST_CASE("manifest and load errors") {
  TempDir d("errors");
  d.write("a.txt", lines(2));
  CHECK_THROWS_AS(CorpusManifest::parse("a.txt\tOvid\tAmores\n", d.path), DataError);
  CHECK_THROWS_AS(CorpusManifest::parse("a.txt\tOvid\t\tAm. 1\n", d.path), DataError);
  const auto missing = CorpusManifest::parse("nope.txt\tOvid\tAmores\tAm. 1\n", d.path);
  try {
    load_corpus(missing);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("nope.txt") != std::string::npos);
  }
  const auto dup = CorpusManifest::parse("a.txt\tOvid\tAmores\tAm. 1\na.txt\tOvid\tAmores\tAm. 1\n", d.path);
  CHECK_THROWS_AS(load_corpus(dup), DataError);
  CHECK_THROWS_AS(CorpusManifest::read(d.path / "absent.tsv"), DataError);
}

TEST_CASE("odd-length poems are flagged, not rejected") {
  TempDir d("odd");
  d.write("a.txt", lines(5));
  const auto c = load_corpus(CorpusManifest::parse("a.txt\tOvid\tAmores\tAm. 1\n", d.path));
  CHECK(c.poems[0].odd_length());
  CHECK(c.summary().odd_length.size() == 1);
}

TEST_CASE("length filter") {
  Corpus c;
  for (std::size_t n : {6u, 20u, 30u}) c.poems.push_back({PoemId{"A", "W", std::to_string(n)}, std::vector<std::string>(n, "x")});
  const auto r = filter_by_length(c, 20);
  CHECK(r.corpus.poems.size() == 2);
  REQUIRE(r.eliminated.size() == 1);
  CHECK(r.eliminated[0].index == "6");
  CHECK(filter_by_length(c, 0).corpus.poems.size() == 3);
  // monotone in the threshold
  std::size_t prev = 4;
  for (std::size_t m = 0; m < 40; m += 3) {
    const auto kept = filter_by_length(c, m).corpus.poems.size();
    CHECK(kept <= prev);
    prev = kept;
  }
}
