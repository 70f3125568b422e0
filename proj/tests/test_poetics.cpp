#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "elegy/error.hpp"
#include "elegy/poetics.hpp"

using namespace elegy;

namespace {

const std::vector<std::string> kSappho = {
    "ecquid ut inspecta est studiosae litera dextrae",
    "protinus est oculis cognita nostra tuis",
    "an nisi legisses auctoris nomina sapphus",
    "hoc breue nescires unde ueniret opus",
};

PoeticFeatureVector features_of(const std::vector<std::string>& lines) {
  return extract_features(scan_poem(lines), lines.size(), "fixture");
}

PhoneticWord stressed(std::string_view phonemes, std::size_t stress) {
  auto w = syllabify(make_word(phonemes));
  w.stress = stress;
  return w;
}

}  // namespace

TEST_CASE("feature enumeration") {
  const auto& names = poetic_feature_names();
  CHECK(names.size() == 43);
  CHECK(names.front() == "H1SP");
  CHECK(names[4] == "H1CF");
  CHECK(names[25] == "P1SP");
  CHECK(names[37] == "P4WC");
  CHECK(names[38] == "ELC");
  CHECK(names.back() == "PFSD");
  CHECK(poetic_feature_index("P4WC") == 37);
  CHECK_THROWS_AS(poetic_feature_index("H9XX"), ParameterError);
}

TEST_CASE("proportions lie in [0,1] and scalars are sane") {
  const auto v = features_of(kSappho);
  for (std::size_t i = 0; i < 38; ++i) {
    CHECK(v[i] >= 0.0);
    CHECK(v[i] <= 1.0);
  }
  CHECK(v.get("LEN") == 4.0);
  CHECK(v.get("ELC") >= 0.0);
  CHECK(v.get("RS") >= 0.0);
  CHECK(v.get("LEO") >= 0.0);
  // both pentameters end in a disyllable
  CHECK(v.get("PFSD") == 0.0);
}

TEST_CASE("spondee proportion is a direct ratio") {
  // second couplet opens with a spondee (ut te | postremo), the first with a dactyl
  const std::vector<std::string> lines = {
      "arma graui numero uiolentaque bella parabam",
      "edere materia conueniente modis",
      "ut te postremo donarem munere mortis",
      "hoc tibi de getico litore mittit opus",
  };
  const auto v = features_of(lines);
  CHECK(v.get("H1SP") == doctest::Approx(0.5));
  CHECK(v.get("H2SP") == doctest::Approx(0.5));
}

TEST_CASE("poem without elisions has ELC zero") {
  const std::vector<std::string> lines = {
      "arma graui numero uiolentaque bella parabam",
      "edere materia conueniente modis",
  };
  CHECK(features_of(lines).get("ELC") == 0.0);
}

TEST_CASE("PFSD is the population standard deviation") {
  const std::vector<std::string> lines = {
      "arma graui numero uiolentaque bella parabam",
      "contactum nullis ante cupidinibus",  // 5-syllable ending
      "ut te postremo donarem munere mortis",
      "hoc tibi de getico litore mittit opus",  // 2-syllable ending
  };
  CHECK(features_of(lines).get("PFSD") == doctest::Approx(1.5));
}

TEST_CASE("doubling a poem leaves every feature but LEN unchanged") {
  std::vector<std::string> doubled = kSappho;
  doubled.insert(doubled.end(), kSappho.begin(), kSappho.end());
  const auto a = features_of(kSappho);
  const auto b = features_of(doubled);
  const auto len = poetic_feature_index("LEN");
  for (std::size_t i = 0; i < kPoeticFeatureCount; ++i) {
    if (i == len) {
      CHECK(b[i] == 2 * a[i]);
    } else {
      CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("poem with no scannable couplet is an error naming it") {
  const std::vector<std::string> lines = {"et et et", "et et"};
  try {
    extract_features(scan_poem(lines), 2, "Am. 9.99");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("Am. 9.99") != std::string::npos);
  }
}

TEST_CASE("rhyme tiers") {
  const auto amorem = stressed("amorem", 1);
  const auto honorem = stressed("honorem", 1);
  CHECK(rhyme_tail(amorem) == "orem");
  CHECK(rhyme_score(amorem, honorem) == 1.0);
  CHECK(rhyme_score(amorem, amorem) == 1.0);
  // same vowels, different consonants
  CHECK(rhyme_score(stressed("amores", 1), stressed("dolorem", 1)) == 0.5);
  // only the final nucleus agrees
  CHECK(rhyme_score(stressed("kano", 0), stressed("dominos", 0)) == 0.25);
  CHECK(rhyme_score(stressed("arma", 0), stressed("kum", 0)) == 0.0);
}

TEST_CASE("rhyme score is symmetric") {
  const std::vector<std::string> words = {"amorem", "puellae", "kano", "tuis", "opus", "sappus", "nostra", "dekstrae"};
  for (const auto& a : words) {
    for (const auto& b : words) {
      const auto wa = syllabify(make_word(a));
      const auto wb = syllabify(make_word(b));
      CHECK(rhyme_score(wa, wb) == rhyme_score(wb, wa));
    }
  }
}

TEST_CASE("custom rhyme weights") {
  const auto w = RhymeWeights::parse("# tiers\nidentical 0.9\nskeleton 0.4\nnucleus 0.1\n");
  CHECK(w.identical == 0.9);
  CHECK(rhyme_score(stressed("amores", 1), stressed("dolorem", 1), w) == 0.4);
  CHECK_THROWS_AS(RhymeWeights::parse("bogus 0.3\n"), DataError);
  CHECK_THROWS_AS(RhymeWeights::parse("identical 2\n"), DataError);
}

TEST_CASE("leonine couplet scores LEO = 1") {
  const std::vector<std::string> lines = {
      "tempora longa tenent et tempora longa tenent",
      "tempora longa tenent tempora longa tenent",
  };
  const auto couplets = scan_poem(lines);
  REQUIRE(couplets.size() == 1);
  REQUIRE(couplets[0].scannable());
  const auto f = poem_rhyme_features(couplets);
  CHECK(f.leo == 1.0);
  // two identical vertical pairs plus two identical horizontal pairs over two lines
  CHECK(f.rs == 2.0);
}

TEST_CASE("no sonic correspondence gives RS = LEO = 0") {
  const std::vector<std::string> lines = {
      "arma graui numero uiolentaque bella parabam",
      "edere materia conueniente modis",
  };
  const auto couplets = scan_poem(lines);
  REQUIRE(couplets[0].scannable());
  const auto f = poem_rhyme_features(couplets);
  // parabam / modis share nothing; caesura words numero and materia neither
  CHECK(f.leo == 0.0);
  CHECK(f.rs == 0.0);
}
