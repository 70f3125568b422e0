#include "elegy/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "elegy/cluster.hpp"
#include "elegy/error.hpp"
#include "elegy/learn.hpp"
#include "elegy/outlier.hpp"
#include "elegy/pipeline.hpp"
#include "elegy/scansion.hpp"
#include "elegy/svg.hpp"
#include "elegy/temporal.hpp"

namespace elegy::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

using Row = std::vector<std::string>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  // global
  std::string manifest;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::size_t min_lines = 20;
  std::string lexicon;
  std::string rhyme_weights;
  unsigned threads = 0;
  // transcribe / scan
  std::vector<std::string> texts;
  std::string meter = "elegiac";
  // features
  bool poetic = false;
  bool lsa = false;
  std::size_t dims = 50;
  // classify
  std::string features = "lsa";
  std::string label = "work";
  std::vector<std::string> models{"nearest_centroid"};
  std::size_t trials = 100;
  double test_fraction = 0.2;
  std::vector<std::string> exclude_works;
  std::string curve;
  // outliers
  std::string reference = "Ovid";
  double confidence = 0.99;
  std::size_t top_k = 5;
  // cluster
  std::string method = "bct";
  std::string cluster_features = "poetic";
  std::size_t subsets = 500;
  std::size_t subset_size = 15;
  std::size_t k = 3;
  std::string metric = "cosine";
  double threshold = 0.05;
  std::size_t fr_iterations = 500;
  double perplexity = 10.0;
  std::size_t tsne_iterations = 1000;
  // temporal
  std::string early = "Amores";
  std::string late = "Ex Ponto";
  std::string target = "Heroides";
  double span = 0.75;
  std::size_t replicates = 200;
};

class Run {
 public:
  Run(std::string subcommand, Options o, std::ostream& out, std::ostream& err)
      : sub_(std::move(subcommand)), o_(std::move(o)), out_(out), err_(err) {}

  int execute();

 private:
  // corpus and caches
  void load();
  const CorpusAnalysis& analysis();
  const LsaModel& lsa();
  Eigen::MatrixXd matrix(const std::string& kind);

  // stages
  void corpus_table();
  void transcribe();
  void scan();
  void features();
  void classify();
  void outliers();
  void cluster(const std::string& method);
  void temporal();
  void report();

  void write_table(const std::string& name, const Row& header, const std::vector<Row>& rows);
  void write_text(const std::string& name, const std::string& text);
  void warn(const std::string& message);
  void stage(const std::string& name, const std::function<void()>& body);
  json parameters() const;
  void write_manifest();

  std::string sub_;
  Options o_;
  std::ostream& out_;
  std::ostream& err_;
  fs::path manifest_path_;
  Corpus corpus_;
  std::vector<PoemId> eliminated_;
  std::optional<MacronLexicon> lexicon_;
  RhymeWeights rhyme_;
  std::optional<CorpusAnalysis> analysis_;
  std::optional<LsaModel> lsa_;
  std::vector<std::string> warnings_;
  std::vector<std::string> outputs_;
  json results_ = json::object();
  bool wrote_ = false;
};

void Run::warn(const std::string& message) {
  warnings_.push_back(message);
  err_ << "warning: " << message << '\n';
}

void Run::write_table(const std::string& name, const Row& header, const std::vector<Row>& rows) {
  std::ostringstream s;
  s << join(header, "\t") << '\n';
  for (const auto& r : rows) s << join(r, "\t") << '\n';
  write_text(name, s.str());
}

void Run::write_text(const std::string& name, const std::string& text) {
  fs::create_directories(o_.out);
  const fs::path p = fs::path(o_.out) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write " + p.string());
  f << text;
  if (std::find(outputs_.begin(), outputs_.end(), name) == outputs_.end()) outputs_.push_back(name);
  wrote_ = true;
}

void Run::load() {
  std::string m = o_.manifest;
  if (m.empty()) {
    if (const char* env = std::getenv("ELEGY_CORPUS")) m = env;
  }
  if (m.empty()) throw ParameterError("no corpus: pass --manifest or set ELEGY_CORPUS");
  manifest_path_ = m;
  const auto manifest = CorpusManifest::read(manifest_path_);
  auto filtered = filter_by_length(load_corpus(manifest), o_.min_lines);
  corpus_ = std::move(filtered.corpus);
  eliminated_ = std::move(filtered.eliminated);
  if (corpus_.poems.empty()) throw DataError("no poems left after the length filter");
  for (const auto& id : corpus_.summary().odd_length) warn("odd line count: " + id.label());
  if (!o_.lexicon.empty()) lexicon_ = MacronLexicon::read(o_.lexicon);
  if (!o_.rhyme_weights.empty()) rhyme_ = RhymeWeights::read(o_.rhyme_weights);
}

const CorpusAnalysis& Run::analysis() {
  if (!analysis_) {
    analysis_ = analyze_corpus(corpus_, lexicon_ ? &*lexicon_ : nullptr, rhyme_, o_.threads);
    for (const auto& f : analysis_->failures) warn("poem skipped: " + f);
    if (analysis_->analyses.empty()) throw DataError("no poem could be analysed");
  }
  return *analysis_;
}

const LsaModel& Run::lsa() {
  if (!lsa_) {
    lsa_ = lsa_features(analysis().poems, o_.dims);
    for (const auto& w : lsa_->warnings) warn("lsa: " + w);
  }
  return *lsa_;
}

Eigen::MatrixXd Run::matrix(const std::string& kind) {
  if (kind == "poetic") return zscale(poetic_matrix(analysis()));
  if (kind == "lsa") return lsa().rows;
  throw ParameterError("features must be 'poetic' or 'lsa'");
}

void Run::corpus_table() {
  std::vector<Row> rows;
  for (const auto& w : corpus_.summary().works) {
    rows.push_back({w.author, w.work, std::to_string(w.poems), std::to_string(w.min_lines),
                    std::to_string(w.max_lines), std::to_string(w.total_lines)});
  }
  write_table("corpus.tsv", {"author", "work", "poems", "min_lines", "max_lines", "total_lines"}, rows);
  std::vector<Row> gone;
  for (const auto& id : eliminated_) gone.push_back({id.author, id.work, id.index});
  write_table("eliminated.tsv", {"author", "work", "index"}, gone);
}

void Run::transcribe() {
  if (!o_.texts.empty()) {
    for (const auto& t : o_.texts) {
      const auto r = transcribe_checked(normalize_line(t));
      out_ << r.text << '\n';
      for (const auto& f : r.flagged) warn("non-Latin character passed through: " + f);
    }
    return;
  }
  load();
  std::vector<Row> rows;
  for (const auto& p : corpus_.poems) {
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
      const auto r = transcribe_checked(p.lines[i]);
      for (const auto& f : r.flagged) warn(p.id.label() + " line " + std::to_string(i + 1) + ": non-Latin character " + f);
      rows.push_back({p.id.label(), std::to_string(i + 1), p.lines[i], r.text});
      out_ << r.text << '\n';
    }
  }
  write_table("transcription.tsv", {"poem", "line", "text", "transcription"}, rows);
}

Row scan_record(const std::string& poem, std::size_t line, const std::string& text, const ScannedLine& s) {
  std::string lengths, caesurae, diaereses, conflicts;
  for (const auto& syl : s.syllables) lengths += syl.is_long ? '-' : 'u';
  for (const auto& c : s.caesurae) {
    caesurae += (caesurae.empty() ? "" : ",") + std::to_string(c.foot) + (c.kind == CaesuraKind::Strong ? "S" : "W");
  }
  for (auto d : s.diaereses) diaereses += (diaereses.empty() ? "" : ",") + std::to_string(d);
  std::size_t n_conf = 0;
  if (!s.unscannable) {
    for (bool c : detect_ictus_conflicts(s)) {
      conflicts += c ? 'x' : '.';
      n_conf += c;
    }
  }
  return {poem,
          std::to_string(line),
          meter_name(s.meter),
          s.unscannable ? "-" : s.pattern(),
          std::to_string(s.syllables.size()),
          s.unscannable ? "-" : lengths,
          caesurae.empty() ? "-" : caesurae,
          diaereses.empty() ? "-" : diaereses,
          conflicts.empty() ? "-" : conflicts,
          std::to_string(n_conf),
          std::to_string(s.elision_count),
          std::to_string(s.prodelision_count),
          std::to_string(s.hiatus_count),
          std::to_string(s.parse_count),
          s.ambiguous ? "1" : "0",
          s.unscannable ? "1" : "0",
          text};
}

const Row kScanHeader{"poem",      "line",      "meter",   "pattern",  "syllables",    "lengths",
                      "caesurae",  "diaereses", "ictus",   "conflicts", "elisions",    "prodelisions",
                      "hiatus",    "parses",    "ambiguous", "unscannable", "text"};

void Run::scan() {
  const MacronLexicon* lex = nullptr;
  if (!o_.texts.empty()) {
    if (!o_.lexicon.empty()) lexicon_ = MacronLexicon::read(o_.lexicon);
    lex = lexicon_ ? &*lexicon_ : nullptr;
    if (o_.meter != "elegiac" && o_.meter != "hexameter" && o_.meter != "pentameter") {
      throw ParameterError("meter must be elegiac, hexameter or pentameter");
    }
    out_ << join(kScanHeader, "\t") << '\n';
    for (std::size_t i = 0; i < o_.texts.size(); ++i) {
      const Meter m = o_.meter == "hexameter"    ? Meter::Hexameter
                      : o_.meter == "pentameter" ? Meter::Pentameter
                      : i % 2 == 0               ? Meter::Hexameter
                                                 : Meter::Pentameter;
      const auto text = normalize_line(o_.texts[i]);
      out_ << join(scan_record("-", i + 1, text, scan_text(text, m, lex)), "\t") << '\n';
    }
    return;
  }
  if (corpus_.poems.empty()) load();
  lex = lexicon_ ? &*lexicon_ : nullptr;
  std::vector<Row> rows;
  std::map<std::string, std::array<std::size_t, 3>> tally;  // lines, unscannable, ambiguous
  for (const auto& p : corpus_.poems) {
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
      const Meter m = i % 2 == 0 ? Meter::Hexameter : Meter::Pentameter;
      const auto s = scan_text(p.lines[i], m, lex);
      rows.push_back(scan_record(p.id.label(), i + 1, p.lines[i], s));
      auto& t = tally[meter_name(m)];
      ++t[0];
      t[1] += s.unscannable;
      t[2] += s.ambiguous;
    }
  }
  write_table("scan.tsv", kScanHeader, rows);
  std::vector<Row> summary;
  for (const auto& [meter, t] : tally) {
    const double rate = t[0] ? 1.0 - static_cast<double>(t[1]) / static_cast<double>(t[0]) : 0.0;
    summary.push_back({meter, std::to_string(t[0]), std::to_string(t[0] - t[1]), std::to_string(t[1]),
                       std::to_string(t[2]), fmt(rate)});
    results_["scan"][meter] = {{"lines", t[0]}, {"unscannable", t[1]}, {"scanned_rate", rate}};
  }
  write_table("scan_summary.tsv", {"meter", "lines", "scanned", "unscannable", "ambiguous", "scanned_rate"}, summary);
}

void Run::features() {
  if (corpus_.poems.empty()) load();
  const bool poetic = o_.poetic || !o_.lsa;
  const auto& a = analysis();
  if (poetic) {
    Row header{"poem", "author", "work", "lines", "scannable_couplets"};
    for (const auto& n : poetic_feature_names()) header.push_back(n);
    std::vector<Row> rows;
    for (const auto& pa : a.analyses) {
      Row r{pa.id.label(), pa.id.author, pa.id.work, std::to_string(pa.line_count), std::to_string(pa.scannable_couplets)};
      for (double v : pa.features.values) r.push_back(fmt(v));
      rows.push_back(std::move(r));
    }
    write_table("features_poetic.tsv", header, rows);
  }
  if (o_.lsa) {
    const auto& m = lsa();
    Row header{"poem", "author", "work"};
    for (Eigen::Index j = 0; j < m.rows.cols(); ++j) header.push_back("d" + std::to_string(j + 1));
    std::vector<Row> rows;
    for (std::size_t i = 0; i < a.poems.size(); ++i) {
      Row r{a.poems[i].id.label(), a.poems[i].id.author, a.poems[i].id.work};
      for (Eigen::Index j = 0; j < m.rows.cols(); ++j) r.push_back(fmt(m.rows(static_cast<Eigen::Index>(i), j)));
      rows.push_back(std::move(r));
    }
    write_table("features_lsa.tsv", header, rows);
    results_["lsa"] = {{"dims", m.rows.cols()}, {"requested_dims", m.requested_dims}};
  }
}

void Run::classify() {
  if (corpus_.poems.empty()) load();
  const auto& a = analysis();
  Eigen::MatrixXd x = matrix(o_.features);
  auto labels = a.labels(o_.label);
  auto lengths = a.line_counts();
  if (!o_.exclude_works.empty()) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < a.poems.size(); ++i) {
      const auto& w = a.poems[i].id.work;
      if (std::find(o_.exclude_works.begin(), o_.exclude_works.end(), w) == o_.exclude_works.end()) keep.push_back(i);
    }
    Eigen::MatrixXd kx(static_cast<Eigen::Index>(keep.size()), x.cols());
    std::vector<std::string> kl;
    std::vector<std::size_t> kn;
    for (std::size_t r = 0; r < keep.size(); ++r) {
      kx.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(keep[r]));
      kl.push_back(labels[keep[r]]);
      kn.push_back(lengths[keep[r]]);
    }
    x = std::move(kx);
    labels = std::move(kl);
    lengths = std::move(kn);
  }
  if (labels.empty()) throw DataError("no poems left to classify");
  const auto data = Dataset::from_labels(x, labels);
  HoldoutOptions h{o_.trials, o_.test_fraction, true, false, o_.seed};
  ClassifierOptions c;
  c.seed = o_.seed;
  std::vector<Model> models;
  for (const auto& m : o_.models) {
    if (m == "all") {
      models = all_models();
      break;
    }
    models.push_back(parse_model(m));
  }
  const std::string tag = o_.features + "_" + o_.label;
  std::vector<Row> rows;
  for (Model m : models) {
    const auto r = repeated_holdout(data, m, h, c);
    for (const auto& w : r.warnings) warn(std::string(model_name(m)) + ": " + w);
    rows.push_back({model_name(m), o_.features, o_.label, std::to_string(o_.trials), std::to_string(r.rows_used),
                    std::to_string(r.classes.size()), fmt(r.accuracy), fmt(r.macro_f1)});
    Row header{"true\\predicted"};
    for (const auto& cl : r.classes) header.push_back(cl);
    std::vector<Row> conf;
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      Row cr{r.classes[i]};
      for (std::size_t j = 0; j < r.classes.size(); ++j) {
        cr.push_back(fmt(r.confusion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
      conf.push_back(std::move(cr));
    }
    const std::string base = "confusion_" + tag + "_" + model_name(m);
    write_table(base + ".tsv", header, conf);
    write_text(base + ".svg", svg::heatmap(std::string("Confusion (%) ") + model_name(m) + ", " + o_.features +
                                               " features, " + o_.label + " labels",
                                           r.classes, r.confusion));
    results_["classify"][tag][model_name(m)] = {{"accuracy", r.accuracy}, {"macro_f1", r.macro_f1}};
  }
  write_table("classify_" + tag + ".tsv",
              {"model", "features", "label", "trials", "rows", "classes", "accuracy", "macro_f1"}, rows);

  if (!o_.curve.empty()) {
    std::vector<std::size_t> thresholds;
    for (const auto& t : split(o_.curve, ',')) thresholds.push_back(static_cast<std::size_t>(std::stoul(t)));
    const auto curves = accuracy_vs_min_length(data, lengths, models, thresholds, h, c);
    for (const auto& w : curves.warnings) warn("curve: " + w);
    std::vector<Row> crow;
    std::vector<svg::Series> series;
    for (const auto& [m, pts] : curves.curves) {
      svg::Series s{model_name(m), {}, {}};
      for (const auto& p : pts) {
        crow.push_back({model_name(m), std::to_string(p.threshold), std::to_string(p.rows), fmt(p.accuracy), fmt(p.macro_f1)});
        s.x.push_back(static_cast<double>(p.threshold));
        s.y.push_back(p.accuracy);
      }
      series.push_back(std::move(s));
    }
    write_table("accuracy_curve_" + tag + ".tsv", {"model", "min_lines", "rows", "accuracy", "macro_f1"}, crow);
    write_text("accuracy_curve_" + tag + ".svg",
               svg::line_chart({"Accuracy by minimum poem length", "minimum lines", "accuracy"}, series));
  }
}

void Run::outliers() {
  if (corpus_.poems.empty()) load();
  const auto& a = analysis();
  const Eigen::MatrixXd x = poetic_matrix(a);
  const auto works = split(o_.reference, ',');
  auto in_ref = [&](const PoemId& id) {
    return id.author == o_.reference || std::find(works.begin(), works.end(), id.work) != works.end();
  };
  std::vector<Eigen::Index> ref;
  for (std::size_t i = 0; i < a.poems.size(); ++i) {
    if (in_ref(a.poems[i].id)) ref.push_back(static_cast<Eigen::Index>(i));
  }
  if (ref.empty()) throw DataError("reference '" + o_.reference + "' matches no poem");
  Eigen::MatrixXd rx(static_cast<Eigen::Index>(ref.size()), x.cols());
  for (std::size_t r = 0; r < ref.size(); ++r) rx.row(static_cast<Eigen::Index>(r)) = x.row(ref[r]);
  const auto model = fit_style_model(rx);
  const auto& names = poetic_feature_names();
  std::vector<Row> rows;
  std::map<std::pair<std::string, std::string>, std::array<std::size_t, 2>> groups;  // poems, rejected
  for (std::size_t i = 0; i < a.poems.size(); ++i) {
    const auto& id = a.poems[i].id;
    const auto e = mahalanobis_test(model, x.row(static_cast<Eigen::Index>(i)).transpose(), o_.confidence, o_.top_k);
    std::vector<std::string> top;
    for (const auto& c : e.top) top.push_back(names[c.feature] + ":" + fmt(c.value));
    const bool member = in_ref(id);
    rows.push_back({id.label(), id.author, id.work, member ? "1" : "0", fmt(e.d2), fmt(e.p_value),
                    e.rejected ? "1" : "0", join(top, ";")});
    auto& g = groups[{member ? "reference" : "other", id.work}];
    ++g[0];
    g[1] += e.rejected;
  }
  write_table("outliers.tsv", {"poem", "author", "work", "reference", "d2", "p_value", "rejected", "top_features"}, rows);
  std::vector<Row> summary;
  for (const auto& [key, g] : groups) {
    summary.push_back({key.first, key.second, std::to_string(g[0]), std::to_string(g[1]), std::to_string(g[0] - g[1])});
  }
  write_table("outliers_summary.tsv", {"group", "work", "poems", "rejected", "accepted"}, summary);
  results_["outliers"] = {{"reference", o_.reference}, {"confidence", o_.confidence}, {"lambda", model.lambda},
                          {"condition", model.condition}, {"reference_poems", ref.size()}};
}

void Run::cluster(const std::string& method) {
  if (corpus_.poems.empty()) load();
  const auto& a = analysis();
  const Eigen::MatrixXd x = matrix(o_.cluster_features);
  Layout2D layout;
  std::vector<Edge> edges;
  if (method == "bct") {
    ConsensusOptions c;
    c.subsets = o_.subsets;
    c.subset_size = o_.subset_size;
    c.k = o_.k;
    c.metric = parse_metric(o_.metric);
    c.threshold = o_.threshold;
    c.seed = o_.seed;
    c.threads = o_.threads;
    const auto g = consensus_graph(x, c);
    FrOptions f;
    f.iterations = o_.fr_iterations;
    f.seed = o_.seed;
    layout = layout_fr(g, f);
    edges = g.edges;
    results_["cluster"]["bct"] = {{"edges", g.edges.size()}};
  } else if (method == "tsne") {
    TsneOptions t;
    t.perplexity = o_.perplexity;
    t.iterations = o_.tsne_iterations;
    t.seed = o_.seed;
    const double bound = static_cast<double>(x.rows() - 1) / 3.0;
    if (sub_ == "report" && t.perplexity >= bound) {
      t.perplexity = std::max(1.01, 0.9 * bound);
      warn("t-SNE perplexity lowered to " + fmt(t.perplexity) + " for " + std::to_string(x.rows()) + " poems");
    }
    const auto r = tsne(x, t);
    layout = r.layout;
    results_["cluster"]["tsne"] = {{"perplexity", t.perplexity}, {"kl_initial", r.kl_initial}, {"kl", r.kl}};
  } else {
    throw ParameterError("method must be 'bct' or 'tsne'");
  }
  std::vector<Row> nodes;
  std::vector<svg::Point> pts;
  for (std::size_t i = 0; i < a.poems.size(); ++i) {
    const auto& id = a.poems[i].id;
    const double px = layout.points(static_cast<Eigen::Index>(i), 0), py = layout.points(static_cast<Eigen::Index>(i), 1);
    nodes.push_back({id.label(), fmt(px), fmt(py), id.work});
    pts.push_back({px, py, id.label(), id.work});
  }
  const std::string base = "cluster_" + method;
  write_table(base + "_nodes.tsv", {"id", "x", "y", "group"}, nodes);
  std::vector<svg::Link> links;
  if (method == "bct") {
    std::vector<Row> er;
    for (const auto& e : edges) {
      er.push_back({a.poems[e.a].id.label(), a.poems[e.b].id.label(), fmt(e.weight)});
      links.push_back({e.a, e.b, e.weight});
    }
    write_table(base + "_edges.tsv", {"source", "target", "weight"}, er);
  }
  const std::string title = method == "bct" ? "Consensus graph (" + o_.cluster_features + " features)"
                                            : "t-SNE projection (" + o_.cluster_features + " features)";
  write_text(base + ".svg", svg::scatter(title, pts, links));
}

void Run::temporal() {
  if (corpus_.poems.empty()) load();
  const auto& a = analysis();
  const Eigen::MatrixXd x = matrix("poetic");
  const auto works = a.labels("work");
  std::vector<std::pair<int, std::size_t>> letters;
  for (std::size_t i = 0; i < a.poems.size(); ++i) {
    if (works[i] != o_.target) continue;
    if (const auto n = letter_number(a.poems[i].id)) {
      letters.emplace_back(*n, i);
    } else {
      warn("no letter number in '" + a.poems[i].id.index + "'; poem left out of the temporal plot");
    }
  }
  if (letters.empty()) throw DataError("target work '" + o_.target + "' has no poems");
  std::stable_sort(letters.begin(), letters.end());
  std::vector<std::size_t> targets;
  for (const auto& l : letters) targets.push_back(l.second);
  ClassifierOptions c;
  c.seed = o_.seed;
  const auto scores = temporal_scores(x, works, targets, {o_.early, o_.late}, c);
  std::vector<Row> rows;
  std::vector<double> xs, svm_y, cen_y;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    rows.push_back({a.poems[targets[i]].id.label(), std::to_string(letters[i].first), fmt(scores[i].svm_score),
                    fmt(scores[i].centroid_score)});
    xs.push_back(letters[i].first);
    svm_y.push_back(scores[i].svm_score);
    cen_y.push_back(scores[i].centroid_score);
  }
  write_table("temporal.tsv", {"poem", "letter", "svm_score", "centroid_score"}, rows);
  std::vector<double> grid;
  const double lo = xs.front(), hi = xs.back();
  for (int g = 0; g <= 40; ++g) grid.push_back(lo + (hi - lo) * g / 40.0);
  std::vector<Row> trend;
  for (const auto& [name, ys] : {std::pair{std::string("svm"), svm_y}, std::pair{std::string("centroid"), cen_y}}) {
    LoessBand band;
    if (xs.size() >= 3) {
      band = loess_band(xs, ys, grid, o_.span, o_.replicates, 0.95, o_.seed);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        trend.push_back({name, fmt(grid[g]), fmt(band.fit[g]), fmt(band.lower[g]), fmt(band.upper[g])});
      }
    } else {
      warn("fewer than 3 letters: no " + name + " trend");
    }
    std::vector<svg::Series> series{{"letters", xs, ys, true, false}};
    std::vector<svg::Band> bands;
    if (!band.fit.empty()) {
      series.push_back({"local regression", band.grid, band.fit, false, true});
      bands.push_back({band.grid, band.lower, band.upper});
    }
    const std::string ylab = name == "svm" ? "hyperplane distance (+ = " + o_.late + ")"
                                           : "centroid distance difference (+ = " + o_.late + ")";
    write_text("temporal_" + name + ".svg",
               svg::line_chart({o_.target + ": " + o_.early + " vs " + o_.late + " (" + name + ")", "letter", ylab},
                               series, bands));
  }
  write_table("temporal_trend.tsv", {"score", "x", "fit", "lower", "upper"}, trend);
}

void Run::stage(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    warn(name + " skipped: " + e.what());
  }
}

void Run::report() {
  load();
  corpus_table();
  stage("scan", [&] { scan(); });
  o_.poetic = o_.lsa = true;
  stage("features", [&] { features(); });
  for (const std::string f : {"lsa", "poetic"}) {
    stage("classify " + f, [&, f] {
      o_.features = f;
      o_.models = {"nearest_centroid"};
      o_.curve = "20,40,60,80,100";
      classify();
    });
  }
  stage("outliers", [&] { outliers(); });
  stage("cluster bct", [&] { cluster("bct"); });
  stage("cluster tsne", [&] { cluster("tsne"); });
  stage("temporal", [&] { temporal(); });
}

json Run::parameters() const {
  json p;
  p["min_lines"] = o_.min_lines;
  p["lexicon"] = o_.lexicon;
  p["rhyme_weights"] = o_.rhyme_weights;
  if (sub_ == "scan" || sub_ == "transcribe") p["meter"] = o_.meter;
  if (sub_ == "features" || sub_ == "classify" || sub_ == "cluster" || sub_ == "report") p["dims"] = o_.dims;
  if (sub_ == "classify" || sub_ == "report") {
    p["features"] = o_.features;
    p["label"] = o_.label;
    p["models"] = o_.models;
    p["trials"] = o_.trials;
    p["test_fraction"] = o_.test_fraction;
    p["exclude_works"] = o_.exclude_works;
    p["curve"] = o_.curve;
  }
  if (sub_ == "outliers" || sub_ == "report") {
    p["reference"] = o_.reference;
    p["confidence"] = o_.confidence;
    p["top_k"] = o_.top_k;
  }
  if (sub_ == "cluster" || sub_ == "report") {
    p["method"] = o_.method;
    p["cluster_features"] = o_.cluster_features;
    p["subsets"] = o_.subsets;
    p["subset_size"] = o_.subset_size;
    p["k"] = o_.k;
    p["metric"] = o_.metric;
    p["threshold"] = o_.threshold;
    p["fr_iterations"] = o_.fr_iterations;
    p["perplexity"] = o_.perplexity;
    p["tsne_iterations"] = o_.tsne_iterations;
  }
  if (sub_ == "temporal" || sub_ == "report") {
    p["early"] = o_.early;
    p["late"] = o_.late;
    p["target"] = o_.target;
    p["span"] = o_.span;
    p["replicates"] = o_.replicates;
  }
  return p;
}

void Run::write_manifest() {
  json j;
  j["tool"] = "elegy";
  j["version"] = kVersion;
  j["subcommand"] = sub_;
  j["seed"] = o_.seed;
  json inputs;
  inputs["manifest"] = manifest_path_.string();
  inputs["poems"] = corpus_.poems.size();
  inputs["lines"] = corpus_.total_lines();
  json gone = json::array();
  for (const auto& id : eliminated_) gone.push_back(id.label());
  inputs["eliminated"] = gone;
  j["inputs"] = inputs;
  j["parameters"] = parameters();
  j["versions"] = {{"elegy", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"cli11", CLI11_VERSION},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["results"] = results_;
  j["warnings"] = warnings_;
  auto outs = outputs_;
  outs.push_back("run.json");
  j["outputs"] = outs;
  write_text("run.json", j.dump(2) + "\n");
}

int Run::execute() {
  if (sub_ == "transcribe") {
    transcribe();
  } else if (sub_ == "scan") {
    scan();
  } else if (sub_ == "features") {
    features();
  } else if (sub_ == "classify") {
    classify();
  } else if (sub_ == "outliers") {
    outliers();
  } else if (sub_ == "cluster") {
    cluster(o_.method);
  } else if (sub_ == "temporal") {
    temporal();
  } else if (sub_ == "report") {
    report();
  }
  if (wrote_) write_manifest();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Stylometry of Latin elegiac poetry", "elegy"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  app.add_option("--manifest", o.manifest, "Corpus manifest (default: $ELEGY_CORPUS)");
  app.add_option("--seed", o.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--min-lines", o.min_lines, "Drop poems shorter than this")->capture_default_str();
  app.add_option("--lexicon", o.lexicon, "Macron lexicon (word<TAB>pattern)");
  app.add_option("--rhyme-weights", o.rhyme_weights, "Rhyme tier weights file");
  app.add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* tr = app.add_subcommand("transcribe", "Phonetic transcription");
  tr->add_option("text", o.texts, "Lines to transcribe (default: the corpus)");

  auto* sc = app.add_subcommand("scan", "Metrical scansion records");
  sc->add_option("text", o.texts, "Lines to scan (default: the corpus)");
  sc->add_option("--meter", o.meter, "elegiac, hexameter or pentameter")
      ->check(CLI::IsMember({"elegiac", "hexameter", "pentameter"}))
      ->capture_default_str();

  auto* fe = app.add_subcommand("features", "Poetic and LSA feature matrices");
  fe->add_flag("--poetic", o.poetic, "43 poetic features (default)");
  fe->add_flag("--lsa", o.lsa, "LSA of character n-grams");
  fe->add_option("--dims", o.dims, "LSA dimensions")->capture_default_str();

  auto* cl = app.add_subcommand("classify", "Repeated holdout classification");
  cl->add_option("--features", o.features)->check(CLI::IsMember({"lsa", "poetic"}))->capture_default_str();
  cl->add_option("--label", o.label)->check(CLI::IsMember({"work", "author"}))->capture_default_str();
  cl->add_option("--model", o.models, "nearest_centroid, knn, linear_svm, logistic or all")->capture_default_str();
  cl->add_option("--trials", o.trials)->capture_default_str();
  cl->add_option("--test-fraction", o.test_fraction)->check(CLI::Range(0.01, 0.99))->capture_default_str();
  cl->add_option("--exclude-work", o.exclude_works, "Drop a work before classifying (repeatable)");
  cl->add_option("--curve", o.curve, "Comma-separated minimum-length thresholds");
  cl->add_option("--dims", o.dims, "LSA dimensions")->capture_default_str();

  auto* ou = app.add_subcommand("outliers", "Mahalanobis test against a reference style");
  ou->add_option("--reference", o.reference, "Author, or comma-separated works")->capture_default_str();
  ou->add_option("--confidence", o.confidence)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ou->add_option("--top", o.top_k, "Contributing features listed per poem")->capture_default_str();

  auto* cu = app.add_subcommand("cluster", "Consensus graph or t-SNE projection");
  cu->add_option("--method", o.method)->check(CLI::IsMember({"bct", "tsne"}))->capture_default_str();
  cu->add_option("--features", o.cluster_features)->check(CLI::IsMember({"lsa", "poetic"}))->capture_default_str();
  cu->add_option("--subsets", o.subsets)->capture_default_str();
  cu->add_option("--subset-size", o.subset_size)->capture_default_str();
  cu->add_option("--k", o.k)->capture_default_str();
  cu->add_option("--metric", o.metric)->check(CLI::IsMember({"cosine", "euclidean"}))->capture_default_str();
  cu->add_option("--threshold", o.threshold)->capture_default_str();
  cu->add_option("--fr-iterations", o.fr_iterations)->capture_default_str();
  cu->add_option("--perplexity", o.perplexity)->capture_default_str();
  cu->add_option("--tsne-iterations", o.tsne_iterations)->capture_default_str();
  cu->add_option("--dims", o.dims, "LSA dimensions")->capture_default_str();

  auto* te = app.add_subcommand("temporal", "Early/late placement of letters");
  te->add_option("--early", o.early)->capture_default_str();
  te->add_option("--late", o.late)->capture_default_str();
  te->add_option("--target", o.target)->capture_default_str();
  te->add_option("--span", o.span)->check(CLI::Range(0.01, 1.0))->capture_default_str();
  te->add_option("--replicates", o.replicates, "Bootstrap replicates for the band")->capture_default_str();

  auto* re = app.add_subcommand("report", "Full pipeline end to end");
  re->add_option("--dims", o.dims, "LSA dimensions")->capture_default_str();
  re->add_option("--trials", o.trials)->capture_default_str();
  re->add_option("--subsets", o.subsets)->capture_default_str();
  re->add_option("--perplexity", o.perplexity)->capture_default_str();
  re->add_option("--reference", o.reference)->capture_default_str();
  re->add_option("--confidence", o.confidence)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  std::string sub;
  for (auto* s : app.get_subcommands()) sub = s->get_name();
  try {
    return Run(sub, o, out, err).execute();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace elegy::cli
