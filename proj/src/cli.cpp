// Copyright 2026 The visekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "visekit/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "visekit/ambiguity.hpp"
#include "visekit/decode.hpp"
#include "visekit/embedding.hpp"
#include "visekit/error.hpp"
#include "visekit/lm.hpp"
#include "visekit/metrics.hpp"
#include "visekit/svg.hpp"
#include "visekit/synth.hpp"
#include "visekit/text.hpp"
#include "visekit/version.hpp"
#include "visekit/viseme.hpp"

namespace fs = std::filesystem;

namespace visekit::cli {

namespace {

// Data error already annotated with the offending file.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_in(const std::string& path, const std::exception& e) {
  throw FileError(path + ": " + e.what());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError(path + ": cannot open for reading");
  }
  return in;
}

void require_inputs(std::initializer_list<std::string> paths) {
  for (const auto& p : paths) {
    if (p.empty() || p == "-") continue;
    if (!fs::exists(fs::path(p))) {
      throw FileError(p + ": no such file");
    }
  }
}

// Output sink that removes a partially written file when the command fails.
class OutFile {
 public:
  explicit OutFile(const std::string& path) : path_(path), to_stdout_(path.empty() || path == "-") {
    if (!to_stdout_) {
      stream_.open(path, std::ios::binary);
      if (!stream_) {
        throw FileError(path + ": cannot open for writing");
      }
    }
  }

  std::ostream& stream() { return to_stdout_ ? std::cout : stream_; }

  void commit() {
    if (!to_stdout_) {
      stream_.flush();
      if (!stream_) {
        throw FileError(path_ + ": write failed");
      }
      stream_.close();
    }
    committed_ = true;
  }

  ~OutFile() {
    if (!to_stdout_ && !committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(fs::path(path_), ec);
    }
  }

 private:
  std::string path_;
  bool to_stdout_;
  bool committed_ = false;
  std::ofstream stream_;
};

std::string pct(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string score6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

VisemeMap load_map_file(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return VisemeMap::load(in, fs::path(path).stem().string());
  } catch (const Error& e) {
    fail_in(path, e);
  }
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return Lexicon::load(in);
  } catch (const Error& e) {
    fail_in(path, e);
  }
}

NGramModel load_model_file(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return NGramModel::load(in);
  } catch (const Error& e) {
    fail_in(path, e);
  }
}

// ---------------------------------------------------------------------------
// map

struct MapArgs {
  std::string map_path;
  std::string lexicon_path;
  std::string input;
  std::string output = "-";
  bool words = false;
  bool no_strict = false;
};

void run_map(const MapArgs& a) {
  require_inputs({a.map_path, a.lexicon_path, a.input});
  VisemeMap map = load_map_file(a.map_path);
  Lexicon lex;
  if (a.words) lex = load_lexicon_file(a.lexicon_path);

  std::ifstream in = open_input(a.input);
  OutFile out(a.output);
  text::TsvReader reader(in);
  std::vector<std::string> fields;
  try {
    while (reader.next(fields)) {
      if (fields.size() != 2) {
        throw Error(Errc::malformed_line,
                    "expected `id<TAB>tokens`, got " + std::to_string(fields.size()) + " fields",
                    reader.line_no());
      }
      std::vector<std::string> visemes;
      if (a.words) {
        for (const std::string& w : text::split_ws(fields[1])) {
          std::vector<std::string> part = word_to_visemes(map, lex, w);
          visemes.insert(visemes.end(), part.begin(), part.end());
        }
      } else {
        std::vector<std::string> phonemes;
        for (const std::string& p : text::split_ws(fields[1])) phonemes.push_back(text::nfc(p));
        visemes = phonemes_to_visemes(map, phonemes, !a.no_strict);
      }
      out.stream() << fields[0];
      out.stream() << '\t';
      for (std::size_t i = 0; i < visemes.size(); ++i) {
        if (i) out.stream() << ' ';
        out.stream() << visemes[i];
      }
      out.stream() << '\n';
    }
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// ambiguity

struct AmbiguityArgs {
  std::string map_path;
  std::string lexicon_path;
  std::string output = "-";
};

void run_ambiguity(const AmbiguityArgs& a) {
  require_inputs({a.map_path, a.lexicon_path});
  VisemeMap map = load_map_file(a.map_path);
  Lexicon lex = load_lexicon_file(a.lexicon_path);
  AmbiguityReport report;
  try {
    report = ambiguity_report(map, lex);
  } catch (const Error& e) {
    fail_in(a.lexicon_path, e);
  }
  OutFile out(a.output);
  write_ambiguity_tsv(out.stream(), report);
  out.commit();
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string input;
  std::string output = "-";
  bool chars = false;
  bool words = false;
  bool both = false;
  bool lowercase = false;
  bool strip_punct = false;
  bool per_utt_mean = false;
  std::string topk;  // comma-separated k list, empty = CER/WER mode
};

std::vector<std::size_t> parse_topk_list(const std::string& spec) {
  std::vector<std::size_t> ks;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc() || ptr != item.data() + item.size() || k == 0) {
      throw Error(Errc::bad_argument, "bad --topk value '" + item + "'");
    }
    ks.push_back(k);
  }
  if (ks.empty()) {
    throw Error(Errc::bad_argument, "--topk needs at least one k");
  }
  return ks;
}

void run_score_topk(const ScoreArgs& a, const std::vector<std::size_t>& ks) {
  std::ifstream in = open_input(a.input);
  std::vector<RankedPrediction> preds;
  text::TsvReader reader(in);
  std::vector<std::string> fields;
  try {
    while (reader.next(fields)) {
      if (fields.size() != 3) {
        throw Error(Errc::malformed_line,
                    "expected `id<TAB>truth<TAB>cand|cand|...`, got " +
                        std::to_string(fields.size()) + " fields",
                    reader.line_no());
      }
      RankedPrediction p;
      p.truth = text::nfc(fields[1]);
      std::string cand;
      std::istringstream cands(fields[2]);
      while (std::getline(cands, cand, '|')) {
        if (cand.empty()) continue;
        p.candidates.push_back(text::nfc(cand));
      }
      for (std::size_t i = 0; i < p.candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < p.candidates.size(); ++j) {
          if (p.candidates[i] == p.candidates[j]) {
            throw Error(Errc::malformed_line, "duplicate candidate '" + p.candidates[i] + "'",
                        reader.line_no());
          }
        }
      }
      preds.push_back(std::move(p));
    }

    OutFile out(a.output);
    out.stream() << "# items=" << preds.size() << '\n';
    for (std::size_t k : ks) {
      out.stream() << "top" << k << '\t' << pct(topk_accuracy(preds, k)) << '\n';
    }
    out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

void run_score(const ScoreArgs& a) {
  require_inputs({a.input});
  if (!a.topk.empty()) {
    run_score_topk(a, parse_topk_list(a.topk));
    return;
  }
  const bool do_chars = a.chars || a.both || (!a.chars && !a.words);
  const bool do_words = a.words || a.both || (!a.chars && !a.words);
  NormOptions norm{a.lowercase, a.strip_punct};

  std::ifstream in = open_input(a.input);
  text::TsvReader reader(in);
  std::vector<std::string> fields;
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> pairs;
  try {
    while (reader.next(fields)) {
      if (fields.size() != 3) {
        throw Error(Errc::malformed_line,
                    "expected `id<TAB>reference<TAB>hypothesis`, got " +
                        std::to_string(fields.size()) + " fields",
                    reader.line_no());
      }
      ids.push_back(fields[0]);
      pairs.emplace_back(fields[1], fields[2]);
    }

    OutFile out(a.output);
    CorpusScore pooled;
    double mean_cer = 0.0, mean_wer = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out.stream() << ids[i];
      if (do_chars) {
        double c = cer(pairs[i].first, pairs[i].second, norm);
        pooled.chars += edit_ops(char_tokens(normalize_for_scoring(pairs[i].first, norm)),
                                 char_tokens(normalize_for_scoring(pairs[i].second, norm)));
        mean_cer += c;
        out.stream() << '\t' << pct(c);
      }
      if (do_words) {
        double w = wer(pairs[i].first, pairs[i].second, norm);
        pooled.words += edit_ops(word_tokens(normalize_for_scoring(pairs[i].first, norm)),
                                 word_tokens(normalize_for_scoring(pairs[i].second, norm)));
        mean_wer += w;
        out.stream() << '\t' << pct(w);
      }
      out.stream() << '\n';
    }
    out.stream() << "# pairs=" << pairs.size() << '\n';
    if (!pairs.empty()) {
      if (do_chars) {
        out.stream() << "# pooled_cer=" << pct(pooled.cer()) << "\tins=" << pooled.chars.ins
                     << "\tdel=" << pooled.chars.del << "\tsub=" << pooled.chars.sub
                     << "\tref_chars=" << pooled.chars.ref_len << '\n';
      }
      if (do_words) {
        out.stream() << "# pooled_wer=" << pct(pooled.wer()) << "\tins=" << pooled.words.ins
                     << "\tdel=" << pooled.words.del << "\tsub=" << pooled.words.sub
                     << "\tref_words=" << pooled.words.ref_len << '\n';
      }
      if (a.per_utt_mean) {
        const double n = static_cast<double>(pairs.size());
        if (do_chars) out.stream() << "# mean_cer=" << pct(mean_cer / n) << '\n';
        if (do_words) out.stream() << "# mean_wer=" << pct(mean_wer / n) << '\n';
      }
    }
    out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

// ---------------------------------------------------------------------------
// lm-train / lm-score

struct LmTrainArgs {
  std::string input;
  std::string output = "-";
  int order = 2;
  double discount = 0.75;
  bool unk = false;
};

void run_lm_train(const LmTrainArgs& a) {
  require_inputs({a.input});
  std::ifstream in = open_input(a.input);
  NGramModel model = [&] {
    try {
      return NGramModel::train(in, a.order, a.discount, a.unk);
    } catch (const Error& e) {
      fail_in(a.input, e);
    }
  }();
  OutFile out(a.output);
  model.save(out.stream());
  out.commit();
}

struct LmScoreArgs {
  std::string model_path;
  std::string input;
  std::string output = "-";
  bool ppl_only = false;
};

void run_lm_score(const LmScoreArgs& a) {
  require_inputs({a.model_path, a.input});
  NGramModel model = load_model_file(a.model_path);
  std::ifstream in = open_input(a.input);
  OutFile out(a.output);

  std::string line;
  double total_logprob = 0.0;
  std::uint64_t tokens = 0, sentences = 0;
  try {
    while (text::getline_any(in, line)) {
      std::vector<std::string> words = text::split_ws(text::nfc(line));
      if (words.empty()) continue;
      double lp = model.sentence_logprob(words);
      total_logprob += lp;
      tokens += words.size() + 1;
      ++sentences;
      if (!a.ppl_only) {
        out.stream() << score6(lp) << '\t' << line << '\n';
      }
    }
    if (sentences == 0) {
      throw Error(Errc::empty_corpus, "no non-empty sentences");
    }
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
  const double ppl = std::exp(-total_logprob / static_cast<double>(tokens));
  out.stream() << "# sentences=" << sentences << "\ttokens=" << tokens
               << "\ttotal_logprob=" << score6(total_logprob) << "\tperplexity=" << score6(ppl)
               << '\n';
  out.commit();
}

// ---------------------------------------------------------------------------
// decode

struct DecodeArgs {
  std::string lexicon_path;
  std::string map_path;
  std::string lm_path;
  std::string input;
  std::string output = "-";
  std::string strategy = "beam";
  std::size_t width = 8;
  double lambda = 1.0;
  std::size_t nbest = 1;
  bool allow_unk = false;
  double unk_penalty = -10.0;
};

void run_decode(const DecodeArgs& a) {
  require_inputs({a.lexicon_path, a.map_path, a.lm_path, a.input});
  VisemeMap map = load_map_file(a.map_path);
  Lexicon lex = load_lexicon_file(a.lexicon_path);
  NGramModel lm = load_model_file(a.lm_path);
  LexiconTrie trie = [&]() -> LexiconTrie {
    try {
      return LexiconTrie(map, lex);
    } catch (const Error& e) {
      fail_in(a.lexicon_path, e);
    }
  }();

  const std::size_t width = a.strategy == "greedy" ? 1 : a.width;
  LatticeOptions opts{a.allow_unk, a.unk_penalty};

  std::vector<std::string> ids;
  std::vector<VisemeInput> inputs;
  try {
    std::ifstream in = open_input(a.input);
    std::string first_line;
    bool has_first = text::getline_any(in, first_line);
    in.clear();  // reading the sniff line may have hit EOF
    if (has_first && first_line.rfind("VPOST", 0) == 0) {
      // Single-utterance posterior file.
      in.seekg(0);
      inputs.push_back(VisemeInput::parse_vpost(in));
      ids.push_back(fs::path(a.input).stem().string());
    } else {
      in.seekg(0);
      text::TsvReader reader(in);
      std::vector<std::string> fields;
      while (reader.next(fields)) {
        if (fields.size() != 2) {
          throw Error(Errc::malformed_line,
                      "expected `id<TAB>viseme viseme ...`, got " +
                          std::to_string(fields.size()) + " fields",
                      reader.line_no());
        }
        ids.push_back(fields[0]);
        inputs.push_back(VisemeInput::from_visemes(text::split_ws(fields[1])));
      }
    }
  } catch (const Error& e) {
    fail_in(a.input, e);
  }

  std::vector<BatchItem> results = decode_corpus(inputs, trie, lm, a.lambda, width, a.nbest, opts);

  OutFile out(a.output);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const BatchItem& item = results[i];
    if (!item.result) {
      out.stream() << ids[i] << "\tNA\t\n";
      std::cerr << "visekit: " << ids[i] << ": " << item.error << '\n';
      continue;
    }
    const DecodeResult& r = *item.result;
    for (std::size_t k = 0; k < r.nbest.size(); ++k) {
      const Hypothesis& h = r.nbest[k];
      out.stream() << ids[i];
      if (k > 0) out.stream() << '#' << (k + 1);
      out.stream() << '\t' << score6(h.total_logscore) << '\t';
      for (std::size_t w = 0; w < h.words.size(); ++w) {
        if (w) out.stream() << ' ';
        out.stream() << h.words[w];
      }
      out.stream() << '\n';
    }
  }
  out.commit();
}

// ---------------------------------------------------------------------------
// embedding analysis

struct EmbedAvgArgs {
  std::string input;
  std::string output = "-";
};

void run_embed_avg(const EmbedAvgArgs& a) {
  require_inputs({a.input});
  std::ifstream in = open_input(a.input);
  try {
    EmbeddingTable samples = EmbeddingTable::load_vemb(in);
    EmbeddingTable averaged = average_by_label(samples);
    OutFile out(a.output);
    averaged.save_vemb(out.stream());
    out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

struct SilhouetteArgs {
  std::string input;
  std::string map_path;
  std::string output = "-";
  std::string metric = "euclidean";
};

void run_silhouette(const SilhouetteArgs& a) {
  require_inputs({a.input, a.map_path});
  VisemeMap map = load_map_file(a.map_path);
  std::ifstream in = open_input(a.input);
  try {
    EmbeddingTable table = EmbeddingTable::load_vemb(in);
    ClusterAssignment clusters = cluster_by_viseme(map, table.labels);
    DistanceMetric metric =
        a.metric == "cosine" ? DistanceMetric::cosine : DistanceMetric::euclidean;
    double score = silhouette(table, clusters, metric);
    std::set<std::string> distinct;
    for (const auto& [_, c] : clusters) distinct.insert(c);
    OutFile out(a.output);
    out.stream() << "silhouette\t" << pct(score) << '\n';
    out.stream() << "# points=" << table.size() << "\tclusters=" << distinct.size()
                 << "\tmetric=" << a.metric << '\n';
    out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

struct ProjectArgs {
  std::string input;
  std::string output = "-";
  std::size_t dim = 2;
};

void run_project(const ProjectArgs& a) {
  require_inputs({a.input});
  std::ifstream in = open_input(a.input);
  try {
    EmbeddingTable table = EmbeddingTable::load_vemb(in);
    ProjectionResult proj = pca_project(table, a.dim);
    OutFile out(a.output);
    write_projection_csv(out.stream(), proj);
    out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

struct PlotArgs {
  std::string input;
  std::string map_path;
  std::string svg_path;
  std::string csv_path;
  std::string title;
};

void run_plot(const PlotArgs& a) {
  require_inputs({a.input, a.map_path});
  VisemeMap map = load_map_file(a.map_path);
  std::ifstream in = open_input(a.input);
  try {
    EmbeddingTable table = EmbeddingTable::load_vemb(in);
    ClusterAssignment clusters = cluster_by_viseme(map, table.labels);
    ProjectionResult proj = pca_project(table, 2);
    std::vector<ScatterPoint> points;
    points.reserve(proj.labels.size());
    for (std::size_t i = 0; i < proj.labels.size(); ++i) {
      points.push_back({proj.labels[i], proj.coords[i][0], proj.coords[i][1]});
    }
    OutFile svg_out(a.svg_path);
    emit_scatter(svg_out.stream(), points, clusters, a.title);
    if (!a.csv_path.empty()) {
      OutFile csv_out(a.csv_path);
      write_projection_csv(csv_out.stream(), proj, &clusters);
      csv_out.commit();
    }
    svg_out.commit();
  } catch (const Error& e) {
    fail_in(a.input, e);
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string kind = "all";
  std::size_t words = 50;
  double collision_rate = 0.3;
  std::size_t visemes = 10;
  std::size_t sentences = 200;
  std::size_t clusters = 4;
  std::size_t per_cluster = 8;
  std::size_t dim = 8;
  double sigma = 1.0;
  double center_distance = 64.0;
};

void write_file(const fs::path& path, const std::string& content) {
  OutFile out(path.string());
  out.stream() << content;
  out.commit();
}

void run_synth(const SynthArgs& a) {
  fs::create_directories(fs::path(a.out_dir));
  const bool all = a.kind == "all";

  if (all || a.kind == "lexicon" || a.kind == "corpus") {
    synth::LexiconSpec spec;
    spec.n_words = a.words;
    spec.collision_rate = a.collision_rate;
    spec.n_visemes = a.visemes;
    synth::SynthLexicon sl = synth::make_lexicon(a.seed, spec);
    if (all || a.kind == "lexicon") {
      std::ostringstream map_out;
      sl.map.save(map_out);
      write_file(fs::path(a.out_dir) / "map.tsv", map_out.str());
      std::ostringstream lex_out;
      for (const LexEntry& e : sl.lexicon.entries()) {
        lex_out << e.word << '\t';
        for (std::size_t i = 0; i < e.pronunciation.size(); ++i) {
          if (i) lex_out << ' ';
          lex_out << e.pronunciation[i];
        }
        lex_out << '\t' << e.frequency << '\n';
      }
      write_file(fs::path(a.out_dir) / "lexicon.tsv", lex_out.str());
      write_file(fs::path(a.out_dir) / "freq-corpus.txt",
                 synth::make_frequency_corpus(sl.lexicon));
    }
    if (all || a.kind == "corpus") {
      synth::Rng rng(a.seed + 1);
      write_file(fs::path(a.out_dir) / "corpus.txt",
                 synth::make_sentence_corpus(rng, sl.lexicon, a.sentences, 1, 6));
    }
  }

  if (all || a.kind == "embeddings") {
    synth::EmbeddingSpec spec;
    spec.n_clusters = a.clusters;
    spec.per_cluster = a.per_cluster;
    spec.dim = a.dim;
    spec.sigma = a.sigma;
    spec.center_distance = a.center_distance;
    synth::SynthEmbeddings se = synth::make_embeddings(a.seed + 2, spec);
    std::ostringstream emb_out;
    se.table.save_vemb(emb_out);
    write_file(fs::path(a.out_dir) / "embeddings.vemb", emb_out.str());
    std::ostringstream cmap_out;
    se.map.save(cmap_out);
    write_file(fs::path(a.out_dir) / "clusters.tsv", cmap_out.str());
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"viseme-centric lip-reading analysis and decoding toolkit"};
  app.set_version_flag("--version",
                       std::string("visekit ") + kVersion + " (formats: " + kFormats + ")");
  app.require_subcommand(1);

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand(
      "map", "Transform phoneme (or word) sequences into viseme sequences.\n"
             "Input TSV: `id<TAB>phoneme phoneme ...` (or words with --words).\n"
             "Output TSV: `id<TAB>viseme viseme ...`");
  map_cmd->add_option("--viseme-map", map_args.map_path,
                      "Viseme map TSV: `phoneme<TAB>viseme` per line, '#' comments")
      ->required();
  auto* words_flag = map_cmd->add_flag("--words", map_args.words,
                                       "Input holds words; pronunciations from --lexicon");
  map_cmd->add_option("--lexicon", map_args.lexicon_path,
                      "Lexicon TSV: `word<TAB>ph ph ...[<TAB>freq]`")
      ->needs(words_flag);
  map_cmd->add_flag("--no-strict", map_args.no_strict,
                    "Map unknown phonemes to <unk_v> instead of failing")
      ->excludes(words_flag);
  map_cmd->add_option("input", map_args.input, "Input TSV path")->required();
  map_cmd->add_option("-o,--output", map_args.output, "Output path (default stdout)");

  AmbiguityArgs amb_args;
  auto* amb_cmd = app.add_subcommand(
      "ambiguity", "Homopheme classes and the most-frequent-word accuracy upper bound.\n"
                   "Output TSV: `viseme seq<TAB>word:freq ...` per class, then a summary line");
  amb_cmd->add_option("--viseme-map", amb_args.map_path, "Viseme map TSV")->required();
  amb_cmd->add_option("--lexicon", amb_args.lexicon_path, "Lexicon TSV")->required();
  amb_cmd->add_option("-o,--output", amb_args.output, "Output path (default stdout)");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand(
      "score", "CER/WER scoring.\n"
               "Input TSV: `id<TAB>reference<TAB>hypothesis`; with --topk instead\n"
               "`id<TAB>truth<TAB>cand1|cand2|...`. Per-utterance rows then pooled summary");
  score_cmd->add_option("input", score_args.input, "Input TSV path")->required();
  auto* chars_f = score_cmd->add_flag("--chars", score_args.chars, "Character error rate only");
  auto* words_f = score_cmd->add_flag("--words", score_args.words, "Word error rate only");
  auto* both_f = score_cmd->add_flag("--both", score_args.both, "Both rates (default)");
  chars_f->excludes(words_f)->excludes(both_f);
  words_f->excludes(both_f);
  score_cmd->add_flag("--lowercase", score_args.lowercase, "Case-fold before scoring");
  score_cmd->add_flag("--strip-punct", score_args.strip_punct,
                      "Strip punctuation before scoring");
  score_cmd->add_flag("--per-utt", score_args.per_utt_mean,
                      "Also report mean of per-utterance rates");
  score_cmd
      ->add_option("--topk", score_args.topk,
                   "Top-k accuracy for a comma-separated k list (e.g. 1,3,5); switches to the "
                   "ranked-candidates input format")
      ->excludes(chars_f)
      ->excludes(words_f)
      ->excludes(both_f);
  score_cmd->add_option("-o,--output", score_args.output, "Output path (default stdout)");

  LmTrainArgs lmt_args;
  auto* lmt_cmd = app.add_subcommand(
      "lm-train", "Train an n-gram model (absolute discounting with backoff).\n"
                  "Input: one sentence per line, UTF-8. Output: VLM 1 model file");
  lmt_cmd->add_option("input", lmt_args.input, "Training corpus path")->required();
  lmt_cmd->add_option("--order", lmt_args.order, "Model order, 1-5 (default 2)");
  lmt_cmd->add_option("--discount", lmt_args.discount, "Absolute discount in (0,1), default 0.75");
  lmt_cmd->add_flag("--unk", lmt_args.unk, "Train singleton words as <unk>");
  lmt_cmd->add_option("-o,--output", lmt_args.output, "Model output path (default stdout)");

  LmScoreArgs lms_args;
  auto* lms_cmd = app.add_subcommand(
      "lm-score", "Score sentences with a trained model; reports perplexity.\n"
                  "Output: `logprob<TAB>sentence` per line plus a summary line");
  lms_cmd->add_option("--lm,--model", lms_args.model_path, "VLM model file")->required();
  lms_cmd->add_option("input", lms_args.input, "Sentences path")->required();
  lms_cmd->add_flag("--ppl", lms_args.ppl_only, "Summary line only");
  lms_cmd->add_option("-o,--output", lms_args.output, "Output path (default stdout)");

  DecodeArgs dec_args;
  auto* dec_cmd = app.add_subcommand(
      "decode", "Viseme sequence -> text through a lexicon lattice with an n-gram LM.\n"
                "Input: TSV `id<TAB>viseme viseme ...`, or a posterior file\n"
                "(`VPOST 1 T V`, viseme-id ordering line, T rows of V probabilities).\n"
                "Output TSV: `id<TAB>score<TAB>decoded text` (NA score on failures)");
  dec_cmd->add_option("--lexicon", dec_args.lexicon_path, "Lexicon TSV")->required();
  dec_cmd->add_option("--viseme-map", dec_args.map_path, "Viseme map TSV")->required();
  dec_cmd->add_option("--lm", dec_args.lm_path, "VLM model file")->required();
  dec_cmd->add_option("--strategy", dec_args.strategy, "greedy or beam (default beam)")
      ->check(CLI::IsMember({"greedy", "beam"}));
  dec_cmd->add_option("--width", dec_args.width, "Beam width (default 8)")
      ->check(CLI::PositiveNumber);
  dec_cmd->add_option("--lambda", dec_args.lambda, "LM weight, >= 0 (default 1.0)")
      ->check(CLI::NonNegativeNumber);
  dec_cmd->add_option("--nbest", dec_args.nbest, "Hypotheses per utterance (default 1)")
      ->check(CLI::PositiveNumber);
  dec_cmd->add_flag("--allow-unk", dec_args.allow_unk,
                    "Add single-viseme <unk> edges with a fixed penalty");
  dec_cmd->add_option("--unk-penalty", dec_args.unk_penalty,
                      "Acoustic score of <unk> edges (default -10)");
  dec_cmd->add_option("input", dec_args.input, "Input path")->required();
  dec_cmd->add_option("-o,--output", dec_args.output, "Output path (default stdout)");

  EmbedAvgArgs avg_args;
  auto* avg_cmd = app.add_subcommand(
      "embed-avg", "Average embedding vectors per label.\n"
                   "Input/output: VEMB (`VEMB 1 <rows> <dim>`, then `label v1 ... vdim` rows)");
  avg_cmd->add_option("input", avg_args.input, "VEMB samples path")->required();
  avg_cmd->add_option("-o,--output", avg_args.output, "Output path (default stdout)");

  SilhouetteArgs sil_args;
  auto* sil_cmd = app.add_subcommand(
      "silhouette", "Silhouette score of embeddings clustered by viseme, in percent");
  sil_cmd->add_option("input", sil_args.input, "VEMB embeddings path")->required();
  sil_cmd->add_option("--viseme-map", sil_args.map_path, "Viseme map assigning clusters")
      ->required();
  sil_cmd->add_option("--metric", sil_args.metric, "euclidean (default) or cosine")
      ->check(CLI::IsMember({"euclidean", "cosine"}));
  sil_cmd->add_option("-o,--output", sil_args.output, "Output path (default stdout)");

  ProjectArgs proj_args;
  auto* proj_cmd = app.add_subcommand(
      "project", "PCA projection of embeddings; CSV `label,c0,c1,...`");
  proj_cmd->add_option("input", proj_args.input, "VEMB embeddings path")->required();
  proj_cmd->add_option("--dim", proj_args.dim, "Output dimensions (default 2)")
      ->check(CLI::PositiveNumber);
  proj_cmd->add_option("-o,--output", proj_args.output, "CSV output path (default stdout)");

  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand(
      "plot", "2D PCA scatter of embeddings colored by viseme cluster (SVG, optional CSV)");
  plot_cmd->add_option("input", plot_args.input, "VEMB embeddings path")->required();
  plot_cmd->add_option("--viseme-map", plot_args.map_path, "Viseme map assigning clusters")
      ->required();
  plot_cmd->add_option("--svg", plot_args.svg_path, "SVG output path")->required();
  plot_cmd->add_option("--csv", plot_args.csv_path, "Also write projected coordinates CSV");
  plot_cmd->add_option("--title", plot_args.title, "Plot title");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate seeded synthetic fixtures (lexicon, corpora, embeddings)");
  synth_cmd->add_option("--seed", synth_args.seed, "RNG seed")->required();
  synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")->required();
  synth_cmd->add_option("--kind", synth_args.kind, "all|lexicon|corpus|embeddings (default all)")
      ->check(CLI::IsMember({"all", "lexicon", "corpus", "embeddings"}));
  synth_cmd->add_option("--words", synth_args.words, "Lexicon size (default 50)");
  synth_cmd->add_option("--collision-rate", synth_args.collision_rate,
                        "Homopheme clone probability (default 0.3)");
  synth_cmd->add_option("--visemes", synth_args.visemes, "Viseme inventory (default 10)");
  synth_cmd->add_option("--sentences", synth_args.sentences, "Corpus sentences (default 200)");
  synth_cmd->add_option("--clusters", synth_args.clusters, "Embedding clusters (default 4)");
  synth_cmd->add_option("--per-cluster", synth_args.per_cluster,
                        "Points per cluster (default 8)");
  synth_cmd->add_option("--dim", synth_args.dim, "Embedding dimension (default 8)");
  synth_cmd->add_option("--sigma", synth_args.sigma, "Cluster stddev (default 1.0)");
  synth_cmd->add_option("--center-distance", synth_args.center_distance,
                        "Pairwise center distance (default 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (map_cmd->parsed()) {
      if (map_args.words && map_args.lexicon_path.empty()) {
        std::cerr << "visekit: --words requires --lexicon\n";
        return 2;
      }
      run_map(map_args);
    } else if (amb_cmd->parsed()) {
      run_ambiguity(amb_args);
    } else if (score_cmd->parsed()) {
      if (!score_args.topk.empty()) {
        try {
          parse_topk_list(score_args.topk);
        } catch (const Error& e) {
          std::cerr << "visekit: " << e.what() << '\n';
          return 2;
        }
      }
      run_score(score_args);
    } else if (lmt_cmd->parsed()) {
      run_lm_train(lmt_args);
    } else if (lms_cmd->parsed()) {
      run_lm_score(lms_args);
    } else if (dec_cmd->parsed()) {
      run_decode(dec_args);
    } else if (avg_cmd->parsed()) {
      run_embed_avg(avg_args);
    } else if (sil_cmd->parsed()) {
      run_silhouette(sil_args);
    } else if (proj_cmd->parsed()) {
      run_project(proj_args);
    } else if (plot_cmd->parsed()) {
      run_plot(plot_args);
    } else if (synth_cmd->parsed()) {
      run_synth(synth_args);
    }
  } catch (const FileError& e) {
    std::cerr << "visekit: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "visekit: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "visekit: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace visekit::cli
