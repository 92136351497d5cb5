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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "visekit/decode.hpp"
#include "visekit/error.hpp"
#include "visekit/synth.hpp"

using namespace visekit;

namespace {

VisemeMap map_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return VisemeMap::load(in, "test");
}

Lexicon lex_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return Lexicon::load(in);
}

NGramModel train_on(const std::string& corpus, int order) {
  std::istringstream in(corpus);
  return NGramModel::train(in, order, 0.75);
}

// Exhaustive path enumeration: the decode oracle. Scores paths exactly the
// way the decoder does (left-to-right sums), so comparisons are bit-exact.
struct OraclePath {
  std::vector<std::string> words;
  double total = 0.0;
};

void enumerate_paths(const VisemeLattice& lattice, const NGramModel& lm, double lambda,
                     std::size_t pos, std::vector<std::string>& words, double acoustic,
                     std::vector<OraclePath>& out) {
  if (pos == lattice.final_position()) {
    double lm_score = 0.0;
    std::vector<std::string> ctx = lm.start_context();
    for (const auto& w : words) {
      lm_score += lm.word_logprob(ctx, w);
      NGramModel::push_context(ctx, w, lm.order());
    }
    lm_score += lm.word_logprob(ctx, kEos);
    out.push_back({words, acoustic + lambda * lm_score});
    return;
  }
  for (std::uint32_t e : lattice.edges_from[pos]) {
    const LatticeEdge& edge = lattice.edges[e];
    words.push_back(lattice.word_of(edge));
    enumerate_paths(lattice, lm, lambda, edge.end, words, acoustic + edge.acoustic, out);
    words.pop_back();
  }
}

std::vector<OraclePath> all_paths_sorted(const VisemeLattice& lattice, const NGramModel& lm,
                                         double lambda) {
  std::vector<OraclePath> out;
  std::vector<std::string> words;
  enumerate_paths(lattice, lm, lambda, 0, words, 0.0, out);
  std::sort(out.begin(), out.end(), [](const OraclePath& a, const OraclePath& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.words < b.words;
  });
  return out;
}

}  // namespace

TEST_CASE("lattice: unique match yields a single edge") {
  VisemeMap m = map_from("n\tN\no\tO");
  Lexicon lex = lex_from("no\tn o\non\to n\n");
  VisemeInput input = VisemeInput::from_visemes({"N", "O"});
  VisemeLattice lat = build_lattice(input, m, lex);
  REQUIRE(lat.edges.size() == 1);
  CHECK(lat.edges[0].start == 0);
  CHECK(lat.edges[0].end == 2);
  CHECK(lat.word_of(lat.edges[0]) == "no");
  CHECK(lat.edges[0].acoustic == 0.0);
}

TEST_CASE("lattice: homophemes become parallel edges") {
  VisemeMap m = map_from("p\tB\nb\tB\na\tA\nt\tT");
  Lexicon lex = lex_from("pat\tp a t\nbat\tb a t\n");
  VisemeInput input = VisemeInput::from_visemes({"B", "A", "T"});
  VisemeLattice lat = build_lattice(input, m, lex);
  REQUIRE(lat.edges.size() == 2);
  CHECK(lat.edges[0].start == 0);
  CHECK(lat.edges[0].end == 3);
  CHECK(lat.edges[1].start == 0);
  CHECK(lat.edges[1].end == 3);
  // Deterministic word order on equal spans.
  CHECK(lat.word_of(lat.edges[0]) == "bat");
  CHECK(lat.word_of(lat.edges[1]) == "pat");
}

TEST_CASE("one-hot posterior reduces to the exact lattice, scores included") {
  VisemeMap m = map_from("p\tB\nb\tB\na\tA\nt\tT");
  Lexicon lex = lex_from("pat\tp a t\nbat\tb a t\nat\ta t\n");
  VisemeInput exact = VisemeInput::from_visemes({"B", "A", "T"});

  // Column order deliberately differs from the map's internal order.
  std::vector<std::vector<double>> rows = {
      {0.0, 0.0, 1.0},  // B
      {0.0, 1.0, 0.0},  // A
      {1.0, 0.0, 0.0},  // T
  };
  VisemeInput onehot = VisemeInput::from_posterior({"T", "A", "B"}, rows);

  VisemeLattice le = build_lattice(exact, m, lex);
  VisemeLattice lp = build_lattice(onehot, m, lex);
  REQUIRE(le.edges.size() == lp.edges.size());
  for (std::size_t i = 0; i < le.edges.size(); ++i) {
    CHECK(le.edges[i].start == lp.edges[i].start);
    CHECK(le.edges[i].end == lp.edges[i].end);
    CHECK(le.word_of(le.edges[i]) == lp.word_of(lp.edges[i]));
    CHECK(le.edges[i].acoustic == lp.edges[i].acoustic);  // bit-exact, log(1)=0
  }

  NGramModel lm = train_on("pat\nbat\nat\n", 1);
  DecodeResult de = decode_beam(le, lm, 1.0, 8, 3);
  DecodeResult dp = decode_beam(lp, lm, 1.0, 8, 3);
  CHECK(de.best.words == dp.best.words);
  CHECK(de.best.total_logscore == dp.best.total_logscore);
}

TEST_CASE("soft posterior scores edges by summed log probabilities") {
  VisemeMap m = map_from("p\tB\nb\tB\na\tA\nt\tT");
  Lexicon lex = lex_from("pat\tp a t\n");
  std::vector<std::vector<double>> rows = {
      {0.8, 0.1, 0.1},
      {0.2, 0.7, 0.1},
      {0.25, 0.25, 0.5},
  };
  VisemeInput post = VisemeInput::from_posterior({"B", "A", "T"}, rows);
  VisemeLattice lat = build_lattice(post, m, lex);
  REQUIRE(lat.edges.size() == 1);
  const double expect = std::log(0.8) + std::log(0.7) + std::log(0.5);
  CHECK(lat.edges[0].acoustic == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("posterior validation") {
  CHECK_THROWS_AS(VisemeInput::from_posterior({"A", "B"}, {{0.5, 0.6}}), Error);
  CHECK_THROWS_AS(VisemeInput::from_posterior({"A", "B"}, {{-0.1, 1.1}}), Error);
  CHECK_THROWS_AS(VisemeInput::from_posterior({"A", "B"}, {{1.0}}), Error);

  std::istringstream good("VPOST 1 2 2\nA B\n1 0\n0.5 0.5\n");
  VisemeInput in = VisemeInput::parse_vpost(good);
  CHECK(in.length() == 2);
  CHECK(in.viseme_order() == std::vector<std::string>{"A", "B"});

  std::istringstream bad_header("VPOST 2 1 1\nA\n1\n");
  CHECK_THROWS_AS(VisemeInput::parse_vpost(bad_header), Error);
  std::istringstream short_file("VPOST 1 2 2\nA B\n1 0\n");
  CHECK_THROWS_AS(VisemeInput::parse_vpost(short_file), Error);
}

TEST_CASE("unknown visemes are rejected up front") {
  VisemeMap m = map_from("a\tA");
  Lexicon lex = lex_from("aa\ta a\n");
  VisemeInput input = VisemeInput::from_visemes({"A", "ZZZ"});
  CHECK_THROWS_AS(build_lattice(input, m, lex), Error);
  // Same for posterior columns naming visemes outside the map.
  VisemeInput post = VisemeInput::from_posterior({"A", "ZZZ"}, {{0.5, 0.5}});
  CHECK_THROWS_AS(build_lattice(post, m, lex), Error);
}

TEST_CASE("lexicon phonemes outside the map carry the lexicon line") {
  VisemeMap m = map_from("a\tA");
  std::istringstream lex_src("aa\ta a\nzz\tz z\n");
  Lexicon lex = Lexicon::load(lex_src);
  try {
    LexiconTrie trie(m, lex);
    FAIL("expected unknown_phoneme");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_phoneme);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("greedy decodes the single-path lattice") {
  VisemeMap m = map_from("n\tN\no\tO");
  Lexicon lex = lex_from("no\tn o\n");
  NGramModel lm = train_on("no\n", 1);
  VisemeLattice lat = build_lattice(VisemeInput::from_visemes({"N", "O"}), m, lex);
  DecodeResult r = decode_greedy(lat, lm, 1.0);
  CHECK(r.strategy == Strategy::greedy);
  CHECK(r.best.words == std::vector<std::string>{"no"});
}

TEST_CASE("frequency-weighted LM resolves the pat/bat ambiguity") {
  VisemeMap m = map_from("p\tB\nb\tB\na\tA\nt\tT");
  Lexicon lex = lex_from("pat\tp a t\t1\nbat\tb a t\t9\n");
  std::string corpus = synth::make_frequency_corpus(lex);
  NGramModel lm = train_on(corpus, 1);
  VisemeLattice lat = build_lattice(VisemeInput::from_visemes({"B", "A", "T"}), m, lex);

  DecodeResult r = decode_greedy(lat, lm, 1.0);
  CHECK(r.best.words == std::vector<std::string>{"bat"});

  // Exhaustive two-path oracle agrees.
  auto oracle = all_paths_sorted(lat, lm, 1.0);
  REQUIRE(oracle.size() == 2);
  CHECK(oracle[0].words == r.best.words);
  CHECK(oracle[0].total == r.best.total_logscore);
}

TEST_CASE("greedy prefix pruning can be suboptimal; wider beams recover") {
  // Two words cover position 0-1; the LM prefers "hi" as a first word but
  // "lo e" as a sentence. Greedy commits to "hi" at position 1.
  VisemeMap m = map_from("h\tV1\nl\tV1\ne\tV2");
  Lexicon lex = lex_from("hi\th\nlo\tl\ne\te\n");
  std::string corpus = "lo e\nlo e\nlo e\nhi a\nhi b\nhi c\nhi d\n";
  // a..d are OOV in the lexicon but legal LM words.
  NGramModel lm = train_on(corpus, 2);
  REQUIRE(std::exp(lm.word_logprob({std::string(kBos)}, "hi")) >
          std::exp(lm.word_logprob({std::string(kBos)}, "lo")));

  VisemeLattice lat = build_lattice(VisemeInput::from_visemes({"V1", "V2"}), m, lex);
  DecodeResult greedy = decode_greedy(lat, lm, 1.0);
  DecodeResult beam2 = decode_beam(lat, lm, 1.0, 2, 1);
  CHECK(greedy.best.words == std::vector<std::string>{"hi", "e"});
  CHECK(beam2.best.words == std::vector<std::string>{"lo", "e"});
  CHECK(beam2.best.total_logscore > greedy.best.total_logscore);

  auto oracle = all_paths_sorted(lat, lm, 1.0);
  CHECK(oracle[0].words == beam2.best.words);
  CHECK(oracle[0].total == beam2.best.total_logscore);
}

TEST_CASE("lambda zero on exact input: lexicographically smallest sequence wins") {
  VisemeMap m = map_from("a\tA\nb\tB");
  Lexicon lex = lex_from(
      "xa\ta\t1\n"
      "ya\ta\t100\n"
      "zb\tb\t50\n"
      "wb\tb\t2\n");
  NGramModel lm = train_on(synth::make_frequency_corpus(lex), 1);
  VisemeLattice lat = build_lattice(VisemeInput::from_visemes({"A", "B"}), m, lex);
  DecodeResult r = decode_beam(lat, lm, 0.0, 16, 4);
  // All four paths tie at 0; the word-sequence tie-break picks "xa wb".
  CHECK(r.best.total_logscore == 0.0);
  CHECK(r.best.words == std::vector<std::string>{"xa", "wb"});
  REQUIRE(r.nbest.size() == 4);
  CHECK(r.nbest[1].words == std::vector<std::string>{"xa", "zb"});
  CHECK(r.nbest[2].words == std::vector<std::string>{"ya", "wb"});
  CHECK(r.nbest[3].words == std::vector<std::string>{"ya", "zb"});
}

TEST_CASE("no path raises, and empty input decodes to the empty sentence") {
  VisemeMap m = map_from("a\tA\nb\tB");
  Lexicon lex = lex_from("aa\ta a\n");
  NGramModel lm = train_on("aa\n", 1);
  VisemeLattice lat = build_lattice(VisemeInput::from_visemes({"A", "B"}), m, lex);
  CHECK_THROWS_AS(decode_beam(lat, lm, 1.0, 8, 1), Error);

  VisemeLattice empty = build_lattice(VisemeInput::from_visemes({}), m, lex);
  DecodeResult r = decode_beam(empty, lm, 1.0, 8, 1);
  CHECK(r.best.words.empty());
  CHECK(r.best.total_logscore == lm.word_logprob({std::string(kBos)}, kEos));
}

TEST_CASE("unk edges rescue out-of-lexicon spans when enabled") {
  VisemeMap m = map_from("a\tA\nb\tB");
  Lexicon lex = lex_from("aa\ta a\n");
  NGramModel lm = train_on("aa\n", 1);
  VisemeInput input = VisemeInput::from_visemes({"A", "A", "B"});
  CHECK_THROWS_AS(decode_beam(build_lattice(input, m, lex), lm, 1.0, 8, 1), Error);

  LatticeOptions opts;
  opts.allow_unk = true;
  opts.unk_penalty = -5.0;
  VisemeLattice lat = build_lattice(input, m, lex, opts);
  DecodeResult r = decode_beam(lat, lm, 0.0, 8, 1);
  CHECK(r.best.words == std::vector<std::string>{"aa", std::string(kUnk)});
  CHECK(r.best.acoustic == -5.0);
}

TEST_CASE("random lattices: width 1 equals greedy, beams are monotone, wide beam is exact") {
  std::mt19937_64 rng(41);
  synth::LexiconSpec spec;
  spec.n_words = 12;
  spec.n_visemes = 4;
  spec.min_len = 1;
  spec.max_len = 3;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    synth::SynthLexicon sl = synth::make_lexicon(seed + 100, spec);
    NGramModel lm = train_on(synth::make_frequency_corpus(sl.lexicon), 2);
    LexiconTrie trie(sl.map, sl.lexicon);

    // Input: concatenation of 1-3 lexicon word sequences (a path exists).
    std::vector<std::string> visemes;
    const std::size_t n_words = 1 + rng() % 3;
    for (std::size_t i = 0; i < n_words; ++i) {
      const auto& e = sl.lexicon.entries()[rng() % sl.lexicon.size()];
      auto seq = phonemes_to_visemes(sl.map, e.pronunciation);
      visemes.insert(visemes.end(), seq.begin(), seq.end());
    }
    VisemeLattice lat = build_lattice(VisemeInput::from_visemes(visemes), trie);

    DecodeResult greedy = decode_greedy(lat, lm, 1.0);
    DecodeResult beam1 = decode_beam(lat, lm, 1.0, 1, 1);
    CHECK(greedy.best.words == beam1.best.words);
    CHECK(greedy.best.total_logscore == beam1.best.total_logscore);

    double last = -std::numeric_limits<double>::infinity();
    for (std::size_t width : {1, 2, 4, 8, 16}) {
      DecodeResult r = decode_beam(lat, lm, 1.0, width, 1);
      CHECK(r.best.total_logscore >= last);
      last = r.best.total_logscore;
    }

    if (count_full_paths(lat, 201) <= 200) {
      auto oracle = all_paths_sorted(lat, lm, 1.0);
      DecodeResult wide = decode_beam(lat, lm, 1.0, 256, 5);
      REQUIRE(!oracle.empty());
      CHECK(wide.best.words == oracle[0].words);
      CHECK(wide.best.total_logscore == oracle[0].total);
      for (std::size_t k = 0; k < wide.nbest.size() && k < oracle.size(); ++k) {
        CHECK(wide.nbest[k].total_logscore == oracle[k].total);
        CHECK(wide.nbest[k].words == oracle[k].words);
      }
    }
  }
}

TEST_CASE("scaling lambda preserves the argmax when acoustic scores are zero") {
  synth::SynthLexicon sl = synth::make_lexicon(55);
  NGramModel lm = [&] {
    std::istringstream corpus(synth::make_frequency_corpus(sl.lexicon));
    return NGramModel::train(corpus, 1, 0.75);
  }();
  LexiconTrie trie(sl.map, sl.lexicon);
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& e = sl.lexicon.entries()[rng() % sl.lexicon.size()];
    auto visemes = phonemes_to_visemes(sl.map, e.pronunciation);
    VisemeLattice lat = build_lattice(VisemeInput::from_visemes(visemes), trie);
    DecodeResult base = decode_beam(lat, lm, 1.0, 16, 1);
    DecodeResult scaled = decode_beam(lat, lm, 2.5, 16, 1);
    CHECK(base.best.words == scaled.best.words);
    CHECK(scaled.best.total_logscore == doctest::Approx(2.5 * base.best.total_logscore));
  }
}

TEST_CASE("decode_corpus keeps order and isolates failures") {
  VisemeMap m = map_from("a\tA\nb\tB");
  Lexicon lex = lex_from("aa\ta a\nb\tb\n");
  NGramModel lm = train_on("aa b\n", 1);
  LexiconTrie trie(m, lex);

  std::vector<VisemeInput> inputs;
  inputs.push_back(VisemeInput::from_visemes({"A", "A"}));
  inputs.push_back(VisemeInput::from_visemes({"B", "A"}));  // no path
  inputs.push_back(VisemeInput::from_visemes({"B"}));

  auto results = decode_corpus(inputs, trie, lm, 1.0, 4, 1);
  REQUIRE(results.size() == 3);
  CHECK(results[0].result.has_value());
  CHECK(results[0].result->best.words == std::vector<std::string>{"aa"});
  CHECK_FALSE(results[1].result.has_value());
  CHECK(results[1].error.find("no full path") != std::string::npos);
  CHECK(results[2].result.has_value());
  CHECK(results[2].result->best.words == std::vector<std::string>{"b"});

  std::vector<VisemeInput> none;
  CHECK(decode_corpus(none, trie, lm, 1.0, 4, 1).empty());
}
