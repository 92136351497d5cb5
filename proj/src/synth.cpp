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

#include "visekit/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "visekit/error.hpp"

namespace visekit::synth {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(Errc::bad_argument, "empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double Rng::unit() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = unit();
  } while (u1 == 0.0);
  const double u2 = unit();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

namespace {

std::string num_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
  return buf;
}

}  // namespace

SynthLexicon make_lexicon(std::uint64_t seed, const LexiconSpec& spec) {
  if (spec.n_words == 0 || spec.n_visemes == 0 || spec.min_len == 0 ||
      spec.min_len > spec.max_len) {
    throw Error(Errc::bad_argument, "bad lexicon spec");
  }
  Rng rng(seed);

  // Two sibling phonemes per viseme, so viseme-sequence clones can differ in
  // pronunciation the way "back"/"pack" do.
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::array<std::string, 2>> siblings(spec.n_visemes);
  std::vector<std::string> viseme_names(spec.n_visemes);
  for (std::size_t v = 0; v < spec.n_visemes; ++v) {
    viseme_names[v] = num_name("v", v);
    siblings[v] = {num_name("pa", v), num_name("pb", v)};
    pairs.emplace_back(siblings[v][0], viseme_names[v]);
    pairs.emplace_back(siblings[v][1], viseme_names[v]);
  }
  VisemeMap map = VisemeMap::from_pairs(pairs, "synth");

  Lexicon lex;
  std::vector<std::vector<std::size_t>> viseme_seqs;  // per word, viseme ids
  std::set<std::vector<std::string>> seen_prons;
  for (std::size_t i = 0; i < spec.n_words; ++i) {
    LexEntry entry;
    entry.word = num_name("w", i);
    entry.frequency = std::max<std::uint64_t>(1, spec.base_freq / (i + 1));

    const bool clone = i > 0 && rng.unit() < spec.collision_rate;
    std::vector<std::size_t> seq;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      entry.pronunciation.clear();
      seq.clear();
      if (clone) {
        const std::size_t src = rng.below(i);
        seq = viseme_seqs[src];
        for (std::size_t vid : seq) {
          entry.pronunciation.push_back(siblings[vid][rng.below(2)]);
        }
      } else {
        const std::size_t len = spec.min_len + rng.below(spec.max_len - spec.min_len + 1);
        for (std::size_t t = 0; t < len; ++t) {
          const std::size_t vid = rng.below(spec.n_visemes);
          seq.push_back(vid);
          entry.pronunciation.push_back(siblings[vid][rng.below(2)]);
        }
        // Fresh words must not collide with an existing viseme sequence.
        bool collides = false;
        for (const auto& other : viseme_seqs) {
          if (other == seq) {
            collides = true;
            break;
          }
        }
        if (collides) continue;
      }
      if (seen_prons.insert(entry.pronunciation).second) break;
    }
    viseme_seqs.push_back(std::move(seq));
    lex.add(std::move(entry));
  }
  return {std::move(map), std::move(lex)};
}

std::string make_frequency_corpus(const Lexicon& lex) {
  std::string out;
  for (const LexEntry& e : lex.entries()) {
    for (std::uint64_t k = 0; k < e.frequency; ++k) {
      out += e.word;
      out += '\n';
    }
  }
  return out;
}

const LexEntry& sample_word(Rng& rng, const Lexicon& lex) {
  if (lex.empty() || lex.total_frequency() == 0) {
    throw Error(Errc::bad_argument, "cannot sample from an empty lexicon");
  }
  std::uint64_t target = rng.below(lex.total_frequency());
  for (const LexEntry& e : lex.entries()) {
    if (target < e.frequency) return e;
    target -= e.frequency;
  }
  return lex.entries().back();  // unreachable
}

std::string make_sentence_corpus(Rng& rng, const Lexicon& lex, std::size_t n_sentences,
                                 std::size_t min_words, std::size_t max_words) {
  if (min_words == 0 || min_words > max_words) {
    throw Error(Errc::bad_argument, "bad sentence length range");
  }
  std::string out;
  for (std::size_t s = 0; s < n_sentences; ++s) {
    const std::size_t len = min_words + rng.below(max_words - min_words + 1);
    for (std::size_t i = 0; i < len; ++i) {
      if (i) out += ' ';
      out += sample_word(rng, lex).word;
    }
    out += '\n';
  }
  return out;
}

SynthEmbeddings make_embeddings(std::uint64_t seed, const EmbeddingSpec& spec) {
  if (spec.n_clusters < 2 || spec.per_cluster == 0 || spec.dim == 0 ||
      spec.n_clusters > spec.dim) {
    throw Error(Errc::bad_argument, "bad embedding spec (need 2 <= clusters <= dim)");
  }
  Rng rng(seed);
  // Centers on orthogonal axes at distance center_distance from each other.
  const double scale = spec.center_distance / std::sqrt(2.0);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t c = 0; c < spec.n_clusters; ++c) {
    const std::string viseme = num_name("v", c);
    for (std::size_t j = 0; j < spec.per_cluster; ++j) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "p%02zu_%02zu", c, j);
      labels.emplace_back(buf);
      pairs.emplace_back(buf, viseme);
      std::vector<double> row(spec.dim, 0.0);
      for (double& v : row) v = spec.sigma * rng.normal();
      row[c] += scale;
      rows.push_back(std::move(row));
    }
  }
  SynthEmbeddings out{EmbeddingTable::from_rows(std::move(labels), std::move(rows)),
                      VisemeMap::from_pairs(pairs, "synth-clusters")};
  out.table.provenance = "synthetic gaussian clusters";
  return out;
}

}  // namespace visekit::synth
