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

#ifndef VISEKIT_SYNTH_HPP
#define VISEKIT_SYNTH_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "visekit/embedding.hpp"
#include "visekit/viseme.hpp"

namespace visekit::synth {

// Deterministic RNG: mt19937_64 (bit-exact across platforms) with local
// uniform/normal draws, since std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  // Unbiased integer in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n);
  // [0, 1) with 53 random bits.
  double unit();
  // Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct LexiconSpec {
  std::size_t n_words = 50;
  double collision_rate = 0.3;  // fraction of words cloned into an existing viseme sequence
  std::size_t n_visemes = 10;   // 2 phonemes per viseme
  std::size_t min_len = 4;
  std::size_t max_len = 8;
  std::uint64_t base_freq = 1000;  // word i gets max(1, base_freq/(i+1))
};

struct SynthLexicon {
  VisemeMap map;
  Lexicon lexicon;
};

// Lexicon whose homopheme collisions come from sibling phonemes of one viseme
// (distinct pronunciations, identical viseme sequences).
SynthLexicon make_lexicon(std::uint64_t seed, const LexiconSpec& spec = {});

// Each word on its own line, repeated `frequency` times: a corpus whose
// unigram statistics reproduce the lexicon frequencies exactly.
std::string make_frequency_corpus(const Lexicon& lex);

// Frequency-weighted random sentences, one per line.
std::string make_sentence_corpus(Rng& rng, const Lexicon& lex, std::size_t n_sentences,
                                 std::size_t min_words, std::size_t max_words);

// Frequency-weighted word draw.
const LexEntry& sample_word(Rng& rng, const Lexicon& lex);

struct EmbeddingSpec {
  std::size_t n_clusters = 4;
  std::size_t per_cluster = 8;
  std::size_t dim = 8;  // requires n_clusters <= dim
  double sigma = 1.0;
  double center_distance = 64.0;  // pairwise distance between cluster centers
};

struct SynthEmbeddings {
  EmbeddingTable table;
  VisemeMap map;  // assigns each point label to its cluster's viseme
};

// Gaussian clusters on orthogonal axes; labels p<c>_<j> map to viseme v<c>.
SynthEmbeddings make_embeddings(std::uint64_t seed, const EmbeddingSpec& spec = {});

}  // namespace visekit::synth

#endif  // VISEKIT_SYNTH_HPP
