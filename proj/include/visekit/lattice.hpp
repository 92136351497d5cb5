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

#ifndef VISEKIT_LATTICE_HPP
#define VISEKIT_LATTICE_HPP

#include <cstdint>
#include <istream>
#include <limits>
#include <string>
#include <vector>

#include "visekit/viseme.hpp"

namespace visekit {

// Decoder input: either an exact viseme sequence or a TxV matrix of per-frame
// viseme posteriors (rows sum to 1). An exact sequence is equivalent to a
// one-hot posterior.
class VisemeInput {
 public:
  static VisemeInput from_visemes(std::vector<std::string> visemes);
  // Validates entries >= 0 and row sums within 1e-6 of 1.
  static VisemeInput from_posterior(std::vector<std::string> viseme_order,
                                    std::vector<std::vector<double>> rows);
  // Text format: `VPOST 1 T V`, a line of V viseme ids, then T rows of V
  // probabilities.
  static VisemeInput parse_vpost(std::istream& in);

  bool is_posterior() const { return is_posterior_; }
  std::size_t length() const;  // T

  const std::vector<std::string>& exact() const { return exact_; }
  const std::vector<std::vector<double>>& posterior() const { return posterior_; }
  const std::vector<std::string>& viseme_order() const { return viseme_order_; }

 private:
  VisemeInput() = default;
  bool is_posterior_ = false;
  std::vector<std::string> exact_;
  std::vector<std::vector<double>> posterior_;
  std::vector<std::string> viseme_order_;
};

// Word index of <unk> edges (not a lexicon entry).
inline constexpr std::uint32_t kUnkWordIndex = std::numeric_limits<std::uint32_t>::max();

struct LatticeEdge {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t word = 0;  // lexicon entry index, or kUnkWordIndex
  double acoustic = 0.0;   // 0 for exact matches; sum of log posteriors otherwise
};

// Trie over the lexicon's viseme sequences; built once, shared across inputs.
class LexiconTrie {
 public:
  LexiconTrie(const VisemeMap& map, const Lexicon& lex);

  const VisemeMap& map() const { return *map_; }
  const Lexicon& lexicon() const { return *lex_; }

  struct Node {
    std::vector<std::pair<int, std::uint32_t>> children;  // (viseme id, node), sorted
    std::vector<std::uint32_t> words;                     // entries ending here, word-sorted
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t max_word_len() const { return max_word_len_; }

 private:
  const VisemeMap* map_;
  const Lexicon* lex_;
  std::vector<Node> nodes_;
  std::size_t max_word_len_ = 0;
};

struct LatticeOptions {
  bool allow_unk = false;      // add single-viseme <unk> edges everywhere
  double unk_penalty = -10.0;  // acoustic score of an <unk> edge
};

// DAG over viseme positions 0..T whose edges are lexicon words matching
// sub-spans. Holds a pointer into the trie's lexicon; keep it alive.
struct VisemeLattice {
  std::size_t n_positions = 1;  // T + 1
  std::vector<LatticeEdge> edges;
  std::vector<std::vector<std::uint32_t>> edges_from;  // edge ids by start position
  const Lexicon* lexicon = nullptr;

  std::size_t final_position() const { return n_positions - 1; }
  const std::string& word_of(const LatticeEdge& e) const;
};

VisemeLattice build_lattice(const VisemeInput& input, const LexiconTrie& trie,
                            const LatticeOptions& opts = {});
VisemeLattice build_lattice(const VisemeInput& input, const VisemeMap& map, const Lexicon& lex,
                            const LatticeOptions& opts = {});

// Number of full 0->T paths, saturating at `cap`.
std::uint64_t count_full_paths(const VisemeLattice& lattice, std::uint64_t cap);

}  // namespace visekit

#endif  // VISEKIT_LATTICE_HPP
