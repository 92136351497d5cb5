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

#ifndef VISEKIT_DECODE_HPP
#define VISEKIT_DECODE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visekit/lattice.hpp"
#include "visekit/lm.hpp"

namespace visekit {

struct Hypothesis {
  std::vector<std::string> words;
  std::size_t end_position = 0;
  double acoustic = 0.0;
  double lm = 0.0;              // LM log score including </s> once complete
  double total_logscore = 0.0;  // acoustic + lambda * lm
};

enum class Strategy { greedy, beam };

struct DecodeResult {
  Hypothesis best;
  // Ranked surviving final hypotheses, score-descending with word-sequence
  // tie-breaks. Approximate k-best: candidates are bounded by the beam
  // width, not an exact k-best extraction.
  std::vector<Hypothesis> nbest;
  Strategy strategy = Strategy::beam;
  std::size_t width = 1;
};

// Left-to-right beam search over the lattice. At each position the top-width
// hypotheses by total_logscore survive (ties broken by word sequence,
// ascending). Final scores include the LM end-of-sentence transition.
// Throws no_path when no hypothesis reaches the final position.
DecodeResult decode_beam(const VisemeLattice& lattice, const NGramModel& lm, double lambda,
                         std::size_t width, std::size_t nbest = 1);

// Beam of width 1.
DecodeResult decode_greedy(const VisemeLattice& lattice, const NGramModel& lm, double lambda);

struct BatchItem {
  std::optional<DecodeResult> result;
  std::string error;  // empty on success
};

// Elementwise decode; per-item failures are reported without aborting the
// batch, and results keep input order.
std::vector<BatchItem> decode_corpus(std::span<const VisemeInput> inputs, const LexiconTrie& trie,
                                     const NGramModel& lm, double lambda, std::size_t width,
                                     std::size_t nbest = 1, const LatticeOptions& opts = {});

}  // namespace visekit

#endif  // VISEKIT_DECODE_HPP
