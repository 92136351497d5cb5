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

#ifndef VISEKIT_AMBIGUITY_HPP
#define VISEKIT_AMBIGUITY_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "visekit/viseme.hpp"

namespace visekit {

// Words that share one viseme sequence and are therefore visually
// indistinguishable in isolation. Members are sorted by frequency descending,
// ties by word ascending, so members[0] is the class representative.
struct HomophemeClass {
  std::vector<std::string> viseme_seq;
  std::vector<std::pair<std::string, std::uint64_t>> members;

  std::uint64_t top_frequency() const { return members.empty() ? 0 : members[0].second; }
  std::uint64_t total_frequency() const;
};

struct AmbiguityReport {
  std::vector<HomophemeClass> classes;
  std::uint64_t n_words = 0;
  std::uint64_t n_classes = 0;
  // Exact rational behind upper_bound_accuracy: 100 * best_total / freq_total.
  std::uint64_t best_freq_total = 0;
  std::uint64_t freq_total = 0;
  double upper_bound_accuracy = 0.0;
};

// Partition of the lexicon keyed by exact viseme-sequence equality (strict
// mapping; unknown phonemes propagate). Classes are ordered by total
// frequency descending, then viseme sequence ascending.
std::vector<HomophemeClass> homopheme_classes(const VisemeMap& map, const Lexicon& lex);

// Best achievable word accuracy for a classifier restricted to viseme
// sequences: it can do no better than answering each class's most frequent
// member. 100 * (sum of per-class max frequency) / (sum of all frequencies).
double upper_bound_accuracy(std::span<const HomophemeClass> classes);

AmbiguityReport ambiguity_report(const VisemeMap& map, const Lexicon& lex);

// One class per line: `viseme seq<TAB>word:freq word:freq ...`, then a
// '#'-prefixed summary line with the bound.
void write_ambiguity_tsv(std::ostream& out, const AmbiguityReport& report);

}  // namespace visekit

#endif  // VISEKIT_AMBIGUITY_HPP
