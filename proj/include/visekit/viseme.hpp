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

#ifndef VISEKIT_VISEME_HPP
#define VISEKIT_VISEME_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace visekit {

// Viseme assigned to phonemes missing from the map in non-strict mode.
inline constexpr std::string_view kUnkViseme = "<unk_v>";

// Many-to-one phoneme -> viseme table. Immutable once built. Phoneme and
// viseme symbols are NFC-normalized, whitespace-free tokens; phonemes compare
// by exact codepoint equality.
class VisemeMap {
 public:
  // Parses TSV `phoneme<TAB>viseme`, one pair per line, '#' comments allowed.
  static VisemeMap load(std::istream& in, std::string name);
  static VisemeMap from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                              std::string name);

  // Writes the table back out, sorted by phoneme. load(save(m)) == m.
  void save(std::ostream& out) const;

  const std::string& name() const { return name_; }
  const std::string& version() const { return version_; }

  bool contains(std::string_view phoneme) const;
  // Throws unknown_phoneme.
  const std::string& viseme_of(std::string_view phoneme) const;

  // Image of the mapping, sorted; stable viseme indexing for matrix inputs.
  const std::vector<std::string>& visemes() const { return visemes_; }
  std::optional<int> viseme_index(std::string_view viseme) const;

  std::size_t phoneme_count() const { return entries_.size(); }
  std::size_t viseme_count() const { return visemes_.size(); }

  // Phoneme -> viseme pairs, sorted by phoneme.
  std::vector<std::pair<std::string, std::string>> entries_sorted() const;

 private:
  VisemeMap() = default;
  void index_visemes();

  std::string name_;
  std::string version_ = "1";
  std::unordered_map<std::string, std::string> entries_;
  std::vector<std::string> visemes_;
  std::unordered_map<std::string, int> viseme_ids_;
};

struct LexEntry {
  std::string word;
  std::vector<std::string> pronunciation;
  std::uint64_t frequency = 1;
  int line = 0;  // source line, 0 for programmatic entries
};

// Word list with pronunciations and counts. Entries keep insertion order;
// words are unique.
class Lexicon {
 public:
  Lexicon() = default;

  // Parses TSV `word<TAB>ph ph ph[<TAB>frequency]`; missing frequency -> 1.
  static Lexicon load(std::istream& in);

  void add(LexEntry entry);  // throws duplicate_word / empty_pronunciation

  const std::vector<LexEntry>& entries() const { return entries_; }
  const LexEntry* find(std::string_view word) const;
  std::uint64_t total_frequency() const { return total_frequency_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LexEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_word_;
  std::uint64_t total_frequency_ = 0;
};

// Elementwise phoneme -> viseme transform; output length equals input length,
// adjacent duplicates are kept. Non-strict maps unknown phonemes to <unk_v>.
std::vector<std::string> phonemes_to_visemes(const VisemeMap& map,
                                             std::span<const std::string> seq,
                                             bool strict = true);

// Viseme sequence of a lexicon word (strict). Throws unknown_word.
std::vector<std::string> word_to_visemes(const VisemeMap& map, const Lexicon& lex,
                                         std::string_view word);

}  // namespace visekit

#endif  // VISEKIT_VISEME_HPP
