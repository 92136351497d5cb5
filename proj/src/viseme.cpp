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

#include "visekit/viseme.hpp"

#include <algorithm>
#include <charconv>

#include "visekit/error.hpp"
#include "visekit/text.hpp"

namespace visekit {

namespace {

// Symbols (phonemes, visemes, words) are NFC tokens with no whitespace.
std::string check_symbol(std::string_view raw, std::string_view what, int line) {
  std::string sym = text::nfc(raw);
  if (sym.empty()) {
    throw Error(Errc::malformed_line, std::string(what) + " is empty", line);
  }
  if (text::has_whitespace(sym)) {
    throw Error(Errc::malformed_line,
                std::string(what) + " '" + sym + "' contains whitespace", line);
  }
  return sym;
}

}  // namespace

VisemeMap VisemeMap::load(std::istream& in, std::string name) {
  text::TsvReader reader(in);
  std::vector<std::string> fields;
  VisemeMap map;
  map.name_ = std::move(name);
  while (reader.next(fields)) {
    if (fields.size() != 2) {
      throw Error(Errc::malformed_line,
                  "expected 2 tab-separated fields, got " + std::to_string(fields.size()),
                  reader.line_no());
    }
    std::string phoneme = check_symbol(fields[0], "phoneme", reader.line_no());
    std::string viseme = check_symbol(fields[1], "viseme", reader.line_no());
    auto [_, inserted] = map.entries_.emplace(phoneme, viseme);
    if (!inserted) {
      throw Error(Errc::duplicate_phoneme, "duplicate phoneme '" + phoneme + "'",
                  reader.line_no());
    }
  }
  if (map.entries_.empty()) {
    throw Error(Errc::empty_map, "viseme map has no entries");
  }
  map.index_visemes();
  return map;
}

VisemeMap VisemeMap::from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                                std::string name) {
  VisemeMap map;
  map.name_ = std::move(name);
  for (const auto& [p, v] : pairs) {
    std::string phoneme = check_symbol(p, "phoneme", 0);
    std::string viseme = check_symbol(v, "viseme", 0);
    auto [_, inserted] = map.entries_.emplace(phoneme, viseme);
    if (!inserted) {
      throw Error(Errc::duplicate_phoneme, "duplicate phoneme '" + phoneme + "'");
    }
  }
  if (map.entries_.empty()) {
    throw Error(Errc::empty_map, "viseme map has no entries");
  }
  map.index_visemes();
  return map;
}

void VisemeMap::index_visemes() {
  visemes_.clear();
  for (const auto& [_, v] : entries_) visemes_.push_back(v);
  std::sort(visemes_.begin(), visemes_.end());
  visemes_.erase(std::unique(visemes_.begin(), visemes_.end()), visemes_.end());
  viseme_ids_.clear();
  for (std::size_t i = 0; i < visemes_.size(); ++i) {
    viseme_ids_.emplace(visemes_[i], static_cast<int>(i));
  }
}

void VisemeMap::save(std::ostream& out) const {
  out << "# viseme map: " << name_ << " (version " << version_ << ")\n";
  for (const auto& [p, v] : entries_sorted()) {
    out << p << '\t' << v << '\n';
  }
}

bool VisemeMap::contains(std::string_view phoneme) const {
  return entries_.find(std::string(phoneme)) != entries_.end();
}

const std::string& VisemeMap::viseme_of(std::string_view phoneme) const {
  auto it = entries_.find(std::string(phoneme));
  if (it == entries_.end()) {
    throw Error(Errc::unknown_phoneme, "unknown phoneme '" + std::string(phoneme) + "'");
  }
  return it->second;
}

std::optional<int> VisemeMap::viseme_index(std::string_view viseme) const {
  auto it = viseme_ids_.find(std::string(viseme));
  if (it == viseme_ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, std::string>> VisemeMap::entries_sorted() const {
  std::vector<std::pair<std::string, std::string>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Lexicon Lexicon::load(std::istream& in) {
  text::TsvReader reader(in);
  std::vector<std::string> fields;
  Lexicon lex;
  while (reader.next(fields)) {
    if (fields.size() != 2 && fields.size() != 3) {
      throw Error(Errc::malformed_line,
                  "expected 2 or 3 tab-separated fields, got " + std::to_string(fields.size()),
                  reader.line_no());
    }
    LexEntry entry;
    entry.line = reader.line_no();
    entry.word = check_symbol(fields[0], "word", reader.line_no());
    for (const std::string& tok : text::split_ws(fields[1])) {
      entry.pronunciation.push_back(text::nfc(tok));
    }
    if (entry.pronunciation.empty()) {
      throw Error(Errc::empty_pronunciation,
                  "word '" + entry.word + "' has an empty pronunciation", reader.line_no());
    }
    if (fields.size() == 3) {
      std::uint64_t freq = 0;
      const char* first = fields[2].data();
      const char* last = first + fields[2].size();
      auto [ptr, ec] = std::from_chars(first, last, freq);
      if (ec != std::errc() || ptr != last) {
        throw Error(Errc::bad_frequency, "frequency '" + fields[2] + "' is not a non-negative integer",
                    reader.line_no());
      }
      entry.frequency = freq;
    }
    lex.add(std::move(entry));
  }
  if (!lex.empty() && lex.total_frequency() == 0) {
    throw Error(Errc::bad_frequency, "all frequencies are zero");
  }
  return lex;
}

void Lexicon::add(LexEntry entry) {
  if (entry.pronunciation.empty()) {
    throw Error(Errc::empty_pronunciation, "word '" + entry.word + "' has an empty pronunciation",
                entry.line);
  }
  auto [_, inserted] = by_word_.emplace(entry.word, entries_.size());
  if (!inserted) {
    throw Error(Errc::duplicate_word, "duplicate word '" + entry.word + "'", entry.line);
  }
  total_frequency_ += entry.frequency;
  entries_.push_back(std::move(entry));
}

const LexEntry* Lexicon::find(std::string_view word) const {
  auto it = by_word_.find(std::string(word));
  if (it == by_word_.end()) return nullptr;
  return &entries_[it->second];
}

std::vector<std::string> phonemes_to_visemes(const VisemeMap& map,
                                             std::span<const std::string> seq, bool strict) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (const std::string& p : seq) {
    if (map.contains(p)) {
      out.push_back(map.viseme_of(p));
    } else if (strict) {
      throw Error(Errc::unknown_phoneme, "unknown phoneme '" + p + "'");
    } else {
      out.emplace_back(kUnkViseme);
    }
  }
  return out;
}

std::vector<std::string> word_to_visemes(const VisemeMap& map, const Lexicon& lex,
                                         std::string_view word) {
  const LexEntry* entry = lex.find(text::nfc(word));
  if (entry == nullptr) {
    throw Error(Errc::unknown_word, "word '" + std::string(word) + "' not in lexicon");
  }
  return phonemes_to_visemes(map, entry->pronunciation, /*strict=*/true);
}

}  // namespace visekit
