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

#include "visekit/ambiguity.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "visekit/error.hpp"

namespace visekit {

std::uint64_t HomophemeClass::total_frequency() const {
  std::uint64_t total = 0;
  for (const auto& [_, f] : members) total += f;
  return total;
}

std::vector<HomophemeClass> homopheme_classes(const VisemeMap& map, const Lexicon& lex) {
  // std::map keys the partition and gives a deterministic first ordering.
  std::map<std::vector<std::string>, HomophemeClass> by_seq;
  for (const LexEntry& entry : lex.entries()) {
    std::vector<std::string> seq = phonemes_to_visemes(map, entry.pronunciation);
    HomophemeClass& cls = by_seq[seq];
    if (cls.viseme_seq.empty()) cls.viseme_seq = std::move(seq);
    cls.members.emplace_back(entry.word, entry.frequency);
  }

  std::vector<HomophemeClass> classes;
  classes.reserve(by_seq.size());
  for (auto& [_, cls] : by_seq) {
    std::sort(cls.members.begin(), cls.members.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(), [](const HomophemeClass& a, const HomophemeClass& b) {
    std::uint64_t fa = a.total_frequency(), fb = b.total_frequency();
    if (fa != fb) return fa > fb;
    return a.viseme_seq < b.viseme_seq;
  });
  return classes;
}

double upper_bound_accuracy(std::span<const HomophemeClass> classes) {
  if (classes.empty()) {
    throw Error(Errc::bad_argument, "no homopheme classes");
  }
  std::uint64_t best = 0, total = 0;
  for (const HomophemeClass& cls : classes) {
    best += cls.top_frequency();
    total += cls.total_frequency();
  }
  if (total == 0) {
    throw Error(Errc::bad_argument, "total frequency is zero");
  }
  return 100.0 * static_cast<double>(best) / static_cast<double>(total);
}

AmbiguityReport ambiguity_report(const VisemeMap& map, const Lexicon& lex) {
  AmbiguityReport report;
  report.classes = homopheme_classes(map, lex);
  report.n_classes = report.classes.size();
  for (const HomophemeClass& cls : report.classes) {
    report.n_words += cls.members.size();
    report.best_freq_total += cls.top_frequency();
    report.freq_total += cls.total_frequency();
  }
  report.upper_bound_accuracy = upper_bound_accuracy(report.classes);
  return report;
}

void write_ambiguity_tsv(std::ostream& out, const AmbiguityReport& report) {
  for (const HomophemeClass& cls : report.classes) {
    for (std::size_t i = 0; i < cls.viseme_seq.size(); ++i) {
      if (i) out << ' ';
      out << cls.viseme_seq[i];
    }
    out << '\t';
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
      if (i) out << ' ';
      out << cls.members[i].first << ':' << cls.members[i].second;
    }
    out << '\n';
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", report.upper_bound_accuracy);
  out << "# words=" << report.n_words << "\tclasses=" << report.n_classes
      << "\tupper_bound_accuracy=" << buf << '\n';
}

}  // namespace visekit
