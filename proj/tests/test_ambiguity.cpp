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

#include <set>
#include <sstream>

#include "visekit/ambiguity.hpp"
#include "visekit/error.hpp"
#include "visekit/synth.hpp"

using namespace visekit;

namespace {

Lexicon lex_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return Lexicon::load(in);
}

VisemeMap map_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return VisemeMap::load(in, "test");
}

const HomophemeClass* class_of(const std::vector<HomophemeClass>& classes,
                               const std::string& word) {
  for (const auto& cls : classes) {
    for (const auto& [w, _] : cls.members) {
      if (w == word) return &cls;
    }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("back/pack collapse into one class") {
  VisemeMap m = map_from("b\tB\np\tB\na\tA\nk\tK\nc\tC\nt\tT");
  Lexicon lex = lex_from(
      "back\tb a k\n"
      "pack\tp a k\n"
      "cat\tc a t\n");
  auto classes = homopheme_classes(m, lex);
  REQUIRE(classes.size() == 2);
  const HomophemeClass* bp = class_of(classes, "back");
  REQUIRE(bp != nullptr);
  CHECK(bp->members.size() == 2);
  CHECK(class_of(classes, "pack") == bp);
  CHECK(class_of(classes, "cat")->members.size() == 1);
}

TEST_CASE("single-word lexicon gives one singleton class") {
  VisemeMap m = map_from("a\tA");
  Lexicon lex = lex_from("aa\ta a\n");
  auto classes = homopheme_classes(m, lex);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].members.size() == 1);
  CHECK(upper_bound_accuracy(classes) == 100.0);
}

TEST_CASE("pat/bat/cat fixture: partition and exact bound") {
  VisemeMap m = map_from("p\tLIP\nb\tLIP\nc\tC\na\tA\nt\tT");
  Lexicon lex = lex_from(
      "pat\tp a t\t7\n"
      "bat\tb a t\t3\n"
      "cat\tc a t\t5\n");
  auto classes = homopheme_classes(m, lex);
  REQUIRE(classes.size() == 2);
  const HomophemeClass* pb = class_of(classes, "pat");
  REQUIRE(pb != nullptr);
  CHECK(pb->members.size() == 2);
  CHECK(pb->members[0].first == "pat");  // frequency-descending
  CHECK(pb->members[0].second == 7);
  CHECK(class_of(classes, "cat")->members.size() == 1);

  // 100 * (7 + 5) / 15 = 80, exactly.
  CHECK(upper_bound_accuracy(classes) == 80.0);
  AmbiguityReport report = ambiguity_report(m, lex);
  CHECK(report.best_freq_total == 12);
  CHECK(report.freq_total == 15);
  CHECK(report.upper_bound_accuracy == 80.0);
  CHECK(report.n_words == 3);
  CHECK(report.n_classes == 2);
}

TEST_CASE("equal frequencies in one two-member class give 50") {
  VisemeMap m = map_from("p\tX\nb\tX\na\tA");
  Lexicon lex = lex_from(
      "pa\tp a\t4\n"
      "ba\tb a\t4\n");
  auto classes = homopheme_classes(m, lex);
  REQUIRE(classes.size() == 1);
  // Frequency tie: lexicographically smallest word is the representative.
  CHECK(classes[0].members[0].first == "ba");
  CHECK(upper_bound_accuracy(classes) == 50.0);
}

TEST_CASE("true homophones stay distinct members") {
  VisemeMap m = map_from("s\tS\ni\tI");
  Lexicon lex = lex_from(
      "sea\ts i\t48\n"
      "see\ts i\t120\n");
  auto classes = homopheme_classes(m, lex);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].members.size() == 2);
  CHECK(classes[0].members[0].first == "see");
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(upper_bound_accuracy({}), Error);
  VisemeMap m = map_from("a\tA");
  Lexicon lex = lex_from("az\ta z\n");
  CHECK_THROWS_AS(homopheme_classes(m, lex), Error);  // unknown phoneme z
}

TEST_CASE("classes form a partition of the lexicon") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    synth::SynthLexicon sl = synth::make_lexicon(seed);
    auto classes = homopheme_classes(sl.map, sl.lexicon);
    std::multiset<std::string> seen;
    for (const auto& cls : classes) {
      for (const auto& [w, _] : cls.members) seen.insert(w);
      // All members share the class viseme sequence.
      for (const auto& [w, _] : cls.members) {
        CHECK(word_to_visemes(sl.map, sl.lexicon, w) == cls.viseme_seq);
      }
    }
    CHECK(seen.size() == sl.lexicon.size());
    for (const auto& e : sl.lexicon.entries()) CHECK(seen.count(e.word) == 1);
  }
}

TEST_CASE("bound is invariant under uniform frequency scaling") {
  VisemeMap m = map_from("p\tX\nb\tX\nc\tC\na\tA\nt\tT");
  auto make = [&](std::uint64_t scale) {
    Lexicon lex;
    lex.add({"pat", {"p", "a", "t"}, 7 * scale, 0});
    lex.add({"bat", {"b", "a", "t"}, 3 * scale, 0});
    lex.add({"cat", {"c", "a", "t"}, 5 * scale, 0});
    return ambiguity_report(m, lex).upper_bound_accuracy;
  };
  CHECK(make(1) == make(7));
  CHECK(make(1) == make(1000));
}

TEST_CASE("refining the map never decreases the bound") {
  // Split one synth viseme into two and compare exact rationals.
  for (std::uint64_t seed : {11ull, 12ull, 13ull, 14ull}) {
    synth::SynthLexicon sl = synth::make_lexicon(seed);
    AmbiguityReport coarse = ambiguity_report(sl.map, sl.lexicon);

    // Refinement: give each phoneme its own viseme (the finest split).
    std::vector<std::pair<std::string, std::string>> fine_pairs;
    for (const auto& [p, v] : sl.map.entries_sorted()) {
      fine_pairs.emplace_back(p, v + "/" + p);
    }
    VisemeMap fine = VisemeMap::from_pairs(fine_pairs, "fine");
    AmbiguityReport refined = ambiguity_report(fine, sl.lexicon);

    // Same denominator, so comparing numerators is exact.
    CHECK(coarse.freq_total == refined.freq_total);
    CHECK(refined.best_freq_total >= coarse.best_freq_total);

    // Intermediate refinement: split only viseme v000 by sibling identity.
    std::vector<std::pair<std::string, std::string>> mid_pairs;
    for (const auto& [p, v] : sl.map.entries_sorted()) {
      mid_pairs.emplace_back(p, v == "v000" ? v + "/" + p : v);
    }
    AmbiguityReport mid = ambiguity_report(VisemeMap::from_pairs(mid_pairs, "mid"), sl.lexicon);
    CHECK(mid.best_freq_total >= coarse.best_freq_total);
    CHECK(refined.best_freq_total >= mid.best_freq_total);
  }
}

TEST_CASE("oracle most-frequent-word classifier achieves the bound exactly") {
  for (std::uint64_t seed : {21ull, 22ull}) {
    synth::SynthLexicon sl = synth::make_lexicon(seed);
    AmbiguityReport report = ambiguity_report(sl.map, sl.lexicon);

    // Exhaustive token enumeration: every word appears `frequency` times; the
    // classifier answers its class representative.
    std::uint64_t correct = 0, total = 0;
    auto classes = homopheme_classes(sl.map, sl.lexicon);
    for (const auto& e : sl.lexicon.entries()) {
      const HomophemeClass* cls = class_of(classes, e.word);
      REQUIRE(cls != nullptr);
      if (cls->members[0].first == e.word) correct += e.frequency;
      total += e.frequency;
    }
    CHECK(total == report.freq_total);
    CHECK(correct == report.best_freq_total);
    CHECK(100.0 * static_cast<double>(correct) / static_cast<double>(total) ==
          report.upper_bound_accuracy);
  }
}

TEST_CASE("report TSV shape") {
  VisemeMap m = map_from("p\tX\nb\tX\na\tA");
  Lexicon lex = lex_from("pa\tp a\t9\nba\tb a\t1\n");
  std::ostringstream out;
  write_ambiguity_tsv(out, ambiguity_report(m, lex));
  const std::string text = out.str();
  CHECK(text.find("X A\tpa:9 ba:1\n") != std::string::npos);
  CHECK(text.find("upper_bound_accuracy=90.00") != std::string::npos);
}
