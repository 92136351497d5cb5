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

#ifndef VISEKIT_METRICS_HPP
#define VISEKIT_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visekit {

// Minimum-edit alignment counts between a reference and a hypothesis.
// Insertions are hypothesis tokens with no reference counterpart, deletions
// are reference tokens missing from the hypothesis, following the usual ASR
// scoring convention. Error rate = 100 * (ins+del+sub) / ref_len.
struct EditOps {
  std::uint64_t ins = 0;
  std::uint64_t del = 0;
  std::uint64_t sub = 0;
  std::uint64_t ref_len = 0;

  std::uint64_t total() const { return ins + del + sub; }
  double error_rate() const;  // throws empty_reference when ref_len == 0

  EditOps& operator+=(const EditOps& o);
  friend EditOps operator+(EditOps a, const EditOps& b) { return a += b; }
  friend bool operator==(const EditOps&, const EditOps&) = default;
};

// Unit-cost Levenshtein alignment. Among co-optimal alignments the one with
// the fewest insertions+deletions is reported, which makes the (ins,del,sub)
// split canonical and symmetric: swapping the arguments swaps ins and del.
EditOps edit_ops(std::span<const std::string> reference, std::span<const std::string> hypothesis);

struct NormOptions {
  bool lowercase = false;
  bool strip_punct = false;
};

// NFC, optional case folding / punctuation stripping, whitespace runs
// collapsed to single spaces, ends trimmed. Lossless by default.
std::string normalize_for_scoring(std::string_view raw, const NormOptions& opts = {});

// Character tokens: Unicode scalar values of the normalized text. Spaces count.
std::vector<std::string> char_tokens(std::string_view normalized);
// Word tokens: whitespace-separated.
std::vector<std::string> word_tokens(std::string_view normalized);

// Character error rate, percent. Throws empty_reference when the reference
// normalizes to nothing. May exceed 100.
double cer(std::string_view reference, std::string_view hypothesis, const NormOptions& opts = {});
// Word error rate, percent.
double wer(std::string_view reference, std::string_view hypothesis, const NormOptions& opts = {});

struct CorpusScore {
  EditOps chars;
  EditOps words;
  double cer() const { return chars.error_rate(); }
  double wer() const { return words.error_rate(); }
};

// Pooled corpus scoring: edit counts and reference lengths are summed over
// all pairs, then the rate is taken once. Throws empty_reference naming the
// offending 0-based pair index.
CorpusScore corpus_score(std::span<const std::pair<std::string, std::string>> pairs,
                         const NormOptions& opts = {});

// Alternative aggregation: mean of per-utterance rates.
struct MeanCorpusScore {
  double cer = 0.0;
  double wer = 0.0;
};
MeanCorpusScore corpus_score_mean(std::span<const std::pair<std::string, std::string>> pairs,
                                  const NormOptions& opts = {});

struct RankedPrediction {
  std::vector<std::string> candidates;  // highest score first, no duplicates
  std::string truth;
};

// Percent of items whose truth is among the first min(k, |candidates|)
// candidates. Throws on k < 1 or empty preds.
double topk_accuracy(std::span<const RankedPrediction> preds, std::size_t k);

}  // namespace visekit

#endif  // VISEKIT_METRICS_HPP
