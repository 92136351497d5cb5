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

#include "visekit/metrics.hpp"

#include <algorithm>
#include <cstdint>

#include "visekit/error.hpp"
#include "visekit/text.hpp"

namespace visekit {

double EditOps::error_rate() const {
  if (ref_len == 0) {
    throw Error(Errc::empty_reference, "reference length is zero");
  }
  return 100.0 * static_cast<double>(total()) / static_cast<double>(ref_len);
}

EditOps& EditOps::operator+=(const EditOps& o) {
  ins += o.ins;
  del += o.del;
  sub += o.sub;
  ref_len += o.ref_len;
  return *this;
}

EditOps edit_ops(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();

  // Cell value: (total edits, insertions+deletions), minimized
  // lexicographically. Both components are additive along alignment paths, so
  // the lexicographic minimum is a valid DP objective. Minimizing ins+del at
  // equal cost picks the maximum-substitution co-optimal alignment; that
  // canonical choice is invariant under transposing the DP, which is what
  // makes the split swap cleanly when the arguments swap.
  struct Cell {
    std::uint32_t cost;
    std::uint32_t id;
    bool operator<(const Cell& o) const {
      return cost != o.cost ? cost < o.cost : id < o.id;
    }
  };

  std::vector<Cell> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    prev[j] = {static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j)};  // j deletions
  }
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)};  // i insertions
    for (std::size_t j = 1; j <= n; ++j) {
      bool match = hypothesis[i - 1] == reference[j - 1];
      Cell best = {prev[j - 1].cost + (match ? 0u : 1u), prev[j - 1].id};
      Cell via_ins = {prev[j].cost + 1, prev[j].id + 1};
      Cell via_del = {cur[j - 1].cost + 1, cur[j - 1].id + 1};
      if (via_ins < best) best = via_ins;
      if (via_del < best) best = via_del;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }

  const Cell final = prev[n];
  EditOps ops;
  ops.ref_len = n;
  ops.sub = final.cost - final.id;
  // ins - del == m - n for every full alignment; with ins+del known both follow.
  const std::int64_t diff = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(n);
  ops.ins = static_cast<std::uint64_t>((static_cast<std::int64_t>(final.id) + diff) / 2);
  ops.del = static_cast<std::uint64_t>((static_cast<std::int64_t>(final.id) - diff) / 2);
  return ops;
}

std::string normalize_for_scoring(std::string_view raw, const NormOptions& opts) {
  std::string s = text::nfc(raw);
  if (opts.lowercase) s = text::fold_case(s);
  if (opts.strip_punct) s = text::strip_punct(s);
  return text::collapse_ws(s);
}

std::vector<std::string> char_tokens(std::string_view normalized) {
  return text::codepoints(normalized);
}

std::vector<std::string> word_tokens(std::string_view normalized) {
  return text::split_ws(normalized);
}

namespace {

EditOps edit_ops_chars(std::string_view ref_norm, std::string_view hyp_norm) {
  std::vector<std::string> ref = char_tokens(ref_norm);
  if (ref.empty()) {
    throw Error(Errc::empty_reference, "reference is empty after normalization");
  }
  std::vector<std::string> hyp = char_tokens(hyp_norm);
  return edit_ops(ref, hyp);
}

EditOps edit_ops_words(std::string_view ref_norm, std::string_view hyp_norm) {
  std::vector<std::string> ref = word_tokens(ref_norm);
  if (ref.empty()) {
    throw Error(Errc::empty_reference, "reference has no words after normalization");
  }
  std::vector<std::string> hyp = word_tokens(hyp_norm);
  return edit_ops(ref, hyp);
}

}  // namespace

double cer(std::string_view reference, std::string_view hypothesis, const NormOptions& opts) {
  return edit_ops_chars(normalize_for_scoring(reference, opts),
                        normalize_for_scoring(hypothesis, opts))
      .error_rate();
}

double wer(std::string_view reference, std::string_view hypothesis, const NormOptions& opts) {
  return edit_ops_words(normalize_for_scoring(reference, opts),
                        normalize_for_scoring(hypothesis, opts))
      .error_rate();
}

CorpusScore corpus_score(std::span<const std::pair<std::string, std::string>> pairs,
                         const NormOptions& opts) {
  CorpusScore total;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string ref = normalize_for_scoring(pairs[i].first, opts);
    std::string hyp = normalize_for_scoring(pairs[i].second, opts);
    try {
      total.chars += edit_ops_chars(ref, hyp);
      total.words += edit_ops_words(ref, hyp);
    } catch (const Error& e) {
      if (e.code() == Errc::empty_reference) {
        throw Error(Errc::empty_reference, "pair " + std::to_string(i) + ": " + e.what());
      }
      throw;
    }
  }
  return total;
}

MeanCorpusScore corpus_score_mean(std::span<const std::pair<std::string, std::string>> pairs,
                                  const NormOptions& opts) {
  if (pairs.empty()) {
    throw Error(Errc::bad_argument, "no pairs to score");
  }
  MeanCorpusScore mean;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string ref = normalize_for_scoring(pairs[i].first, opts);
    std::string hyp = normalize_for_scoring(pairs[i].second, opts);
    try {
      mean.cer += edit_ops_chars(ref, hyp).error_rate();
      mean.wer += edit_ops_words(ref, hyp).error_rate();
    } catch (const Error& e) {
      if (e.code() == Errc::empty_reference) {
        throw Error(Errc::empty_reference, "pair " + std::to_string(i) + ": " + e.what());
      }
      throw;
    }
  }
  mean.cer /= static_cast<double>(pairs.size());
  mean.wer /= static_cast<double>(pairs.size());
  return mean;
}

double topk_accuracy(std::span<const RankedPrediction> preds, std::size_t k) {
  if (k < 1) {
    throw Error(Errc::bad_argument, "k must be >= 1");
  }
  if (preds.empty()) {
    throw Error(Errc::empty_predictions, "no ranked predictions");
  }
  std::uint64_t hits = 0;
  for (const RankedPrediction& p : preds) {
    const std::size_t limit = std::min(k, p.candidates.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (p.candidates[i] == p.truth) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace visekit
