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

#ifndef VISEKIT_LM_HPP
#define VISEKIT_LM_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace visekit {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

// Word n-gram model with absolute discounting and recursive backoff down to a
// uniform base over the prediction vocabulary. Conditionals sum to one over
// the prediction vocabulary for every context, and every vocabulary word has
// positive probability. Immutable once trained; queries are const.
class NGramModel {
 public:
  // One sentence per line; lines are NFC-normalized and whitespace-tokenized,
  // then wrapped in <s>...</s>. order in [1,5], discount in (0,1). With
  // unk_singletons, words seen exactly once train as <unk>.
  static NGramModel train(std::istream& corpus, int order, double discount,
                          bool unk_singletons = false);

  // Model with no observations: every conditional is uniform over the
  // prediction vocabulary (words + </s> + <unk>).
  static NGramModel uniform(const std::vector<std::string>& words, int order = 1,
                            double discount = 0.75);

  // Natural-log P(word | context); uses the last order-1 context tokens,
  // out-of-vocabulary tokens map to <unk>. Always finite and < 0.
  double word_logprob(std::span<const std::string> context, std::string_view word) const;
  double word_logprob(std::initializer_list<std::string> context, std::string_view word) const {
    return word_logprob(std::span(context.begin(), context.size()), word);
  }

  // Sum of conditional log probs over the <s>-padded sentence, including the
  // final </s> transition.
  double sentence_logprob(std::span<const std::string> words) const;
  double sentence_logprob(std::initializer_list<std::string> words) const {
    return sentence_logprob(std::span(words.begin(), words.size()));
  }

  struct PerplexityResult {
    double perplexity = 0.0;
    double total_logprob = 0.0;
    std::uint64_t tokens = 0;  // predicted tokens, </s> counted per sentence
  };
  PerplexityResult perplexity(std::istream& corpus) const;

  // Versioned text format; save/load round-trips the scoring tables bit-exactly.
  void save(std::ostream& out) const;
  static NGramModel load(std::istream& in);

  int order() const { return order_; }
  double discount() const { return discount_; }
  // All tokens, sorted, including <s>, </s>, <unk>.
  const std::vector<std::string>& vocab() const { return vocab_; }
  // Tokens the model can predict (vocab minus <s>).
  std::size_t prediction_support() const { return vocab_.size() - 1; }
  bool in_vocab(std::string_view token) const;

  // Incremental scoring state for decoders: the last order-1 tokens.
  std::vector<std::string> start_context() const;
  static void push_context(std::vector<std::string>& context, std::string_view word, int order);

 private:
  NGramModel() = default;

  struct SeqHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const;
  };
  using Key = std::vector<std::int32_t>;

  std::int32_t id_of(std::string_view token) const;  // <unk> for OOV
  double logprob_ids(std::span<const std::int32_t> context, std::int32_t word) const;
  void finish_vocab(std::vector<std::string> words);

  int order_ = 1;
  double discount_ = 0.75;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::int32_t> token_ids_;
  std::int32_t bos_id_ = -1, eos_id_ = -1, unk_id_ = -1;

  double base_logprob_ = 0.0;   // log(1 / prediction_support)
  double unigram_bow_ = 0.0;    // log backoff mass of the empty context
  // probs_[k-1]: observed k-gram -> log P(last | rest); bows_[k-1]: observed
  // length-k context -> log backoff weight.
  std::vector<std::unordered_map<Key, double, SeqHash>> probs_;
  std::vector<std::unordered_map<Key, double, SeqHash>> bows_;
};

}  // namespace visekit

#endif  // VISEKIT_LM_HPP
