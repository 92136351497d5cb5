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

#include <cmath>
#include <random>
#include <sstream>

#include "visekit/error.hpp"
#include "visekit/lm.hpp"

using namespace visekit;

namespace {

NGramModel train_on(const std::string& corpus, int order, double discount = 0.75,
                    bool unk = false) {
  std::istringstream in(corpus);
  return NGramModel::train(in, order, discount, unk);
}

double prob(const NGramModel& m, std::vector<std::string> ctx, const std::string& w) {
  return std::exp(m.word_logprob(ctx, w));
}

// Conditionals must sum to 1 over everything the model can predict.
double support_sum(const NGramModel& m, const std::vector<std::string>& ctx) {
  double sum = 0.0;
  for (const auto& w : m.vocab()) {
    if (w == kBos) continue;
    sum += std::exp(m.word_logprob(ctx, w));
  }
  return sum;
}

}  // namespace

TEST_CASE("bigram counts dominate: P(b|a) > P(a|a)") {
  NGramModel m = train_on("a b\na b\n", 2);
  const double p_b_a = prob(m, {"a"}, "b");
  const double p_a_a = prob(m, {"a"}, "a");
  CHECK(p_b_a > p_a_a);

  // Hand derivation, absolute discounting D=0.75:
  // unigram: C=6 (a,b,</s> twice each), N1+=3, V_pred=4 -> P(b) = 1.25/6 + (0.75*3/6)/4
  const double p_uni_b = 1.25 / 6.0 + (0.75 * 3.0 / 6.0) / 4.0;
  // bigram context a: c(a,b)=2, c(a)=2, N1+(a)=1
  const double expect = (2.0 - 0.75) / 2.0 + (0.75 * 1.0 / 2.0) * p_uni_b;
  CHECK(p_b_a == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("unigram model normalizes") {
  NGramModel m = train_on("a b c\nb c\nc\n", 1);
  CHECK(support_sum(m, {}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization holds for observed and unobserved contexts") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"w1", "w2", "w3", "w4", "w5"};
  for (int order = 1; order <= 3; ++order) {
    std::string corpus;
    for (int s = 0; s < 20; ++s) {
      const std::size_t len = 1 + rng() % 6;
      for (std::size_t i = 0; i < len; ++i) {
        if (i) corpus += ' ';
        corpus += words[rng() % words.size()];
      }
      corpus += '\n';
    }
    NGramModel m = train_on(corpus, order);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<std::string> ctx;
      const std::size_t clen = rng() % order;  // up to order-1
      for (std::size_t i = 0; i < clen; ++i) {
        // Mix in OOV context tokens to hit unobserved contexts too.
        ctx.push_back(rng() % 4 == 0 ? "oov" : words[rng() % words.size()]);
      }
      CHECK(std::abs(support_sum(m, ctx) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("every vocabulary word has positive probability") {
  NGramModel m = train_on("a b\nc\n", 2);
  for (const auto& w : m.vocab()) {
    if (w == kBos) continue;
    CHECK(m.word_logprob({"a"}, w) > -std::numeric_limits<double>::infinity());
    CHECK(m.word_logprob({"a"}, w) < 0.0);
  }
  // OOV words map to <unk> and still score.
  CHECK(std::isfinite(m.word_logprob({}, "never-seen")));
}

TEST_CASE("one-word corpus: P(x|<s>) is the largest conditional") {
  NGramModel m = train_on("x\n", 2);
  const double top = prob(m, {std::string(kBos)}, "x");
  // Hand: P_uni(x) = 0.125 + 0.25 = 0.375; P(x|<s>) = 0.25 + 0.75*0.375
  CHECK(top == doctest::Approx(0.53125).epsilon(1e-12));
  for (const auto& ctx : {std::vector<std::string>{}, {std::string(kBos)}, {std::string("x")}}) {
    for (const auto& w : m.vocab()) {
      if (w == kBos) continue;
      CHECK(top >= prob(m, ctx, w));
    }
  }
}

TEST_CASE("logprob is never positive") {
  NGramModel m = train_on("a b c\na b\nb c a\n", 3);
  std::mt19937_64 rng(9);
  const std::vector<std::string> pool = {"a", "b", "c", "zzz"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> sent;
    for (std::size_t i = 0; i < rng() % 6; ++i) sent.push_back(pool[rng() % pool.size()]);
    CHECK(m.sentence_logprob(sent) <= 0.0);
  }
}

TEST_CASE("empty sentence scores the end transition from start") {
  NGramModel m = train_on("a b\n", 2);
  CHECK(m.sentence_logprob({}) ==
        m.word_logprob({std::string(kBos)}, kEos));
}

TEST_CASE("frequent word order outscores a shuffled one") {
  // Heavily skewed bigram statistics.
  std::string corpus;
  for (int i = 0; i < 50; ++i) corpus += "the cat\n";
  corpus += "cat the\n";
  NGramModel m = train_on(corpus, 2);
  CHECK(m.sentence_logprob({"the", "cat"}) > m.sentence_logprob({"cat", "the"}));
}

TEST_CASE("adding copies of a sentence never lowers its probability") {
  std::mt19937_64 rng(13);
  const std::vector<std::string> words = {"a", "b", "c"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> sent;
    const std::size_t len = 1 + rng() % 4;
    for (std::size_t i = 0; i < len; ++i) sent.push_back(words[rng() % words.size()]);
    std::string sent_line;
    for (std::size_t i = 0; i < sent.size(); ++i) {
      if (i) sent_line += ' ';
      sent_line += sent[i];
    }
    std::string base = "a b c\nc b\nb\n" + sent_line + "\n";
    double last = train_on(base, 2).sentence_logprob(sent);
    for (int copies = 1; copies <= 3; ++copies) {
      base += sent_line + "\n";
      const double now = train_on(base, 2).sentence_logprob(sent);
      CHECK(now >= last - 1e-12);
      last = now;
    }
  }
}

TEST_CASE("uniform model has perplexity equal to vocabulary size") {
  NGramModel u = NGramModel::uniform({"a", "b", "c", "d", "e"});
  // Prediction support: 5 words + </s> + <unk>.
  CHECK(u.prediction_support() == 7);
  std::istringstream text("a b\nc d e\n");
  auto r = u.perplexity(text);
  CHECK(r.perplexity == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("perplexity on training text beats disjoint random text") {
  std::string corpus;
  for (int i = 0; i < 30; ++i) corpus += "a b c d\n";
  NGramModel m = train_on(corpus, 2);
  std::istringstream train_text("a b c d\na b c d\n");
  std::istringstream other_text("d c b a\nb d a c\n");
  CHECK(m.perplexity(train_text).perplexity <= m.perplexity(other_text).perplexity);
}

TEST_CASE("single-sentence perplexity matches its definition") {
  NGramModel m = train_on("a b c\nb c\n", 2);
  std::istringstream text("a b c\n");
  auto r = m.perplexity(text);
  const double lp = m.sentence_logprob({"a", "b", "c"});
  CHECK(r.tokens == 4);  // three words plus </s>
  CHECK(r.perplexity == doctest::Approx(std::exp(-lp / 4.0)).epsilon(1e-12));
  CHECK(r.total_logprob == lp);
}

TEST_CASE("unk flag folds singletons") {
  NGramModel keep = train_on("a a b\n", 1, 0.75, false);
  CHECK(keep.in_vocab("b"));
  NGramModel fold = train_on("a a b\n", 1, 0.75, true);
  CHECK_FALSE(fold.in_vocab("b"));
  // b trained as <unk>, so scoring any OOV word uses its mass.
  CHECK(fold.word_logprob({}, "b") == fold.word_logprob({}, "never-seen"));
}

TEST_CASE("save/load round-trips scoring bit-exactly") {
  NGramModel m = train_on("a b c\nb c a a\nc\na b\n", 3, 0.6);
  std::ostringstream saved;
  m.save(saved);
  std::istringstream reload(saved.str());
  NGramModel m2 = NGramModel::load(reload);

  CHECK(m2.order() == m.order());
  CHECK(m2.discount() == m.discount());
  CHECK(m2.vocab() == m.vocab());

  std::mt19937_64 rng(31);
  const std::vector<std::string> pool = {"a", "b", "c", "oov"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> sent;
    for (std::size_t i = 0; i < rng() % 5; ++i) sent.push_back(pool[rng() % pool.size()]);
    CHECK(m.sentence_logprob(sent) == m2.sentence_logprob(sent));  // bit-exact
  }

  // Saving the reloaded model reproduces the file byte for byte.
  std::ostringstream saved2;
  m2.save(saved2);
  CHECK(saved.str() == saved2.str());
}

TEST_CASE("training argument validation") {
  CHECK_THROWS_AS(train_on("a\n", 0), Error);
  CHECK_THROWS_AS(train_on("a\n", 6), Error);
  CHECK_THROWS_AS(train_on("a\n", 2, 0.0), Error);
  CHECK_THROWS_AS(train_on("a\n", 2, 1.0), Error);
  CHECK_THROWS_AS(train_on("", 2), Error);
  CHECK_THROWS_AS(train_on("\n\n  \n", 2), Error);
}

TEST_CASE("load rejects corrupt models") {
  std::istringstream bad1("not a model\n");
  CHECK_THROWS_AS(NGramModel::load(bad1), Error);
  std::istringstream bad2("VLM\t1\norder\t2\n");
  CHECK_THROWS_AS(NGramModel::load(bad2), Error);
}
