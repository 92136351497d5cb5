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

#include "visekit/lm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "visekit/error.hpp"
#include "visekit/text.hpp"

namespace visekit {

namespace {

constexpr int kMaxOrder = 5;

std::string render_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::bad_model, "bad number '" + std::string(s) + "'", line);
  }
  return v;
}

std::vector<std::vector<std::string>> read_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (text::getline_any(in, line)) {
    std::vector<std::string> words = text::split_ws(text::nfc(line));
    if (!words.empty()) sentences.push_back(std::move(words));
  }
  return sentences;
}

}  // namespace

std::size_t NGramModel::SeqHash::operator()(const std::vector<std::int32_t>& v) const {
  // FNV-1a over the id bytes; ids are small and dense so this mixes fine.
  std::size_t h = 1469598103934665603ull;
  for (std::int32_t x : v) {
    for (int s = 0; s < 32; s += 8) {
      h ^= static_cast<std::size_t>((x >> s) & 0xff);
      h *= 1099511628211ull;
    }
  }
  return h;
}

void NGramModel::finish_vocab(std::vector<std::string> words) {
  std::set<std::string> uniq(words.begin(), words.end());
  uniq.insert(std::string(kBos));
  uniq.insert(std::string(kEos));
  uniq.insert(std::string(kUnk));
  vocab_.assign(uniq.begin(), uniq.end());
  token_ids_.clear();
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    token_ids_.emplace(vocab_[i], static_cast<std::int32_t>(i));
  }
  bos_id_ = token_ids_.at(std::string(kBos));
  eos_id_ = token_ids_.at(std::string(kEos));
  unk_id_ = token_ids_.at(std::string(kUnk));
  base_logprob_ = -std::log(static_cast<double>(prediction_support()));
  probs_.assign(static_cast<std::size_t>(order_), {});
  bows_.assign(static_cast<std::size_t>(order_), {});
  unigram_bow_ = 0.0;
}

NGramModel NGramModel::train(std::istream& corpus, int order, double discount,
                             bool unk_singletons) {
  if (order < 1 || order > kMaxOrder) {
    throw Error(Errc::bad_argument,
                "order must be in [1," + std::to_string(kMaxOrder) + "]");
  }
  if (!(discount > 0.0 && discount < 1.0)) {
    throw Error(Errc::bad_argument, "discount must be in (0,1)");
  }
  std::vector<std::vector<std::string>> sentences = read_sentences(corpus);
  if (sentences.empty()) {
    throw Error(Errc::empty_corpus, "corpus has no non-empty lines");
  }

  if (unk_singletons) {
    std::unordered_map<std::string, std::uint64_t> raw;
    for (const auto& s : sentences) {
      for (const auto& w : s) ++raw[w];
    }
    for (auto& s : sentences) {
      for (auto& w : s) {
        if (raw.at(w) == 1) w = std::string(kUnk);
      }
    }
  }

  NGramModel model;
  model.order_ = order;
  model.discount_ = discount;
  {
    std::vector<std::string> words;
    for (const auto& s : sentences) words.insert(words.end(), s.begin(), s.end());
    model.finish_vocab(std::move(words));
  }

  // Counts of k-grams ending at each predicted position (every word plus the
  // </s> of each sentence), with order-1 leading <s> pads.
  std::vector<std::unordered_map<Key, std::uint64_t, SeqHash>> counts(
      static_cast<std::size_t>(order));
  for (const auto& sentence : sentences) {
    std::vector<std::int32_t> padded(static_cast<std::size_t>(order - 1), model.bos_id_);
    for (const auto& w : sentence) padded.push_back(model.token_ids_.at(w));
    padded.push_back(model.eos_id_);
    for (std::size_t pos = static_cast<std::size_t>(order - 1); pos < padded.size(); ++pos) {
      for (int k = 1; k <= order; ++k) {
        Key gram(padded.begin() + (pos + 1 - static_cast<std::size_t>(k)),
                 padded.begin() + (pos + 1));
        ++counts[static_cast<std::size_t>(k - 1)][gram];
      }
    }
  }

  // Derive interpolated probabilities bottom-up in the linear domain, then
  // store logs. P(w|h) = max(c-D,0)/c(h) + D*N1+(h)/c(h) * P(w|h'), base
  // uniform over the prediction vocabulary.
  const double base = 1.0 / static_cast<double>(model.prediction_support());
  std::vector<std::unordered_map<Key, double, SeqHash>> lin_probs(
      static_cast<std::size_t>(order));
  std::vector<std::unordered_map<Key, double, SeqHash>> lin_bows(
      static_cast<std::size_t>(order));
  double lin_unigram_bow = 1.0;

  // Linear-domain query against the already-built lower orders.
  auto lower_prob = [&](std::span<const std::int32_t> ctx, std::int32_t w) {
    double bow_acc = 1.0;
    while (true) {
      const std::size_t k = ctx.size() + 1;
      Key gram(ctx.begin(), ctx.end());
      gram.push_back(w);
      auto it = lin_probs[k - 1].find(gram);
      if (it != lin_probs[k - 1].end()) return bow_acc * it->second;
      if (ctx.empty()) return bow_acc * lin_unigram_bow * base;
      auto bw = lin_bows[ctx.size() - 1].find(Key(ctx.begin(), ctx.end()));
      if (bw != lin_bows[ctx.size() - 1].end()) bow_acc *= bw->second;
      ctx = ctx.subspan(1);
    }
  };

  for (int k = 1; k <= order; ++k) {
    const auto& level = counts[static_cast<std::size_t>(k - 1)];
    // Per-context totals and distinct-continuation counts.
    std::unordered_map<Key, std::pair<std::uint64_t, std::uint64_t>, SeqHash> ctx_stats;
    for (const auto& [gram, c] : level) {
      Key ctx(gram.begin(), gram.end() - 1);
      auto& st = ctx_stats[ctx];
      st.first += c;
      st.second += 1;
    }
    for (const auto& [ctx, st] : ctx_stats) {
      const double total = static_cast<double>(st.first);
      const double bow = discount * static_cast<double>(st.second) / total;
      if (k == 1) {
        lin_unigram_bow = bow;
      } else {
        lin_bows[ctx.size() - 1].emplace(ctx, bow);
      }
    }
    for (const auto& [gram, c] : level) {
      Key ctx(gram.begin(), gram.end() - 1);
      const auto& st = ctx_stats.at(ctx);
      const double total = static_cast<double>(st.first);
      const double disc = (static_cast<double>(c) - discount) / total;
      const double bow = discount * static_cast<double>(st.second) / total;
      const double lower =
          (k == 1) ? base : lower_prob(std::span(ctx).subspan(1), gram.back());
      lin_probs[static_cast<std::size_t>(k - 1)].emplace(gram, disc + bow * lower);
    }
  }

  for (int k = 1; k <= order; ++k) {
    for (const auto& [gram, p] : lin_probs[static_cast<std::size_t>(k - 1)]) {
      model.probs_[static_cast<std::size_t>(k - 1)].emplace(gram, std::log(p));
    }
    for (const auto& [ctx, b] : lin_bows[static_cast<std::size_t>(k - 1)]) {
      model.bows_[static_cast<std::size_t>(k - 1)].emplace(ctx, std::log(b));
    }
  }
  model.unigram_bow_ = std::log(lin_unigram_bow);
  return model;
}

NGramModel NGramModel::uniform(const std::vector<std::string>& words, int order,
                               double discount) {
  if (order < 1 || order > kMaxOrder) {
    throw Error(Errc::bad_argument,
                "order must be in [1," + std::to_string(kMaxOrder) + "]");
  }
  NGramModel model;
  model.order_ = order;
  model.discount_ = discount;
  std::vector<std::string> normalized;
  normalized.reserve(words.size());
  for (const auto& w : words) normalized.push_back(text::nfc(w));
  model.finish_vocab(std::move(normalized));
  // No observations: every query falls through to bow(empty)=1 times base.
  return model;
}

std::int32_t NGramModel::id_of(std::string_view token) const {
  auto it = token_ids_.find(std::string(token));
  return it == token_ids_.end() ? unk_id_ : it->second;
}

bool NGramModel::in_vocab(std::string_view token) const {
  return token_ids_.find(std::string(token)) != token_ids_.end();
}

double NGramModel::logprob_ids(std::span<const std::int32_t> context, std::int32_t word) const {
  double bow_acc = 0.0;
  std::span<const std::int32_t> ctx =
      context.size() > static_cast<std::size_t>(order_ - 1)
          ? context.subspan(context.size() - static_cast<std::size_t>(order_ - 1))
          : context;
  while (true) {
    const std::size_t k = ctx.size() + 1;
    Key gram(ctx.begin(), ctx.end());
    gram.push_back(word);
    auto it = probs_[k - 1].find(gram);
    if (it != probs_[k - 1].end()) return bow_acc + it->second;
    if (ctx.empty()) return bow_acc + unigram_bow_ + base_logprob_;
    auto bw = bows_[ctx.size() - 1].find(Key(ctx.begin(), ctx.end()));
    if (bw != bows_[ctx.size() - 1].end()) bow_acc += bw->second;
    ctx = ctx.subspan(1);
  }
}

double NGramModel::word_logprob(std::span<const std::string> context,
                                std::string_view word) const {
  std::vector<std::int32_t> ctx;
  ctx.reserve(context.size());
  for (const auto& t : context) ctx.push_back(id_of(t));
  return logprob_ids(ctx, id_of(word));
}

double NGramModel::sentence_logprob(std::span<const std::string> words) const {
  std::vector<std::int32_t> padded(static_cast<std::size_t>(order_ - 1), bos_id_);
  for (const auto& w : words) padded.push_back(id_of(w));
  padded.push_back(eos_id_);
  double total = 0.0;
  for (std::size_t pos = static_cast<std::size_t>(order_ - 1); pos < padded.size(); ++pos) {
    std::span<const std::int32_t> ctx(padded.data() + pos - static_cast<std::size_t>(order_ - 1),
                                      static_cast<std::size_t>(order_ - 1));
    total += logprob_ids(ctx, padded[pos]);
  }
  return total;
}

NGramModel::PerplexityResult NGramModel::perplexity(std::istream& corpus) const {
  std::vector<std::vector<std::string>> sentences = read_sentences(corpus);
  if (sentences.empty()) {
    throw Error(Errc::empty_corpus, "corpus has no non-empty lines");
  }
  PerplexityResult r;
  for (const auto& s : sentences) {
    r.total_logprob += sentence_logprob(s);
    r.tokens += s.size() + 1;
  }
  r.perplexity = std::exp(-r.total_logprob / static_cast<double>(r.tokens));
  return r;
}

std::vector<std::string> NGramModel::start_context() const {
  return std::vector<std::string>(static_cast<std::size_t>(order_ - 1), std::string(kBos));
}

void NGramModel::push_context(std::vector<std::string>& context, std::string_view word,
                              int order) {
  if (order <= 1) return;
  context.emplace_back(word);
  if (context.size() > static_cast<std::size_t>(order - 1)) {
    context.erase(context.begin());
  }
}

void NGramModel::save(std::ostream& out) const {
  out << "VLM\t1\n";
  out << "order\t" << order_ << '\n';
  out << "discount\t" << render_double(discount_) << '\n';
  out << "vocab\t" << vocab_.size() << '\n';
  for (const auto& t : vocab_) out << t << '\n';
  out << "unigram_bow\t" << render_double(unigram_bow_) << '\n';

  auto gram_text = [&](const Key& gram) {
    std::string s;
    for (std::size_t i = 0; i < gram.size(); ++i) {
      if (i) s += ' ';
      s += vocab_[static_cast<std::size_t>(gram[i])];
    }
    return s;
  };
  for (int k = 1; k <= order_; ++k) {
    const auto& level = probs_[static_cast<std::size_t>(k - 1)];
    std::map<std::string, double> sorted;
    for (const auto& [gram, lp] : level) sorted.emplace(gram_text(gram), lp);
    out << "probs\t" << k << '\t' << sorted.size() << '\n';
    for (const auto& [g, lp] : sorted) out << render_double(lp) << '\t' << g << '\n';

    const auto& blevel = bows_[static_cast<std::size_t>(k - 1)];
    if (k < order_ || !blevel.empty()) {
      std::map<std::string, double> bsorted;
      for (const auto& [ctx, b] : blevel) bsorted.emplace(gram_text(ctx), b);
      out << "bows\t" << k << '\t' << bsorted.size() << '\n';
      for (const auto& [g, b] : bsorted) out << render_double(b) << '\t' << g << '\n';
    }
  }
}

NGramModel NGramModel::load(std::istream& in) {
  int line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::string& {
    if (!text::getline_any(in, line)) {
      throw Error(Errc::bad_model, "unexpected end of model file", line_no);
    }
    ++line_no;
    return line;
  };

  std::vector<std::string> f = text::split_tab(next_line());
  if (f.size() != 2 || f[0] != "VLM" || f[1] != "1") {
    throw Error(Errc::bad_model, "not a VLM 1 model file", line_no);
  }
  f = text::split_tab(next_line());
  if (f.size() != 2 || f[0] != "order") throw Error(Errc::bad_model, "expected order", line_no);
  int order = static_cast<int>(parse_double(f[1], line_no));
  if (order < 1 || order > kMaxOrder) throw Error(Errc::bad_model, "order out of range", line_no);
  f = text::split_tab(next_line());
  if (f.size() != 2 || f[0] != "discount") {
    throw Error(Errc::bad_model, "expected discount", line_no);
  }
  double discount = parse_double(f[1], line_no);
  f = text::split_tab(next_line());
  if (f.size() != 2 || f[0] != "vocab") throw Error(Errc::bad_model, "expected vocab", line_no);
  std::size_t vocab_n = static_cast<std::size_t>(parse_double(f[1], line_no));

  NGramModel model;
  model.order_ = order;
  model.discount_ = discount;
  std::vector<std::string> words;
  words.reserve(vocab_n);
  for (std::size_t i = 0; i < vocab_n; ++i) words.push_back(next_line());
  model.finish_vocab(std::move(words));
  if (model.vocab_.size() != vocab_n) {
    throw Error(Errc::bad_model, "vocab block inconsistent", line_no);
  }

  f = text::split_tab(next_line());
  if (f.size() != 2 || f[0] != "unigram_bow") {
    throw Error(Errc::bad_model, "expected unigram_bow", line_no);
  }
  model.unigram_bow_ = parse_double(f[1], line_no);

  auto parse_gram = [&](std::string_view text_, int k) {
    Key gram;
    for (const auto& tok : text::split_ws(text_)) {
      auto it = model.token_ids_.find(tok);
      if (it == model.token_ids_.end()) {
        throw Error(Errc::bad_model, "n-gram token '" + tok + "' not in vocab", line_no);
      }
      gram.push_back(it->second);
    }
    if (gram.size() != static_cast<std::size_t>(k)) {
      throw Error(Errc::bad_model, "n-gram length mismatch", line_no);
    }
    return gram;
  };

  while (text::getline_any(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    f = text::split_tab(line);
    if (f.size() != 3 || (f[0] != "probs" && f[0] != "bows")) {
      throw Error(Errc::bad_model, "expected a probs/bows block header", line_no);
    }
    const bool is_probs = f[0] == "probs";
    const int k = static_cast<int>(parse_double(f[1], line_no));
    if (k < 1 || k > order) throw Error(Errc::bad_model, "block order out of range", line_no);
    const std::size_t count = static_cast<std::size_t>(parse_double(f[2], line_no));
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<std::string> entry = text::split_tab(next_line());
      if (entry.size() != 2) throw Error(Errc::bad_model, "bad block entry", line_no);
      double v = parse_double(entry[0], line_no);
      Key gram = parse_gram(entry[1], k);
      auto& table = is_probs ? model.probs_[static_cast<std::size_t>(k - 1)]
                             : model.bows_[static_cast<std::size_t>(k - 1)];
      table.emplace(std::move(gram), v);
    }
  }
  return model;
}

}  // namespace visekit
