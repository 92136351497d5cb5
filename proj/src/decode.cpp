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

#include "visekit/decode.hpp"

#include <algorithm>

#include "visekit/error.hpp"

namespace visekit {

namespace {

// Partial hypothesis. Word strings point into the lexicon (or the <unk>
// constant), both of which outlive the decode.
struct Partial {
  std::vector<const std::string*> words;
  std::vector<std::string> lm_context;  // last order-1 words
  double acoustic = 0.0;
  double lm = 0.0;
  double total = 0.0;
};

bool words_less(const std::vector<const std::string*>& a,
                const std::vector<const std::string*>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const std::string* x, const std::string* y) { return *x < *y; });
}

// Score-descending, then word-sequence-ascending. Total order on distinct
// paths: equal word sequences imply the same path.
bool partial_less(const Partial& a, const Partial& b) {
  if (a.total != b.total) return a.total > b.total;
  return words_less(a.words, b.words);
}

Hypothesis to_hypothesis(const Partial& p, std::size_t end_position) {
  Hypothesis h;
  h.words.reserve(p.words.size());
  for (const std::string* w : p.words) h.words.push_back(*w);
  h.end_position = end_position;
  h.acoustic = p.acoustic;
  h.lm = p.lm;
  h.total_logscore = p.total;
  return h;
}

}  // namespace

DecodeResult decode_beam(const VisemeLattice& lattice, const NGramModel& lm, double lambda,
                         std::size_t width, std::size_t nbest) {
  if (width < 1 || nbest < 1) {
    throw Error(Errc::bad_argument, "width and nbest must be >= 1");
  }
  const std::size_t t_final = lattice.final_position();

  std::vector<std::vector<Partial>> pending(lattice.n_positions);
  {
    Partial init;
    init.lm_context = lm.start_context();
    pending[0].push_back(std::move(init));
  }

  for (std::size_t pos = 0; pos <= t_final; ++pos) {
    auto& here = pending[pos];
    if (here.empty()) continue;
    std::sort(here.begin(), here.end(), partial_less);
    if (here.size() > width) here.resize(width);
    if (pos == t_final) break;
    for (const Partial& hyp : here) {
      for (std::uint32_t e : lattice.edges_from[pos]) {
        const LatticeEdge& edge = lattice.edges[e];
        const std::string& word = lattice.word_of(edge);
        Partial next = hyp;
        next.words.push_back(&word);
        next.acoustic += edge.acoustic;
        next.lm += lm.word_logprob(next.lm_context, word);
        NGramModel::push_context(next.lm_context, word, lm.order());
        next.total = next.acoustic + lambda * next.lm;
        pending[edge.end].push_back(std::move(next));
      }
    }
    here.clear();  // survivors were copied forward; free early
  }

  std::vector<Partial>& finals = pending[t_final];
  if (finals.empty()) {
    throw Error(Errc::no_path, "no full path through the lattice (position " +
                                   std::to_string(t_final) + " unreachable)");
  }
  for (Partial& p : finals) {
    p.lm += lm.word_logprob(p.lm_context, kEos);
    p.total = p.acoustic + lambda * p.lm;
  }
  std::sort(finals.begin(), finals.end(), partial_less);

  DecodeResult result;
  result.strategy = width == 1 ? Strategy::greedy : Strategy::beam;
  result.width = width;
  result.best = to_hypothesis(finals.front(), t_final);
  const std::size_t keep = std::min(nbest, finals.size());
  result.nbest.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    result.nbest.push_back(to_hypothesis(finals[i], t_final));
  }
  return result;
}

DecodeResult decode_greedy(const VisemeLattice& lattice, const NGramModel& lm, double lambda) {
  DecodeResult r = decode_beam(lattice, lm, lambda, /*width=*/1, /*nbest=*/1);
  r.strategy = Strategy::greedy;
  return r;
}

std::vector<BatchItem> decode_corpus(std::span<const VisemeInput> inputs, const LexiconTrie& trie,
                                     const NGramModel& lm, double lambda, std::size_t width,
                                     std::size_t nbest, const LatticeOptions& opts) {
  std::vector<BatchItem> out;
  out.reserve(inputs.size());
  for (const VisemeInput& input : inputs) {
    BatchItem item;
    try {
      VisemeLattice lattice = build_lattice(input, trie, opts);
      item.result = decode_beam(lattice, lm, lambda, width, nbest);
    } catch (const Error& e) {
      item.error = e.what();
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace visekit
