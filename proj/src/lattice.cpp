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

#include "visekit/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "visekit/error.hpp"
#include "visekit/lm.hpp"
#include "visekit/text.hpp"

namespace visekit {

namespace {

const std::string kUnkWordString{kUnk};

double parse_prob(std::string_view s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::bad_posterior, "bad probability '" + std::string(s) + "'", line);
  }
  return v;
}

void validate_rows(const std::vector<std::vector<double>>& rows, std::size_t n_cols) {
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != n_cols) {
      throw Error(Errc::bad_posterior,
                  "row " + std::to_string(t) + " has " + std::to_string(rows[t].size()) +
                      " entries, expected " + std::to_string(n_cols));
    }
    double sum = 0.0;
    for (double p : rows[t]) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(Errc::bad_posterior, "row " + std::to_string(t) + " has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(Errc::bad_posterior, "row " + std::to_string(t) + " sums to " +
                                           std::to_string(sum) + ", expected 1");
    }
  }
}

}  // namespace

VisemeInput VisemeInput::from_visemes(std::vector<std::string> visemes) {
  VisemeInput in;
  in.is_posterior_ = false;
  in.exact_.reserve(visemes.size());
  for (auto& v : visemes) in.exact_.push_back(text::nfc(v));
  return in;
}

VisemeInput VisemeInput::from_posterior(std::vector<std::string> viseme_order,
                                        std::vector<std::vector<double>> rows) {
  validate_rows(rows, viseme_order.size());
  VisemeInput in;
  in.is_posterior_ = true;
  for (auto& v : viseme_order) in.viseme_order_.push_back(text::nfc(v));
  in.posterior_ = std::move(rows);
  return in;
}

VisemeInput VisemeInput::parse_vpost(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> std::string& {
    if (!text::getline_any(in, line)) {
      throw Error(Errc::bad_posterior, "unexpected end of posterior file", line_no);
    }
    ++line_no;
    return line;
  };

  std::vector<std::string> header = text::split_ws(next_line());
  if (header.size() != 4 || header[0] != "VPOST" || header[1] != "1") {
    throw Error(Errc::bad_posterior, "expected header 'VPOST 1 T V'", line_no);
  }
  std::size_t t_count = 0, v_count = 0;
  auto parse_count = [&](const std::string& s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(Errc::bad_posterior, "bad header count '" + s + "'", line_no);
    }
  };
  parse_count(header[2], t_count);
  parse_count(header[3], v_count);
  if (v_count == 0) {
    throw Error(Errc::bad_posterior, "posterior needs at least one viseme column", line_no);
  }

  std::vector<std::string> order = text::split_ws(next_line());
  if (order.size() != v_count) {
    throw Error(Errc::bad_posterior,
                "ordering line has " + std::to_string(order.size()) + " ids, expected " +
                    std::to_string(v_count),
                line_no);
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    std::vector<std::string> cells = text::split_ws(next_line());
    if (cells.size() != v_count) {
      throw Error(Errc::bad_posterior,
                  "row has " + std::to_string(cells.size()) + " entries, expected " +
                      std::to_string(v_count),
                  line_no);
    }
    std::vector<double> row;
    row.reserve(v_count);
    for (const auto& c : cells) row.push_back(parse_prob(c, line_no));
    rows.push_back(std::move(row));
  }
  return from_posterior(std::move(order), std::move(rows));
}

std::size_t VisemeInput::length() const {
  return is_posterior_ ? posterior_.size() : exact_.size();
}

LexiconTrie::LexiconTrie(const VisemeMap& map, const Lexicon& lex) : map_(&map), lex_(&lex) {
  if (lex.empty()) {
    throw Error(Errc::bad_argument, "lexicon is empty");
  }
  nodes_.emplace_back();
  for (std::uint32_t i = 0; i < lex.size(); ++i) {
    const LexEntry& entry = lex.entries()[i];
    std::vector<std::string> seq;
    try {
      seq = phonemes_to_visemes(map, entry.pronunciation);
    } catch (const Error& e) {
      if (e.code() == Errc::unknown_phoneme) {
        throw Error(Errc::unknown_phoneme,
                    std::string(e.what()) + " (word '" + entry.word + "')", entry.line);
      }
      throw;
    }
    max_word_len_ = std::max(max_word_len_, seq.size());
    std::uint32_t node = 0;
    for (const std::string& v : seq) {
      int vid = *map.viseme_index(v);  // image of the map, always present
      std::uint32_t next_node;
      {
        auto& children = nodes_[node].children;
        auto it = std::lower_bound(children.begin(), children.end(), vid,
                                   [](const auto& c, int id) { return c.first < id; });
        if (it != children.end() && it->first == vid) {
          next_node = it->second;
        } else {
          next_node = static_cast<std::uint32_t>(nodes_.size());
          children.insert(it, {vid, next_node});
          nodes_.emplace_back();  // may reallocate nodes_; next_node is already saved
        }
      }
      node = next_node;
    }
    nodes_[node].words.push_back(i);
  }
  for (auto& n : nodes_) {
    std::sort(n.words.begin(), n.words.end(), [&](std::uint32_t a, std::uint32_t b) {
      return lex.entries()[a].word < lex.entries()[b].word;
    });
  }
}

const std::string& VisemeLattice::word_of(const LatticeEdge& e) const {
  if (e.word == kUnkWordIndex) return kUnkWordString;
  return lexicon->entries()[e.word].word;
}

namespace {

// Depth-first trie walk over a posterior span starting at `start`.
void walk_posterior(const LexiconTrie& trie, const std::vector<std::vector<double>>& rows,
                    const std::vector<int>& col_of_viseme, std::size_t start,
                    std::uint32_t node_idx, std::size_t t, double score,
                    std::vector<LatticeEdge>& edges) {
  const LexiconTrie::Node& node = trie.nodes()[node_idx];
  for (std::uint32_t w : node.words) {
    edges.push_back({static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(t), w, score});
  }
  if (t >= rows.size()) return;
  for (const auto& [vid, child] : node.children) {
    int col = col_of_viseme[static_cast<std::size_t>(vid)];
    if (col < 0) continue;  // viseme absent from the posterior: probability 0
    double p = rows[t][static_cast<std::size_t>(col)];
    if (p <= 0.0) continue;
    walk_posterior(trie, rows, col_of_viseme, start, child, t + 1, score + std::log(p), edges);
  }
}

}  // namespace

VisemeLattice build_lattice(const VisemeInput& input, const LexiconTrie& trie,
                            const LatticeOptions& opts) {
  const VisemeMap& map = trie.map();
  const std::size_t t_len = input.length();
  VisemeLattice lattice;
  lattice.n_positions = t_len + 1;
  lattice.lexicon = &trie.lexicon();

  if (input.is_posterior()) {
    std::vector<int> col_of_viseme(map.viseme_count(), -1);
    for (std::size_t c = 0; c < input.viseme_order().size(); ++c) {
      const std::string& v = input.viseme_order()[c];
      std::optional<int> vid = map.viseme_index(v);
      if (!vid) {
        throw Error(Errc::unknown_viseme, "posterior viseme '" + v + "' not in map");
      }
      col_of_viseme[static_cast<std::size_t>(*vid)] = static_cast<int>(c);
    }
    for (std::size_t i = 0; i < t_len; ++i) {
      // Skip the empty-span terminal scan at depth 0 (no zero-length words).
      const LexiconTrie::Node& root = trie.nodes()[0];
      for (const auto& [vid, child] : root.children) {
        int col = col_of_viseme[static_cast<std::size_t>(vid)];
        if (col < 0) continue;
        double p = input.posterior()[i][static_cast<std::size_t>(col)];
        if (p <= 0.0) continue;
        walk_posterior(trie, input.posterior(), col_of_viseme, i, child, i + 1, std::log(p),
                       lattice.edges);
      }
    }
  } else {
    std::vector<int> ids;
    ids.reserve(t_len);
    for (const std::string& v : input.exact()) {
      std::optional<int> vid = map.viseme_index(v);
      if (!vid) {
        throw Error(Errc::unknown_viseme, "input viseme '" + v + "' not in map");
      }
      ids.push_back(*vid);
    }
    for (std::size_t i = 0; i < t_len; ++i) {
      std::uint32_t node = 0;
      for (std::size_t t = i; t < t_len; ++t) {
        const auto& children = trie.nodes()[node].children;
        auto it = std::lower_bound(children.begin(), children.end(), ids[t],
                                   [](const auto& c, int id) { return c.first < id; });
        if (it == children.end() || it->first != ids[t]) break;
        node = it->second;
        for (std::uint32_t w : trie.nodes()[node].words) {
          lattice.edges.push_back(
              {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t + 1), w, 0.0});
        }
      }
    }
  }

  if (opts.allow_unk) {
    for (std::size_t i = 0; i < t_len; ++i) {
      lattice.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1),
                               kUnkWordIndex, opts.unk_penalty});
    }
  }

  std::sort(lattice.edges.begin(), lattice.edges.end(),
            [&](const LatticeEdge& a, const LatticeEdge& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.end != b.end) return a.end < b.end;
              return lattice.word_of(a) < lattice.word_of(b);
            });
  lattice.edges_from.assign(lattice.n_positions, {});
  for (std::uint32_t e = 0; e < lattice.edges.size(); ++e) {
    lattice.edges_from[lattice.edges[e].start].push_back(e);
  }
  return lattice;
}

VisemeLattice build_lattice(const VisemeInput& input, const VisemeMap& map, const Lexicon& lex,
                            const LatticeOptions& opts) {
  LexiconTrie trie(map, lex);
  VisemeLattice lattice = build_lattice(input, trie, opts);
  lattice.lexicon = &lex;
  return lattice;
}

std::uint64_t count_full_paths(const VisemeLattice& lattice, std::uint64_t cap) {
  std::vector<std::uint64_t> paths(lattice.n_positions, 0);
  paths[lattice.final_position()] = 1;
  for (std::size_t pos = lattice.n_positions; pos-- > 0;) {
    if (pos == lattice.final_position()) continue;
    std::uint64_t total = 0;
    for (std::uint32_t e : lattice.edges_from[pos]) {
      total += paths[lattice.edges[e].end];
      if (total >= cap) {
        total = cap;
        break;
      }
    }
    paths[pos] = total;
  }
  return paths[0];
}

}  // namespace visekit
