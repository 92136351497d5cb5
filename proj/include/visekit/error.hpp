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

#ifndef VISEKIT_ERROR_HPP
#define VISEKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace visekit {

// Data and usage errors surfaced by the toolkit. Each carries a stable code
// tests can match on, a human-readable message, and (for file parsers) the
// 1-based line number the problem was found at.
enum class Errc {
  empty_map,
  duplicate_phoneme,
  malformed_line,
  unknown_phoneme,
  unknown_viseme,
  unknown_word,
  duplicate_word,
  empty_pronunciation,
  bad_frequency,
  empty_reference,
  empty_predictions,
  bad_argument,
  empty_corpus,
  bad_model,
  no_path,
  bad_posterior,
  dim_mismatch,
  empty_stream,
  too_few_clusters,
  too_few_rows,
  empty_plot,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : std::move(message)),
        code_(code),
        line_(line) {}

  Errc code() const { return code_; }
  int line() const { return line_; }  // 0 when not tied to an input line

 private:
  Errc code_;
  int line_;
};

}  // namespace visekit

#endif  // VISEKIT_ERROR_HPP
