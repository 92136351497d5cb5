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

#ifndef VISEKIT_TEXT_HPP
#define VISEKIT_TEXT_HPP

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace visekit::text {

// Unicode NFC normalization (backed by ICU). All symbols and scoring text go
// through this, so canonically equivalent encodings compare equal.
std::string nfc(std::string_view utf8);

// Full Unicode case folding.
std::string fold_case(std::string_view utf8);

// Removes codepoints in the Unicode punctuation categories.
std::string strip_punct(std::string_view utf8);

// Collapses runs of Unicode whitespace to a single ASCII space and trims ends.
std::string collapse_ws(std::string_view utf8);

// Splits into Unicode scalar values, one UTF-8 string each.
std::vector<std::string> codepoints(std::string_view utf8);

// Whitespace tokenization (Unicode whitespace separators, empty tokens dropped).
std::vector<std::string> split_ws(std::string_view utf8);

// Splits on single tab characters; empty fields are preserved.
std::vector<std::string> split_tab(std::string_view line);

bool has_whitespace(std::string_view utf8);

// Reads one line, stripping a trailing CR (files may be LF or CRLF).
bool getline_any(std::istream& in, std::string& line);

// TSV reader that skips blank and '#'-comment lines and tracks line numbers.
class TsvReader {
 public:
  explicit TsvReader(std::istream& in) : in_(in) {}

  // Next data line split on tabs; false at end of stream.
  bool next(std::vector<std::string>& fields);
  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace visekit::text

#endif  // VISEKIT_TEXT_HPP
