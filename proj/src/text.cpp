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

#include "visekit/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace visekit::text {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *norm;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString from_utf8(std::string_view utf8) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

}  // namespace

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc_instance().normalize(from_utf8(utf8), status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("NFC normalization failed");
  }
  return to_utf8(out);
}

std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  s.foldCase();
  return to_utf8(s);
}

std::string strip_punct(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  icu::UnicodeString out;
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    if (!u_ispunct(c)) {
      out.append(c);
    }
    i += U16_LENGTH(c);
  }
  return to_utf8(out);
}

std::string collapse_ws(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  icu::UnicodeString out;
  bool pending_space = false;
  bool seen_any = false;
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      pending_space = seen_any;
    } else {
      if (pending_space) {
        out.append(static_cast<UChar32>(' '));
        pending_space = false;
      }
      out.append(c);
      seen_any = true;
    }
    i += U16_LENGTH(c);
  }
  return to_utf8(out);
}

std::vector<std::string> codepoints(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  std::vector<std::string> out;
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    out.push_back(to_utf8(icu::UnicodeString(c)));
    i += U16_LENGTH(c);
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  std::vector<std::string> out;
  icu::UnicodeString cur;
  auto flush = [&] {
    if (!cur.isEmpty()) {
      out.push_back(to_utf8(cur));
      cur.remove();
    }
  };
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      cur.append(c);
    }
    i += U16_LENGTH(c);
  }
  flush();
  return out;
}

std::vector<std::string> split_tab(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool has_whitespace(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) return true;
    i += U16_LENGTH(c);
  }
  return false;
}

bool getline_any(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool TsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (getline_any(in_, line)) {
    ++line_no_;
    if (line.empty() || line[0] == '#') continue;
    fields = split_tab(line);
    return true;
  }
  return false;
}

}  // namespace visekit::text
