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

#ifndef VISEKIT_VERSION_HPP
#define VISEKIT_VERSION_HPP

namespace visekit {

inline constexpr const char* kVersion = "1.0.0";
// File format versions: bump when the on-disk layout changes.
inline constexpr const char* kFormats =
    "map-tsv 1, lexicon-tsv 1, VLM 1, VPOST 1, VEMB 1";

}  // namespace visekit

#endif  // VISEKIT_VERSION_HPP
