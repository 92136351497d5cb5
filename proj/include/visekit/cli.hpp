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

#ifndef VISEKIT_CLI_HPP
#define VISEKIT_CLI_HPP

namespace visekit::cli {

// Entry point behind the visekit binary. Exit status 0 on success, 1 on data
// errors (diagnostics name the file and line), 2 on usage errors.
int run(int argc, const char* const* argv);

}  // namespace visekit::cli

#endif  // VISEKIT_CLI_HPP
