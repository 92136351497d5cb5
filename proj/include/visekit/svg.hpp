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

#ifndef VISEKIT_SVG_HPP
#define VISEKIT_SVG_HPP

#include <ostream>
#include <span>
#include <string>

#include "visekit/embedding.hpp"

namespace visekit {

struct ScatterPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

// Labeled scatter plot, one marker + text label per point, colored by
// cluster, with a legend. Output bytes are deterministic for identical input.
void emit_scatter(std::ostream& out, std::span<const ScatterPoint> points,
                  const ClusterAssignment& clusters, const std::string& title = "");

}  // namespace visekit

#endif  // VISEKIT_SVG_HPP
