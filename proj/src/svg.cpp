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

#include "visekit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "visekit/error.hpp"

namespace visekit {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 60.0;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void emit_scatter(std::ostream& out, std::span<const ScatterPoint> points,
                  const ClusterAssignment& clusters, const std::string& title) {
  if (points.empty()) {
    throw Error(Errc::empty_plot, "no points to plot");
  }
  for (const ScatterPoint& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(Errc::bad_argument, "non-finite coordinate for '" + p.label + "'");
    }
  }

  // Stable cluster -> color assignment by sorted cluster id.
  std::map<std::string, std::size_t> color_of;
  for (const ScatterPoint& p : points) {
    auto it = clusters.find(p.label);
    if (it == clusters.end()) {
      throw Error(Errc::unknown_phoneme, "no cluster for label '" + p.label + "'");
    }
    color_of.emplace(it->second, 0);
  }
  {
    std::size_t i = 0;
    for (auto& [_, idx] : color_of) idx = i++ % kPaletteSize;
  }

  double min_x = points[0].x, max_x = points[0].x;
  double min_y = points[0].y, max_y = points[0].y;
  for (const ScatterPoint& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  double span_x = max_x - min_x;
  double span_y = max_y - min_y;
  if (span_x <= 0.0) span_x = 1.0;
  if (span_y <= 0.0) span_y = 1.0;
  // 5% padding so edge markers are not clipped.
  min_x -= 0.05 * span_x;
  min_y -= 0.05 * span_y;
  span_x *= 1.1;
  span_y *= 1.1;

  auto sx = [&](double x) { return kMargin + (x - min_x) / span_x * (kWidth - 2 * kMargin); };
  auto sy = [&](double y) {
    return kHeight - kMargin - (y - min_y) / span_y * (kHeight - 2 * kMargin);
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "  <text x=\"" << fmt(kWidth / 2)
        << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
        << xml_escape(title) << "</text>\n";
  }

  for (const ScatterPoint& p : points) {
    const std::string& cluster = clusters.at(p.label);
    const char* color = kPalette[color_of.at(cluster)];
    out << "  <circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
        << "\" r=\"5\" fill=\"" << color << "\" fill-opacity=\"0.85\"/>\n";
    out << "  <text x=\"" << fmt(sx(p.x) + 7) << "\" y=\"" << fmt(sy(p.y) - 6)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(p.label)
        << "</text>\n";
  }

  double legend_y = kMargin;
  for (const auto& [cluster, idx] : color_of) {
    out << "  <rect x=\"" << fmt(kWidth - kMargin + 8) << "\" y=\"" << fmt(legend_y - 9)
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[idx] << "\"/>\n";
    out << "  <text x=\"" << fmt(kWidth - kMargin + 24) << "\" y=\"" << fmt(legend_y + 2)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(cluster)
        << "</text>\n";
    legend_y += 18.0;
  }
  out << "</svg>\n";
}

}  // namespace visekit
