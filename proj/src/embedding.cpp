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

#include "visekit/embedding.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "visekit/error.hpp"
#include "visekit/kernels.hpp"
#include "visekit/text.hpp"

namespace visekit {

namespace {

std::string render_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_finite(std::string_view s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(Errc::malformed_line, "bad vector entry '" + std::string(s) + "'", line);
  }
  return v;
}

}  // namespace

EmbeddingTable EmbeddingTable::from_rows(std::vector<std::string> labels,
                                         std::vector<std::vector<double>> rows) {
  if (labels.size() != rows.size()) {
    throw Error(Errc::bad_argument, "labels and rows differ in length");
  }
  if (rows.empty()) {
    throw Error(Errc::empty_stream, "no embedding rows");
  }
  EmbeddingTable t;
  t.dim = rows[0].size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != t.dim) {
      throw Error(Errc::dim_mismatch, "row " + std::to_string(i) + " has dimension " +
                                          std::to_string(rows[i].size()) + ", expected " +
                                          std::to_string(t.dim));
    }
    for (double v : rows[i]) {
      if (!std::isfinite(v)) {
        throw Error(Errc::malformed_line, "row " + std::to_string(i) + " has a non-finite entry");
      }
    }
    t.labels.push_back(text::nfc(labels[i]));
  }
  t.rows = std::move(rows);
  return t;
}

EmbeddingTable EmbeddingTable::load_vemb(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!text::getline_any(in, line)) {
    throw Error(Errc::empty_stream, "empty embedding file");
  }
  ++line_no;
  std::vector<std::string> header = text::split_ws(line);
  if (header.size() != 4 || header[0] != "VEMB" || header[1] != "1") {
    throw Error(Errc::malformed_line, "expected header 'VEMB 1 <rows> <dim>'", line_no);
  }
  std::size_t n_rows = 0, dim = 0;
  auto parse_count = [&](const std::string& s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(Errc::malformed_line, "bad header count '" + s + "'", line_no);
    }
  };
  parse_count(header[2], n_rows);
  parse_count(header[3], dim);
  if (n_rows == 0 || dim == 0) {
    throw Error(Errc::empty_stream, "embedding file declares no data", line_no);
  }

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  labels.reserve(n_rows);
  rows.reserve(n_rows);
  while (labels.size() < n_rows) {
    if (!text::getline_any(in, line)) {
      throw Error(Errc::malformed_line, "expected " + std::to_string(n_rows) + " rows, got " +
                                            std::to_string(labels.size()),
                  line_no);
    }
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells = text::split_ws(line);
    if (cells.size() != dim + 1) {
      throw Error(Errc::malformed_line, "expected label plus " + std::to_string(dim) +
                                            " values, got " + std::to_string(cells.size()) +
                                            " fields",
                  line_no);
    }
    labels.push_back(cells[0]);
    std::vector<double> row;
    row.reserve(dim);
    for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_finite(cells[j], line_no));
    rows.push_back(std::move(row));
  }
  return from_rows(std::move(labels), std::move(rows));
}

void EmbeddingTable::save_vemb(std::ostream& out) const {
  out << "VEMB 1 " << rows.size() << ' ' << dim << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << labels[i];
    for (double v : rows[i]) out << ' ' << render_double(v);
    out << '\n';
  }
}

EmbeddingTable average_by_label(const EmbeddingTable& samples) {
  if (samples.rows.empty()) {
    throw Error(Errc::empty_stream, "no embedding samples");
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<double>> sums;
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < samples.rows.size(); ++i) {
    const std::string& label = samples.labels[i];
    auto it = index.find(label);
    if (it == index.end()) {
      it = index.emplace(label, order.size()).first;
      order.push_back(label);
      sums.emplace_back(samples.dim, 0.0);
      counts.push_back(0);
    }
    kernels::add_inplace(sums[it->second], samples.rows[i]);
    ++counts[it->second];
  }
  std::vector<std::vector<double>> means(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    means[i] = std::move(sums[i]);
    const double inv = 1.0 / static_cast<double>(counts[i]);
    for (double& v : means[i]) v *= inv;
  }
  EmbeddingTable out = EmbeddingTable::from_rows(std::move(order), std::move(means));
  out.provenance = samples.provenance;
  return out;
}

ClusterAssignment cluster_by_viseme(const VisemeMap& map,
                                    const std::vector<std::string>& labels) {
  ClusterAssignment out;
  for (const std::string& label : labels) {
    out[label] = map.viseme_of(label);  // throws unknown_phoneme
  }
  return out;
}

namespace {

double point_distance(const EmbeddingTable& t, std::size_t i, std::size_t j,
                      DistanceMetric metric) {
  if (metric == DistanceMetric::euclidean) {
    return std::sqrt(kernels::l2sq(t.rows[i], t.rows[j]));
  }
  const double na = std::sqrt(kernels::dot(t.rows[i], t.rows[i]));
  const double nb = std::sqrt(kernels::dot(t.rows[j], t.rows[j]));
  if (na == 0.0 || nb == 0.0) {
    throw Error(Errc::bad_argument, "cosine distance undefined for zero vectors");
  }
  return 1.0 - kernels::dot(t.rows[i], t.rows[j]) / (na * nb);
}

}  // namespace

double silhouette(const EmbeddingTable& table, const ClusterAssignment& clusters,
                  DistanceMetric metric) {
  // Row index lists per cluster, cluster-id order.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto it = clusters.find(table.labels[i]);
    if (it == clusters.end()) {
      throw Error(Errc::unknown_phoneme,
                  "no cluster for label '" + table.labels[i] + "'");
    }
    groups[it->second].push_back(i);
  }
  if (groups.size() < 2) {
    throw Error(Errc::too_few_clusters, "silhouette needs at least 2 clusters");
  }

  double sum = 0.0;
  for (auto it = groups.begin(); it != groups.end(); ++it) {
    const auto& own = it->second;
    for (std::size_t i : own) {
      if (own.size() < 2) continue;  // singleton-cluster point scores 0
      double a = 0.0;
      for (std::size_t j : own) {
        if (j != i) a += point_distance(table, i, j, metric);
      }
      a /= static_cast<double>(own.size() - 1);

      double b = std::numeric_limits<double>::infinity();
      for (auto jt = groups.begin(); jt != groups.end(); ++jt) {
        if (jt == it) continue;
        double mean = 0.0;
        for (std::size_t j : jt->second) mean += point_distance(table, i, j, metric);
        mean /= static_cast<double>(jt->second.size());
        b = std::min(b, mean);
      }

      const double denom = std::max(a, b);
      if (denom > 0.0) sum += (b - a) / denom;
    }
  }
  return 100.0 * sum / static_cast<double>(table.size());
}

ProjectionResult pca_project(const EmbeddingTable& table, std::size_t out_dim) {
  const std::size_t n = table.size();
  const std::size_t d = table.dim;
  if (out_dim < 1 || d < out_dim) {
    throw Error(Errc::bad_argument, "output dimension must be in [1, dim]");
  }
  if (n < out_dim || n < 2) {
    throw Error(Errc::too_few_rows,
                "need at least max(2, out_dim) rows, got " + std::to_string(n));
  }

  Eigen::MatrixXd centered(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centered(i, j) = table.rows[i][j];
  }
  Eigen::RowVectorXd mean = centered.colwise().mean();
  centered.rowwise() -= mean;
  const double denom = static_cast<double>(n - 1);

  // Principal directions as columns, eigenvalues ascending (Eigen's order).
  Eigen::MatrixXd directions;
  Eigen::VectorXd eigenvalues;
  double total_variance = 0.0;
  if (d <= n) {
    Eigen::MatrixXd cov = centered.transpose() * centered / denom;
    total_variance = cov.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    directions = solver.eigenvectors();
    eigenvalues = solver.eigenvalues();
  } else {
    // Gram dual: same nonzero spectrum, directions recovered from the data.
    Eigen::MatrixXd gram = centered * centered.transpose() / denom;
    total_variance = gram.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    const Eigen::MatrixXd& u = solver.eigenvectors();
    eigenvalues = solver.eigenvalues();
    directions.resize(d, u.cols());
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      Eigen::VectorXd v = centered.transpose() * u.col(c);
      const double norm = v.norm();
      directions.col(c) = norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Zero(d);
    }
  }

  ProjectionResult result;
  result.labels = table.labels;
  result.total_variance = total_variance;
  result.coords.assign(n, std::vector<double>(out_dim, 0.0));

  std::vector<double> direction(d);
  for (std::size_t k = 0; k < out_dim; ++k) {
    const Eigen::Index col = eigenvalues.size() - 1 - static_cast<Eigen::Index>(k);
    result.eigenvalues.push_back(eigenvalues(col));
    for (std::size_t j = 0; j < d; ++j) direction[j] = directions(j, col);
    // Sign convention: largest-magnitude coordinate positive.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(direction[j]) > std::abs(direction[arg])) arg = j;
    }
    if (direction[arg] < 0.0) {
      for (double& v : direction) v = -v;
    }
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) row[j] = centered(i, j);
      result.coords[i][k] = kernels::dot(row, direction);
    }
  }
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_projection_csv(std::ostream& out, const ProjectionResult& proj,
                          const ClusterAssignment* clusters) {
  out << "label";
  if (clusters) out << ",cluster";
  for (std::size_t k = 0; k < (proj.coords.empty() ? 0 : proj.coords[0].size()); ++k) {
    out << ",c" << k;
  }
  out << '\n';
  for (std::size_t i = 0; i < proj.labels.size(); ++i) {
    out << csv_field(proj.labels[i]);
    if (clusters) {
      auto it = clusters->find(proj.labels[i]);
      out << ',' << csv_field(it == clusters->end() ? std::string() : it->second);
    }
    for (double v : proj.coords[i]) out << ',' << render_double(v);
    out << '\n';
  }
}

}  // namespace visekit
