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

#ifndef VISEKIT_EMBEDDING_HPP
#define VISEKIT_EMBEDDING_HPP

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "visekit/viseme.hpp"

namespace visekit {

// Labeled real vectors, e.g. per-phoneme averages of 768-dim visual
// embeddings. Text format: `VEMB 1 <n_rows> <dim>` then one `label v1 .. vdim`
// row per line. Duplicate labels are legal in raw sample files and collapse
// under average_by_label.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::string provenance;

  static EmbeddingTable from_rows(std::vector<std::string> labels,
                                  std::vector<std::vector<double>> rows);
  static EmbeddingTable load_vemb(std::istream& in);
  void save_vemb(std::ostream& out) const;

  std::size_t size() const { return rows.size(); }
};

// One row per distinct label, arithmetic mean of its sample vectors, in first-
// appearance order.
EmbeddingTable average_by_label(const EmbeddingTable& samples);

// Phoneme label -> cluster id (ordered for deterministic reports).
using ClusterAssignment = std::map<std::string, std::string>;

// Cluster each labeled phoneme by its viseme. Throws unknown_phoneme for
// labels outside the map.
ClusterAssignment cluster_by_viseme(const VisemeMap& map, const std::vector<std::string>& labels);

enum class DistanceMetric { euclidean, cosine };

// Mean silhouette in percent: per point, (b-a)/max(a,b) where a is the mean
// distance to the point's own cluster and b the smallest mean distance to
// another cluster. Singleton-cluster points contribute 0. Needs >= 2 clusters.
double silhouette(const EmbeddingTable& table, const ClusterAssignment& clusters,
                  DistanceMetric metric = DistanceMetric::euclidean);

struct ProjectionResult {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;  // n x out_dim
  std::vector<double> eigenvalues;          // top out_dim, descending
  double total_variance = 0.0;              // trace of the sample covariance
};

// PCA onto the top principal directions of the centered rows. Eigenvalues
// descend; each direction's sign is fixed so its largest-magnitude coordinate
// is positive.
ProjectionResult pca_project(const EmbeddingTable& table, std::size_t out_dim = 2);

void write_projection_csv(std::ostream& out, const ProjectionResult& proj,
                          const ClusterAssignment* clusters = nullptr);

}  // namespace visekit

#endif  // VISEKIT_EMBEDDING_HPP
