// Copyright 2026 The exforce Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "exforce/errors.hpp"
#include "exforce/graph.hpp"
#include "exforce/worker_pool.hpp"

namespace exforce {

using ClusterDegree = std::uint32_t;

// Multiset of cluster out-degrees seen by one node: degree -> multiplicity.
// Absent keys mean zero; stored counts are always positive.
class ClusterHistogram {
 public:
  ClusterHistogram() = default;
  ClusterHistogram(std::initializer_list<std::pair<const ClusterDegree, std::uint64_t>> init);

  void add(ClusterDegree degree, std::uint64_t count = 1);
  std::uint64_t count(ClusterDegree degree) const;
  // Number of clusters, sum of counts.
  std::uint64_t total() const;
  // Sum of degree * count.
  std::uint64_t degree_mass() const;
  const std::map<ClusterDegree, std::uint64_t>& counts() const { return counts_; }

  bool operator==(const ClusterHistogram&) const = default;

 private:
  std::map<ClusterDegree, std::uint64_t> counts_;
};

// Shannon entropy (natural log) of the normalized cluster degrees.
//
// With T = sum d * count(d), each cluster of degree d has weight d / T and
// the result is -sum count(d) * (d/T) * ln(d/T). Zero-degree clusters
// contribute nothing and T == 0 yields 0.
double entropy_from_histogram(const ClusterHistogram& h);

// Same kernel over parallel arrays sorted by ascending degree. Every EF score
// goes through this function so that the two algorithms agree bit for bit.
double entropy_from_entries(std::span<const ClusterDegree> degrees,
                            std::span<const std::uint64_t> counts);

// Out-degree of the 2-edge cluster with middle v and wings i, j:
// deg(v) + deg(i) + deg(j) - 4, less 2 when i and j are adjacent.
// Throws std::domain_error unless i != j and both are neighbors of v.
ClusterDegree cluster_degree(const Graph& g, NodeId i, NodeId v, NodeId j);

enum class EfFlag : std::uint8_t {
  kNone = 0,
  // Node belongs to no cluster (degree 1 with a degree-1 neighbor).
  kNoClusters = 1,
  // Every cluster of the node has out-degree 0.
  kZeroDegreeClusters = 2,
};

// Per-node histograms in compressed form; node v owns entries
// [offsets[v], offsets[v+1]) sorted by degree.
struct HistogramTable {
  std::vector<std::uint64_t> offsets{0};
  std::vector<ClusterDegree> degrees;
  std::vector<std::uint64_t> counts;

  std::size_t num_nodes() const { return offsets.size() - 1; }
  ClusterHistogram histogram(NodeId v) const;
};

struct EFResult {
  std::vector<double> ef;
  std::vector<std::uint64_t> cluster_total;
  std::vector<EfFlag> flags;
  HistogramTable histograms;
  // Cluster-centric: (i, v, j) triplets evaluated. Vertex-centric: cluster
  // evaluations summed over all roots, which revisits shared clusters.
  std::uint64_t clusters_processed = 0;
};

// Cluster-centric algorithm. Every triplet (i, v, j), i < j, is generated
// exactly once from its middle node and updates three histograms:
// H_i(d) += 1, H_j(d) += 1, H_v(d) += 2. Nodes are split into chunks of
// chunk_size claimed dynamically by workers; each worker accumulates into a
// private table and tables are merged by exact integer addition, so the
// output does not depend on the worker count or chunk size.
EFResult ef_cluster_centric(const Graph& g, const WorkerPool& pool, std::size_t chunk_size = 64);
EFResult ef_cluster_centric(const Graph& g, unsigned workers, std::size_t chunk_size = 64);

// Vertex-centric reference. Each root u enumerates its own transmission
// clusters: every neighbor pair as a star (counted twice, one per
// transmission order) and every path u-i-k, k != u, as a chain. The
// out-degree of each cluster is counted directly from the adjacency lists
// of its three members.
EFResult ef_vertex_centric(const Graph& g, const WorkerPool& pool);
EFResult ef_vertex_centric(const Graph& g, unsigned workers);

enum class EfMode { kClusterCentric, kVertexCentric };

// Accepts "cluster", "cluster_centric", "vertex", "vertex_centric".
EfMode parse_ef_mode(std::string_view name);
std::string_view to_string(EfMode mode);

EFResult expected_force(const Graph& g, EfMode mode, const WorkerPool& pool);

// CSV with header `node,ef,cluster_total`, original ids ascending, EF with
// 9 significant digits.
void write_ef_csv(const Graph& g, const EFResult& result, std::ostream& out);

}  // namespace exforce
