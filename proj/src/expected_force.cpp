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

#include "exforce/expected_force.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/container/flat_hash_map.h"
#include "fmt/format.h"

namespace exforce {

ClusterHistogram::ClusterHistogram(
    std::initializer_list<std::pair<const ClusterDegree, std::uint64_t>> init) {
  for (const auto& [d, c] : init) add(d, c);
}

void ClusterHistogram::add(ClusterDegree degree, std::uint64_t count) {
  if (count > 0) counts_[degree] += count;
}

std::uint64_t ClusterHistogram::count(ClusterDegree degree) const {
  auto it = counts_.find(degree);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t ClusterHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [d, c] : counts_) t += c;
  return t;
}

std::uint64_t ClusterHistogram::degree_mass() const {
  std::uint64_t t = 0;
  for (const auto& [d, c] : counts_) t += std::uint64_t{d} * c;
  return t;
}

double entropy_from_entries(std::span<const ClusterDegree> degrees,
                            std::span<const std::uint64_t> counts) {
  std::uint64_t mass = 0;
  for (std::size_t k = 0; k < degrees.size(); ++k) mass += std::uint64_t{degrees[k]} * counts[k];
  if (mass == 0) return 0.0;
  const auto total = static_cast<double>(mass);
  double h = 0.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    if (degrees[k] == 0) continue;
    const double p = static_cast<double>(degrees[k]) / total;
    h -= static_cast<double>(counts[k]) * p * std::log(p);
  }
  // Rounding can leave -0.0 or a tiny negative for single-cluster nodes.
  return h > 0.0 ? h : 0.0;
}

double entropy_from_histogram(const ClusterHistogram& h) {
  std::vector<ClusterDegree> degrees;
  std::vector<std::uint64_t> counts;
  degrees.reserve(h.counts().size());
  counts.reserve(h.counts().size());
  for (const auto& [d, c] : h.counts()) {
    degrees.push_back(d);
    counts.push_back(c);
  }
  return entropy_from_entries(degrees, counts);
}

ClusterDegree cluster_degree(const Graph& g, NodeId i, NodeId v, NodeId j) {
  if (i == j) throw std::domain_error("cluster wings must be distinct");
  if (!g.has_edge(v, i) || !g.has_edge(v, j)) {
    throw std::domain_error("cluster wings must be neighbors of the middle node");
  }
  ClusterDegree d = g.degree(v) + g.degree(i) + g.degree(j) - 4;
  if (g.has_edge(i, j)) d -= 2;
  return d;
}

ClusterHistogram HistogramTable::histogram(NodeId v) const {
  if (v >= num_nodes()) throw std::domain_error("node id out of range");
  ClusterHistogram h;
  for (std::uint64_t k = offsets[v]; k < offsets[v + 1]; ++k) h.add(degrees[k], counts[k]);
  return h;
}

namespace {

// Dense degree-indexed counter with a touched list, reset in O(touched).
class ScratchHistogram {
 public:
  explicit ScratchHistogram(std::size_t max_degree) : counts_(max_degree + 1, 0) {}

  void add(ClusterDegree d, std::uint64_t c) {
    if (counts_[d] == 0) touched_.push_back(d);
    counts_[d] += c;
  }

  // Calls sink(d, count) for every touched degree and clears.
  template <typename Sink>
  void drain(Sink&& sink) {
    for (ClusterDegree d : touched_) {
      sink(d, counts_[d]);
      counts_[d] = 0;
    }
    touched_.clear();
  }

  // Sorted drain into parallel arrays.
  void drain_sorted(std::vector<ClusterDegree>& degrees, std::vector<std::uint64_t>& counts) {
    std::sort(touched_.begin(), touched_.end());
    drain([&](ClusterDegree d, std::uint64_t c) {
      degrees.push_back(d);
      counts.push_back(c);
    });
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<ClusterDegree> touched_;
};

std::uint64_t pack(NodeId v, ClusterDegree d) { return (std::uint64_t{v} << 32) | d; }

bool adjacent(std::span<const NodeId> a, std::span<const NodeId> b, NodeId a_id, NodeId b_id) {
  // Probe the shorter list.
  if (a.size() > b.size()) {
    std::swap(a, b);
    std::swap(a_id, b_id);
  }
  return std::binary_search(a.begin(), a.end(), b_id);
}

void finalize(const Graph& g, EFResult& result, const WorkerPool& pool) {
  const NodeId n = g.num_nodes();
  result.ef.assign(n, 0.0);
  result.cluster_total.assign(n, 0);
  result.flags.assign(n, EfFlag::kNone);
  const auto& table = result.histograms;
  constexpr std::size_t kChunk = 1024;
  pool.for_each_task((n + kChunk - 1) / kChunk, [&](unsigned, std::size_t chunk) {
    const NodeId lo = static_cast<NodeId>(chunk * kChunk);
    const NodeId hi = static_cast<NodeId>(std::min<std::size_t>(n, lo + kChunk));
    for (NodeId v = lo; v < hi; ++v) {
      const auto begin = table.offsets[v];
      const auto len = table.offsets[v + 1] - begin;
      const std::span<const ClusterDegree> degrees(table.degrees.data() + begin, len);
      const std::span<const std::uint64_t> counts(table.counts.data() + begin, len);
      std::uint64_t total = 0;
      bool any_positive = false;
      for (std::size_t k = 0; k < len; ++k) {
        total += counts[k];
        any_positive = any_positive || degrees[k] > 0;
      }
      result.cluster_total[v] = total;
      if (total == 0) {
        result.flags[v] = EfFlag::kNoClusters;
      } else if (!any_positive) {
        result.flags[v] = EfFlag::kZeroDegreeClusters;
      }
      result.ef[v] = entropy_from_entries(degrees, counts);
    }
  });
}

}  // namespace

EFResult ef_cluster_centric(const Graph& g, const WorkerPool& pool, std::size_t chunk_size) {
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  const NodeId n = g.num_nodes();
  const std::size_t max_cluster_degree = 3 * std::size_t{g.max_degree()};
  const auto offsets = g.offsets();
  const auto adjacency = g.adjacency();

  struct WorkerState {
    explicit WorkerState(std::size_t max_degree) : middle(max_degree), wing(max_degree) {}
    absl::flat_hash_map<std::uint64_t, std::uint64_t> table;
    ScratchHistogram middle;
    ScratchHistogram wing;
    std::uint64_t triplets = 0;
  };
  std::vector<WorkerState> states;
  states.reserve(pool.size());
  for (unsigned w = 0; w < pool.size(); ++w) states.emplace_back(max_cluster_degree);

  // Phases 1 and 2 fused: generate each triplet from its middle node and
  // apply its histogram increments immediately.
  pool.for_each_task((n + chunk_size - 1) / chunk_size, [&](unsigned worker, std::size_t chunk) {
    auto& state = states[worker];
    auto& middle = state.middle;
    auto& wing = state.wing;
    const NodeId lo = static_cast<NodeId>(chunk * chunk_size);
    const NodeId hi = static_cast<NodeId>(std::min<std::size_t>(n, lo + chunk_size));
    for (NodeId v = lo; v < hi; ++v) {
      const std::span<const NodeId> adj = adjacency.subspan(offsets[v], offsets[v + 1] - offsets[v]);
      const std::uint32_t dv = static_cast<std::uint32_t>(adj.size());
      if (dv < 2) continue;
      for (std::uint32_t a = 0; a + 1 < dv; ++a) {
        const NodeId i = adj[a];
        const std::span<const NodeId> adj_i =
            adjacency.subspan(offsets[i], offsets[i + 1] - offsets[i]);
        const std::uint32_t base = dv + static_cast<std::uint32_t>(adj_i.size()) - 4;
        for (std::uint32_t b = a + 1; b < dv; ++b) {
          const NodeId j = adj[b];
          const std::span<const NodeId> adj_j =
              adjacency.subspan(offsets[j], offsets[j + 1] - offsets[j]);
          ClusterDegree d = base + static_cast<std::uint32_t>(adj_j.size());
          if (adjacent(adj_i, adj_j, i, j)) d -= 2;
          middle.add(d, 2);
          wing.add(d, 1);
          ++state.table[pack(j, d)];
        }
        wing.drain([&](ClusterDegree d, std::uint64_t c) { state.table[pack(i, d)] += c; });
      }
      state.triplets += std::uint64_t{dv} * (dv - 1) / 2;
      middle.drain([&](ClusterDegree d, std::uint64_t c) { state.table[pack(v, d)] += c; });
    }
  });

  // Deterministic merge: sum all worker entries keyed by (node, degree).
  EFResult result;
  std::size_t entries = 0;
  for (const auto& s : states) {
    entries += s.table.size();
    result.clusters_processed += s.triplets;
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
  merged.reserve(entries);
  for (auto& s : states) {
    merged.insert(merged.end(), s.table.begin(), s.table.end());
    s.table = {};
  }
  std::sort(merged.begin(), merged.end());

  auto& table = result.histograms;
  table.offsets.assign(std::size_t{n} + 1, 0);
  table.degrees.reserve(merged.size());
  table.counts.reserve(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    const auto [key, count] = merged[k];
    if (!table.degrees.empty() && k > 0 && merged[k - 1].first == key) {
      table.counts.back() += count;
      continue;
    }
    const auto v = static_cast<NodeId>(key >> 32);
    table.degrees.push_back(static_cast<ClusterDegree>(key & 0xffffffffu));
    table.counts.push_back(count);
    ++table.offsets[std::size_t{v} + 1];
  }
  for (std::size_t v = 0; v < n; ++v) table.offsets[v + 1] += table.offsets[v];

  finalize(g, result, pool);
  return result;
}

EFResult ef_cluster_centric(const Graph& g, unsigned workers, std::size_t chunk_size) {
  return ef_cluster_centric(g, WorkerPool(workers), chunk_size);
}

EFResult ef_vertex_centric(const Graph& g, const WorkerPool& pool) {
  const NodeId n = g.num_nodes();
  const std::size_t max_cluster_degree = 3 * std::size_t{g.max_degree()};

  // Edges leaving {x, y, z}, counted member by member.
  const auto out_degree = [&g](NodeId x, NodeId y, NodeId z) {
    ClusterDegree d = 0;
    for (NodeId member : {x, y, z}) {
      for (NodeId t : g.neighbors_unchecked(member)) {
        if (t != x && t != y && t != z) ++d;
      }
    }
    return d;
  };

  std::vector<std::vector<ClusterDegree>> node_degrees(n);
  std::vector<std::vector<std::uint64_t>> node_counts(n);
  std::vector<std::uint64_t> visits(pool.size(), 0);
  std::vector<ScratchHistogram> scratches(pool.size(), ScratchHistogram(max_cluster_degree));

  constexpr std::size_t kChunk = 8;
  pool.for_each_task((n + kChunk - 1) / kChunk, [&](unsigned worker, std::size_t chunk) {
    auto& scratch = scratches[worker];
    const NodeId lo = static_cast<NodeId>(chunk * kChunk);
    const NodeId hi = static_cast<NodeId>(std::min<std::size_t>(n, lo + kChunk));
    for (NodeId u = lo; u < hi; ++u) {
      const auto adj = g.neighbors_unchecked(u);
      for (std::size_t a = 0; a < adj.size(); ++a) {
        for (std::size_t b = a + 1; b < adj.size(); ++b) {
          scratch.add(out_degree(u, adj[a], adj[b]), 2);
          ++visits[worker];
        }
      }
      for (NodeId i : adj) {
        for (NodeId k : g.neighbors_unchecked(i)) {
          if (k == u) continue;
          scratch.add(out_degree(u, i, k), 1);
          ++visits[worker];
        }
      }
      scratch.drain_sorted(node_degrees[u], node_counts[u]);
    }
  });

  EFResult result;
  for (std::uint64_t c : visits) result.clusters_processed += c;
  auto& table = result.histograms;
  table.offsets.assign(std::size_t{n} + 1, 0);
  for (NodeId v = 0; v < n; ++v) table.offsets[v + 1] = table.offsets[v] + node_degrees[v].size();
  table.degrees.reserve(table.offsets[n]);
  table.counts.reserve(table.offsets[n]);
  for (NodeId v = 0; v < n; ++v) {
    table.degrees.insert(table.degrees.end(), node_degrees[v].begin(), node_degrees[v].end());
    table.counts.insert(table.counts.end(), node_counts[v].begin(), node_counts[v].end());
  }
  finalize(g, result, pool);
  return result;
}

EFResult ef_vertex_centric(const Graph& g, unsigned workers) {
  return ef_vertex_centric(g, WorkerPool(workers));
}

EfMode parse_ef_mode(std::string_view name) {
  if (name == "cluster" || name == "cluster_centric") return EfMode::kClusterCentric;
  if (name == "vertex" || name == "vertex_centric") return EfMode::kVertexCentric;
  throw UsageError("unknown EF mode '" + std::string(name) + "' (expected cluster or vertex)");
}

std::string_view to_string(EfMode mode) {
  return mode == EfMode::kClusterCentric ? "cluster" : "vertex";
}

EFResult expected_force(const Graph& g, EfMode mode, const WorkerPool& pool) {
  switch (mode) {
    case EfMode::kClusterCentric:
      return ef_cluster_centric(g, pool);
    case EfMode::kVertexCentric:
      return ef_vertex_centric(g, pool);
  }
  throw UsageError("unknown EF mode");
}

void write_ef_csv(const Graph& g, const EFResult& result, std::ostream& out) {
  out << "node,ef,cluster_total\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << fmt::format("{},{:.9g},{}\n", g.original_id(v), result.ef[v], result.cluster_total[v]);
  }
}

}  // namespace exforce
