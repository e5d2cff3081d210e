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

#include "exforce/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmt/format.h"

namespace exforce {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kDegree:
      return "degree";
    case Metric::kPageRank:
      return "pagerank";
    case Metric::kBetweenness:
      return "betweenness";
    case Metric::kExpectedForce:
      return "ef";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "degree") return Metric::kDegree;
  if (name == "pagerank") return Metric::kPageRank;
  if (name == "betweenness") return Metric::kBetweenness;
  if (name == "ef") return Metric::kExpectedForce;
  throw UsageError("unknown metric '" + std::string(name) + "'");
}

CentralityScores degree_centrality(const Graph& g) {
  CentralityScores s{Metric::kDegree, std::vector<double>(g.num_nodes())};
  for (NodeId v = 0; v < g.num_nodes(); ++v) s.values[v] = g.degree_unchecked(v);
  return s;
}

CentralityScores pagerank(const Graph& g, double damping, double tol, std::uint32_t max_iter) {
  if (!(damping > 0.0 && damping < 1.0)) {
    throw std::invalid_argument("damping must be in (0, 1)");
  }
  const NodeId n = g.num_nodes();
  CentralityScores s{Metric::kPageRank, std::vector<double>(n, n ? 1.0 / n : 0.0)};
  if (n == 0) return s;
  std::vector<double> share(n);
  std::vector<double> next(n);
  const double teleport = (1.0 - damping) / n;
  s.converged = false;
  while (s.iterations < max_iter) {
    ++s.iterations;
    for (NodeId u = 0; u < n; ++u) share[u] = s.values[u] / g.degree_unchecked(u);
    double delta = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double sum = 0.0;
      for (NodeId u : g.neighbors_unchecked(v)) sum += share[u];
      next[v] = teleport + damping * sum;
      delta = std::max(delta, std::abs(next[v] - s.values[v]));
    }
    std::swap(s.values, next);
    if (delta < tol) {
      s.converged = true;
      break;
    }
  }
  return s;
}

double betweenness_cost(const Graph& g) {
  return static_cast<double>(g.num_nodes()) * static_cast<double>(g.num_edges());
}

CentralityScores betweenness(const Graph& g, const WorkerPool& pool, BetweennessOptions options) {
  const NodeId n = g.num_nodes();
  CentralityScores s{Metric::kBetweenness, std::vector<double>(n, 0.0)};
  s.cost_warning = betweenness_cost(g) > options.cost_budget;
  if (n == 0) return s;

  // Fixed block count keeps the summation order independent of workers.
  constexpr NodeId kMaxBlocks = 64;
  const NodeId block_size = (n + kMaxBlocks - 1) / kMaxBlocks;
  const std::size_t blocks = (n + block_size - 1) / block_size;
  std::vector<std::vector<double>> partial(blocks);

  struct Scratch {
    explicit Scratch(NodeId n) : dist(n), sigma(n), delta(n) { order.reserve(n); }
    std::vector<std::int64_t> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<NodeId> order;
  };
  std::vector<Scratch> scratch;
  scratch.reserve(pool.size());
  for (unsigned w = 0; w < pool.size(); ++w) scratch.emplace_back(n);

  pool.for_each_task(blocks, [&](unsigned worker, std::size_t block) {
    auto& [dist, sigma, delta, order] = scratch[worker];
    auto& acc = partial[block];
    acc.assign(n, 0.0);
    const NodeId lo = static_cast<NodeId>(block * block_size);
    const NodeId hi = std::min<NodeId>(n, lo + block_size);
    for (NodeId src = lo; src < hi; ++src) {
      std::fill(dist.begin(), dist.end(), -1);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      order.clear();
      dist[src] = 0;
      sigma[src] = 1.0;
      order.push_back(src);
      // order doubles as the BFS queue.
      for (std::size_t head = 0; head < order.size(); ++head) {
        const NodeId v = order[head];
        for (NodeId w : g.neighbors_unchecked(v)) {
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            order.push_back(w);
          }
          if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
      }
      for (std::size_t k = order.size(); k-- > 1;) {
        const NodeId w = order[k];
        for (NodeId v : g.neighbors_unchecked(w)) {
          if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        acc[w] += delta[w];
      }
    }
  });

  for (const auto& acc : partial) {
    for (NodeId v = 0; v < n; ++v) s.values[v] += acc[v];
  }
  // Every unordered pair was visited from both endpoints.
  for (double& x : s.values) x /= 2.0;
  return s;
}

CentralityScores exp_expected_force(const EFResult& ef) {
  CentralityScores s{Metric::kExpectedForce, std::vector<double>(ef.ef.size())};
  std::transform(ef.ef.begin(), ef.ef.end(), s.values.begin(), [](double x) { return std::exp(x); });
  return s;
}

void write_scores_csv(const Graph& g, const CentralityScores& scores, std::ostream& out) {
  out << "node," << to_string(scores.metric) << '\n';
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << fmt::format("{},{:.9g}\n", g.original_id(v), scores.values[v]);
  }
}

}  // namespace exforce
