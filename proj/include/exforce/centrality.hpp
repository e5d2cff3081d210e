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

#include <ostream>
#include <string_view>
#include <vector>

#include "exforce/expected_force.hpp"
#include "exforce/graph.hpp"
#include "exforce/worker_pool.hpp"

namespace exforce {

enum class Metric { kDegree, kPageRank, kBetweenness, kExpectedForce };

std::string_view to_string(Metric metric);
// "degree", "pagerank", "betweenness", "ef".
Metric parse_metric(std::string_view name);

struct CentralityScores {
  Metric metric = Metric::kDegree;
  std::vector<double> values;
  // PageRank only: false when max_iter was reached before tol.
  bool converged = true;
  std::uint32_t iterations = 0;
  // Betweenness only: n * m exceeded the configured budget.
  bool cost_warning = false;
};

CentralityScores degree_centrality(const Graph& g);

// Power iteration on PR(v) = (1 - d) / n + d * sum_{u in Adj(v)} PR(u) / deg(u)
// from the uniform vector, stopping when the largest per-node change drops
// below tol.
CentralityScores pagerank(const Graph& g, double damping = 0.85, double tol = 1e-8,
                          std::uint32_t max_iter = 200);

struct BetweennessOptions {
  // Warn when n * m exceeds this many operations.
  double cost_budget = 1e10;
};

// Exact Brandes betweenness on the unweighted graph. Each unordered pair
// {s, t} is counted once, endpoints excluded, no normalization. Sources are
// split into fixed blocks whose partial sums are merged in block order.
CentralityScores betweenness(const Graph& g, const WorkerPool& pool,
                             BetweennessOptions options = {});

// Estimated Brandes cost n * m.
double betweenness_cost(const Graph& g);

// exp(EF) per node, the form used when correlating against spreading power.
CentralityScores exp_expected_force(const EFResult& ef);

// CSV with header `node,<metric>`, original ids ascending.
void write_scores_csv(const Graph& g, const CentralityScores& scores, std::ostream& out);

}  // namespace exforce
