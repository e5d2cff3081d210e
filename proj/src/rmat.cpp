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

#include <cmath>

#include "absl/container/flat_hash_set.h"
#include "exforce/graph.hpp"
#include "exforce/random.hpp"

namespace exforce {

namespace {
constexpr std::uint64_t kAttemptFactor = 20;
}

void RmatParams::validate() const {
  if (scale < 1 || scale > 31) {
    throw std::invalid_argument("R-MAT scale must be in [1, 31]");
  }
  if (avg_degree < 1) throw std::invalid_argument("R-MAT average degree must be >= 1");
  double sum = 0.0;
  for (double p : quadrant_probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("R-MAT probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("R-MAT probabilities must sum to 1");
  }
}

RmatResult generate_rmat(const RmatParams& params) {
  params.validate();
  const auto [a, b, c, d] = params.quadrant_probs;
  (void)d;
  const double ab = a + b;
  const double abc = a + b + c;
  const std::uint64_t side = std::uint64_t{1} << params.scale;

  RmatResult result;
  result.target_edges = side * static_cast<std::uint64_t>(params.avg_degree) / 2;
  const std::uint64_t cap = kAttemptFactor * result.target_edges;

  Rng rng(params.seed);
  absl::flat_hash_set<std::uint64_t> seen;
  seen.reserve(result.target_edges);
  EdgeList edges;
  edges.edges.reserve(result.target_edges);

  while (edges.edges.size() < result.target_edges && result.attempts < cap) {
    ++result.attempts;
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (int level = 0; level < params.scale; ++level) {
      const double r = rng.uniform();
      row <<= 1;
      col <<= 1;
      if (r < a) {
      } else if (r < ab) {
        col |= 1;
      } else if (r < abc) {
        row |= 1;
      } else {
        row |= 1;
        col |= 1;
      }
    }
    if (row == col) continue;
    const std::uint64_t lo = std::min(row, col);
    const std::uint64_t hi = std::max(row, col);
    if (seen.insert((lo << params.scale) | hi).second) {
      edges.edges.emplace_back(lo, hi);
    }
  }
  result.truncated = edges.edges.size() < result.target_edges;
  result.graph = build_graph(edges);
  return result;
}

}  // namespace exforce
