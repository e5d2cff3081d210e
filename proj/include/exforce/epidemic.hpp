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
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "exforce/graph.hpp"
#include "exforce/worker_pool.hpp"

namespace exforce {

class CalibrationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SirParams {
  // Per-contact, per-step transmission probability.
  double beta = 0.0;
  // Per-step recovery probability.
  double mu = 1.0;
  std::uint32_t max_steps = 1000;

  void validate() const;
};

// mu = 1 / recovery_days, beta = r0 / (recovery_days * <k>).
// max_steps = 10 n clamped to [100, 100000].
SirParams calibrate(const Graph& g, double r0 = 1.3, double recovery_days = 3.0);

struct SimConfig {
  NodeId index_case = 0;
  // Nodes removed before the run starts. Sorted or not, duplicates ignored.
  std::vector<NodeId> immunized;
  std::uint64_t rng_seed = 0;
};

struct SirCounts {
  std::uint32_t susceptible = 0;
  std::uint32_t infectious = 0;
  std::uint32_t removed = 0;
};

inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();
inline constexpr std::int32_t kNever = -1;

struct SimOutcome {
  NodeId index_case = 0;
  std::uint32_t num_nodes = 0;
  std::uint32_t immunized_count = 0;
  // series[t] for t = 0..steps. Immunized nodes are counted as removed.
  std::vector<SirCounts> series;
  // parent[v] is the node that infected v; kNoParent for the index case and
  // for nodes never infected.
  std::vector<NodeId> parent;
  // Step at which v became infected (0 for the index case) or kNever.
  std::vector<std::int32_t> infected_at;
  // Step at whose end v recovered, or kNever if still infectious.
  std::vector<std::int32_t> recovered_at;
  std::uint32_t ever_infected = 0;
  std::uint32_t direct_infections_by_index = 0;
  std::uint32_t steps = 0;
  bool truncated = false;
};

// Discrete-time SIR. Each step every infectious node tries to infect each
// susceptible neighbor with probability beta; a node hit at least once
// becomes infectious from the next step, and its parent is uniform among
// the step's successful infectors. Then every node that was infectious at
// the start of the step recovers with probability mu. Runs until nobody is
// infectious or max_steps steps have elapsed.
SimOutcome run_sir(const Graph& g, const SirParams& params, const SimConfig& config);

// Runs replicates 0..count-1 on the pool. make_config(r) supplies the config
// of replicate r; results are returned in replicate order.
std::vector<SimOutcome> run_sir_batch(const Graph& g, const SirParams& params,
                                      std::size_t count,
                                      const std::function<SimConfig(std::size_t)>& make_config,
                                      const WorkerPool& pool);

struct SpreadingPowerOptions {
  // Average only over outcomes in which v was infected.
  bool condition_on_infection = false;
};

// Mean number of descendants of v within `order` generations of the
// infection forest (v itself excluded). order must be in 1..4.
double spreading_power(std::span<const SimOutcome> outcomes, NodeId v, int order,
                       SpreadingPowerOptions options = {});

// Spreading power of every node at once; result[d-1][v] for d in 1..max_order.
std::vector<std::vector<double>> spreading_power_all(std::span<const SimOutcome> outcomes,
                                                     NodeId num_nodes, int max_order = 4,
                                                     SpreadingPowerOptions options = {});

enum class OutbreakDenominator {
  // Whole population, immunized included.
  kPopulation,
  // Population minus immunized nodes.
  kNonImmunized,
};

bool is_global_outbreak(const SimOutcome& o, double threshold = 0.25,
                        OutbreakDenominator denominator = OutbreakDenominator::kPopulation);

// Earliest step with the largest infectious count.
std::uint32_t time_to_peak(const SimOutcome& o);
// First step with no infectious node, or steps if the run was truncated.
std::uint32_t epidemic_length(const SimOutcome& o);

// NDJSON line with replicate, index_case (original id), ever_infected,
// global, steps, time_to_peak, length, direct_infections.
void write_outcome_ndjson(const Graph& g, const SimOutcome& o, std::size_t replicate,
                          double threshold, std::ostream& out);

// `child,parent` pairs in original ids for every infected non-index node.
void write_forest_csv(const Graph& g, const SimOutcome& o, std::ostream& out);

}  // namespace exforce
