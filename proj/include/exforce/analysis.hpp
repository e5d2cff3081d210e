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
#include <span>
#include <stdexcept>
#include <vector>

#include "exforce/centrality.hpp"
#include "exforce/epidemic.hpp"
#include "exforce/expected_force.hpp"
#include "exforce/graph.hpp"
#include "exforce/report.hpp"
#include "exforce/worker_pool.hpp"

namespace exforce {

class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sample Pearson correlation. Throws UndefinedCorrelation when either input
// is constant, std::invalid_argument on length mismatch or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks (ties share their mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

// Settings shared by the simulation-driven experiments.
struct ExperimentSettings {
  std::uint32_t reps = 100;
  std::uint64_t base_seed = 1;
  double threshold = 0.25;
  OutbreakDenominator denominator = OutbreakDenominator::kPopulation;
};

// Simulations from uniformly random index cases, run in fixed-size batches
// until `target` global outbreaks are found or `max_runs` replicates have
// been drawn. Returns the global outbreaks (at most `target`) in replicate
// order; `runs` receives the number of replicates simulated.
std::vector<SimOutcome> collect_global_outbreaks(const Graph& g, const SirParams& p,
                                                 std::size_t target, std::size_t max_runs,
                                                 const ExperimentSettings& settings,
                                                 const WorkerPool& pool,
                                                 std::size_t* runs = nullptr);

struct CorrelationOptions {
  // Fewer global outbreaks than this adds a warning row.
  std::size_t min_outbreaks = 100;
  // Adds a `spreading_power` row correlating each order with itself.
  bool include_self = false;
  double threshold = 0.25;
};

// Pearson r between each centrality and empirical spreading power of orders
// 1..4, computed over the global outbreaks in `sims`. EF enters as exp(EF).
// Columns: metric, order, pearson_r, outbreaks, note.
ExperimentReport correlation_report(const Graph& g, const EFResult& ef,
                                    std::span<const CentralityScores> others,
                                    std::span<const SimOutcome> sims,
                                    const CorrelationOptions& options = {});

struct EFBin {
  double target_ef = 0.0;
  NodeId representative = 0;
  double achieved_ef = 0.0;
};

// k targets equally spaced over [min EF, max EF]; each picks the node with
// the nearest score, lowest id on ties. Requires k distinct EF values.
std::vector<EFBin> ef_bins(const EFResult& ef, int k = 10);

// Per bin: reps runs seeded at the representative. Columns: bin, target_ef,
// representative, achieved_ef, reps, outbreak_fraction, mean_size.
ExperimentReport seeding_experiment(const Graph& g, const SirParams& p,
                                    std::span<const EFBin> bins,
                                    const ExperimentSettings& settings, const WorkerPool& pool);

// Nodes ranked by EF ascending; `scenarios` windows of ceil(frac n) nodes
// start at equally spaced ranks. Each scenario immunizes its window and runs
// reps simulations from random non-immunized index cases. Columns: scenario,
// window_start, window_size, mean_immunized_ef, reps, outbreak_fraction,
// mean_size.
ExperimentReport immunization_experiment(const Graph& g, const SirParams& p, const EFResult& ef,
                                         double frac, int scenarios,
                                         const ExperimentSettings& settings,
                                         const WorkerPool& pool);

// Per bin, over runs that became global outbreaks: mean time to peak and mean
// epidemic length. Columns: bin, target_ef, representative, achieved_ef, reps,
// global_outbreaks, mean_time_to_peak, mean_length (null without outbreaks).
ExperimentReport timing_report(const Graph& g, const SirParams& p, std::span<const EFBin> bins,
                               const ExperimentSettings& settings, const WorkerPool& pool);

}  // namespace exforce
