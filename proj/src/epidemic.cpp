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

#include "exforce/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exforce/random.hpp"
#include "nlohmann/json.hpp"

namespace exforce {

void SirParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must be in (0, 1]");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

SirParams calibrate(const Graph& g, double r0, double recovery_days) {
  const double k = g.avg_degree();
  if (!(k > 0.0)) throw CalibrationError("cannot calibrate on a graph with no edges");
  if (!(r0 > 0.0)) throw CalibrationError("r0 must be positive");
  if (!(recovery_days > 0.0)) throw CalibrationError("recovery time must be positive");
  SirParams p;
  p.mu = 1.0 / recovery_days;
  p.beta = r0 / (recovery_days * k);
  if (p.beta > 1.0) {
    throw CalibrationError("calibrated beta " + std::to_string(p.beta) +
                           " exceeds 1; average degree too small for r0");
  }
  if (p.mu > 1.0) throw CalibrationError("recovery time below one step");
  const std::uint64_t steps = 10 * std::uint64_t{g.num_nodes()};
  p.max_steps = static_cast<std::uint32_t>(std::clamp<std::uint64_t>(steps, 100, 100000));
  return p;
}

SimOutcome run_sir(const Graph& g, const SirParams& params, const SimConfig& config) {
  params.validate();
  const NodeId n = g.num_nodes();
  if (config.index_case >= n) throw std::domain_error("index case out of range");

  enum : std::uint8_t { kS, kI, kR };
  std::vector<std::uint8_t> state(n, kS);
  for (NodeId v : config.immunized) {
    if (v >= n) throw std::domain_error("immunized node out of range");
    if (v == config.index_case) throw std::invalid_argument("index case cannot be immunized");
    state[v] = kR;
  }

  SimOutcome out;
  out.index_case = config.index_case;
  out.num_nodes = n;
  out.immunized_count =
      static_cast<std::uint32_t>(std::count(state.begin(), state.end(), std::uint8_t{kR}));
  out.parent.assign(n, kNoParent);
  out.infected_at.assign(n, kNever);
  out.recovered_at.assign(n, kNever);

  state[config.index_case] = kI;
  out.infected_at[config.index_case] = 0;
  out.ever_infected = 1;
  SirCounts counts{n - 1 - out.immunized_count, 1, out.immunized_count};
  out.series.push_back(counts);

  Rng rng(config.rng_seed);
  std::vector<NodeId> current{config.index_case};
  std::vector<NodeId> next;
  std::vector<NodeId> newly;
  std::vector<std::uint32_t> hits(n, 0);
  std::vector<std::uint32_t> hit_step(n, 0);

  while (!current.empty() && out.steps < params.max_steps) {
    const std::uint32_t step = out.steps + 1;
    newly.clear();
    for (NodeId x : current) {
      for (NodeId y : g.neighbors_unchecked(x)) {
        if (state[y] != kS || !rng.bernoulli(params.beta)) continue;
        if (hit_step[y] != step) {
          hit_step[y] = step;
          hits[y] = 1;
          out.parent[y] = x;
          newly.push_back(y);
        } else if (rng.below(++hits[y]) == 0) {
          // Reservoir choice keeps the parent uniform over all infectors.
          out.parent[y] = x;
        }
      }
    }
    next.clear();
    for (NodeId x : current) {
      if (rng.bernoulli(params.mu)) {
        state[x] = kR;
        out.recovered_at[x] = static_cast<std::int32_t>(step);
      } else {
        next.push_back(x);
      }
    }
    for (NodeId y : newly) {
      state[y] = kI;
      out.infected_at[y] = static_cast<std::int32_t>(step);
      if (out.parent[y] == config.index_case) ++out.direct_infections_by_index;
      next.push_back(y);
    }
    const auto new_count = static_cast<std::uint32_t>(newly.size());
    const auto recovered = static_cast<std::uint32_t>(current.size() + new_count - next.size());
    counts.susceptible -= new_count;
    counts.infectious = static_cast<std::uint32_t>(next.size());
    counts.removed += recovered;
    out.ever_infected += new_count;
    out.series.push_back(counts);
    out.steps = step;
    std::swap(current, next);
  }
  out.truncated = !current.empty();
  return out;
}

std::vector<SimOutcome> run_sir_batch(const Graph& g, const SirParams& params,
                                      std::size_t count,
                                      const std::function<SimConfig(std::size_t)>& make_config,
                                      const WorkerPool& pool) {
  std::vector<SimOutcome> outcomes(count);
  pool.for_each_task(count, [&](unsigned, std::size_t r) {
    outcomes[r] = run_sir(g, params, make_config(r));
  });
  return outcomes;
}

namespace {

void check_order(int order) {
  if (order < 1 || order > 4) throw std::domain_error("spreading power order must be in 1..4");
}

}  // namespace

double spreading_power(std::span<const SimOutcome> outcomes, NodeId v, int order,
                       SpreadingPowerOptions options) {
  check_order(order);
  if (outcomes.empty()) throw std::domain_error("no outcomes to average");
  double sum = 0.0;
  std::size_t denominator = 0;
  for (const SimOutcome& o : outcomes) {
    if (v >= o.num_nodes) throw std::domain_error("node id out of range");
    const bool infected = o.infected_at[v] != kNever;
    if (options.condition_on_infection && !infected) continue;
    ++denominator;
    if (!infected) continue;
    // Generation-by-generation walk down the forest.
    std::vector<NodeId> frontier{v};
    std::vector<NodeId> children;
    std::size_t descendants = 0;
    for (int depth = 1; depth <= order && !frontier.empty(); ++depth) {
      children.clear();
      for (NodeId w = 0; w < o.num_nodes; ++w) {
        if (o.parent[w] != kNoParent &&
            std::find(frontier.begin(), frontier.end(), o.parent[w]) != frontier.end()) {
          children.push_back(w);
        }
      }
      descendants += children.size();
      std::swap(frontier, children);
    }
    sum += static_cast<double>(descendants);
  }
  return denominator == 0 ? 0.0 : sum / static_cast<double>(denominator);
}

std::vector<std::vector<double>> spreading_power_all(std::span<const SimOutcome> outcomes,
                                                     NodeId num_nodes, int max_order,
                                                     SpreadingPowerOptions options) {
  check_order(max_order);
  if (outcomes.empty()) throw std::domain_error("no outcomes to average");
  std::vector<std::vector<double>> sums(max_order, std::vector<double>(num_nodes, 0.0));
  std::vector<std::uint32_t> infected_runs(num_nodes, 0);

  // within[d][v] = descendants of v at depth 1..d in the current outcome.
  std::vector<std::vector<std::uint32_t>> within(max_order + 1,
                                                 std::vector<std::uint32_t>(num_nodes, 0));
  std::vector<NodeId> infected;
  for (const SimOutcome& o : outcomes) {
    if (o.num_nodes != num_nodes) throw std::invalid_argument("outcome graph size mismatch");
    infected.clear();
    for (NodeId v = 0; v < num_nodes; ++v) {
      if (o.infected_at[v] != kNever) infected.push_back(v);
    }
    for (int d = 1; d <= max_order; ++d) {
      for (NodeId v : infected) within[d][v] = 0;
      for (NodeId c : infected) {
        const NodeId p = o.parent[c];
        if (p != kNoParent) within[d][p] += 1 + within[d - 1][c];
      }
    }
    for (NodeId v : infected) {
      ++infected_runs[v];
      for (int d = 1; d <= max_order; ++d) sums[d - 1][v] += within[d][v];
    }
  }
  for (NodeId v = 0; v < num_nodes; ++v) {
    const double denominator = options.condition_on_infection
                                   ? static_cast<double>(infected_runs[v])
                                   : static_cast<double>(outcomes.size());
    for (int d = 0; d < max_order; ++d) {
      sums[d][v] = denominator == 0.0 ? 0.0 : sums[d][v] / denominator;
    }
  }
  return sums;
}

bool is_global_outbreak(const SimOutcome& o, double threshold, OutbreakDenominator denominator) {
  const std::uint32_t population = denominator == OutbreakDenominator::kPopulation
                                       ? o.num_nodes
                                       : o.num_nodes - o.immunized_count;
  if (population == 0) return false;
  return static_cast<double>(o.ever_infected) / static_cast<double>(population) >= threshold;
}

std::uint32_t time_to_peak(const SimOutcome& o) {
  std::uint32_t best = 0;
  for (std::uint32_t t = 1; t < o.series.size(); ++t) {
    if (o.series[t].infectious > o.series[best].infectious) best = t;
  }
  return best;
}

std::uint32_t epidemic_length(const SimOutcome& o) {
  if (o.truncated) return o.steps;
  for (std::uint32_t t = 0; t < o.series.size(); ++t) {
    if (o.series[t].infectious == 0) return t;
  }
  return o.steps;
}

void write_outcome_ndjson(const Graph& g, const SimOutcome& o, std::size_t replicate,
                          double threshold, std::ostream& out) {
  const nlohmann::ordered_json line = {
      {"replicate", replicate},
      {"index_case", g.original_id(o.index_case)},
      {"ever_infected", o.ever_infected},
      {"global", is_global_outbreak(o, threshold)},
      {"steps", o.steps},
      {"time_to_peak", time_to_peak(o)},
      {"length", epidemic_length(o)},
      {"direct_infections", o.direct_infections_by_index},
  };
  out << line.dump() << '\n';
}

void write_forest_csv(const Graph& g, const SimOutcome& o, std::ostream& out) {
  out << "child,parent\n";
  for (NodeId v = 0; v < o.num_nodes; ++v) {
    if (o.parent[v] != kNoParent) {
      out << g.original_id(v) << ',' << g.original_id(o.parent[v]) << '\n';
    }
  }
}

}  // namespace exforce
