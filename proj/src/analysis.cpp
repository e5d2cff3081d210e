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

#include "exforce/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "exforce/random.hpp"
#include "fmt/format.h"

namespace exforce {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation with a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t lo = 0; lo < idx.size();) {
    std::size_t hi = lo;
    while (hi + 1 < idx.size() && x[idx[hi + 1]] == x[idx[lo]]) ++hi;
    const double rank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (std::size_t k = lo; k <= hi; ++k) ranks[idx[k]] = rank;
    lo = hi + 1;
  }
  return ranks;
}

nlohmann::ordered_json sim_metadata(const Graph& g, const SirParams& p,
                                    const ExperimentSettings& settings) {
  return {{"nodes", g.num_nodes()},
          {"edges", g.num_edges()},
          {"beta", p.beta},
          {"mu", p.mu},
          {"max_steps", p.max_steps},
          {"reps", settings.reps},
          {"base_seed", settings.base_seed},
          {"threshold", settings.threshold},
          {"denominator", settings.denominator == OutbreakDenominator::kPopulation
                              ? "population"
                              : "non_immunized"}};
}

Cell mean_or_null(double sum, std::size_t count) {
  if (count == 0) return std::monostate{};
  return sum / static_cast<double>(count);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

std::vector<SimOutcome> collect_global_outbreaks(const Graph& g, const SirParams& p,
                                                 std::size_t target, std::size_t max_runs,
                                                 const ExperimentSettings& settings,
                                                 const WorkerPool& pool, std::size_t* runs) {
  const NodeId n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("empty graph");
  constexpr std::size_t kBatch = 256;
  std::vector<SimOutcome> globals;
  std::size_t done = 0;
  while (globals.size() < target && done < max_runs) {
    const std::size_t count = std::min(kBatch, max_runs - done);
    auto batch = run_sir_batch(
        g, p, count,
        [&](std::size_t r) {
          Rng rng(replicate_seed(settings.base_seed, done + r));
          SimConfig c;
          c.index_case = static_cast<NodeId>(rng.below(n));
          c.rng_seed = rng.next();
          return c;
        },
        pool);
    done += count;
    for (auto& o : batch) {
      if (globals.size() < target && is_global_outbreak(o, settings.threshold, settings.denominator)) {
        globals.push_back(std::move(o));
      }
    }
  }
  if (runs) *runs = done;
  return globals;
}

ExperimentReport correlation_report(const Graph& g, const EFResult& ef,
                                    std::span<const CentralityScores> others,
                                    std::span<const SimOutcome> sims,
                                    const CorrelationOptions& options) {
  ExperimentReport report;
  report.kind = ReportKind::kCorrelation;
  report.columns = {"metric", "order", "pearson_r", "outbreaks", "note"};

  std::vector<SimOutcome> globals;
  for (const auto& o : sims) {
    if (is_global_outbreak(o, options.threshold)) globals.push_back(o);
  }
  const auto outbreaks = static_cast<std::int64_t>(globals.size());
  report.metadata = {{"nodes", g.num_nodes()},
                     {"edges", g.num_edges()},
                     {"simulations", sims.size()},
                     {"global_outbreaks", outbreaks},
                     {"threshold", options.threshold},
                     {"ef_transform", "exp"}};

  if (globals.size() < options.min_outbreaks) {
    const std::string msg = fmt::format("only {} global outbreaks (minimum {})", globals.size(),
                                        options.min_outbreaks);
    report.warnings.push_back(msg);
    report.rows.push_back({std::string("warning"), std::monostate{}, std::monostate{}, outbreaks, msg});
  }
  if (globals.empty()) return report;

  const auto power = spreading_power_all(globals, g.num_nodes(), 4);

  struct Series {
    std::string name;
    std::vector<double> values;
  };
  std::vector<Series> metrics;
  metrics.push_back({"exp_ef", exp_expected_force(ef).values});
  for (const auto& s : others) {
    if (s.values.size() != g.num_nodes()) throw std::invalid_argument("score vector size mismatch");
    metrics.push_back({std::string(to_string(s.metric)), s.values});
  }

  const auto add_row = [&](const std::string& name, int order, std::span<const double> values) {
    Cell r = std::monostate{};
    std::string note;
    try {
      r = pearson(values, power[order - 1]);
    } catch (const UndefinedCorrelation&) {
      note = "undefined (constant series)";
    }
    report.rows.push_back({name, std::int64_t{order}, r, outbreaks, note});
  };
  for (const auto& m : metrics) {
    for (int order = 1; order <= 4; ++order) add_row(m.name, order, m.values);
  }
  if (options.include_self) {
    for (int order = 1; order <= 4; ++order) add_row("spreading_power", order, power[order - 1]);
  }
  return report;
}

std::vector<EFBin> ef_bins(const EFResult& ef, int k) {
  if (k < 1) throw std::invalid_argument("bin count must be positive");
  std::vector<double> distinct(ef.ef.begin(), ef.ef.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument(fmt::format(
        "only {} distinct EF values for {} bins; use --bins {} or fewer", distinct.size(), k,
        distinct.size()));
  }
  const double lo = distinct.front();
  const double hi = distinct.back();
  std::vector<EFBin> bins(k);
  for (int i = 0; i < k; ++i) {
    EFBin& bin = bins[i];
    bin.target_ef = k == 1 ? lo : lo + i * (hi - lo) / (k - 1);
    double best = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < ef.ef.size(); ++v) {
      const double gap = std::abs(ef.ef[v] - bin.target_ef);
      if (gap < best) {
        best = gap;
        bin.representative = v;
      }
    }
    bin.achieved_ef = ef.ef[bin.representative];
  }
  return bins;
}

ExperimentReport seeding_experiment(const Graph& g, const SirParams& p,
                                    std::span<const EFBin> bins,
                                    const ExperimentSettings& settings, const WorkerPool& pool) {
  if (settings.reps < 1) throw std::invalid_argument("reps must be >= 1");
  ExperimentReport report;
  report.kind = ReportKind::kSeeding;
  report.columns = {"bin",  "target_ef",         "representative", "achieved_ef",
                    "reps", "outbreak_fraction", "mean_size"};
  report.metadata = sim_metadata(g, p, settings);

  const std::size_t reps = settings.reps;
  const auto outcomes = run_sir_batch(
      g, p, bins.size() * reps,
      [&](std::size_t r) {
        SimConfig c;
        c.index_case = bins[r / reps].representative;
        c.rng_seed = replicate_seed(settings.base_seed, r);
        return c;
      },
      pool);

  for (std::size_t b = 0; b < bins.size(); ++b) {
    std::size_t global = 0;
    double size_sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& o = outcomes[b * reps + r];
      global += is_global_outbreak(o, settings.threshold, settings.denominator) ? 1 : 0;
      size_sum += static_cast<double>(o.ever_infected) / o.num_nodes;
    }
    report.rows.push_back({static_cast<std::int64_t>(b), bins[b].target_ef,
                           static_cast<std::int64_t>(g.original_id(bins[b].representative)),
                           bins[b].achieved_ef, static_cast<std::int64_t>(reps),
                           static_cast<double>(global) / reps, size_sum / reps});
  }
  return report;
}

ExperimentReport immunization_experiment(const Graph& g, const SirParams& p, const EFResult& ef,
                                         double frac, int scenarios,
                                         const ExperimentSettings& settings,
                                         const WorkerPool& pool) {
  const NodeId n = g.num_nodes();
  if (!(frac > 0.0 && frac < 1.0)) throw std::invalid_argument("immunized fraction must be in (0, 1)");
  if (scenarios < 1) throw std::invalid_argument("scenario count must be positive");
  if (settings.reps < 1) throw std::invalid_argument("reps must be >= 1");
  const auto window = static_cast<NodeId>(std::ceil(frac * n));
  if (window < 1 || window + 1 > n) {
    throw std::invalid_argument("immunization window leaves no index case available");
  }

  std::vector<NodeId> ranking(n);
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](NodeId a, NodeId b) { return ef.ef[a] < ef.ef[b]; });

  ExperimentReport report;
  report.kind = ReportKind::kImmunization;
  report.columns = {"scenario", "window_start", "window_size", "mean_immunized_ef",
                    "reps",     "outbreak_fraction", "mean_size"};
  report.metadata = sim_metadata(g, p, settings);
  report.metadata["immunized_fraction"] = frac;
  report.metadata["scenarios"] = scenarios;

  const std::size_t reps = settings.reps;
  const NodeId span_starts = n - window;
  for (int s = 0; s < scenarios; ++s) {
    const NodeId start =
        scenarios == 1 ? 0
                       : static_cast<NodeId>(std::uint64_t{span_starts} * s / (scenarios - 1));
    std::vector<NodeId> immunized(ranking.begin() + start, ranking.begin() + start + window);
    std::sort(immunized.begin(), immunized.end());
    std::vector<NodeId> candidates;
    candidates.reserve(n - window);
    double ef_sum = 0.0;
    for (NodeId v : immunized) ef_sum += ef.ef[v];
    for (NodeId v = 0; v < n; ++v) {
      if (!std::binary_search(immunized.begin(), immunized.end(), v)) candidates.push_back(v);
    }

    const auto outcomes = run_sir_batch(
        g, p, reps,
        [&](std::size_t r) {
          Rng rng(replicate_seed(settings.base_seed, s * reps + r));
          SimConfig c;
          c.index_case = candidates[rng.below(candidates.size())];
          c.immunized = immunized;
          c.rng_seed = rng.next();
          return c;
        },
        pool);
    std::size_t global = 0;
    double size_sum = 0.0;
    for (const auto& o : outcomes) {
      global += is_global_outbreak(o, settings.threshold, settings.denominator) ? 1 : 0;
      size_sum += static_cast<double>(o.ever_infected) / o.num_nodes;
    }
    report.rows.push_back({std::int64_t{s}, std::int64_t{start}, std::int64_t{window},
                           ef_sum / window, static_cast<std::int64_t>(reps),
                           static_cast<double>(global) / reps, size_sum / reps});
  }
  return report;
}

ExperimentReport timing_report(const Graph& g, const SirParams& p, std::span<const EFBin> bins,
                               const ExperimentSettings& settings, const WorkerPool& pool) {
  if (settings.reps < 1) throw std::invalid_argument("reps must be >= 1");
  ExperimentReport report;
  report.kind = ReportKind::kTiming;
  report.columns = {"bin",  "target_ef",        "representative",    "achieved_ef",
                    "reps", "global_outbreaks", "mean_time_to_peak", "mean_length"};
  report.metadata = sim_metadata(g, p, settings);

  const std::size_t reps = settings.reps;
  const auto outcomes = run_sir_batch(
      g, p, bins.size() * reps,
      [&](std::size_t r) {
        SimConfig c;
        c.index_case = bins[r / reps].representative;
        c.rng_seed = replicate_seed(settings.base_seed, r);
        return c;
      },
      pool);

  for (std::size_t b = 0; b < bins.size(); ++b) {
    std::size_t global = 0;
    double peak_sum = 0.0;
    double length_sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& o = outcomes[b * reps + r];
      if (!is_global_outbreak(o, settings.threshold, settings.denominator)) continue;
      ++global;
      peak_sum += time_to_peak(o);
      length_sum += epidemic_length(o);
    }
    report.rows.push_back({static_cast<std::int64_t>(b), bins[b].target_ef,
                           static_cast<std::int64_t>(g.original_id(bins[b].representative)),
                           bins[b].achieved_ef, static_cast<std::int64_t>(reps),
                           static_cast<std::int64_t>(global), mean_or_null(peak_sum, global),
                           mean_or_null(length_sum, global)});
  }
  return report;
}

}  // namespace exforce
