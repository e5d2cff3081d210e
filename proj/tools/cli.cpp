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

#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "exforce/analysis.hpp"
#include "exforce/centrality.hpp"
#include "exforce/epidemic.hpp"
#include "exforce/errors.hpp"
#include "exforce/expected_force.hpp"
#include "exforce/graph.hpp"
#include "exforce/random.hpp"
#include "exforce/worker_pool.hpp"

namespace exforce::cli {
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Run {
  std::ostream& out;
  std::ostream& err;
  Json manifest;
  std::unique_ptr<WorkerPool> pool;
  std::optional<Clock::time_point> deadline;

  void add_phase(const std::string& name, double ms) {
    auto& timings = manifest["timings_ms"];
    timings[name] = timings.value(name, 0.0) + ms;
  }
  void warn(const std::string& msg) {
    err << "warning: " << msg << '\n';
    manifest["warnings"].push_back(msg);
  }
};

// Adds its lifetime to the named phase, also when unwinding.
class Phase {
 public:
  Phase(Run& run, std::string name) : run_(run), name_(std::move(name)), start_(Clock::now()) {}
  ~Phase() { run_.add_phase(name_, elapsed_ms()); }
  Phase(const Phase&) = delete;
  Phase& operator=(const Phase&) = delete;
  double elapsed_ms() const { return ms_since(start_); }

 private:
  Run& run_;
  std::string name_;
  Clock::time_point start_;
};

// An output destination; "-" is the run's stdout stream.
class Output {
 public:
  Output(Run& run, const std::string& path) : run_(run), path_(path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open " + path + " for writing");
    }
    run_.manifest["outputs"].push_back(path);
  }
  std::ostream& stream() { return path_ == "-" ? run_.out : file_; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("failed writing " + path_);
  }

 private:
  Run& run_;
  std::string path_;
  std::ofstream file_;
};

template <class F>
void write_output(Run& run, const std::string& path, F&& fn) {
  Phase phase(run, "write");
  Output output(run, path);
  fn(output.stream());
  output.finish();
}

void record_graph(Run& run, const Graph& g) {
  Phase phase(run, "fingerprint");
  std::ostringstream canonical;
  write_edge_list(g, canonical);
  run.manifest["graph"] = {{"nodes", g.num_nodes()},
                           {"edges", g.num_edges()},
                           {"sha256", sha256_hex(canonical.str())}};
}

Graph load_graph(Run& run, const std::string& path) {
  Graph g;
  {
    Phase phase(run, "load");
    g = build_graph(load_edge_list_file(path));
  }
  record_graph(run, g);
  return g;
}

// Common to every subcommand.
struct CommonOpts {
  unsigned workers = 0;
  double timeout = 0.0;
  std::string manifest;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--workers", o.workers,
                  "Worker threads (0: EXFORCE_WORKERS or hardware concurrency)");
  sub->add_option("--timeout", o.timeout, "Abort after this many seconds (0: no limit)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--manifest", o.manifest,
                  "Manifest path (default: <output>.manifest.json)");
}

// Flags that shape the epidemic model.
struct EpidemicOpts {
  double r0 = 1.3;
  double recovery_days = 3.0;
  double beta = 0.0;
  double mu = 0.0;
  std::uint32_t max_steps = 0;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* max_steps_opt = nullptr;
};

void add_epidemic(CLI::App* sub, EpidemicOpts& o) {
  sub->add_option("--r0", o.r0, "Target basic reproduction number")->check(CLI::PositiveNumber);
  sub->add_option("--recovery-days", o.recovery_days, "Mean infectious period in steps")
      ->check(CLI::PositiveNumber);
  o.beta_opt = sub->add_option("--beta", o.beta, "Override the calibrated transmission probability")
                   ->check(CLI::Range(0.0, 1.0));
  o.mu_opt = sub->add_option("--mu", o.mu, "Override the recovery probability")
                 ->check(CLI::Range(0.0, 1.0));
  o.max_steps_opt = sub->add_option("--max-steps", o.max_steps, "Override the step cap")
                        ->check(CLI::PositiveNumber);
}

SirParams epidemic_params(Run& run, const Graph& g, const EpidemicOpts& o) {
  SirParams p;
  if (o.beta_opt->count() > 0) {
    if (g.num_nodes() == 0) throw CalibrationError("cannot simulate on an empty graph");
    p.beta = o.beta;
    p.mu = 1.0 / o.recovery_days;
    p.max_steps = static_cast<std::uint32_t>(
        std::clamp<std::uint64_t>(std::uint64_t{10} * g.num_nodes(), 100, 100000));
  } else {
    p = calibrate(g, o.r0, o.recovery_days);
  }
  if (o.mu_opt->count() > 0) p.mu = o.mu;
  if (o.max_steps_opt->count() > 0) p.max_steps = o.max_steps;
  p.validate();
  run.manifest["result"]["params"] = {{"beta", p.beta}, {"mu", p.mu}, {"max_steps", p.max_steps}};
  return p;
}

OutbreakDenominator parse_denominator(const std::string& name) {
  if (name == "population") return OutbreakDenominator::kPopulation;
  if (name == "non-immunized") return OutbreakDenominator::kNonImmunized;
  throw UsageError("unknown denominator '" + name + "'");
}

void refuse_expensive_betweenness(const Graph& g, double budget, bool force) {
  const double cost = betweenness_cost(g);
  if (cost > budget && !force) {
    throw UsageError(fmt::format(
        "betweenness costs about {:.3g} operations (n*m) on this graph, above the budget of "
        "{:.3g}; pass --force to run it anyway or raise --budget",
        cost, budget));
  }
}

// ---- generate -------------------------------------------------------------

struct GenerateOpts {
  int scale = 10;
  int avg_degree = 8;
  std::uint64_t seed = 1;
  std::vector<double> probs{0.57, 0.19, 0.19, 0.05};
  std::string output;
};

void cmd_generate(Run& run, const GenerateOpts& o) {
  if (o.probs.size() != 4) throw UsageError("--probs takes exactly four values a,b,c,d");
  RmatParams p;
  p.scale = o.scale;
  p.avg_degree = o.avg_degree;
  p.seed = o.seed;
  std::copy(o.probs.begin(), o.probs.end(), p.quadrant_probs.begin());
  p.validate();
  RmatResult r;
  {
    Phase phase(run, "generate");
    r = generate_rmat(p);
  }
  record_graph(run, r.graph);
  run.manifest["result"] = {
      {"target_edges", r.target_edges}, {"attempts", r.attempts}, {"truncated", r.truncated}};
  if (r.truncated) {
    run.warn(fmt::format("attempt cap reached with {} of {} edges", r.graph.num_edges(),
                         r.target_edges));
  }
  write_output(run, o.output, [&](std::ostream& s) { write_edge_list(r.graph, s); });
}

// ---- ef -------------------------------------------------------------------

struct EfOpts {
  std::string input;
  std::string output;
  std::string mode = "cluster";
  std::size_t chunk_size = 64;
};

void cmd_ef(Run& run, const EfOpts& o) {
  const EfMode mode = parse_ef_mode(o.mode);
  const Graph g = load_graph(run, o.input);
  EFResult r;
  double ms = 0.0;
  {
    Phase phase(run, "compute");
    r = mode == EfMode::kClusterCentric ? ef_cluster_centric(g, *run.pool, o.chunk_size)
                                        : ef_vertex_centric(g, *run.pool);
    ms = phase.elapsed_ms();
  }
  const std::uint64_t clusters = cluster_count(g);
  std::size_t no_clusters = 0;
  for (auto f : r.flags) no_clusters += f == EfFlag::kNoClusters ? 1 : 0;
  run.manifest["result"] = {{"mode", to_string(mode)},
                            {"time_ms", ms},
                            {"clusters", clusters},
                            {"clusters_per_ms", ms > 0 ? Json(clusters / ms) : Json(nullptr)},
                            {"nodes_without_clusters", no_clusters}};
  write_output(run, o.output, [&](std::ostream& s) { write_ef_csv(g, r, s); });
}

// ---- centrality -----------------------------------------------------------

struct CentralityOpts {
  std::string input;
  std::string output;
  std::string metric = "degree";
  bool force = false;
  double budget = 1e10;
  double damping = 0.85;
  double tol = 1e-8;
  int max_iter = 200;
};

void cmd_centrality(Run& run, const CentralityOpts& o) {
  const Metric metric = parse_metric(o.metric);
  const Graph g = load_graph(run, o.input);
  if (metric == Metric::kExpectedForce) {
    EFResult r;
    {
      Phase phase(run, "compute");
      r = ef_cluster_centric(g, *run.pool);
    }
    write_output(run, o.output, [&](std::ostream& s) { write_ef_csv(g, r, s); });
    return;
  }
  if (metric == Metric::kBetweenness) refuse_expensive_betweenness(g, o.budget, o.force);
  CentralityScores s;
  {
    Phase phase(run, "compute");
    switch (metric) {
      case Metric::kDegree:
        s = degree_centrality(g);
        break;
      case Metric::kPageRank:
        s = pagerank(g, o.damping, o.tol, o.max_iter);
        break;
      default:
        s = betweenness(g, *run.pool, {.cost_budget = o.budget});
        break;
    }
  }
  run.manifest["result"] = {{"metric", to_string(metric)}};
  if (metric == Metric::kPageRank) {
    run.manifest["result"]["converged"] = s.converged;
    run.manifest["result"]["iterations"] = s.iterations;
    if (!s.converged) run.warn(fmt::format("pagerank did not converge in {} iterations", o.max_iter));
  }
  write_output(run, o.output, [&](std::ostream& out) { write_scores_csv(g, s, out); });
}

// ---- simulate -------------------------------------------------------------

struct SimulateOpts {
  std::string input;
  std::string output;
  EpidemicOpts epidemic;
  std::uint32_t reps = 100;
  std::uint64_t seed = 1;
  ExternalId index = 0;
  CLI::Option* index_opt = nullptr;
  double threshold = 0.25;
  std::string forest;
  std::size_t forest_replicate = 0;
};

void cmd_simulate(Run& run, const SimulateOpts& o) {
  const Graph g = load_graph(run, o.input);
  const SirParams p = epidemic_params(run, g, o.epidemic);
  std::optional<NodeId> fixed_index;
  if (o.index_opt->count() > 0) {
    const auto ids = g.original_ids();
    const auto it = std::lower_bound(ids.begin(), ids.end(), o.index);
    if (it == ids.end() || *it != o.index) {
      throw std::runtime_error(fmt::format("index node {} is not in the graph", o.index));
    }
    fixed_index = static_cast<NodeId>(it - ids.begin());
  }
  if (!o.forest.empty() && o.forest_replicate >= o.reps) {
    throw UsageError("--forest-replicate must be below --reps");
  }

  const NodeId n = g.num_nodes();
  const auto make_config = [&](std::size_t r) {
    Rng rng(replicate_seed(o.seed, r));
    SimConfig c;
    c.index_case = static_cast<NodeId>(rng.below(n));
    if (fixed_index) c.index_case = *fixed_index;
    c.rng_seed = rng.next();
    return c;
  };

  auto& result = run.manifest["result"];
  result["replicates_completed"] = 0;
  std::size_t global = 0;
  double infected_sum = 0.0;
  double direct_sum = 0.0;
  std::optional<SimOutcome> forest_outcome;

  // Batches keep completed replicates on disk if the deadline passes.
  constexpr std::size_t kBatch = 256;
  Output output(run, o.output);
  for (std::size_t done = 0; done < o.reps;) {
    const std::size_t count = std::min<std::size_t>(kBatch, o.reps - done);
    std::vector<SimOutcome> batch;
    {
      Phase phase(run, "simulate");
      batch = run_sir_batch(
          g, p, count, [&](std::size_t r) { return make_config(done + r); }, *run.pool);
    }
    Phase phase(run, "write");
    for (std::size_t r = 0; r < count; ++r) {
      const SimOutcome& sim = batch[r];
      write_outcome_ndjson(g, sim, done + r, o.threshold, output.stream());
      global += is_global_outbreak(sim, o.threshold) ? 1 : 0;
      infected_sum += sim.ever_infected;
      direct_sum += sim.direct_infections_by_index;
      if (!o.forest.empty() && done + r == o.forest_replicate) forest_outcome = sim;
    }
    output.stream().flush();
    done += count;
    result["replicates_completed"] = done;
    result["global_outbreaks"] = global;
  }
  output.finish();
  result["mean_ever_infected"] = infected_sum / o.reps;
  result["mean_direct_infections"] = direct_sum / o.reps;
  if (forest_outcome) {
    write_output(run, o.forest, [&](std::ostream& s) { write_forest_csv(g, *forest_outcome, s); });
  }
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOpts {
  std::string input;
  std::string output;
  std::string kind;
  std::string format = "csv";
  EpidemicOpts epidemic;
  std::uint32_t reps = 100;
  std::uint64_t seed = 1;
  double threshold = 0.25;
  std::string denominator = "population";
  double immunize_frac = 0.05;
  int bins = 10;
  int scenarios = 10;
  std::vector<std::string> metrics{"degree", "pagerank", "betweenness"};
  std::size_t outbreaks = 100;
  std::size_t max_runs = 100000;
  std::size_t min_outbreaks = 100;
  bool include_self = false;
  bool force = false;
  double budget = 1e10;
};

void cmd_analyze(Run& run, const AnalyzeOpts& o) {
  const ReportKind kind = parse_report_kind(o.kind);
  if (o.format != "csv" && o.format != "ndjson") throw UsageError("--format must be csv or ndjson");
  ExperimentSettings settings;
  settings.reps = o.reps;
  settings.base_seed = o.seed;
  settings.threshold = o.threshold;
  settings.denominator = parse_denominator(o.denominator);
  std::vector<Metric> metrics;
  for (const auto& name : o.metrics) {
    const Metric m = parse_metric(name);
    if (m == Metric::kExpectedForce) continue;  // always the first row
    metrics.push_back(m);
  }

  const Graph g = load_graph(run, o.input);
  const SirParams p = epidemic_params(run, g, o.epidemic);
  EFResult ef;
  {
    Phase phase(run, "ef");
    ef = ef_cluster_centric(g, *run.pool);
  }

  ExperimentReport report;
  if (kind == ReportKind::kCorrelation) {
    if (std::count(metrics.begin(), metrics.end(), Metric::kBetweenness) > 0) {
      refuse_expensive_betweenness(g, o.budget, o.force);
    }
    std::vector<CentralityScores> others;
    {
      Phase phase(run, "centrality");
      for (Metric m : metrics) {
        if (m == Metric::kDegree) others.push_back(degree_centrality(g));
        if (m == Metric::kPageRank) others.push_back(pagerank(g));
        if (m == Metric::kBetweenness) others.push_back(betweenness(g, *run.pool));
      }
    }
    std::size_t runs = 0;
    std::vector<SimOutcome> sims;
    {
      Phase phase(run, "simulate");
      sims = collect_global_outbreaks(g, p, o.outbreaks, o.max_runs, settings, *run.pool, &runs);
    }
    Phase phase(run, "analyze");
    CorrelationOptions copts;
    copts.min_outbreaks = o.min_outbreaks;
    copts.include_self = o.include_self;
    copts.threshold = o.threshold;
    report = correlation_report(g, ef, others, sims, copts);
    report.metadata["simulations"] = runs;
  } else {
    Phase phase(run, "simulate");
    if (kind == ReportKind::kImmunization) {
      report = immunization_experiment(g, p, ef, o.immunize_frac, o.scenarios, settings, *run.pool);
    } else {
      const auto bins = ef_bins(ef, o.bins);
      report = kind == ReportKind::kSeeding ? seeding_experiment(g, p, bins, settings, *run.pool)
                                            : timing_report(g, p, bins, settings, *run.pool);
    }
  }
  for (const auto& w : report.warnings) run.warn(w);
  run.manifest["result"]["kind"] = to_string(kind);
  run.manifest["result"]["rows"] = report.rows.size();
  run.manifest["result"]["metadata"] = report.metadata;
  write_output(run, o.output, [&](std::ostream& s) {
    if (o.format == "csv") {
      report.write_csv(s);
    } else {
      report.write_ndjson(s);
    }
  });
}

// ---- bench ----------------------------------------------------------------

struct BenchOpts {
  int scale = 12;
  std::vector<int> degrees{2, 4, 8, 16};
  std::vector<unsigned> workers{1};
  std::vector<std::string> modes{"cluster", "vertex"};
  int repeats = 3;
  std::uint64_t seed = 1;
  std::size_t chunk_size = 64;
  std::string output = "-";
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void cmd_bench(Run& run, const BenchOpts& o) {
  std::vector<EfMode> modes;
  for (const auto& m : o.modes) modes.push_back(parse_ef_mode(m));
  for (unsigned w : o.workers) {
    if (w == 0) throw UsageError("--workers list entries must be positive");
  }

  auto& result = run.manifest["result"];
  result["repeats"] = o.repeats;
  result["statistic"] = "median";
  result["runs"] = Json::array();
  Output output(run, o.output);
  output.stream() << "mode,scale,avg_degree,workers,time_ms,clusters_per_ms\n";
  for (int degree : o.degrees) {
    RmatParams p;
    p.scale = o.scale;
    p.avg_degree = degree;
    p.seed = o.seed;
    RmatResult graph;
    {
      Phase phase(run, "generate");
      graph = generate_rmat(p);
    }
    const std::uint64_t clusters = cluster_count(graph.graph);
    for (EfMode mode : modes) {
      for (unsigned w : o.workers) {
        WorkerPool pool(w);
        if (run.deadline) pool.set_deadline(*run.deadline);
        std::vector<double> samples;
        Phase phase(run, "compute");
        for (int r = 0; r < o.repeats; ++r) {
          const auto start = Clock::now();
          if (mode == EfMode::kClusterCentric) {
            ef_cluster_centric(graph.graph, pool, o.chunk_size);
          } else {
            ef_vertex_centric(graph.graph, pool);
          }
          samples.push_back(ms_since(start));
        }
        const double ms = median(samples);
        output.stream() << fmt::format("{},{},{},{},{:.3f},{:.3f}\n", to_string(mode), o.scale,
                                       degree, w, ms, ms > 0 ? clusters / ms : 0.0);
        output.stream().flush();
        result["runs"].push_back({{"mode", to_string(mode)},
                                  {"avg_degree", degree},
                                  {"workers", w},
                                  {"nodes", graph.graph.num_nodes()},
                                  {"edges", graph.graph.num_edges()},
                                  {"clusters", clusters},
                                  {"samples_ms", samples}});
      }
    }
  }
  output.finish();
}

// ---- driver ---------------------------------------------------------------

// Value of --name in raw arguments, for manifests of runs that fail to parse.
std::string raw_flag(const std::vector<std::string>& args, const std::string& name) {
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == name && k + 1 < args.size()) return args[k + 1];
    if (args[k].rfind(name + "=", 0) == 0) return args[k].substr(name.size() + 1);
  }
  return {};
}

Json collect_flags(const CLI::App* sub) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_type_size_max() == 0) {
      flags[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      flags[name] = fmt::format("{}", fmt::join(opt->results(), ","));
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    } else {
      flags[name] = nullptr;
    }
  }
  return flags;
}

void write_manifest(const Json& manifest, const std::string& path, std::ostream& err) {
  if (path.empty()) {
    err << manifest.dump() << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << manifest.dump(2) << '\n';
  if (!f) throw IoError("cannot write manifest " + path);
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", md[k]);
  return hex;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected Force centrality and epidemic analysis", "exforce"};
  app.set_version_flag("--version", EXFORCE_VERSION);
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  CommonOpts common;
  GenerateOpts gen;
  EfOpts ef;
  CentralityOpts cent;
  SimulateOpts sim;
  AnalyzeOpts ana;
  BenchOpts bench;

  auto* generate = app.add_subcommand("generate", "Write an R-MAT edge list");
  generate->add_option("--scale", gen.scale, "log2 of the node count")->check(CLI::Range(1, 31));
  generate->add_option("--avg-degree", gen.avg_degree, "Target average degree")
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--probs", gen.probs, "Quadrant probabilities a,b,c,d")->delimiter(',');
  generate->add_option("--output", gen.output, "Edge list path")->required();

  auto* efc = app.add_subcommand("ef", "Compute Expected Force for every node");
  efc->add_option("--input", ef.input, "Edge list path")->required();
  efc->add_option("--output", ef.output, "CSV path ('-' for stdout)")->required();
  efc->add_option("--mode", ef.mode, "cluster or vertex");
  efc->add_option("--chunk-size", ef.chunk_size, "Nodes claimed per task in cluster mode")
      ->check(CLI::PositiveNumber);

  auto* centrality = app.add_subcommand("centrality", "Compute a baseline centrality");
  centrality->add_option("--input", cent.input, "Edge list path")->required();
  centrality->add_option("--output", cent.output, "CSV path ('-' for stdout)")->required();
  centrality->add_option("--metric", cent.metric, "degree, pagerank, betweenness or ef");
  centrality->add_flag("--force", cent.force, "Run betweenness above the cost budget");
  centrality->add_option("--budget", cent.budget, "Betweenness cost budget in n*m units");
  centrality->add_option("--damping", cent.damping, "PageRank damping factor");
  centrality->add_option("--tol", cent.tol, "PageRank L1 tolerance");
  centrality->add_option("--max-iter", cent.max_iter, "PageRank iteration cap")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run SIR replicates");
  simulate->add_option("--input", sim.input, "Edge list path")->required();
  simulate->add_option("--output", sim.output, "NDJSON path ('-' for stdout)")->required();
  add_epidemic(simulate, sim.epidemic);
  simulate->add_option("--reps", sim.reps, "Replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Base seed");
  sim.index_opt = simulate->add_option("--index", sim.index, "Index case (default: random)");
  simulate->add_option("--threshold", sim.threshold, "Global outbreak fraction")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--forest", sim.forest, "Write one replicate's infection forest here");
  simulate->add_option("--forest-replicate", sim.forest_replicate, "Replicate for --forest");

  auto* analyze = app.add_subcommand("analyze", "Run an evaluation experiment");
  analyze->add_option("--kind", ana.kind, "correlation, seeding, immunization or timing")
      ->required();
  analyze->add_option("--input", ana.input, "Edge list path")->required();
  analyze->add_option("--output", ana.output, "Report path ('-' for stdout)")->required();
  analyze->add_option("--format", ana.format, "csv or ndjson");
  add_epidemic(analyze, ana.epidemic);
  analyze->add_option("--reps", ana.reps, "Replicates per bin or scenario")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--seed", ana.seed, "Base seed");
  analyze->add_option("--threshold", ana.threshold, "Global outbreak fraction")
      ->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--denominator", ana.denominator, "population or non-immunized");
  analyze->add_option("--immunize-frac", ana.immunize_frac, "Fraction immunized per scenario");
  analyze->add_option("--bins", ana.bins, "EF bins")->check(CLI::PositiveNumber);
  analyze->add_option("--scenarios", ana.scenarios, "Immunization scenarios")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--metrics", ana.metrics, "Centralities compared with EF")->delimiter(',');
  analyze->add_option("--outbreaks", ana.outbreaks, "Global outbreaks to collect");
  analyze->add_option("--max-runs", ana.max_runs, "Simulation cap while collecting outbreaks");
  analyze->add_option("--min-outbreaks", ana.min_outbreaks, "Warn below this many outbreaks");
  analyze->add_flag("--include-self", ana.include_self, "Add spreading power as a metric");
  analyze->add_flag("--force", ana.force, "Run betweenness above the cost budget");
  analyze->add_option("--budget", ana.budget, "Betweenness cost budget in n*m units");

  auto* benchc = app.add_subcommand("bench", "Time both EF algorithms on R-MAT graphs");
  benchc->add_option("--scale", bench.scale, "R-MAT scale")->check(CLI::Range(1, 31));
  benchc->add_option("--degrees", bench.degrees, "Average degrees")->delimiter(',');
  benchc->add_option("--workers", bench.workers, "Worker counts")->delimiter(',');
  benchc->add_option("--modes", bench.modes, "cluster and/or vertex")->delimiter(',');
  benchc->add_option("--repeats", bench.repeats, "Timed repeats per point")
      ->check(CLI::PositiveNumber);
  benchc->add_option("--seed", bench.seed, "R-MAT seed");
  benchc->add_option("--chunk-size", bench.chunk_size, "Cluster-mode chunk size")
      ->check(CLI::PositiveNumber);
  benchc->add_option("--output", bench.output, "CSV path ('-' for stdout)");
  benchc->add_option("--timeout", common.timeout, "Abort after this many seconds (0: no limit)")
      ->check(CLI::NonNegativeNumber);
  benchc->add_option("--manifest", common.manifest, "Manifest path");

  for (auto* sub : {generate, efc, centrality, simulate, analyze}) add_common(sub, common);

  Run run{out, err, Json::object(), nullptr, std::nullopt};
  run.manifest["tool"] = "exforce";
  run.manifest["version"] = EXFORCE_VERSION;
  run.manifest["command"] = args.size() > 1 ? Json(args[1]) : Json(nullptr);
  run.manifest["argv"] = args;
  run.manifest["flags"] = Json::object();
  run.manifest["workers"] = nullptr;
  run.manifest["status"] = "ok";
  run.manifest["exit_code"] = 0;
  run.manifest["error"] = nullptr;
  run.manifest["graph"] = nullptr;
  run.manifest["timings_ms"] = Json::object();
  run.manifest["result"] = Json::object();
  run.manifest["warnings"] = Json::array();
  run.manifest["outputs"] = Json::array();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  const auto started = Clock::now();

  int code = kExitOk;
  std::string status = "ok";
  std::string error;
  bool parsed = false;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    parsed = true;
    const CLI::App* sub = app.get_subcommands().front();
    run.manifest["flags"] = collect_flags(sub);
    const unsigned workers = common.workers > 0 ? common.workers : default_worker_count();
    run.pool = std::make_unique<WorkerPool>(workers);
    run.manifest["workers"] = workers;
    if (common.timeout > 0) {
      run.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(common.timeout));
      run.pool->set_deadline(*run.deadline);
    }
    if (sub == generate) cmd_generate(run, gen);
    if (sub == efc) cmd_ef(run, ef);
    if (sub == centrality) cmd_centrality(run, cent);
    if (sub == simulate) cmd_simulate(run, sim);
    if (sub == analyze) cmd_analyze(run, ana);
    if (sub == benchc) cmd_bench(run, bench);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    if (rc == 0) return kExitOk;  // --help or --version
    code = kExitUsage;
    status = "usage_error";
    error = e.what();
  } catch (const std::invalid_argument& e) {
    code = kExitUsage;
    status = "usage_error";
    error = e.what();
    err << "error: " << error << '\n';
  } catch (const TimeoutError& e) {
    code = kExitDataError;
    status = "timeout";
    error = e.what();
    err << "error: " << error << "; partial results kept\n";
  } catch (const std::exception& e) {
    code = kExitDataError;
    status = "error";
    error = e.what();
    err << "error: " << error << '\n';
  }

  if (!parsed && args.size() > 1) {
    for (const auto* sub : app.get_subcommands()) run.manifest["flags"] = collect_flags(sub);
  }
  run.add_phase("total", ms_since(started));
  run.manifest["status"] = status;
  run.manifest["exit_code"] = code;
  if (!error.empty()) run.manifest["error"] = error;

  std::string manifest_path = parsed ? common.manifest : raw_flag(args, "--manifest");
  const std::string output = raw_flag(args, "--output");
  if (manifest_path.empty() && !output.empty() && output != "-") {
    manifest_path = output + ".manifest.json";
  }
  if (!parsed && manifest_path.empty()) return code;  // nothing names a destination
  try {
    write_manifest(run.manifest, manifest_path, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (code == kExitOk) code = kExitDataError;
  }
  return code;
}

}  // namespace exforce::cli
