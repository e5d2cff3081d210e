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

#include <sstream>

#include "doctest.h"
#include "exforce/analysis.hpp"
#include "oracle.hpp"

namespace exforce {
namespace {

EFResult scores(std::vector<double> values) {
  EFResult r;
  r.ef = std::move(values);
  return r;
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(pearson(x, std::vector<double>{2, 4, 6, 8}) == doctest::Approx(1.0));
  CHECK(pearson(x, std::vector<double>{4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(pearson(x, std::vector<double>{1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK_THROWS_AS(pearson(x, std::vector<double>{5, 5, 5, 5}), UndefinedCorrelation);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("spearman uses average ranks") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(spearman(x, std::vector<double>{1, 4, 9, 16, 25}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{10, 1, 0.5, 0.1, 0}) == doctest::Approx(-1.0));
  // Ranks of y: 1.5, 1.5, 3, 4, 5.
  const double expected = pearson(x, std::vector<double>{1.5, 1.5, 3, 4, 5});
  CHECK(spearman(x, std::vector<double>{7, 7, 8, 9, 10}) == doctest::Approx(expected));
}

TEST_CASE("ef_bins") {
  std::vector<double> v(10);
  for (int i = 0; i < 10; ++i) v[i] = 9 - i;
  const auto bins = ef_bins(scores(v), 10);
  REQUIRE(bins.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(bins[i].target_ef == doctest::Approx(i));
    CHECK(bins[i].representative == static_cast<NodeId>(9 - i));
    CHECK(bins[i].achieved_ef == i);
  }

  // Midpoint 5 is equally close to both; the lower id wins.
  const auto tie = ef_bins(scores({10, 0, 0, 10}), 2);
  CHECK(tie[0].representative == 1);
  CHECK(tie[1].representative == 0);
  const auto mid = ef_bins(scores({10, 0, 4, 6}), 3);
  CHECK(mid[1].target_ef == 5.0);
  CHECK(mid[1].representative == 2);

  CHECK_THROWS_AS(ef_bins(scores({1, 1, 2}), 3), std::invalid_argument);
  CHECK_THROWS_AS(ef_bins(scores({1, 2}), 0), std::invalid_argument);
}

TEST_CASE("seeding experiment limits") {
  const Graph g = oracle::cycle(20);
  const WorkerPool pool(2);
  const std::vector<EFBin> bins{{0.0, 0, 0.0}, {0.0, 7, 0.0}};
  ExperimentSettings s;
  s.reps = 10;

  const auto none = seeding_experiment(g, {.beta = 0.0, .mu = 1.0, .max_steps = 100}, bins, s, pool);
  for (auto f : none.numbers("outbreak_fraction")) CHECK(*f == 0.0);
  for (auto f : none.numbers("mean_size")) CHECK(*f == doctest::Approx(0.05));

  const auto all = seeding_experiment(g, {.beta = 1.0, .mu = 1.0, .max_steps = 100}, bins, s, pool);
  for (auto f : all.numbers("outbreak_fraction")) CHECK(*f == 1.0);
  for (auto f : all.numbers("mean_size")) CHECK(*f == 1.0);
  CHECK(all.number(1, "representative") == 7.0);
  CHECK(all.number(0, "reps") == 10.0);
}

TEST_CASE("immunizing the hub of a star stops every outbreak") {
  EdgeList e;
  for (ExternalId leaf = 1; leaf <= 20; ++leaf) e.edges.emplace_back(0, leaf);
  const Graph g = build_graph(e);
  const WorkerPool pool(1);
  const auto ef = ef_cluster_centric(g, 1);
  ExperimentSettings s;
  s.reps = 25;
  // A window of 1 node starting at the top rank is the center.
  const auto r = immunization_experiment(g, {.beta = 1.0, .mu = 1.0, .max_steps = 100}, ef, 0.04,
                                         2, s, pool);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.number(1, "window_start") == 20.0);
  CHECK(r.number(1, "window_size") == 1.0);
  CHECK(r.number(1, "outbreak_fraction") == 0.0);
  CHECK(r.number(1, "mean_size") == doctest::Approx(1.0 / 21));
  // A leaf immunized instead leaves the star connected.
  CHECK(r.number(0, "outbreak_fraction") == 1.0);
  CHECK(r.number(0, "mean_size") == doctest::Approx(20.0 / 21));

  CHECK_THROWS_AS(immunization_experiment(g, {}, ef, 0.0, 2, s, pool), std::invalid_argument);
  CHECK_THROWS_AS(immunization_experiment(g, {}, ef, 1.0, 2, s, pool), std::invalid_argument);
}

TEST_CASE("timing report") {
  const Graph path = oracle::path4();
  const WorkerPool pool(2);
  const std::vector<EFBin> bins{{0.0, 0, 0.0}, {0.0, 1, 0.0}};
  ExperimentSettings s;
  s.reps = 5;
  const auto wave = timing_report(path, {.beta = 1.0, .mu = 1.0, .max_steps = 100}, bins, s, pool);
  // From an endpoint one node is infectious per step for 4 steps.
  CHECK(wave.number(0, "global_outbreaks") == 5.0);
  CHECK(wave.number(0, "mean_time_to_peak") == 0.0);
  CHECK(wave.number(0, "mean_length") == 4.0);
  CHECK(wave.number(1, "mean_time_to_peak") == 1.0);
  CHECK(wave.number(1, "mean_length") == 3.0);

  const auto quiet = timing_report(oracle::cycle(20), {.beta = 0.0, .mu = 1.0, .max_steps = 100},
                                   bins, s, pool);
  for (auto x : quiet.numbers("mean_time_to_peak")) CHECK_FALSE(x.has_value());
  for (auto x : quiet.numbers("mean_length")) CHECK_FALSE(x.has_value());
  std::ostringstream csv;
  quiet.write_csv(csv);
  CHECK(csv.str().find(",5,0,,\n") != std::string::npos);
}

TEST_CASE("correlation report") {
  RmatParams rp;
  rp.scale = 8;
  rp.seed = 11;
  const Graph g = generate_rmat(rp).graph;
  const WorkerPool pool(2);
  const auto ef = ef_cluster_centric(g, pool);
  const std::vector<CentralityScores> others{degree_centrality(g)};
  SirParams p = calibrate(g, 3.0, 3.0);
  ExperimentSettings s;
  s.base_seed = 5;
  std::size_t runs = 0;
  const auto sims = collect_global_outbreaks(g, p, 30, 2000, s, pool, &runs);
  REQUIRE(sims.size() == 30);
  CHECK(runs >= 30);
  for (const auto& o : sims) CHECK(is_global_outbreak(o));

  CorrelationOptions opts;
  opts.min_outbreaks = 50;
  opts.include_self = true;
  const auto r = correlation_report(g, ef, others, sims, opts);
  REQUIRE(r.warnings.size() == 1);
  const std::size_t metric = r.column("metric");
  CHECK(std::get<std::string>(r.rows[0][metric]) == "warning");
  CHECK(std::get<std::string>(r.rows[1][metric]) == "exp_ef");
  CHECK(std::get<std::string>(r.rows[5][metric]) == "degree");
  REQUIRE(r.rows.size() == 13);
  for (std::size_t row = 9; row < 13; ++row) {
    CHECK(std::get<std::string>(r.rows[row][metric]) == "spreading_power");
    CHECK(*r.number(row, "pearson_r") == doctest::Approx(1.0));
  }
  for (std::size_t row = 1; row < 13; ++row) {
    const auto x = r.number(row, "pearson_r");
    REQUIRE(x.has_value());
    CHECK(std::abs(*x) <= 1.0 + 1e-12);
    CHECK(r.number(row, "outbreaks") == 30.0);
  }

  // Same seed, same report.
  const auto again = collect_global_outbreaks(g, p, 30, 2000, s, pool);
  std::ostringstream a;
  std::ostringstream b;
  r.write_csv(a);
  correlation_report(g, ef, others, again, opts).write_csv(b);
  CHECK(a.str() == b.str());

  const auto empty = correlation_report(g, ef, others, std::span<const SimOutcome>{});
  CHECK(empty.rows.size() == 1);
}

TEST_CASE("report serialization") {
  ExperimentReport r;
  r.kind = ReportKind::kTiming;
  r.columns = {"bin", "value", "label"};
  r.rows = {{std::int64_t{0}, 0.5, std::string("a")}, {std::int64_t{1}, std::monostate{}, std::string("b")}};
  r.metadata = {{"reps", 3}};
  std::ostringstream csv;
  r.write_csv(csv);
  CHECK(csv.str() == "bin,value,label\n0,0.5,a\n1,,b\n");
  std::ostringstream nd;
  r.write_ndjson(nd);
  CHECK(nd.str() ==
        "{\"type\":\"metadata\",\"kind\":\"timing\",\"columns\":[\"bin\",\"value\",\"label\"],"
        "\"metadata\":{\"reps\":3},\"warnings\":[]}\n"
        "{\"type\":\"row\",\"kind\":\"timing\",\"bin\":0,\"value\":0.5,\"label\":\"a\"}\n"
        "{\"type\":\"row\",\"kind\":\"timing\",\"bin\":1,\"value\":null,\"label\":\"b\"}\n");
  CHECK(parse_report_kind("seeding") == ReportKind::kSeeding);
  CHECK_THROWS_AS(parse_report_kind("other"), UsageError);
}

}  // namespace
}  // namespace exforce
