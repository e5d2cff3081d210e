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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace exforce::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("exforce_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "exforce");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

nlohmann::json manifest(const std::string& output) {
  return nlohmann::json::parse(slurp(output + ".manifest.json"));
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

TEST_CASE("generate writes a reproducible edge list") {
  TempDir dir;
  const auto a = dir / "a.txt";
  const auto b = dir / "b.txt";
  REQUIRE(run({"generate", "--scale", "10", "--avg-degree", "8", "--seed", "1", "--output", a}).code == 0);
  REQUIRE(run({"generate", "--scale", "10", "--avg-degree", "8", "--seed", "1", "--output", b}).code == 0);
  CHECK(count_lines(slurp(a)) == 4096);
  CHECK(slurp(a) == slurp(b));
  const auto m = manifest(a);
  CHECK(m["graph"]["sha256"] == manifest(b)["graph"]["sha256"]);
  CHECK(m["graph"]["edges"] == 4096);
  CHECK(m["status"] == "ok");
  CHECK(m["flags"]["seed"] == "1");
  CHECK(m["version"].is_string());
}

TEST_CASE("usage errors exit with 2") {
  TempDir dir;
  CHECK(run({"generate", "--scale", "10"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  const auto out = dir / "g.txt";
  CHECK(run({"generate", "--probs", "0.5,0.5", "--output", out}).code == 2);
  CHECK(manifest(out)["status"] == "usage_error");
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("ef modes and worker counts agree byte for byte") {
  TempDir dir;
  const auto star = dir / "star.txt";
  put(star, "0 1\n0 2\n0 3\n");
  const auto cluster = run({"ef", "--input", star, "--output", "-", "--mode", "cluster"});
  REQUIRE(cluster.code == 0);
  CHECK(cluster.out.rfind("node,ef,cluster_total\n0,1.79175947,6\n", 0) == 0);
  const auto vertex = run({"ef", "--input", star, "--output", "-", "--mode", "vertex"});
  CHECK(vertex.out == cluster.out);

  const auto graph = dir / "g.txt";
  REQUIRE(run({"generate", "--scale", "9", "--output", graph}).code == 0);
  const auto one = dir / "one.csv";
  const auto eight = dir / "eight.csv";
  REQUIRE(run({"ef", "--input", graph, "--output", one, "--workers", "1"}).code == 0);
  REQUIRE(run({"ef", "--input", graph, "--output", eight, "--workers", "8"}).code == 0);
  CHECK(slurp(one) == slurp(eight));
  const auto m = manifest(eight);
  CHECK(m["workers"] == 8);
  CHECK(m["result"]["time_ms"].is_number());
  CHECK(m["result"]["clusters"].get<std::uint64_t>() > 0);
  CHECK(m["timings_ms"].contains("compute"));
}

TEST_CASE("unreadable input exits with 1 and records the error") {
  TempDir dir;
  const auto out = dir / "ef.csv";
  const auto r = run({"ef", "--input", dir / "missing.txt", "--output", out});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  const auto m = manifest(out);
  CHECK(m["status"] == "error");
  CHECK(m["exit_code"] == 1);

  const auto bad = dir / "bad.txt";
  put(bad, "0 1\nx y\n");
  CHECK(run({"ef", "--input", bad, "--output", out}).code == 1);
  CHECK(manifest(out)["error"].get<std::string>().find("line 2") != std::string::npos);
}

TEST_CASE("simulate with beta 0 gives only minor outbreaks") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  REQUIRE(run({"generate", "--scale", "8", "--output", graph}).code == 0);
  const auto out = dir / "sim.ndjson";
  const auto forest = dir / "forest.csv";
  REQUIRE(run({"simulate", "--input", graph, "--output", out, "--beta", "0", "--reps", "20",
               "--forest", forest})
              .code == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["replicate"] == n);
    CHECK(j["global"] == false);
    CHECK(j["ever_infected"] == 1);
    ++n;
  }
  CHECK(n == 20);
  CHECK(slurp(forest) == "child,parent\n");
  CHECK(manifest(out)["result"]["params"]["beta"] == 0.0);
}

TEST_CASE("simulate is reproducible and honours the index case") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  put(graph, "10 20\n20 30\n");
  const auto a = run({"simulate", "--input", graph, "--output", "-", "--beta", "1", "--mu", "1",
                      "--index", "10", "--reps", "1", "--seed", "3", "--manifest", dir / "m.json"});
  REQUIRE(a.code == 0);
  CHECK(a.out ==
        "{\"replicate\":0,\"index_case\":10,\"ever_infected\":3,\"global\":true,\"steps\":3,"
        "\"time_to_peak\":0,\"length\":3,\"direct_infections\":1}\n");
  CHECK(run({"simulate", "--input", graph, "--output", "-", "--index", "99"}).code == 1);

  const auto g2 = dir / "g2.txt";
  REQUIRE(run({"generate", "--scale", "8", "--output", g2}).code == 0);
  const auto x = run({"simulate", "--input", g2, "--output", "-", "--reps", "30", "--seed", "9",
                      "--manifest", dir / "x.json"});
  const auto y = run({"simulate", "--input", g2, "--output", "-", "--reps", "30", "--seed", "9",
                      "--workers", "3", "--manifest", dir / "y.json"});
  CHECK(x.out == y.out);
}

TEST_CASE("centrality refuses expensive betweenness without --force") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  REQUIRE(run({"generate", "--scale", "7", "--output", graph}).code == 0);
  const auto out = dir / "bc.csv";
  const auto refused =
      run({"centrality", "--input", graph, "--output", out, "--metric", "betweenness", "--budget", "10"});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("--force") != std::string::npos);
  CHECK(run({"centrality", "--input", graph, "--output", out, "--metric", "betweenness", "--budget",
             "10", "--force"})
            .code == 0);
  CHECK(slurp(out).rfind("node,betweenness\n", 0) == 0);
  REQUIRE(run({"centrality", "--input", graph, "--output", out, "--metric", "pagerank"}).code == 0);
  CHECK(manifest(out)["result"]["converged"] == true);
  CHECK(run({"centrality", "--input", graph, "--output", out, "--metric", "katz"}).code == 2);
}

TEST_CASE("analyze correlation with the self metric") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  REQUIRE(run({"generate", "--scale", "7", "--output", graph}).code == 0);
  const auto out = dir / "corr.csv";
  REQUIRE(run({"analyze", "--kind", "correlation", "--input", graph, "--output", out, "--r0", "3",
               "--outbreaks", "20", "--min-outbreaks", "20", "--include-self"})
              .code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("metric,order,pearson_r,outbreaks,note\n", 0) == 0);
  CHECK(csv.find("spreading_power,2,1,20,") != std::string::npos);
  CHECK(csv.find("exp_ef,2,") != std::string::npos);
  CHECK(csv.find("betweenness,4,") != std::string::npos);
}

TEST_CASE("analyze seeding with defaults on R-MAT 10,8") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  REQUIRE(run({"generate", "--scale", "10", "--avg-degree", "8", "--output", graph}).code == 0);
  const auto out = dir / "seed.csv";
  REQUIRE(run({"analyze", "--kind", "seeding", "--input", graph, "--output", out}).code == 0);
  CHECK(count_lines(slurp(out)) == 11);
  const auto nd = dir / "seed.ndjson";
  REQUIRE(run({"analyze", "--kind", "seeding", "--input", graph, "--output", nd, "--format",
               "ndjson"})
              .code == 0);
  CHECK(count_lines(slurp(nd)) == 11);
  CHECK(manifest(nd)["result"]["rows"] == 10);
}

TEST_CASE("bench writes medians and honours the timeout") {
  TempDir dir;
  const auto out = dir / "bench.csv";
  REQUIRE(run({"bench", "--scale", "8", "--degrees", "2,4", "--workers", "1,2", "--repeats", "3",
               "--output", out})
              .code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("mode,scale,avg_degree,workers,time_ms,clusters_per_ms\n", 0) == 0);
  CHECK(count_lines(csv) == 9);
  const auto m = manifest(out);
  CHECK(m["result"]["repeats"] == 3);
  CHECK(m["result"]["runs"][0]["samples_ms"].size() == 3);

  const auto slow = dir / "slow.csv";
  const auto r = run({"bench", "--scale", "14", "--degrees", "16", "--repeats", "5", "--timeout",
                      "0.05", "--output", slow});
  CHECK(r.code == 1);
  CHECK(manifest(slow)["status"] == "timeout");
  CHECK(slurp(slow).rfind("mode,scale", 0) == 0);
}

}  // namespace
}  // namespace exforce::cli
