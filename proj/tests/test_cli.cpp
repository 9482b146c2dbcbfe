#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "support.hpp"

using nlohmann::json;
using testsupport::read_csv;
using testsupport::run_cli;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

// The CLI binary path arrives via --cli=...; without it (running the unit
// binary by hand) these cases are skipped rather than failed.
bool cli_missing() {
  if (!g_cli_path.empty()) return false;
  MESSAGE("no --cli=<path> given, skipping command-line cases");
  return true;
}

json read_json(const std::filesystem::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("cli: rate table for the reference game") {
  if (cli_missing()) return;
  TempDir tmp("rates");
  const int rc = run_cli("rates -a 2 -b 1/3 -p 0.5 --nmax 8 --out " + tmp.str(), tmp.path());
  CHECK(rc == 0);
  CHECK(slurp(tmp.path() / "stdout.txt").find("N_crit = 3") != std::string::npos);

  const auto rows = read_csv(tmp.path() / "rates.csv");
  REQUIRE(rows.size() == 8);
  CHECK(rows[0][0] == 1.0);
  CHECK(rows[2][0] == 3.0);
  CHECK(rows[2][1] == doctest::Approx(0.043045015662329664).epsilon(1e-14));

  const json summary = read_json(tmp.path() / "summary.json");
  CHECK(summary["geometric_rate"].get<double>() ==
        doctest::Approx(std::log(std::sqrt(2.0 / 3.0))).epsilon(1e-14));
  CHECK(summary["shared_rate_limit"].get<double>() ==
        doctest::Approx(std::log(7.0 / 6.0)).epsilon(1e-14));
  CHECK(summary["n_critical"].get<std::int64_t>() == 3);
}

TEST_CASE("cli: rate table of a fair doubling game") {
  if (cli_missing()) return;
  TempDir tmp("rates-fair");
  REQUIRE(run_cli("rates -a 2 -b 0.5 -p 0.5 --nmax 3 --out " + tmp.str(), tmp.path()) == 0);
  const auto rows = read_csv(tmp.path() / "rates.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][1] == 0.0);  // solo play is exactly fair
  CHECK(rows[1][1] == doctest::Approx(0.11157177565710488).epsilon(1e-14));
  CHECK(rows[2][1] == doctest::Approx(0.15204941554056164).epsilon(1e-14));
  const json summary = read_json(tmp.path() / "summary.json");
  // A fair solo game has no critical size: n = 1 already avoids shrinking,
  // but the scan looks for strictly positive rates, which start at n = 2.
  CHECK(summary["n_critical"].get<std::int64_t>() == 2);
}

TEST_CASE("cli: parameter rejections exit with code 2") {
  if (cli_missing()) return;
  TempDir tmp("badparams");
  CHECK(run_cli("rates -a 1 -b 2 -p 0.5 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("rates -a 2 -b 1/3 -p 1 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("rates -a 2 -b 1/0 -p 0.5 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("rates -a 2 -b 1/3 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("simulate warp -a 2 -b 1/3 -p 0.5 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(!slurp(tmp.path() / "stderr.txt").empty());
}

TEST_CASE("cli: staking report for a favorable coin") {
  if (cli_missing()) return;
  TempDir tmp("kelly");
  REQUIRE(run_cli("kelly -p 0.55 -d 1 -N 1 --out " + tmp.str(), tmp.path()) == 0);

  const auto optima = read_csv(tmp.path() / "kelly_optima.csv");
  REQUIRE(optima.size() == 1);
  CHECK(optima[0][1] == doctest::Approx(0.1).epsilon(1e-6));

  const auto danger = read_csv(tmp.path() / "kelly_danger.csv");
  REQUIRE(danger.size() == 1);
  CHECK(danger[0][1] == doctest::Approx(0.19866844788312789).epsilon(1e-8));
  CHECK(danger[0][3] == doctest::Approx(0.80133155211687211).epsilon(1e-8));

  // Default sweep grid is 0:0.99:0.01, one hundred stakes.
  CHECK(read_csv(tmp.path() / "kelly_sweep.csv").size() == 100);
}

TEST_CASE("cli: an unfavorable coin gets no stake and no danger row") {
  if (cli_missing()) return;
  TempDir tmp("kelly-bad");
  REQUIRE(run_cli("kelly -p 0.45 -d 1 -N 1 --out " + tmp.str(), tmp.path()) == 0);
  const auto optima = read_csv(tmp.path() / "kelly_optima.csv");
  REQUIRE(optima.size() == 1);
  CHECK(optima[0][1] == 0.0);
  CHECK(optima[0][2] == 0.0);
  CHECK(read_csv(tmp.path() / "kelly_danger.csv").empty());
}

TEST_CASE("cli: pooling bettors raises both the stake and the rate") {
  if (cli_missing()) return;
  TempDir tmp("kelly-range");
  REQUIRE(run_cli("kelly -p 0.55 -d 1 -N 1-10 --out " + tmp.str(), tmp.path()) == 0);
  const auto optima = read_csv(tmp.path() / "kelly_optima.csv");
  REQUIRE(optima.size() == 10);
  for (std::size_t i = 1; i < optima.size(); ++i) {
    CHECK(optima[i][1] > optima[i - 1][1]);
    CHECK(optima[i][2] > optima[i - 1][2]);
  }
}

TEST_CASE("cli: synchronous simulation writes a trajectory and the exact rate") {
  if (cli_missing()) return;
  TempDir tmp("sync");
  const int rc = run_cli(
      "simulate sync -a 2 -b 1/3 -p 0.5 -N 3 -D 1 -T 200 -R 24 --seed 7 --burn-in 40 --out " +
          tmp.str(),
      tmp.path());
  CHECK(rc == 0);
  CHECK(read_csv(tmp.path() / "trajectory.csv").size() == 201);
  const json summary = read_json(tmp.path() / "summary.json");
  CHECK(summary["analytic_rate"].get<double>() ==
        doctest::Approx(0.043045015662329664).epsilon(1e-14));
  CHECK(summary["estimate"]["replicas_used"].get<std::int64_t>() == 24);
  CHECK(!summary["estimate"]["extinct"].get<bool>());
}

TEST_CASE("cli: a dead ensemble exits 3 but still writes its files") {
  if (cli_missing()) return;
  TempDir tmp("extinct");
  const int rc = run_cli(
      "simulate sync -a 2 -b 0 -p 0.5 -N 1 -D 1 -T 50 -R 4 --seed 7 --out " + tmp.str(),
      tmp.path());
  CHECK(rc == 3);
  CHECK(read_csv(tmp.path() / "trajectory.csv").size() == 51);
  const json summary = read_json(tmp.path() / "summary.json");
  CHECK(summary["estimate"]["extinct"].get<bool>());
}

TEST_CASE("cli: census of an all-or-nothing cohort") {
  if (cli_missing()) return;
  TempDir tmp("census");
  const int rc = run_cli(
      "simulate census -a 3 -b 0 -p 0.5 --n0 1048576 -T 100 --seed 5 --out " + tmp.str(),
      tmp.path());
  CHECK(rc == 0);
  const auto rows = read_csv(tmp.path() / "census.csv");
  REQUIRE(rows.size() >= 2);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] <= rows[i - 1][1]);
  CHECK(rows.back()[1] == 0.0);
  const json summary = read_json(tmp.path() / "summary.json");
  const std::int64_t t_ext = summary["extinction_time"].get<std::int64_t>();
  CHECK(t_ext >= 15);
  CHECK(t_ext <= 40);
  CHECK(slurp(tmp.path() / "stdout.txt").find("population extinct") != std::string::npos);
}

TEST_CASE("cli: one-at-a-time pool of two treads water") {
  if (cli_missing()) return;
  TempDir tmp("async");
  const int rc = run_cli(
      "simulate async -a 3 -b 0 -p 0.5 -N 2 -T 400 -R 16 --seed 3 --burn-in 80 --out " +
          tmp.str(),
      tmp.path());
  CHECK(rc == 0);
  const json summary = read_json(tmp.path() / "summary.json");
  CHECK(std::abs(summary["analytic_rate"].get<double>()) < 1e-12);
}

TEST_CASE("cli: simulate refuses incomplete game descriptions") {
  if (cli_missing()) return;
  TempDir tmp("incomplete");
  CHECK(run_cli("simulate sync -p 0.5 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("simulate kelly -p 0.55 --out " + tmp.str(), tmp.path()) == 2);
  CHECK(run_cli("simulate sync -a 2 -b 1/3 --out " + tmp.str(), tmp.path()) == 2);
}

TEST_CASE("cli: hopeless critical-generosity search exits 4") {
  if (cli_missing()) return;
  TempDir tmp("crit-hopeless");
  const int rc = run_cli(
      "generosity -a 2 -b 1/3 -p 0.5 -N 2 --find-crit -T 100 -R 8 --out " + tmp.str(),
      tmp.path());
  CHECK(rc == 4);
  CHECK(slurp(tmp.path() / "stderr.txt").find("error:") != std::string::npos);
}

TEST_CASE("cli: generosity sweep emits one row per grid point") {
  if (cli_missing()) return;
  TempDir tmp("gen-curve");
  const int rc = run_cli(
      "generosity -a 2 -b 1/3 -p 0.5 -N 2 --grid 0:1:0.25 -T 120 -R 8 --seed 11 --out " +
          tmp.str(),
      tmp.path());
  CHECK(rc == 0);
  const auto rows = read_csv(tmp.path() / "generosity_curve.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][1] == 0.0);
  CHECK(rows[4][1] == 1.0);
}

TEST_CASE("cli: tail probabilities and the contribution table") {
  if (cli_missing()) return;
  TempDir tmp("tails");
  REQUIRE(run_cli("tails -a 2 -b 1/3 -p 0.5 -t 100 --decompose 100 --out " + tmp.str(),
                  tmp.path()) == 0);
  const json doc = read_json(tmp.path() / "tails.json");
  CHECK(doc["prob_exact"].get<double>() ==
        doctest::Approx(0.0104893678389259).epsilon(1e-10));
  CHECK(doc["decomposition"]["argmax_prob"].get<std::int64_t>() == 50);
  CHECK(doc["decomposition"]["argmax_contribution"].get<std::int64_t>() == 86);
  CHECK(read_csv(tmp.path() / "contributions.csv").size() == 101);

  TempDir tiny("tails-tiny");
  REQUIRE(run_cli("tails -a 2 -b 1/2 -p 0.5 -t 2 --out " + tiny.str(), tiny.path()) == 0);
  CHECK(read_json(tiny.path() / "tails.json")["prob_exact"].get<double>() == 0.25);

  TempDir bad("tails-bad");
  CHECK(run_cli("tails -a 2 -b 0 -p 0.5 --out " + bad.str(), bad.path()) == 2);
}

TEST_CASE("cli: repeated runs are byte-identical, whatever the thread count") {
  if (cli_missing()) return;
  const std::string args = "simulate sync -a 2 -b 1/3 -p 0.5 -N 4 -D 1 -T 300 -R 32 --seed 77";
  TempDir one("det-one"), four("det-four"), again("det-again");
  REQUIRE(run_cli(args + " --threads 1 --out " + one.str(), one.path()) == 0);
  REQUIRE(run_cli(args + " --threads 4 --out " + four.str(), four.path()) == 0);
  REQUIRE(run_cli(args + " --threads 4 --out " + again.str(), again.path()) == 0);

  const std::string reference = slurp(one.path() / "trajectory.csv");
  CHECK(slurp(four.path() / "trajectory.csv") == reference);
  CHECK(slurp(again.path() / "trajectory.csv") == reference);
  CHECK(slurp(four.path() / "summary.json") == slurp(one.path() / "summary.json"));
}

TEST_CASE("cli: every run leaves a manifest describing itself") {
  if (cli_missing()) return;
  TempDir tmp("manifest");
  REQUIRE(run_cli("rates -a 2 -b 1/3 -p 0.5 --nmax 4 --out " + tmp.str(), tmp.path()) == 0);
  const json m = read_json(tmp.path() / "manifest.json");
  CHECK(m["tool"] == "multigrowth");
  CHECK(!m["version"].get<std::string>().empty());
  CHECK(m["command"] == "rates");
  CHECK(m["argv"].is_array());
  CHECK(m["argv"].size() >= 8);
  CHECK(m["parameters"]["a"].get<double>() == 2.0);
  CHECK(m["master_seed"].get<std::uint64_t>() == 0);
  CHECK(m["duration_seconds"].get<double>() >= 0.0);
  const auto& outputs = m["outputs"];
  CHECK(std::find(outputs.begin(), outputs.end(), json("rates.csv")) != outputs.end());
  CHECK(std::find(outputs.begin(), outputs.end(), json("summary.json")) != outputs.end());
}
