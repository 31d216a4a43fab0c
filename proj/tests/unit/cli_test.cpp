// Copyright 2026 The mgtkit Authors.
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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "json.hpp"
#include "support/testing.hpp"

#ifndef MGTKIT_CLI
#error "MGTKIT_CLI must name the mgtkit executable"
#endif
#ifndef MGTKIT_MOCK_BRIDGE
#error "MGTKIT_MOCK_BRIDGE must name the mock bridge executable"
#endif

namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using testing_util::read_file;
using testing_util::TempDir;

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

CliResult mgtkit(const TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = fmt::format("'{}' {} > '{}' 2> '{}'", MGTKIT_CLI, args,
                                      out.string(), err.string());
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

// Drops the trailing wall-time column of every CSV line.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string result;
  for (std::string line; std::getline(in, line);) {
    result += line.substr(0, line.rfind(',')) + '\n';
  }
  return result;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// One small synthetic benchmark shared by every test in the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir;
    const CliResult r = mgtkit(*dir_, fmt::format("synth --out '{}' --seed 5 --pairs 120",
                                            (*dir_ / "synth").string()));
    ASSERT_EQ(r.status, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string paired() { return (*dir_ / "synth" / "paired.jsonl").string(); }

  TempDir scratch_;
  static TempDir* dir_;
};
TempDir* Cli::dir_ = nullptr;

TEST_F(Cli, MissingInputIsUsageError) {
  const CliResult r = mgtkit(scratch_, fmt::format("bench --dataset '{}' --out '{}'",
                                             (scratch_ / "absent.jsonl").string(),
                                             (scratch_ / "o").string()));
  EXPECT_EQ(r.status, 2);
  EXPECT_THAT(r.err, HasSubstr("absent.jsonl"));
}

TEST_F(Cli, UnknownDetectorIsUsageError) {
  const CliResult r = mgtkit(scratch_, fmt::format("bench --dataset '{}' --detector nope --out '{}'",
                                             paired(), (scratch_ / "o").string()));
  EXPECT_EQ(r.status, 2);
}

TEST_F(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(mgtkit(scratch_, "").status, 2); }

TEST_F(Cli, IngestWritesRecordsStatsAndConfig) {
  const auto out = scratch_ / "ingest";
  const CliResult r = mgtkit(scratch_, fmt::format("ingest --in '{}' --out '{}' --min-words 0",
                                             paired(), out.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(count_lines(read_file(out / "records.jsonl")), 240u);
  const std::string stats = read_file(out / "stats.txt");
  EXPECT_THAT(stats, HasSubstr("records_total=240\n"));
  EXPECT_THAT(stats, HasSubstr("records_hwt=120\n"));
  EXPECT_THAT(stats, HasSubstr("records_mgt=120\n"));
  const auto cfg = nlohmann::json::parse(read_file(out / "run_config.json"));
  EXPECT_EQ(cfg.at("command"), "ingest");
}

TEST_F(Cli, BenchTableHasOneRowPerDetector) {
  const auto out = scratch_ / "bench";
  const CliResult r = mgtkit(scratch_, fmt::format(
      "bench --dataset '{}' --detector loglik,gltr --metric auc --out '{}'", paired(),
      out.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string csv = read_file(out / "bench.csv");
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_THAT(csv, HasSubstr(",loglik,"));
  EXPECT_THAT(csv, HasSubstr(",gltr,"));
  EXPECT_THAT(read_file(out / "bench_table.txt"), HasSubstr("metric: auc\n"));
  EXPECT_TRUE(fs::exists(out / "timing_table.txt"));
  EXPECT_EQ(std::distance(fs::directory_iterator(out / "reports"), fs::directory_iterator{}), 2);
}

TEST_F(Cli, RerunFromSavedConfigReproducesResults) {
  const auto first = scratch_ / "first";
  const auto second = scratch_ / "second";
  ASSERT_EQ(mgtkit(scratch_, fmt::format("bench --dataset '{}' --detector rank,detectgpt "
                                         "--perturbations 3 --seed 11 --out '{}'",
                                         paired(), first.string()))
                .status,
            0);
  const CliResult r = mgtkit(scratch_, fmt::format("bench --config '{}' --out '{}'",
                                             (first / "run_config.json").string(),
                                             second.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(without_timing(read_file(first / "bench.csv")),
            without_timing(read_file(second / "bench.csv")));
}

TEST_F(Cli, ThreadCountDoesNotChangeResults) {
  const auto one = scratch_ / "t1";
  const auto four = scratch_ / "t4";
  for (const auto& [dir, threads] : {std::pair{one, 1}, std::pair{four, 4}}) {
    const CliResult r = mgtkit(scratch_, fmt::format(
        "bench --dataset '{}' --detector loglik,entropy,detectgpt --perturbations 3 "
        "--threads {} --out '{}'",
        paired(), threads, dir.string()));
    ASSERT_EQ(r.status, 0) << r.err;
  }
  EXPECT_EQ(without_timing(read_file(one / "bench.csv")),
            without_timing(read_file(four / "bench.csv")));
}

TEST_F(Cli, AblateWritesBothColumns) {
  const auto out = scratch_ / "ablate";
  const CliResult r = mgtkit(scratch_, fmt::format("ablate --dataset '{}' --max-words 15 --out '{}'",
                                             paired(), out.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string csv = read_file(out / "ablate.csv");
  EXPECT_THAT(csv, HasSubstr("auc_original,auc_filtered"));
  EXPECT_EQ(count_lines(csv), 2u);
  EXPECT_THAT(read_file(out / "ablate_table.txt"), HasSubstr("<= 15 words"));
}

TEST_F(Cli, AttackAgainstSaturatedClassifierNeverSucceeds) {
  const auto out = scratch_ / "attack";
  const CliResult r = mgtkit(scratch_, fmt::format(
      "attack --dataset '{}' --detector external --backend \"bridge:'{}' --p-mgt 1.0\" "
      "--max-queries 20 --out '{}'",
      paired(), MGTKIT_MOCK_BRIDGE, out.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_THAT(read_file(out / "attack_stats.txt"), HasSubstr("success_rate=0.000000\n"));
  EXPECT_GT(count_lines(read_file(out / "attack_results.jsonl")), 0u);
  EXPECT_TRUE(fs::exists(out / "attack_stats.csv"));
}

TEST_F(Cli, AttackWithBuiltinBackend) {
  const auto out = scratch_ / "attack2";
  const CliResult r = mgtkit(scratch_, fmt::format("attack --dataset '{}' --out '{}'", paired(),
                                             out.string()));
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(read_file(out / "attack_results.jsonl"));
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_LE(j.at("perturbed_fraction").get<double>(), 0.2 + 1e-12);
  }
}

TEST_F(Cli, BackendCheckAgainstMock) {
  const CliResult r = mgtkit(scratch_, fmt::format("backend-check --backend \"bridge:'{}'\"",
                                             MGTKIT_MOCK_BRIDGE));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("OK mock capabilities: score,classify,perturb\n"));
}

TEST_F(Cli, BackendCheckUsesEnvironmentCommand) {
  const std::string cmd = fmt::format("MGTBENCH_BRIDGE=\"'{}' --name envmock\" '{}' "
                                      "backend-check --backend bridge > '{}'",
                                      MGTKIT_MOCK_BRIDGE, MGTKIT_CLI,
                                      (scratch_ / "env.txt").string());
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_THAT(read_file(scratch_ / "env.txt"), HasSubstr("OK envmock"));
}

TEST_F(Cli, BackendCheckReportsFailure) {
  const CliResult r = mgtkit(scratch_, fmt::format("backend-check --backend \"bridge:'{}' "
                                             "--malformed-op score\"",
                                             MGTKIT_MOCK_BRIDGE));
  EXPECT_EQ(r.status, 1);
  EXPECT_THAT(r.out, HasSubstr("FAIL: "));
}

TEST_F(Cli, FailingBackendYieldsErrorRow) {
  const auto out = scratch_ / "fail";
  const CliResult r = mgtkit(scratch_, fmt::format(
      "bench --dataset '{}' --detector loglik --backend builtin "
      "--backend \"bridge:'{}' --crash-on score\" --out '{}'",
      paired(), MGTKIT_MOCK_BRIDGE, out.string()));
  EXPECT_EQ(r.status, 1);
  const std::string csv = read_file(out / "bench.csv");
  EXPECT_THAT(csv, HasSubstr(",OK,"));
  EXPECT_THAT(csv, HasSubstr(",ERROR,,,,,,,,\n"));
}

}  // namespace
