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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mgtkit/attack.hpp"
#include "mgtkit/backend.hpp"
#include "mgtkit/benchmark.hpp"
#include "mgtkit/corpus.hpp"

namespace mgt::cli {

/// Everything a run depends on. Written as run_config.json next to the
/// outputs; passing it back through --config reproduces the run.
struct RunConfig {
  std::string command;
  std::vector<std::string> datasets;
  std::vector<std::string> detectors{"loglik"};
  std::vector<std::string> backends{"builtin:order=3,alpha=1"};
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::uint64_t train_numerator = 4;
  std::uint64_t train_denominator = 5;
  std::size_t min_words = 2;
  std::size_t max_words = 25;
  std::string metric = "f1";
  double threshold = 0.5;
  DetectGptConfig detectgpt;
  std::vector<std::int64_t> gltr_thresholds{10, 100, 1000};
  LogisticHyperparams hyperparams;
  AttackConfig attack;
  std::string synonyms;
  std::string candidate_corpus;
  std::size_t examples = 5;
  double bridge_timeout_seconds = 120;
  std::string out = "out";

  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);

  SplitSpec split_spec() const;
  BenchmarkOptions benchmark_options() const;
};

/// Sub-seeds: split = derive_seed(seed, "split"),
/// DetectGPT = derive_seed(seed, "detectgpt"), attack = derive_seed(seed, "attack").
std::uint64_t split_seed(const RunConfig& cfg);

struct BackendSpec {
  enum class Kind { Builtin, Bridge } kind = Kind::Builtin;
  int order = 3;
  double alpha = 1.0;
  std::string corpus;
  std::string command;
  std::string label;
};

/// `builtin[:order=N,alpha=A,corpus=PATH]` or `bridge[:COMMAND]`; a bare
/// `bridge` takes its command from MGTBENCH_BRIDGE.
BackendSpec parse_backend_spec(const std::string& spec);

/// Builds a backend. Built-in models without a corpus train on `fallback`.
std::unique_ptr<Backend> make_backend(const BackendSpec& spec, const Dataset& fallback,
                                      double timeout_seconds);

struct PreparedBackend {
  std::unique_ptr<Backend> backend;
  /// The part of the train split the detector is fitted on.
  Dataset fit_train;
};

/// A built-in backend without a corpus must not be fitted on the texts its
/// model was trained on, so the train split is halved by group: the model
/// learns from one half (seed derive_seed(seed, "lm")), the detector from the
/// other. Other backends use the whole train split.
PreparedBackend prepare_backend(const BackendSpec& spec, const Dataset& train,
                                const RunConfig& cfg);

/// Loads a normalized dataset, or ingests a paired file when its first
/// record carries `human_answer`.
Dataset load_any_dataset(const std::filesystem::path& path);

/// Reads one text per non-blank line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace mgt::cli
