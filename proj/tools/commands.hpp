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
#include <string>

#include "mgtkit/error.hpp"
#include "mgtkit/synthetic.hpp"
#include "run_config.hpp"

namespace mgt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad invocation or missing input; maps to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct SynthArgs {
  SyntheticConfig cfg;
  std::string out;
};

struct IngestArgs {
  std::string input;
  std::string out;
  std::size_t min_words = 2;
  std::size_t bucket_width = 5;
};

struct BackendCheckArgs {
  std::string backend;
  std::string text = "hello world";
  double timeout_seconds = 120;
};

int cmd_synth(const SynthArgs& args);
int cmd_ingest(const IngestArgs& args);
int cmd_bench(const RunConfig& cfg);
int cmd_ablate(const RunConfig& cfg);
int cmd_attack(const RunConfig& cfg);
int cmd_backend_check(const BackendCheckArgs& args);

}  // namespace mgt::cli
