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
#include <string>
#include <vector>

#include "mgtkit/corpus.hpp"
#include "mgtkit/ngram.hpp"
#include "mgtkit/rng.hpp"

namespace mgt {

/// Parameters of a synthetic MGT/HWT benchmark.
///
/// Two "teacher" processes emit pseudo-word text over a shared vocabulary.
/// Each teacher maps every word to a short list of Zipf-weighted successors
/// and emits a uniform word with probability `noise`. The second teacher
/// copies a fraction `overlap` of the first teacher's successor lists, and
/// always its list of opening words. Model A is trained on corpus 1
/// (teacher 1) and generates the MGT side; the HWT side is held-out lines of
/// corpus 2 (teacher 2), whose remaining lines train model B.
struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::size_t vocab_size = 150;
  std::size_t successors = 8;
  double overlap = 0.2;
  double noise = 0.05;
  std::size_t corpus_lines = 2000;
  std::size_t pairs = 400;
  std::size_t hwt_min_words = 5;
  std::size_t hwt_max_words = 30;
  std::size_t mgt_min_words = 5;
  std::size_t mgt_max_words = 30;
  int order = 2;
  double alpha = 1.0;
};

struct SyntheticBenchmark {
  std::vector<std::string> corpus_a;
  std::vector<std::string> corpus_b;
  NgramModel model_a;
  NgramModel model_b;
  /// `pairs` groups, each an HWT record then an MGT record.
  Dataset dataset;
};

SyntheticBenchmark make_synthetic_benchmark(const SyntheticConfig& cfg);

/// Samples exactly `words` words from the model, never drawing EOS.
std::string generate_with_length(const NgramModel& model, std::size_t words,
                                 SplitMix64& rng);

/// Writes a paired dataset (groups with one HWT and one MGT record) in the
/// `id`/`human_answer`/`machine_answer` ingestion format.
std::string to_paired_jsonl(const Dataset& ds);

}  // namespace mgt
