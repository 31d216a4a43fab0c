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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgtkit/corpus.hpp"
#include "mgtkit/ngram.hpp"

namespace mgt {

/// Black-box detector: text -> p_mgt. A text is classified MGT when
/// p_mgt >= 0.5.
using DetectorFn = std::function<double(std::string_view)>;

inline constexpr double kDecisionThreshold = 0.5;

struct AttackConfig {
  double max_perturb_fraction = 0.2;
  std::size_t candidates_per_position = 10;
  /// Recorded with results. The greedy search itself draws no randomness.
  std::uint64_t seed = 0;
  std::size_t max_queries = 5000;

  void validate() const;
};

struct Substitution {
  std::size_t position = 0;
  std::string old_word;
  std::string new_word;
};

struct AttackResult {
  std::string record_id;
  bool success = false;
  std::size_t queries = 0;
  std::size_t words = 0;
  double perturbed_fraction = 0;
  std::string original_text;
  std::string adversarial_text;
  std::vector<Substitution> substitutions;
  /// p_mgt of the original text followed by each committed substitution.
  std::vector<double> p_mgt_trace;
};

struct AttackStats {
  double avg_words_per_input = 0;
  double avg_perturbed_pct = 0;
  double avg_queries = 0;
  double success_rate = 0;
  std::size_t attacked = 0;
};

/// Replacement words read from a file of `word replacement` pairs, one pair
/// per line. A word may appear on several lines; order is preserved.
class SynonymTable {
 public:
  static SynonymTable load(const std::filesystem::path& path);
  void add(std::string word, std::string replacement);
  std::span<const std::string> lookup(std::string_view word) const;
  bool empty() const { return table_.empty(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> table_;
};

/// Where substitution candidates come from: the language model's top
/// predictions, or a synonym table when one is set.
struct CandidateSource {
  const NgramModel* model = nullptr;
  const SynonymTable* synonyms = nullptr;
};

/// The `m` most probable predictable tokens at `position` given the current
/// left context, excluding the original word, EOS and UNK. Ties break by
/// code point.
std::vector<std::string> generate_candidates(const NgramModel& model,
                                             std::span<const std::string> words,
                                             std::size_t position, std::size_t m);

struct ImportanceRanking {
  std::vector<std::size_t> positions;
  std::size_t queries = 0;
};

/// Orders positions by the drop in p_mgt when that word is deleted,
/// descending, ties by ascending position. Each deletion probe is one query;
/// at most `max_probes` probes run and unprobed positions rank last. A
/// one-word text has nothing to compare and is returned without probing.
ImportanceRanking importance_ranking(const DetectorFn& detector,
                                     std::span<const std::string> words,
                                     double baseline_p_mgt,
                                     std::size_t max_probes = SIZE_MAX);

/// Greedy word-substitution attack on one MGT record. Throws Error when the
/// record is not MGT or the detector does not classify it MGT.
AttackResult attack_record(const DetectorFn& detector, const CandidateSource& source,
                           const TextRecord& record, const AttackConfig& cfg);

/// Attacks every MGT record the detector initially classifies MGT. The
/// screening call is not part of any record's query count. Throws Error
/// ("nothing to attack") when no record qualifies.
std::pair<std::vector<AttackResult>, AttackStats> attack_dataset(
    const DetectorFn& detector, const CandidateSource& source, const Dataset& ds,
    const AttackConfig& cfg, std::size_t threads = 1);

AttackStats summarize(std::span<const AttackResult> results);

/// One JSON object per result.
std::string to_jsonl(std::span<const AttackResult> results);
std::string to_key_value(const AttackStats& s);
/// avg_words_per_input,avg_perturbed_pct,avg_queries,success_rate,attacked
std::string attack_csv_header();
std::string to_csv_row(const AttackStats& s);

/// Original and adversarial text side by side with changed words wrapped in
/// square brackets.
std::string render_diff(const AttackResult& r);

}  // namespace mgt
