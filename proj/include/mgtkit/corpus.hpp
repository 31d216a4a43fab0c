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
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgt {

enum class Label { HWT, MGT };

std::string_view to_string(Label label);
Label parse_label(std::string_view s);

struct TextRecord {
  std::string id;
  std::string text;
  Label label = Label::HWT;
  std::string source;
  std::string group_id;

  friend bool operator==(const TextRecord&, const TextRecord&) = default;
};

struct Dataset {
  std::string name;
  std::vector<TextRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::size_t count(Label label) const;
};

/// Train fraction is the rational numerator/denominator (default 4/5).
struct SplitSpec {
  std::uint64_t numerator = 4;
  std::uint64_t denominator = 5;
  std::uint64_t seed = 0;
};

/// Reads a paired question-answer file: one JSON object per line with keys
/// `id`, `human_answer`, `machine_answer` and optional `question`. Each line
/// yields an HWT and an MGT record (ids `<id>:HWT`, `<id>:MGT`) sharing
/// group_id = id. Blank lines are skipped.
Dataset load_paired(const std::filesystem::path& path);
Dataset parse_paired(std::istream& in, std::string name);

/// Normalized one-record-per-line format with keys, in order,
/// `id`, `group_id`, `label`, `text`, `source`. A loaded dataset is named
/// after the source of its first record.
Dataset load_normalized(const std::filesystem::path& path);
Dataset parse_normalized(std::istream& in, std::string name);
void write_normalized(std::ostream& out, const Dataset& ds);
void write_normalized(const std::filesystem::path& path, const Dataset& ds);

/// Keeps records with at least `min_words` words. When one member of a group
/// fails, the whole group is dropped.
Dataset filter_min_words(const Dataset& ds, std::size_t min_words = 2);
/// Keeps records with at most `max_words` words; same group rule.
Dataset filter_max_words(const Dataset& ds, std::size_t max_words = 25);

/// Group-level split. Groups (in first-appearance order) are shuffled with
/// Fisher-Yates driven by SplitMix64(spec.seed); the first
/// ceil(numerator * #groups / denominator) groups go to train. Record order
/// inside each side follows the input order.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

using Histogram = std::map<std::size_t, std::size_t>;

/// Per-label word-count histogram keyed by bucket lower bound. Buckets run
/// from 0 up to the bucket holding that label's longest record, empty buckets
/// included. A label with no records has an empty histogram.
std::map<Label, Histogram> word_count_histogram(const Dataset& ds,
                                                std::size_t bucket_width = 5);

}  // namespace mgt
