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

#include "mgtkit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "json.hpp"
#include "mgtkit/error.hpp"
#include "mgtkit/report.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/text.hpp"

namespace mgt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(fmt::format("line {}: missing or non-string field '{}'", line, key));
  }
  return it->get<std::string>();
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return in;
}

// Keeps records whose group has every member satisfying `keep`.
template <typename Pred>
Dataset filter_groups(const Dataset& ds, Pred keep) {
  std::unordered_set<std::string> failed;
  for (const auto& r : ds.records) {
    if (!keep(r)) failed.insert(r.group_id);
  }
  Dataset out{ds.name, {}};
  for (const auto& r : ds.records) {
    if (!failed.contains(r.group_id)) out.records.push_back(r);
  }
  return out;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::MGT ? "MGT" : "HWT";
}

Label parse_label(std::string_view s) {
  if (s == "HWT") return Label::HWT;
  if (s == "MGT") return Label::MGT;
  throw Error(fmt::format("unknown label '{}'", s));
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [label](const TextRecord& r) { return r.label == label; }));
}

Dataset parse_paired(std::istream& in, std::string name) {
  Dataset ds{std::move(name), {}};
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(fmt::format("line {}: malformed record: {}", lineno, e.what()));
    }
    if (!obj.is_object()) {
      throw Error(fmt::format("line {}: malformed record: not an object", lineno));
    }
    std::string id = require_string(obj, "id", lineno);
    std::string human = require_string(obj, "human_answer", lineno);
    std::string machine = require_string(obj, "machine_answer", lineno);
    if (auto q = obj.find("question"); q != obj.end() && !q->is_string()) {
      throw Error(fmt::format("line {}: field 'question' must be a string", lineno));
    }
    if (id.empty()) throw Error(fmt::format("line {}: empty id", lineno));
    if (count_words(human) == 0 || count_words(machine) == 0) {
      throw Error(fmt::format("line {}: empty answer text", lineno));
    }
    if (!seen.insert(id).second) {
      throw Error(fmt::format("line {}: duplicate id '{}'", lineno, id));
    }
    ds.records.push_back({id + ":HWT", std::move(human), Label::HWT, ds.name, id});
    ds.records.push_back({id + ":MGT", std::move(machine), Label::MGT, ds.name, id});
  }
  if (ds.records.empty()) throw Error("empty dataset file");
  return ds;
}

Dataset load_paired(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return parse_paired(in, path.stem().string());
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Dataset parse_normalized(std::istream& in, std::string name) {
  Dataset ds{std::move(name), {}};
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(fmt::format("line {}: malformed record: {}", lineno, e.what()));
    }
    if (!obj.is_object()) {
      throw Error(fmt::format("line {}: malformed record: not an object", lineno));
    }
    TextRecord r;
    r.id = require_string(obj, "id", lineno);
    r.group_id = require_string(obj, "group_id", lineno);
    try {
      r.label = parse_label(require_string(obj, "label", lineno));
    } catch (const Error& e) {
      throw Error(fmt::format("line {}: {}", lineno, e.what()));
    }
    r.text = require_string(obj, "text", lineno);
    r.source = require_string(obj, "source", lineno);
    if (count_words(r.text) == 0) {
      throw Error(fmt::format("line {}: empty text", lineno));
    }
    if (!seen.insert(r.id).second) {
      throw Error(fmt::format("line {}: duplicate id '{}'", lineno, r.id));
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset load_normalized(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    Dataset ds = parse_normalized(in, path.stem().string());
    if (!ds.empty() && !ds.records.front().source.empty()) {
      ds.name = ds.records.front().source;
    }
    return ds;
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_normalized(std::ostream& out, const Dataset& ds) {
  for (const auto& r : ds.records) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["group_id"] = r.group_id;
    obj["label"] = to_string(r.label);
    obj["text"] = r.text;
    obj["source"] = r.source;
    out << obj.dump() << '\n';
  }
}

void write_normalized(const std::filesystem::path& path, const Dataset& ds) {
  std::ostringstream os;
  write_normalized(os, ds);
  write_file_atomic(path, os.str());
}

Dataset filter_min_words(const Dataset& ds, std::size_t min_words) {
  if (min_words < 1) throw Error("filter_min_words: min must be >= 1");
  return filter_groups(ds, [&](const TextRecord& r) {
    return count_words(r.text) >= min_words;
  });
}

Dataset filter_max_words(const Dataset& ds, std::size_t max_words) {
  if (max_words < 1) throw Error("filter_max_words: max must be >= 1");
  return filter_groups(ds, [&](const TextRecord& r) {
    return count_words(r.text) <= max_words;
  });
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (ds.empty()) throw Error("split: empty dataset");
  if (spec.denominator == 0 || spec.numerator == 0 ||
      spec.numerator >= spec.denominator) {
    throw Error("split: train fraction must lie in (0, 1)");
  }
  std::vector<std::string> groups;
  std::unordered_map<std::string, std::size_t> first_seen;
  for (const auto& r : ds.records) {
    if (first_seen.emplace(r.group_id, groups.size()).second) {
      groups.push_back(r.group_id);
    }
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(spec.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  const std::uint64_t g = groups.size();
  const std::uint64_t n_train =
      (spec.numerator * g + spec.denominator - 1) / spec.denominator;
  if (n_train == 0 || n_train >= g) throw Error("degenerate split");

  std::vector<bool> in_train(groups.size(), false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;

  Dataset train{ds.name, {}};
  Dataset test{ds.name, {}};
  for (const auto& r : ds.records) {
    (in_train[first_seen.at(r.group_id)] ? train : test).records.push_back(r);
  }
  return {std::move(train), std::move(test)};
}

std::map<Label, Histogram> word_count_histogram(const Dataset& ds,
                                                std::size_t bucket_width) {
  if (bucket_width < 1) throw Error("word_count_histogram: bucket width must be >= 1");
  std::map<Label, Histogram> out{{Label::HWT, {}}, {Label::MGT, {}}};
  for (Label label : {Label::HWT, Label::MGT}) {
    std::vector<std::size_t> counts;
    for (const auto& r : ds.records) {
      if (r.label == label) counts.push_back(count_words(r.text));
    }
    if (counts.empty()) continue;
    const std::size_t max_count = *std::max_element(counts.begin(), counts.end());
    auto& hist = out[label];
    for (std::size_t b = 0; b <= max_count; b += bucket_width) hist[b] = 0;
    for (std::size_t c : counts) ++hist[(c / bucket_width) * bucket_width];
  }
  return out;
}

}  // namespace mgt
