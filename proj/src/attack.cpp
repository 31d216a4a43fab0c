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

#include "mgtkit/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "mgtkit/error.hpp"
#include "mgtkit/parallel.hpp"
#include "mgtkit/report.hpp"
#include "mgtkit/text.hpp"

namespace mgt {

void AttackConfig::validate() const {
  if (!(max_perturb_fraction > 0.0 && max_perturb_fraction <= 1.0)) {
    throw Error("attack: max_perturb_fraction must lie in (0, 1]");
  }
  if (candidates_per_position < 1) throw Error("attack: candidates_per_position must be >= 1");
  if (max_queries < 1) throw Error("attack: max_queries must be >= 1");
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open synonym file '{}'", path.string()));
  SynonymTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto words = split_words(line);
    if (words.empty()) continue;
    if (words.size() != 2) {
      throw Error(fmt::format("{}:{}: expected a word pair", path.string(), lineno));
    }
    t.add(std::move(words[0]), std::move(words[1]));
  }
  return t;
}

void SynonymTable::add(std::string word, std::string replacement) {
  auto& list = table_[std::move(word)];
  if (std::find(list.begin(), list.end(), replacement) == list.end()) {
    list.push_back(std::move(replacement));
  }
}

std::span<const std::string> SynonymTable::lookup(std::string_view word) const {
  auto it = table_.find(word);
  if (it == table_.end()) return {};
  return it->second;
}

std::vector<std::string> generate_candidates(const NgramModel& model,
                                             std::span<const std::string> words,
                                             std::size_t position, std::size_t m) {
  if (position >= words.size()) throw Error("generate_candidates: position out of range");
  const Vocab& vocab = model.vocab();
  const auto ctx = model.context_of_words(words.first(position));
  std::vector<std::string> out;
  for (TokenId id : model.top_tokens(ctx, m + 3)) {
    if (out.size() == m) break;
    if (id == vocab.eos() || id == vocab.unk()) continue;
    if (vocab.token(id) == words[position]) continue;
    out.push_back(vocab.token(id));
  }
  return out;
}

ImportanceRanking importance_ranking(const DetectorFn& detector,
                                     std::span<const std::string> words,
                                     double baseline_p_mgt, std::size_t max_probes) {
  ImportanceRanking result;
  const std::size_t n = words.size();
  result.positions.resize(n);
  std::iota(result.positions.begin(), result.positions.end(), std::size_t{0});
  if (n <= 1) return result;

  std::vector<double> drop(n, -std::numeric_limits<double>::infinity());
  std::vector<std::string> reduced;
  for (std::size_t i = 0; i < n && result.queries < max_probes; ++i) {
    reduced.assign(words.begin(), words.end());
    reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
    drop[i] = baseline_p_mgt - detector(join_words(reduced));
    ++result.queries;
  }
  std::stable_sort(result.positions.begin(), result.positions.end(),
                   [&](std::size_t a, std::size_t b) { return drop[a] > drop[b]; });
  return result;
}

AttackResult attack_record(const DetectorFn& detector, const CandidateSource& source,
                           const TextRecord& record, const AttackConfig& cfg) {
  cfg.validate();
  if (record.label != Label::MGT) {
    throw Error(fmt::format("attack: record '{}' is not MGT", record.id));
  }
  if (!source.model && !source.synonyms) throw Error("attack: no candidate source");

  AttackResult r;
  r.record_id = record.id;
  r.original_text = record.text;
  std::vector<std::string> current = split_words(record.text);
  r.words = current.size();
  if (current.empty()) throw Error(fmt::format("attack: record '{}' is empty", record.id));

  auto query = [&](const std::string& text) {
    ++r.queries;
    return detector(text);
  };
  double p = query(join_words(current));
  if (p < kDecisionThreshold) {
    throw Error(fmt::format("attack: record '{}' is not classified MGT", record.id));
  }
  r.p_mgt_trace.push_back(p);

  const auto budget = static_cast<std::size_t>(
      std::floor(cfg.max_perturb_fraction * static_cast<double>(r.words) + 1e-9));
  const auto ranking = importance_ranking(detector, current, p,
                                          cfg.max_queries - r.queries);
  r.queries += ranking.queries;

  for (std::size_t pos : ranking.positions) {
    if (r.substitutions.size() >= budget || r.queries >= cfg.max_queries) break;
    std::vector<std::string> candidates;
    if (source.synonyms) {
      for (const auto& s : source.synonyms->lookup(current[pos])) {
        if (candidates.size() == cfg.candidates_per_position) break;
        if (s != current[pos]) candidates.push_back(s);
      }
    } else {
      candidates = generate_candidates(*source.model, current, pos,
                                       cfg.candidates_per_position);
    }
    double best_p = p;
    const std::string* best = nullptr;
    const std::string original = current[pos];
    for (const auto& c : candidates) {
      if (r.queries >= cfg.max_queries) break;
      current[pos] = c;
      const double pc = query(join_words(current));
      if (pc < best_p) {
        best_p = pc;
        best = &c;
      }
    }
    current[pos] = original;
    if (!best) continue;
    current[pos] = *best;
    r.substitutions.push_back({pos, original, *best});
    p = best_p;
    r.p_mgt_trace.push_back(p);
    if (p < kDecisionThreshold) {
      r.success = true;
      break;
    }
  }
  r.adversarial_text = join_words(current);
  r.perturbed_fraction =
      static_cast<double>(r.substitutions.size()) / static_cast<double>(r.words);
  return r;
}

std::pair<std::vector<AttackResult>, AttackStats> attack_dataset(
    const DetectorFn& detector, const CandidateSource& source, const Dataset& ds,
    const AttackConfig& cfg, std::size_t threads) {
  std::vector<const TextRecord*> mgts;
  for (const auto& rec : ds.records) {
    if (rec.label == Label::MGT) mgts.push_back(&rec);
  }
  std::vector<char> flagged(mgts.size(), 0);
  parallel_for(mgts.size(), threads, [&](std::size_t i) {
    flagged[i] = detector(mgts[i]->text) >= kDecisionThreshold;
  });
  std::vector<const TextRecord*> targets;
  for (std::size_t i = 0; i < mgts.size(); ++i) {
    if (flagged[i]) targets.push_back(mgts[i]);
  }
  if (targets.empty()) throw Error("nothing to attack: no MGT record is classified MGT");

  std::vector<AttackResult> results(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t i) {
    results[i] = attack_record(detector, source, *targets[i], cfg);
  });
  AttackStats stats = summarize(results);
  return {std::move(results), stats};
}

AttackStats summarize(std::span<const AttackResult> results) {
  AttackStats s;
  s.attacked = results.size();
  if (results.empty()) return s;
  double words = 0, pct = 0, queries = 0, successes = 0;
  for (const auto& r : results) {
    words += static_cast<double>(r.words);
    pct += 100.0 * r.perturbed_fraction;
    queries += static_cast<double>(r.queries);
    successes += r.success ? 1.0 : 0.0;
  }
  const auto n = static_cast<double>(results.size());
  s.avg_words_per_input = words / n;
  s.avg_perturbed_pct = pct / n;
  s.avg_queries = queries / n;
  s.success_rate = successes / n;
  return s;
}

std::string to_jsonl(std::span<const AttackResult> results) {
  std::string out;
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["record_id"] = r.record_id;
    j["success"] = r.success;
    j["queries"] = r.queries;
    j["words"] = r.words;
    j["perturbed_fraction"] = r.perturbed_fraction;
    j["original_text"] = r.original_text;
    j["adversarial_text"] = r.adversarial_text;
    j["substitutions"] = nlohmann::ordered_json::array();
    for (const auto& s : r.substitutions) {
      j["substitutions"].push_back(
          {{"position", s.position}, {"old", s.old_word}, {"new", s.new_word}});
    }
    out += j.dump() + '\n';
  }
  return out;
}

std::string to_key_value(const AttackStats& s) {
  return fmt::format(
      "avg_words_per_input={}\navg_perturbed_pct={}\navg_queries={}\nsuccess_rate={}\n"
      "attacked={}\n",
      format_metric(s.avg_words_per_input), format_metric(s.avg_perturbed_pct),
      format_metric(s.avg_queries), format_metric(s.success_rate), s.attacked);
}

std::string attack_csv_header() {
  return "avg_words_per_input,avg_perturbed_pct,avg_queries,success_rate,attacked";
}

std::string to_csv_row(const AttackStats& s) {
  return fmt::format("{},{},{},{},{}", format_metric(s.avg_words_per_input),
                     format_metric(s.avg_perturbed_pct), format_metric(s.avg_queries),
                     format_metric(s.success_rate), s.attacked);
}

std::string render_diff(const AttackResult& r) {
  auto original = split_words(r.original_text);
  auto adversarial = split_words(r.adversarial_text);
  for (const auto& s : r.substitutions) {
    original[s.position] = "[" + original[s.position] + "]";
    adversarial[s.position] = "[" + adversarial[s.position] + "]";
  }
  return fmt::format(
      "{} ({}, {} substitution(s), {} queries)\n  original   : {}\n  adversarial: {}\n",
      r.record_id, r.success ? "success" : "failure", r.substitutions.size(), r.queries,
      join_words(original), join_words(adversarial));
}

}  // namespace mgt
