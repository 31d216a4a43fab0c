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

#include "mgtkit/synthetic.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "mgtkit/error.hpp"
#include "mgtkit/text.hpp"

namespace mgt {
namespace {

std::vector<std::string> pseudo_words(std::size_t n, SplitMix64& rng) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::vector<std::string> syllables;
  for (char c : kOnsets) {
    for (char v : kVowels) syllables.push_back(std::string{c, v});
  }
  std::vector<std::string> words;
  for (const auto& a : syllables) {
    for (const auto& b : syllables) words.push_back(a + b);
  }
  if (n > words.size()) throw Error("synthetic: vocabulary too large");
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(words.size() - i));
    std::swap(words[i], words[j]);
  }
  words.resize(n);
  return words;
}

class Teacher {
 public:
  Teacher(std::size_t vocab, std::size_t successors, double noise, SplitMix64& rng)
      : vocab_(vocab), noise_(noise), rows_(vocab + 1) {
    for (auto& row : rows_) row = random_row(successors, rng);
  }

  Teacher(const Teacher& base, double overlap, SplitMix64& rng)
      : vocab_(base.vocab_), noise_(base.noise_), rows_(base.rows_) {
    // The start-state row stays shared; otherwise the opening word alone
    // separates short texts better than long ones.
    for (std::size_t i = 0; i < vocab_; ++i) {
      if (rng.uniform() >= overlap) rows_[i] = random_row(rows_[i].size(), rng);
    }
  }

  std::vector<std::size_t> emit(std::size_t length, SplitMix64& rng) const {
    std::vector<std::size_t> out;
    std::size_t prev = vocab_;  // start state
    for (std::size_t i = 0; i < length; ++i) {
      std::size_t next;
      if (rng.uniform() < noise_) {
        next = static_cast<std::size_t>(rng.below(vocab_));
      } else {
        const auto& row = rows_[prev];
        double u = rng.uniform() * harmonic(row.size());
        std::size_t k = 0;
        while (k + 1 < row.size() && (u -= 1.0 / static_cast<double>(k + 1)) >= 0) ++k;
        next = row[k];
      }
      out.push_back(next);
      prev = next;
    }
    return out;
  }

 private:
  static double harmonic(std::size_t n) {
    double h = 0;
    for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    return h;
  }

  std::vector<std::size_t> random_row(std::size_t size, SplitMix64& rng) const {
    std::vector<std::size_t> ids(vocab_);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    size = std::min(size, vocab_);
    for (std::size_t i = 0; i < size; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(vocab_ - i));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(size);
    return ids;
  }

  std::size_t vocab_;
  double noise_;
  std::vector<std::vector<std::size_t>> rows_;
};

std::size_t draw_length(std::size_t lo, std::size_t hi, SplitMix64& rng) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

std::string render(const std::vector<std::size_t>& ids,
                   const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(words[id]);
  return join_words(out);
}

}  // namespace

std::string generate_with_length(const NgramModel& model, std::size_t words,
                                 SplitMix64& rng) {
  const Vocab& vocab = model.vocab();
  const std::array<TokenId, 1> no_eos{vocab.eos()};
  std::vector<TokenId> ids;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words; ++i) {
    const TokenId next =
        sample_index(model.distribution(model.context_of(ids)), rng.uniform(), no_eos);
    ids.push_back(next);
    out.push_back(vocab.token(next));
  }
  return join_words(out);
}

SyntheticBenchmark make_synthetic_benchmark(const SyntheticConfig& cfg) {
  if (cfg.hwt_min_words < 1 || cfg.hwt_min_words > cfg.hwt_max_words ||
      cfg.mgt_min_words < 1 || cfg.mgt_min_words > cfg.mgt_max_words) {
    throw Error("synthetic: invalid length range");
  }
  if (cfg.pairs < 1 || cfg.corpus_lines < 1 || cfg.vocab_size < 2 || cfg.successors < 1) {
    throw Error("synthetic: sizes must be positive");
  }
  SplitMix64 rng(cfg.seed);
  const auto words = pseudo_words(cfg.vocab_size, rng);
  const Teacher teacher1(cfg.vocab_size, cfg.successors, cfg.noise, rng);
  const Teacher teacher2(teacher1, cfg.overlap, rng);

  SyntheticBenchmark b;
  for (std::size_t i = 0; i < cfg.corpus_lines; ++i) {
    b.corpus_a.push_back(render(
        teacher1.emit(draw_length(cfg.hwt_min_words, cfg.hwt_max_words, rng), rng), words));
  }
  std::vector<std::string> corpus2;
  for (std::size_t i = 0; i < cfg.corpus_lines + cfg.pairs; ++i) {
    corpus2.push_back(render(
        teacher2.emit(draw_length(cfg.hwt_min_words, cfg.hwt_max_words, rng), rng), words));
  }
  b.corpus_b.assign(corpus2.begin(),
                    corpus2.begin() + static_cast<std::ptrdiff_t>(cfg.corpus_lines));
  b.model_a = train_ngram(b.corpus_a, cfg.order, cfg.alpha);
  b.model_b = train_ngram(b.corpus_b, cfg.order, cfg.alpha);

  b.dataset.name = "synthetic";
  for (std::size_t i = 0; i < cfg.pairs; ++i) {
    const std::string group = fmt::format("s{:05d}", i);
    const std::string mgt = generate_with_length(
        b.model_a, draw_length(cfg.mgt_min_words, cfg.mgt_max_words, rng), rng);
    b.dataset.records.push_back(
        {group + ":HWT", corpus2[cfg.corpus_lines + i], Label::HWT, "synthetic", group});
    b.dataset.records.push_back({group + ":MGT", mgt, Label::MGT, "synthetic", group});
  }
  return b;
}

std::string to_paired_jsonl(const Dataset& ds) {
  std::map<std::string, std::pair<const TextRecord*, const TextRecord*>> groups;
  std::vector<std::string> order;
  for (const auto& r : ds.records) {
    auto [it, inserted] = groups.try_emplace(r.group_id);
    if (inserted) order.push_back(r.group_id);
    (r.label == Label::HWT ? it->second.first : it->second.second) = &r;
  }
  std::string out;
  for (const auto& g : order) {
    const auto& [hwt, mgt] = groups.at(g);
    if (!hwt || !mgt) throw Error(fmt::format("group '{}' is not a complete pair", g));
    nlohmann::ordered_json j;
    j["id"] = g;
    j["human_answer"] = hwt->text;
    j["machine_answer"] = mgt->text;
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace mgt
