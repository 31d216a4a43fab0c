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

#include "mgtkit/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "mgtkit/error.hpp"
#include "mgtkit/text.hpp"

namespace mgt {

Vocab Vocab::from_words(std::span<const std::string> words) {
  std::set<std::string> unique{std::string(kEos), std::string(kUnk)};
  for (const auto& w : words) {
    if (w != kBos && w != kEos && w != kUnk) unique.insert(w);
  }
  Vocab v;
  v.tokens_.assign(unique.begin(), unique.end());
  for (TokenId i = 0; i < v.tokens_.size(); ++i) v.index_.emplace(v.tokens_[i], i);
  v.eos_ = v.index_.at(std::string(kEos));
  v.unk_ = v.index_.at(std::string(kUnk));
  return v;
}

TokenId Vocab::id(std::string_view word) const {
  if (word == kEos || word == kBos) return unk_;
  auto it = index_.find(std::string(word));
  return it == index_.end() ? unk_ : it->second;
}

const std::string& Vocab::token(TokenId id) const {
  static const std::string bos_token(kBos);
  if (id == bos()) return bos_token;
  return tokens_.at(id);
}

std::size_t NgramModel::ContextHash::operator()(const Context& c) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (TokenId t : c) {
    h ^= t;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

NgramModel::Context NgramModel::context_of(std::span<const TokenId> history) const {
  const auto width = static_cast<std::size_t>(order_ - 1);
  Context ctx(width, vocab_.bos());
  const std::size_t take = std::min(width, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            ctx.end() - static_cast<std::ptrdiff_t>(take));
  return ctx;
}

NgramModel::Context NgramModel::context_of_words(
    std::span<const std::string> history) const {
  std::vector<TokenId> ids;
  ids.reserve(history.size());
  for (const auto& w : history) ids.push_back(w == kBos ? vocab_.bos() : vocab_.id(w));
  return context_of(ids);
}

const NgramModel::Row* NgramModel::find(const Context& ctx) const {
  auto it = rows_.find(ctx);
  return it == rows_.end() ? nullptr : &it->second;
}

std::uint64_t NgramModel::count(const Context& ctx, TokenId w) const {
  const Row* row = find(ctx);
  if (!row) return 0;
  auto it = std::lower_bound(
      row->successors.begin(), row->successors.end(), w,
      [](const auto& entry, TokenId id) { return entry.first < id; });
  return (it != row->successors.end() && it->first == w) ? it->second : 0;
}

std::uint64_t NgramModel::total(const Context& ctx) const {
  const Row* row = find(ctx);
  return row ? row->total : 0;
}

double NgramModel::probability(const Context& ctx, TokenId w) const {
  const double m = static_cast<double>(vocab_.size());
  return (static_cast<double>(count(ctx, w)) + alpha_) /
         (static_cast<double>(total(ctx)) + alpha_ * m);
}

Eigen::VectorXd NgramModel::distribution(const Context& ctx) const {
  const auto m = static_cast<Eigen::Index>(vocab_.size());
  const Row* row = find(ctx);
  const double denom =
      static_cast<double>(row ? row->total : 0) + alpha_ * static_cast<double>(m);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(m, alpha_ / denom);
  if (row) {
    for (const auto& [id, c] : row->successors) {
      p[id] = (static_cast<double>(c) + alpha_) / denom;
    }
  }
  return p;
}

std::int64_t NgramModel::rank(const Context& ctx, TokenId w) const {
  // Probabilities are monotone in counts, so ranking compares integers.
  const std::uint64_t cw = count(ctx, w);
  const Row* row = find(ctx);
  std::int64_t better = 0;
  std::int64_t nonzero_before = 0;
  if (row) {
    for (const auto& [id, c] : row->successors) {
      if (c > cw || (c == cw && id < w)) ++better;
      if (id < w) ++nonzero_before;
    }
  }
  if (cw == 0) {
    // Zero-count tokens with a smaller id tie with w and precede it.
    better += static_cast<std::int64_t>(w) - nonzero_before;
  }
  return better + 1;
}

double NgramModel::entropy(const Context& ctx) const {
  const double m = static_cast<double>(vocab_.size());
  const Row* row = find(ctx);
  const double denom = static_cast<double>(row ? row->total : 0) + alpha_ * m;
  const double p0 = alpha_ / denom;
  double zeros = m;
  double h = 0.0;
  if (row) {
    for (const auto& entry : row->successors) {
      const double p = (static_cast<double>(entry.second) + alpha_) / denom;
      h -= p * std::log(p);
    }
    zeros -= static_cast<double>(row->successors.size());
  }
  h -= zeros * p0 * std::log(p0);
  return std::max(h, 0.0);
}

std::vector<TokenId> NgramModel::top_tokens(const Context& ctx,
                                            std::size_t limit) const {
  std::vector<TokenId> out;
  const Row* row = find(ctx);
  std::vector<std::pair<TokenId, std::uint64_t>> seen;
  if (row) seen = row->successors;
  std::stable_sort(seen.begin(), seen.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  for (const auto& entry : seen) {
    if (out.size() >= limit) return out;
    out.push_back(entry.first);
  }
  // Remaining tokens all have count zero and follow in id order.
  std::size_t k = 0;
  for (TokenId id = 0; id < vocab_.size() && out.size() < limit; ++id) {
    while (row && k < row->successors.size() && row->successors[k].first < id) ++k;
    if (row && k < row->successors.size() && row->successors[k].first == id) continue;
    out.push_back(id);
  }
  return out;
}

NgramModel NgramModel::with_increment(const Context& ctx, TokenId w) const {
  NgramModel copy = *this;
  Row& row = copy.rows_[ctx];
  auto it = std::lower_bound(
      row.successors.begin(), row.successors.end(), w,
      [](const auto& entry, TokenId id) { return entry.first < id; });
  if (it != row.successors.end() && it->first == w) {
    ++it->second;
  } else {
    row.successors.insert(it, {w, 1});
  }
  ++row.total;
  return copy;
}

NgramModel train_ngram(std::span<const std::string> texts, int order, double alpha) {
  if (order < 1) throw Error("train_ngram: order must be >= 1");
  if (!(alpha > 0.0)) throw Error("train_ngram: alpha must be positive");
  std::vector<std::vector<std::string>> tokenized;
  std::vector<std::string> all_words;
  for (const auto& t : texts) {
    auto words = split_words(t);
    if (words.empty()) continue;
    all_words.insert(all_words.end(), words.begin(), words.end());
    tokenized.push_back(std::move(words));
  }
  if (tokenized.empty()) throw Error("train_ngram: empty corpus");

  NgramModel model;
  model.order_ = order;
  model.alpha_ = alpha;
  model.vocab_ = Vocab::from_words(all_words);

  std::unordered_map<NgramModel::Context, std::map<TokenId, std::uint64_t>,
                     NgramModel::ContextHash>
      counts;
  for (const auto& words : tokenized) {
    std::vector<TokenId> ids;
    ids.reserve(words.size() + 1);
    for (const auto& w : words) ids.push_back(model.vocab_.id(w));
    ids.push_back(model.vocab_.eos());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto ctx = model.context_of(std::span(ids).first(i));
      ++counts[ctx][ids[i]];
    }
  }
  for (auto& [ctx, successors] : counts) {
    NgramModel::Row row;
    for (const auto& [id, c] : successors) {
      row.successors.emplace_back(id, c);
      row.total += c;
    }
    model.rows_.emplace(ctx, std::move(row));
  }
  return model;
}

Eigen::VectorXd next_distribution(const NgramModel& model,
                                  std::span<const std::string> context) {
  return model.distribution(model.context_of_words(context));
}

TokenScoring score_with_model(const NgramModel& model, std::string_view text) {
  const auto words = split_words(text);
  if (words.empty()) throw Error("score_text: empty text");
  const Vocab& vocab = model.vocab();
  std::vector<TokenId> ids;
  ids.reserve(words.size() + 1);
  for (const auto& w : words) ids.push_back(vocab.id(w));
  ids.push_back(vocab.eos());

  TokenScoring s;
  s.tokens = words;
  s.tokens.emplace_back(kEos);
  s.logprob.reserve(ids.size());
  s.rank.reserve(ids.size());
  s.entropy.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto ctx = model.context_of(std::span(ids).first(i));
    s.logprob.push_back(std::log(model.probability(ctx, ids[i])));
    s.rank.push_back(model.rank(ctx, ids[i]));
    s.entropy.push_back(model.entropy(ctx));
  }
  return s;
}

TokenId sample_index(const Eigen::VectorXd& probs, double u,
                     std::span<const TokenId> excluded) {
  auto is_excluded = [&](Eigen::Index i) {
    return std::find(excluded.begin(), excluded.end(), static_cast<TokenId>(i)) !=
           excluded.end();
  };
  double mass = 1.0;
  for (TokenId e : excluded) mass -= probs[e];
  const double target = u * mass;
  double cum = 0.0;
  Eigen::Index last = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (is_excluded(i)) continue;
    cum += probs[i];
    last = i;
    if (target < cum) return static_cast<TokenId>(i);
  }
  if (last < 0) throw Error("sample_index: every token excluded");
  return static_cast<TokenId>(last);
}

TokenId sample_next(const NgramModel& model, std::span<const std::string> context,
                    SplitMix64& rng) {
  return sample_index(next_distribution(model, context), rng.uniform());
}

std::string generate_text(const NgramModel& model, std::size_t max_len,
                          SplitMix64& rng) {
  if (max_len < 1) throw Error("generate_text: max_len must be >= 1");
  constexpr int kRetries = 10;
  const Vocab& vocab = model.vocab();
  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    std::vector<TokenId> ids;
    std::vector<std::string> words;
    while (words.size() < max_len) {
      const TokenId next =
          sample_index(model.distribution(model.context_of(ids)), rng.uniform());
      if (next == vocab.eos()) break;
      ids.push_back(next);
      words.push_back(vocab.token(next));
    }
    if (!words.empty()) return join_words(words);
  }
  throw Error(fmt::format("generate_text: model produced empty text {} times",
                          kRetries + 1));
}

void validate(const TokenScoring& s, std::optional<std::size_t> vocab_size) {
  const std::size_t n = s.logprob.size();
  if (n == 0) throw Error("token scoring is empty");
  if (s.tokens.size() != n || s.rank.size() != n || s.entropy.size() != n) {
    throw Error(fmt::format(
        "token scoring arrays misaligned (tokens={}, logprob={}, rank={}, entropy={})",
        s.tokens.size(), n, s.rank.size(), s.entropy.size()));
  }
  const double max_entropy =
      vocab_size ? std::log(static_cast<double>(*vocab_size)) + 1e-9
                 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s.logprob[i]) || s.logprob[i] > 1e-12) {
      throw Error(fmt::format("position {}: invalid logprob {}", i, s.logprob[i]));
    }
    if (s.rank[i] < 1 ||
        (vocab_size && s.rank[i] > static_cast<std::int64_t>(*vocab_size))) {
      throw Error(fmt::format("position {}: invalid rank {}", i, s.rank[i]));
    }
    if (!std::isfinite(s.entropy[i]) || s.entropy[i] < 0.0 ||
        s.entropy[i] > max_entropy) {
      throw Error(fmt::format("position {}: invalid entropy {}", i, s.entropy[i]));
    }
  }
}

}  // namespace mgt
