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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "mgtkit/rng.hpp"
#include "mgtkit/scoring.hpp"

namespace mgt {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

using TokenId = std::uint32_t;

/// Word vocabulary. Predictable tokens (everything except BOS) are indexed
/// 0..M-1 in ascending code-point order of their UTF-8 spelling, which is
/// also byte order. BOS only appears in contexts and has id M.
class Vocab {
 public:
  Vocab() = default;

  /// Builds a vocabulary from arbitrary words; specials are added and any
  /// literal special spelling among `words` is ignored.
  static Vocab from_words(std::span<const std::string> words);

  /// Number of predictable tokens (M).
  std::size_t size() const { return tokens_.size(); }

  /// Maps a surface word to its id. Unknown words and the literal spellings
  /// of BOS and EOS map to UNK.
  TokenId id(std::string_view word) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& predictable() const { return tokens_; }

  TokenId bos() const { return static_cast<TokenId>(tokens_.size()); }
  TokenId eos() const { return eos_; }
  TokenId unk() const { return unk_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId eos_ = 0;
  TokenId unk_ = 0;
};

/// Word-level n-gram model with add-alpha smoothing:
///
///   P(w | c) = (count(c, w) + alpha) / (count(c, .) + alpha * M)
///
/// where c is the last n-1 tokens of the context (left-padded with BOS) and
/// M the number of predictable tokens. Immutable after training.
class NgramModel {
 public:
  using Context = std::vector<TokenId>;

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  const Vocab& vocab() const { return vocab_; }

  /// Last order-1 ids of `history`, left-padded with BOS.
  Context context_of(std::span<const TokenId> history) const;
  /// Same, from surface words (out-of-vocabulary words become UNK).
  Context context_of_words(std::span<const std::string> history) const;

  std::uint64_t count(const Context& ctx, TokenId w) const;
  std::uint64_t total(const Context& ctx) const;

  double probability(const Context& ctx, TokenId w) const;
  /// Full predictive distribution over the M predictable tokens.
  Eigen::VectorXd distribution(const Context& ctx) const;

  /// Rank of `w` (1-based) in the distribution sorted by descending
  /// probability, ties broken by ascending token id.
  std::int64_t rank(const Context& ctx, TokenId w) const;
  /// Natural-log entropy of the predictive distribution.
  double entropy(const Context& ctx) const;

  /// Ids sorted by descending probability (ties by ascending id), truncated
  /// to the first `limit`.
  std::vector<TokenId> top_tokens(const Context& ctx, std::size_t limit) const;

  /// Copy of this model with count(ctx, w) incremented by one.
  NgramModel with_increment(const Context& ctx, TokenId w) const;

  friend NgramModel train_ngram(std::span<const std::string> texts, int order,
                                double alpha);

 private:
  struct Row {
    std::uint64_t total = 0;
    std::vector<std::pair<TokenId, std::uint64_t>> successors;  // sorted by id
  };
  struct ContextHash {
    std::size_t operator()(const Context& c) const noexcept;
  };

  const Row* find(const Context& ctx) const;

  int order_ = 1;
  double alpha_ = 1.0;
  Vocab vocab_;
  std::unordered_map<Context, Row, ContextHash> rows_;
};

/// Trains on whitespace-tokenized texts, each padded with order-1 BOS and
/// terminated by EOS. Throws Error on an empty corpus, order < 1 or
/// alpha <= 0.
NgramModel train_ngram(std::span<const std::string> texts, int order = 3,
                       double alpha = 1.0);

/// Predictive distribution after `context` words (surface spellings; the
/// literal "<s>" is accepted as BOS padding).
Eigen::VectorXd next_distribution(const NgramModel& model,
                                  std::span<const std::string> context);

/// Scores every word of `text` plus the final EOS. Throws Error on text with
/// no words.
TokenScoring score_with_model(const NgramModel& model, std::string_view text);

/// Inverse-CDF draw: first index whose cumulative probability exceeds u.
/// Indices in `excluded` are skipped and the remaining mass renormalized.
TokenId sample_index(const Eigen::VectorXd& probs, double u,
                     std::span<const TokenId> excluded = {});

/// Samples the next token given surface context words.
TokenId sample_next(const NgramModel& model, std::span<const std::string> context,
                    SplitMix64& rng);

/// Samples tokens until EOS or `max_len` words. A draw of zero words is
/// retried up to 10 times before throwing Error.
std::string generate_text(const NgramModel& model, std::size_t max_len,
                          SplitMix64& rng);

}  // namespace mgt
