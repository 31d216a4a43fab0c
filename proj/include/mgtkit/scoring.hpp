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
#include <optional>
#include <string>
#include <vector>

namespace mgt {

/// Per-token statistics of one text under one scoring backend. Position i
/// scores tokens[i] given tokens[0..i). Log-probabilities and entropies use
/// the natural log; rank 1 is the most probable token.
struct TokenScoring {
  std::vector<std::string> tokens;
  std::vector<double> logprob;
  std::vector<std::int64_t> rank;
  std::vector<double> entropy;

  std::size_t size() const { return logprob.size(); }
};

/// Throws Error unless the four arrays are aligned and non-empty, every rank
/// is >= 1 (and <= vocab_size when given), logprobs are finite and <= 0, and
/// entropies are finite and >= 0 (and <= ln vocab_size when given).
void validate(const TokenScoring& s,
              std::optional<std::size_t> vocab_size = std::nullopt);

}  // namespace mgt
