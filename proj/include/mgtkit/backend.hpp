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

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mgtkit/ngram.hpp"
#include "mgtkit/scoring.hpp"

namespace mgt {

enum class BackendKind { BuiltinNgram, External };

enum class Capability : unsigned { Score = 1u, Classify = 2u, Perturb = 4u };

std::string_view to_string(Capability c);

struct BackendHandle {
  BackendKind kind = BackendKind::BuiltinNgram;
  std::string descriptor;
  unsigned capabilities = 0;

  bool has(Capability c) const { return (capabilities & static_cast<unsigned>(c)) != 0; }
  std::vector<std::string> capability_names() const;
};

/// A scoring backend. Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual const BackendHandle& handle() const = 0;

  virtual TokenScoring score(std::string_view text) const = 0;
  /// Probability that `text` is machine-generated.
  virtual double classify(std::string_view text) const;
  /// `n` perturbed variants of `text`.
  virtual std::vector<std::string> perturb(std::string_view text, int n,
                                           double ratio, std::uint64_t seed) const;

  /// The in-process n-gram model, when this backend has one.
  virtual const NgramModel* ngram_model() const { return nullptr; }
};

/// Built-in deterministic backend over an n-gram model.
class NgramBackend final : public Backend {
 public:
  explicit NgramBackend(NgramModel model);

  const BackendHandle& handle() const override { return handle_; }
  TokenScoring score(std::string_view text) const override;
  const NgramModel* ngram_model() const override { return &model_; }
  const NgramModel& model() const { return model_; }

 private:
  NgramModel model_;
  BackendHandle handle_;
};

/// Checks the capability, scores, and validates the result.
TokenScoring score_text(const Backend& backend, std::string_view text);

}  // namespace mgt
