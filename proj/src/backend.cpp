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

#include "mgtkit/backend.hpp"

#include <fmt/format.h>

#include "mgtkit/error.hpp"

namespace mgt {

std::string_view to_string(Capability c) {
  switch (c) {
    case Capability::Score: return "score";
    case Capability::Classify: return "classify";
    case Capability::Perturb: return "perturb";
  }
  return "unknown";
}

std::vector<std::string> BackendHandle::capability_names() const {
  std::vector<std::string> out;
  for (auto c : {Capability::Score, Capability::Classify, Capability::Perturb}) {
    if (has(c)) out.emplace_back(to_string(c));
  }
  return out;
}

double Backend::classify(std::string_view) const {
  throw Error(fmt::format("backend '{}' has no classify capability",
                          handle().descriptor));
}

std::vector<std::string> Backend::perturb(std::string_view, int, double,
                                          std::uint64_t) const {
  throw Error(fmt::format("backend '{}' has no perturb capability",
                          handle().descriptor));
}

NgramBackend::NgramBackend(NgramModel model) : model_(std::move(model)) {
  handle_.kind = BackendKind::BuiltinNgram;
  handle_.descriptor = fmt::format("ngram(order={},alpha={})", model_.order(),
                                   model_.alpha());
  handle_.capabilities = static_cast<unsigned>(Capability::Score);
}

TokenScoring NgramBackend::score(std::string_view text) const {
  return score_with_model(model_, text);
}

TokenScoring score_text(const Backend& backend, std::string_view text) {
  const auto& h = backend.handle();
  if (!h.has(Capability::Score)) {
    throw Error(fmt::format("backend '{}' has no score capability", h.descriptor));
  }
  TokenScoring s = backend.score(text);
  if (h.kind == BackendKind::BuiltinNgram) {
    validate(s, backend.ngram_model()->vocab().size());
  } else {
    validate(s);
  }
  return s;
}

}  // namespace mgt
