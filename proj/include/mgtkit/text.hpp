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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgt {

/// A word is a maximal run of non-whitespace code points. Whitespace is the
/// Unicode White_Space set; text is decoded as UTF-8 and invalid bytes count
/// as non-whitespace.
std::size_t count_words(std::string_view text);

std::vector<std::string> split_words(std::string_view text);

/// Joins words with a single ASCII space.
std::string join_words(std::span<const std::string> words);

}  // namespace mgt
