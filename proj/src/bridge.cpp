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

#include "mgtkit/bridge.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mgtkit/error.hpp"

namespace mgt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kExcerptBytes = 200;

std::string excerpt_raw(std::string_view raw) {
  if (raw.size() <= kExcerptBytes) return std::string(raw);
  return std::string(raw.substr(0, kExcerptBytes)) + "...";
}

std::string excerpt_json(const json& j) {
  return excerpt_raw(j.dump(-1, ' ', false, json::error_handler_t::replace));
}

[[noreturn]] void malformed(const json& response, std::string_view what) {
  throw BackendError(
      fmt::format("malformed bridge response ({}): {}", what, excerpt_json(response)));
}

void check_error(const json& response) {
  if (!response.is_object()) malformed(response, "not an object");
  if (auto it = response.find("error"); it != response.end()) {
    throw BackendError(fmt::format(
        "bridge error: {}", it->is_string() ? it->get<std::string>() : excerpt_json(*it)));
  }
}

const json& require(const json& response, const char* key) {
  auto it = response.find(key);
  if (it == response.end()) malformed(response, fmt::format("missing '{}'", key));
  return *it;
}

std::string dump(const ordered_json& j) { return j.dump(); }

}  // namespace

std::string encode_hello(std::uint64_t id) {
  ordered_json j;
  j["id"] = id;
  j["op"] = "hello";
  return dump(j);
}

std::string encode_score(std::uint64_t id, std::string_view text) {
  ordered_json j;
  j["id"] = id;
  j["op"] = "score";
  j["text"] = text;
  return dump(j);
}

std::string encode_classify(std::uint64_t id, std::string_view text) {
  ordered_json j;
  j["id"] = id;
  j["op"] = "classify";
  j["text"] = text;
  return dump(j);
}

std::string encode_perturb(std::uint64_t id, std::string_view text, int n,
                           double ratio, std::uint64_t seed) {
  ordered_json j;
  j["id"] = id;
  j["op"] = "perturb";
  j["text"] = text;
  j["n"] = n;
  j["ratio"] = ratio;
  j["seed"] = seed;
  return dump(j);
}

HelloInfo decode_hello(const json& response) {
  check_error(response);
  HelloInfo info;
  const json& name = require(response, "name");
  const json& caps = require(response, "capabilities");
  if (!name.is_string()) malformed(response, "'name' is not a string");
  if (!caps.is_array()) malformed(response, "'capabilities' is not an array");
  info.name = name.get<std::string>();
  for (const auto& c : caps) {
    if (!c.is_string()) malformed(response, "capability is not a string");
    info.capabilities.push_back(c.get<std::string>());
  }
  return info;
}

TokenScoring decode_score(const json& response) {
  check_error(response);
  const json& tokens = require(response, "tokens");
  const json& logprob = require(response, "logprob");
  const json& rank = require(response, "rank");
  const json& entropy = require(response, "entropy");
  for (const json* a : {&tokens, &logprob, &rank, &entropy}) {
    if (!a->is_array()) malformed(response, "expected array");
  }
  TokenScoring s;
  for (const auto& t : tokens) {
    if (!t.is_string()) malformed(response, "token is not a string");
    s.tokens.push_back(t.get<std::string>());
  }
  for (const auto& v : logprob) {
    if (!v.is_number()) malformed(response, "logprob is not a number");
    s.logprob.push_back(v.get<double>());
  }
  for (const auto& v : rank) {
    if (!v.is_number_integer()) malformed(response, "rank is not an integer");
    s.rank.push_back(v.get<std::int64_t>());
  }
  for (const auto& v : entropy) {
    if (!v.is_number()) malformed(response, "entropy is not a number");
    s.entropy.push_back(v.get<double>());
  }
  try {
    validate(s);
  } catch (const Error& e) {
    malformed(response, e.what());
  }
  return s;
}

double decode_classify(const json& response) {
  check_error(response);
  const json& p = require(response, "p_mgt");
  if (!p.is_number()) malformed(response, "'p_mgt' is not a number");
  const double v = p.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    throw BackendError(fmt::format("invalid probability {} in bridge response: {}",
                                   v, excerpt_json(response)));
  }
  return v;
}

std::vector<std::string> decode_perturb(const json& response) {
  check_error(response);
  const json& variants = require(response, "variants");
  if (!variants.is_array()) malformed(response, "'variants' is not an array");
  std::vector<std::string> out;
  for (const auto& v : variants) {
    if (!v.is_string()) malformed(response, "variant is not a string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

BridgeClient::BridgeClient(std::unique_ptr<LineChannel> channel,
                           std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {}

json BridgeClient::await(std::uint64_t id) {
  if (auto it = stash_.find(id); it != stash_.end()) {
    json r = std::move(it->second);
    stash_.erase(it);
    return r;
  }
  for (;;) {
    const std::string line = channel_->read_line(timeout_);
    json r;
    try {
      r = json::parse(line);
    } catch (const json::parse_error&) {
      throw BackendError(fmt::format("malformed bridge response: {}", excerpt_raw(line)));
    }
    if (!r.is_object()) {
      throw BackendError(fmt::format("malformed bridge response: {}", excerpt_raw(line)));
    }
    auto rid = r.find("id");
    if (rid == r.end() || !rid->is_number_unsigned()) {
      // An id-less error object cannot be correlated; surface it directly.
      check_error(r);
      throw BackendError(
          fmt::format("bridge response without id: {}", excerpt_raw(line)));
    }
    const auto got = rid->get<std::uint64_t>();
    if (got == id) return r;
    if (got >= next_id_ || stash_.contains(got)) {
      throw BackendError(fmt::format("unexpected response id {}: {}", got, excerpt_raw(line)));
    }
    stash_.emplace(got, std::move(r));
  }
}

json BridgeClient::call(const std::string& request, std::uint64_t id) {
  channel_->write_line(request);
  return await(id);
}

HelloInfo BridgeClient::hello() {
  std::lock_guard lock(mu_);
  const auto id = take_id();
  return decode_hello(call(encode_hello(id), id));
}

TokenScoring BridgeClient::score(std::string_view text) {
  std::lock_guard lock(mu_);
  const auto id = take_id();
  return decode_score(call(encode_score(id, text), id));
}

double BridgeClient::classify(std::string_view text) {
  std::lock_guard lock(mu_);
  const auto id = take_id();
  return decode_classify(call(encode_classify(id, text), id));
}

std::vector<std::string> BridgeClient::perturb(std::string_view text, int n,
                                               double ratio, std::uint64_t seed) {
  std::lock_guard lock(mu_);
  const auto id = take_id();
  auto variants = decode_perturb(call(encode_perturb(id, text, n, ratio, seed), id));
  if (variants.size() != static_cast<std::size_t>(n)) {
    throw BackendError(fmt::format("bridge returned {} variants, expected {}",
                                   variants.size(), n));
  }
  return variants;
}

std::vector<json> BridgeClient::call_batch(std::span<const std::string> texts,
                                           Encoder encode) {
  std::lock_guard lock(mu_);
  std::vector<std::uint64_t> ids;
  ids.reserve(texts.size());
  for (const auto& t : texts) {
    const auto id = take_id();
    channel_->write_line(encode(id, t));
    ids.push_back(id);
  }
  std::vector<json> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(await(id));
  return out;
}

std::vector<double> BridgeClient::classify_batch(std::span<const std::string> texts) {
  std::vector<double> out;
  for (const auto& r : call_batch(texts, &encode_classify)) {
    out.push_back(decode_classify(r));
  }
  return out;
}

std::vector<TokenScoring> BridgeClient::score_batch(std::span<const std::string> texts) {
  std::vector<TokenScoring> out;
  for (const auto& r : call_batch(texts, &encode_score)) out.push_back(decode_score(r));
  return out;
}

ExternalBackend::ExternalBackend(std::unique_ptr<BridgeClient> client)
    : client_(std::move(client)) {
  const HelloInfo info = client_->hello();
  handle_.kind = BackendKind::External;
  handle_.descriptor = info.name;
  for (const auto& c : info.capabilities) {
    for (auto cap : {Capability::Score, Capability::Classify, Capability::Perturb}) {
      if (c == to_string(cap)) handle_.capabilities |= static_cast<unsigned>(cap);
    }
  }
}

TokenScoring ExternalBackend::score(std::string_view text) const {
  return client_->score(text);
}

double ExternalBackend::classify(std::string_view text) const {
  if (!handle_.has(Capability::Classify)) return Backend::classify(text);
  return client_->classify(text);
}

std::vector<std::string> ExternalBackend::perturb(std::string_view text, int n,
                                                  double ratio,
                                                  std::uint64_t seed) const {
  if (!handle_.has(Capability::Perturb)) return Backend::perturb(text, n, ratio, seed);
  return client_->perturb(text, n, ratio, seed);
}

std::unique_ptr<ExternalBackend> launch_bridge(const std::string& command,
                                               std::chrono::milliseconds timeout) {
  auto channel = std::make_unique<SubprocessChannel>(command);
  return std::make_unique<ExternalBackend>(
      std::make_unique<BridgeClient>(std::move(channel), timeout));
}

}  // namespace mgt
