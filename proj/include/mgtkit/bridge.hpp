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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mgtkit/backend.hpp"

namespace mgt {

/// A bidirectional line-oriented channel. Lines exclude the trailing '\n'.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(std::string_view line) = 0;
  /// Throws BackendError on timeout, end of stream, or a dead peer.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

/// Child process started with `/bin/sh -c <command>`, spoken to over its
/// standard input and output. Standard error is inherited.
class SubprocessChannel final : public LineChannel {
 public:
  explicit SubprocessChannel(const std::string& command);
  ~SubprocessChannel() override;
  SubprocessChannel(const SubprocessChannel&) = delete;
  SubprocessChannel& operator=(const SubprocessChannel&) = delete;

  void write_line(std::string_view line) override;
  std::string read_line(std::chrono::milliseconds timeout) override;

 private:
  std::string exit_diagnostic();

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool reaped_ = false;
  int status_ = 0;
};

// Request encoders. Objects are compact JSON with keys in the order shown.
//   {"id":1,"op":"hello"}
//   {"id":2,"op":"score","text":"..."}
//   {"id":3,"op":"classify","text":"..."}
//   {"id":4,"op":"perturb","text":"...","n":10,"ratio":0.15,"seed":7}
std::string encode_hello(std::uint64_t id);
std::string encode_score(std::uint64_t id, std::string_view text);
std::string encode_classify(std::uint64_t id, std::string_view text);
std::string encode_perturb(std::uint64_t id, std::string_view text, int n,
                           double ratio, std::uint64_t seed);

struct HelloInfo {
  std::string name;
  std::vector<std::string> capabilities;
};

// Response decoders; each validates shape and throws BackendError carrying an
// excerpt of the raw payload on failure.
HelloInfo decode_hello(const nlohmann::json& response);
TokenScoring decode_score(const nlohmann::json& response);
double decode_classify(const nlohmann::json& response);
std::vector<std::string> decode_perturb(const nlohmann::json& response);

/// Client for the line-delimited JSON bridge protocol. Ids start at 1 and
/// increase strictly per connection. Calls from several threads are
/// serialized; responses are correlated by id so a bridge may answer a
/// pipelined batch out of order.
class BridgeClient {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{120'000};

  explicit BridgeClient(std::unique_ptr<LineChannel> channel,
                        std::chrono::milliseconds timeout = kDefaultTimeout);

  HelloInfo hello();
  TokenScoring score(std::string_view text);
  double classify(std::string_view text);
  std::vector<std::string> perturb(std::string_view text, int n, double ratio,
                                   std::uint64_t seed);

  /// Sends every request before reading any response.
  std::vector<double> classify_batch(std::span<const std::string> texts);
  std::vector<TokenScoring> score_batch(std::span<const std::string> texts);

 private:
  using Encoder = std::string (*)(std::uint64_t, std::string_view);
  nlohmann::json call(const std::string& request, std::uint64_t id);
  std::vector<nlohmann::json> call_batch(std::span<const std::string> texts,
                                         Encoder encode);
  nlohmann::json await(std::uint64_t id);
  std::uint64_t take_id() { return next_id_++; }

  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  std::uint64_t next_id_ = 1;
  std::map<std::uint64_t, nlohmann::json> stash_;
};

/// Backend served by a bridge. The handshake runs in the constructor.
class ExternalBackend final : public Backend {
 public:
  explicit ExternalBackend(std::unique_ptr<BridgeClient> client);

  const BackendHandle& handle() const override { return handle_; }
  TokenScoring score(std::string_view text) const override;
  double classify(std::string_view text) const override;
  std::vector<std::string> perturb(std::string_view text, int n, double ratio,
                                   std::uint64_t seed) const override;

  BridgeClient& client() const { return *client_; }

 private:
  std::unique_ptr<BridgeClient> client_;
  BackendHandle handle_;
};

/// Spawns `command` and performs the handshake.
std::unique_ptr<ExternalBackend> launch_bridge(
    const std::string& command,
    std::chrono::milliseconds timeout = BridgeClient::kDefaultTimeout);

}  // namespace mgt
