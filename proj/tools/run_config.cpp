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

#include "run_config.hpp"

#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "mgtkit/bridge.hpp"
#include "mgtkit/error.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/text.hpp"

namespace mgt::cli {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["datasets"] = datasets;
  j["detectors"] = detectors;
  j["backends"] = backends;
  j["seed"] = seed;
  j["threads"] = threads;
  j["train_fraction"] = {train_numerator, train_denominator};
  j["min_words"] = min_words;
  j["max_words"] = max_words;
  j["metric"] = metric;
  j["threshold"] = threshold;
  j["detectgpt"] = {{"n_perturbations", detectgpt.n_perturbations},
                    {"mask_ratio", detectgpt.mask_ratio},
                    {"epsilon_std", detectgpt.epsilon_std},
                    {"normalize", detectgpt.normalize},
                    {"use_total", detectgpt.use_total}};
  j["gltr_thresholds"] = gltr_thresholds;
  j["logistic"] = {{"learning_rate", hyperparams.learning_rate},
                   {"epochs", hyperparams.epochs},
                   {"l2", hyperparams.l2}};
  j["attack"] = {{"max_perturb_fraction", attack.max_perturb_fraction},
                 {"candidates_per_position", attack.candidates_per_position},
                 {"max_queries", attack.max_queries},
                 {"synonyms", synonyms},
                 {"candidate_corpus", candidate_corpus},
                 {"examples", examples}};
  j["bridge_timeout_seconds"] = bridge_timeout_seconds;
  j["out"] = out;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  auto get = [&](const json& obj, const char* key, auto& field) {
    if (auto it = obj.find(key); it != obj.end()) {
      it->get_to(field);
    }
  };
  try {
    get(j, "command", c.command);
    get(j, "datasets", c.datasets);
    get(j, "detectors", c.detectors);
    get(j, "backends", c.backends);
    get(j, "seed", c.seed);
    get(j, "threads", c.threads);
    if (auto it = j.find("train_fraction"); it != j.end()) {
      if (!it->is_array() || it->size() != 2) {
        throw Error("train_fraction must be [numerator, denominator]");
      }
      c.train_numerator = (*it)[0].get<std::uint64_t>();
      c.train_denominator = (*it)[1].get<std::uint64_t>();
    }
    get(j, "min_words", c.min_words);
    get(j, "max_words", c.max_words);
    get(j, "metric", c.metric);
    get(j, "threshold", c.threshold);
    if (auto it = j.find("detectgpt"); it != j.end()) {
      get(*it, "n_perturbations", c.detectgpt.n_perturbations);
      get(*it, "mask_ratio", c.detectgpt.mask_ratio);
      get(*it, "epsilon_std", c.detectgpt.epsilon_std);
      get(*it, "normalize", c.detectgpt.normalize);
      get(*it, "use_total", c.detectgpt.use_total);
    }
    get(j, "gltr_thresholds", c.gltr_thresholds);
    if (auto it = j.find("logistic"); it != j.end()) {
      get(*it, "learning_rate", c.hyperparams.learning_rate);
      get(*it, "epochs", c.hyperparams.epochs);
      get(*it, "l2", c.hyperparams.l2);
    }
    if (auto it = j.find("attack"); it != j.end()) {
      get(*it, "max_perturb_fraction", c.attack.max_perturb_fraction);
      get(*it, "candidates_per_position", c.attack.candidates_per_position);
      get(*it, "max_queries", c.attack.max_queries);
      get(*it, "synonyms", c.synonyms);
      get(*it, "candidate_corpus", c.candidate_corpus);
      get(*it, "examples", c.examples);
    }
    get(j, "bridge_timeout_seconds", c.bridge_timeout_seconds);
    get(j, "out", c.out);
  } catch (const json::exception& e) {
    throw Error(fmt::format("invalid run config: {}", e.what()));
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config '{}'", path.string()));
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

SplitSpec RunConfig::split_spec() const {
  return {train_numerator, train_denominator, split_seed(*this)};
}

BenchmarkOptions RunConfig::benchmark_options() const {
  BenchmarkOptions o;
  o.detector.detectgpt = detectgpt;
  o.detector.detectgpt.seed = derive_seed(seed, "detectgpt");
  o.detector.gltr.thresholds = gltr_thresholds;
  o.hyperparams = hyperparams;
  o.threshold = threshold;
  o.threads = threads;
  return o;
}

std::uint64_t split_seed(const RunConfig& cfg) { return derive_seed(cfg.seed, "split"); }

BackendSpec parse_backend_spec(const std::string& spec) {
  BackendSpec b;
  b.label = spec;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "builtin") {
    b.kind = BackendSpec::Kind::Builtin;
    std::size_t start = 0;
    while (start < rest.size()) {
      auto end = rest.find(',', start);
      if (end == std::string::npos) end = rest.size();
      const std::string item = rest.substr(start, end - start);
      start = end + 1;
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(fmt::format("bad backend option '{}'", item));
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      try {
        if (key == "order") {
          b.order = std::stoi(value);
        } else if (key == "alpha") {
          b.alpha = std::stod(value);
        } else if (key == "corpus") {
          b.corpus = value;
        } else {
          throw Error(fmt::format("unknown builtin option '{}'", key));
        }
      } catch (const std::logic_error&) {
        throw Error(fmt::format("bad value for '{}': '{}'", key, value));
      }
    }
  } else if (kind == "bridge") {
    b.kind = BackendSpec::Kind::Bridge;
    b.command = rest;
    if (b.command.empty()) {
      const char* env = std::getenv("MGTBENCH_BRIDGE");
      if (!env || !*env) {
        throw Error("bridge backend needs a command or MGTBENCH_BRIDGE");
      }
      b.command = env;
    }
  } else {
    throw Error(fmt::format("unknown backend '{}'", spec));
  }
  return b;
}

std::unique_ptr<Backend> make_backend(const BackendSpec& spec, const Dataset& fallback,
                                      double timeout_seconds) {
  if (spec.kind == BackendSpec::Kind::Bridge) {
    return launch_bridge(spec.command,
                         std::chrono::milliseconds(
                             static_cast<std::int64_t>(timeout_seconds * 1000.0)));
  }
  std::vector<std::string> texts;
  if (!spec.corpus.empty()) {
    texts = read_lines(spec.corpus);
  } else {
    for (const auto& r : fallback.records) texts.push_back(r.text);
  }
  return std::make_unique<NgramBackend>(train_ngram(texts, spec.order, spec.alpha));
}

PreparedBackend prepare_backend(const BackendSpec& spec, const Dataset& train,
                                const RunConfig& cfg) {
  if (spec.kind == BackendSpec::Kind::Builtin && spec.corpus.empty()) {
    auto [lm_part, fit_part] = split(train, {1, 2, derive_seed(cfg.seed, "lm")});
    return {make_backend(spec, lm_part, cfg.bridge_timeout_seconds), std::move(fit_part)};
  }
  return {make_backend(spec, train, cfg.bridge_timeout_seconds), train};
}

Dataset load_any_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  while (std::getline(in, line)) {
    if (count_words(line) == 0) continue;
    try {
      if (json::parse(line).contains("human_answer")) return load_paired(path);
    } catch (const json::parse_error&) {
    }
    break;
  }
  return load_normalized(path);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (count_words(line) > 0) lines.push_back(line);
  }
  return lines;
}

}  // namespace mgt::cli
