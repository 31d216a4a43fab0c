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
#include <optional>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "mgtkit/backend.hpp"
#include "mgtkit/corpus.hpp"
#include "mgtkit/detectors.hpp"
#include "mgtkit/fiteval.hpp"

namespace mgt {

struct BenchmarkOptions {
  DetectorOptions detector;
  LogisticHyperparams hyperparams;
  double threshold = 0.5;
  std::size_t threads = 1;
};

/// 1 for MGT, 0 for HWT, in record order.
LabelVector labels_of(const Dataset& ds);

/// One feature row per record, computed in parallel and gathered by index.
/// A failing record aborts with an Error naming its id.
Eigen::MatrixXd extract_features(const Dataset& ds, DetectorKind kind,
                                 const Backend& backend, const BenchmarkOptions& opts);

/// A detector kind plus its fitted classifier. External classifiers carry no
/// model: their probability is used as is.
struct FittedDetector {
  DetectorKind kind = DetectorKind::LogLikelihood;
  std::optional<LogisticModeld> model;
  DetectorOptions options;

  Eigen::VectorXd p_mgt(const Eigen::MatrixXd& features) const;
  double p_mgt(const Backend& backend, std::string_view text) const;
};

FittedDetector fit_detector(const Eigen::MatrixXd& features, const LabelVector& labels,
                            DetectorKind kind, const BenchmarkOptions& opts);
FittedDetector fit_detector(const Dataset& train, DetectorKind kind,
                            const Backend& backend, const BenchmarkOptions& opts);

/// Scores both splits, fits on train, evaluates on test. wall_time_seconds
/// covers the scoring phase only.
EvalReport run_benchmark(const Dataset& train, const Dataset& test, DetectorKind kind,
                         const Backend& backend, const BenchmarkOptions& opts = {});

/// (original, filtered) reports, filtering both splits to at most
/// `max_words` words first. Throws Error when filtering leaves a split
/// without both labels.
std::pair<EvalReport, EvalReport> ablate_length(const Dataset& train,
                                                const Dataset& test,
                                                DetectorKind kind,
                                                const Backend& backend,
                                                const BenchmarkOptions& opts = {},
                                                std::size_t max_words = 25);

}  // namespace mgt
