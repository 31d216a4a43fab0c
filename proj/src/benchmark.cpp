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

#include "mgtkit/benchmark.hpp"

#include <chrono>

#include <fmt/format.h>

#include "mgtkit/error.hpp"
#include "mgtkit/parallel.hpp"

namespace mgt {
namespace {

void require_both_labels(const Dataset& ds, std::string_view which) {
  if (ds.count(Label::MGT) == 0 || ds.count(Label::HWT) == 0) {
    throw Error(fmt::format("{} split is degenerate: it needs both HWT and MGT records",
                            which));
  }
}

}  // namespace

LabelVector labels_of(const Dataset& ds) {
  LabelVector y(static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = ds.records[i].label == Label::MGT ? 1 : 0;
  }
  return y;
}

Eigen::MatrixXd extract_features(const Dataset& ds, DetectorKind kind,
                                 const Backend& backend, const BenchmarkOptions& opts) {
  const Eigen::Index dim = feature_dimension(kind, opts.detector);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(ds.size()), dim);
  parallel_for(ds.size(), opts.threads, [&](std::size_t i) {
    const auto& record = ds.records[i];
    try {
      x.row(static_cast<Eigen::Index>(i)) =
          detector_features(kind, backend, record.text, opts.detector).transpose();
    } catch (const std::exception& e) {
      throw Error(fmt::format("record '{}': {}", record.id, e.what()));
    }
  });
  return x;
}

Eigen::VectorXd FittedDetector::p_mgt(const Eigen::MatrixXd& features) const {
  if (!model) return features.col(0);
  return predict_proba(*model, features);
}

double FittedDetector::p_mgt(const Backend& backend, std::string_view text) const {
  const Eigen::VectorXd row = detector_features(kind, backend, text, options);
  return p_mgt(Eigen::MatrixXd(row.transpose()))[0];
}

FittedDetector fit_detector(const Eigen::MatrixXd& features, const LabelVector& labels,
                            DetectorKind kind, const BenchmarkOptions& opts) {
  FittedDetector d;
  d.kind = kind;
  d.options = opts.detector;
  if (kind != DetectorKind::ExternalClassifier) {
    d.model = fit(features, labels, opts.hyperparams);
  }
  return d;
}

FittedDetector fit_detector(const Dataset& train, DetectorKind kind,
                            const Backend& backend, const BenchmarkOptions& opts) {
  require_both_labels(train, "train");
  return fit_detector(extract_features(train, kind, backend, opts), labels_of(train),
                      kind, opts);
}

EvalReport run_benchmark(const Dataset& train, const Dataset& test, DetectorKind kind,
                         const Backend& backend, const BenchmarkOptions& opts) {
  require_both_labels(train, "train");
  require_both_labels(test, "test");
  const auto start = std::chrono::steady_clock::now();
  Eigen::MatrixXd x_train;
  if (kind != DetectorKind::ExternalClassifier) {
    x_train = extract_features(train, kind, backend, opts);
  }
  const Eigen::MatrixXd x_test = extract_features(test, kind, backend, opts);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const FittedDetector detector =
      kind == DetectorKind::ExternalClassifier
          ? FittedDetector{kind, std::nullopt, opts.detector}
          : fit_detector(x_train, labels_of(train), kind, opts);
  EvalReport report = evaluate(detector.p_mgt(x_test), labels_of(test), opts.threshold);
  report.wall_time_seconds = elapsed.count();
  return report;
}

std::pair<EvalReport, EvalReport> ablate_length(const Dataset& train,
                                                const Dataset& test,
                                                DetectorKind kind,
                                                const Backend& backend,
                                                const BenchmarkOptions& opts,
                                                std::size_t max_words) {
  EvalReport original = run_benchmark(train, test, kind, backend, opts);
  const Dataset train_f = filter_max_words(train, max_words);
  const Dataset test_f = filter_max_words(test, max_words);
  try {
    require_both_labels(train_f, "filtered train");
    require_both_labels(test_f, "filtered test");
  } catch (const Error& e) {
    throw Error(fmt::format("degenerate after filtering to <= {} words: {}", max_words,
                            e.what()));
  }
  EvalReport filtered = run_benchmark(train_f, test_f, kind, backend, opts);
  return {original, filtered};
}

}  // namespace mgt
