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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mgtkit/backend.hpp"
#include "mgtkit/ngram.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/scoring.hpp"

namespace mgt {

enum class DetectorKind {
  LogLikelihood,
  Rank,
  LogRank,
  Entropy,
  Gltr,
  DetectGpt,
  ExternalClassifier,
};

/// Which direction of a detector's output points at machine-generated text.
enum class Orientation { HigherIsMgt, LowerIsMgt, FeatureVector };

Orientation orientation(DetectorKind kind);

/// Short names: loglik, rank, logrank, entropy, gltr, detectgpt, external.
std::string_view to_string(DetectorKind kind);
DetectorKind parse_detector(std::string_view name);
std::span<const DetectorKind> all_detectors();

struct DetectGptConfig {
  int n_perturbations = 10;
  double mask_ratio = 0.15;
  std::uint64_t seed = 0;
  double epsilon_std = 1e-6;
  bool normalize = true;
  /// Use total instead of mean log-likelihood for the original and variants.
  bool use_total = false;
};

struct GltrBuckets {
  std::vector<std::int64_t> thresholds{10, 100, 1000};

  /// Throws Error unless thresholds are positive and strictly ascending.
  void validate() const;
  Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(thresholds.size()) + 1;
  }
};

struct DetectorOptions {
  DetectGptConfig detectgpt;
  GltrBuckets gltr;
};

double score_log_likelihood(const TokenScoring& s);
double score_rank(const TokenScoring& s);
double score_log_rank(const TokenScoring& s);
double score_entropy(const TokenScoring& s);

/// Fractions of positions whose rank falls in [1, t0], (t0, t1], ...,
/// (t_last, inf).
Eigen::VectorXd gltr_features(const TokenScoring& s, const GltrBuckets& buckets = {});

/// Picks ceil(ratio * words) distinct positions uniformly and, left to right,
/// replaces each with a draw from the model given the already-perturbed left
/// context. A draw equal to the original word is redrawn once. EOS is never
/// drawn, so the word count is preserved.
std::string perturb_text(const NgramModel& model, std::string_view text,
                         double ratio, SplitMix64& rng);

/// Number of positions perturb_text changes for a text of `words` words.
std::size_t perturbation_count(std::size_t words, double ratio);

/// (original - mean(variants)) / max(std(variants), epsilon_std) when
/// normalizing, else just the numerator. std is the population deviation.
double perturbation_discrepancy(double original, std::span<const double> variants,
                                const DetectGptConfig& cfg);

/// Variant i is perturbed with seed cfg.seed + i: locally for n-gram
/// backends, through the bridge `perturb` op otherwise.
double detectgpt_score(const Backend& backend, std::string_view text,
                       const DetectGptConfig& cfg);

/// p_mgt from a classifier backend.
double external_classifier_score(const Backend& backend, std::string_view text);

Eigen::Index feature_dimension(DetectorKind kind, const DetectorOptions& opts);

/// The detector output as a feature row: one value for scalar detectors,
/// the GLTR fractions for Gltr.
Eigen::VectorXd detector_features(DetectorKind kind, const Backend& backend,
                                  std::string_view text,
                                  const DetectorOptions& opts = {});

}  // namespace mgt
