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

#include "mgtkit/detectors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mgtkit/error.hpp"
#include "mgtkit/text.hpp"

namespace mgt {
namespace {

constexpr std::array kAllDetectors{
    DetectorKind::LogLikelihood, DetectorKind::Rank,      DetectorKind::LogRank,
    DetectorKind::Entropy,       DetectorKind::Gltr,      DetectorKind::DetectGpt,
    DetectorKind::ExternalClassifier,
};

void require_nonempty(const TokenScoring& s) {
  if (s.size() == 0) throw Error("detector input has no scored positions");
}

template <typename T>
double mean_of(const std::vector<T>& v) {
  double sum = 0.0;
  for (const auto& x : v) sum += static_cast<double>(x);
  return sum / static_cast<double>(v.size());
}

double likelihood_term(const TokenScoring& s, bool use_total) {
  return use_total ? std::accumulate(s.logprob.begin(), s.logprob.end(), 0.0)
                   : score_log_likelihood(s);
}

}  // namespace

Orientation orientation(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::LogLikelihood:
    case DetectorKind::DetectGpt:
    case DetectorKind::ExternalClassifier:
      return Orientation::HigherIsMgt;
    case DetectorKind::Rank:
    case DetectorKind::LogRank:
    case DetectorKind::Entropy:
      return Orientation::LowerIsMgt;
    case DetectorKind::Gltr:
      return Orientation::FeatureVector;
  }
  return Orientation::FeatureVector;
}

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::LogLikelihood: return "loglik";
    case DetectorKind::Rank: return "rank";
    case DetectorKind::LogRank: return "logrank";
    case DetectorKind::Entropy: return "entropy";
    case DetectorKind::Gltr: return "gltr";
    case DetectorKind::DetectGpt: return "detectgpt";
    case DetectorKind::ExternalClassifier: return "external";
  }
  return "unknown";
}

DetectorKind parse_detector(std::string_view name) {
  for (auto kind : kAllDetectors) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(fmt::format("unknown detector '{}'", name));
}

std::span<const DetectorKind> all_detectors() { return kAllDetectors; }

void GltrBuckets::validate() const {
  if (thresholds.empty()) throw Error("GLTR thresholds must not be empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 1 || (i > 0 && thresholds[i] <= thresholds[i - 1])) {
      throw Error("GLTR thresholds must be positive and strictly ascending");
    }
  }
}

double score_log_likelihood(const TokenScoring& s) {
  require_nonempty(s);
  return mean_of(s.logprob);
}

double score_rank(const TokenScoring& s) {
  require_nonempty(s);
  return mean_of(s.rank);
}

double score_log_rank(const TokenScoring& s) {
  require_nonempty(s);
  double sum = 0.0;
  for (auto r : s.rank) {
    if (r < 1) throw Error(fmt::format("rank {} below 1", r));
    sum += std::log(static_cast<double>(r));
  }
  return sum / static_cast<double>(s.rank.size());
}

double score_entropy(const TokenScoring& s) {
  require_nonempty(s);
  return mean_of(s.entropy);
}

Eigen::VectorXd gltr_features(const TokenScoring& s, const GltrBuckets& buckets) {
  require_nonempty(s);
  buckets.validate();
  const auto& t = buckets.thresholds;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(buckets.dimension());
  for (auto r : s.rank) {
    const auto bucket = std::lower_bound(t.begin(), t.end(), r) - t.begin();
    counts[bucket] += 1.0;
  }
  return counts / static_cast<double>(s.rank.size());
}

std::size_t perturbation_count(std::size_t words, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("perturbation ratio must lie in (0, 1)");
  // The epsilon keeps products like 0.2 * 10 from rounding up past an integer.
  const auto k = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(words) - 1e-9));
  return std::clamp<std::size_t>(k, words ? 1 : 0, words);
}

std::string perturb_text(const NgramModel& model, std::string_view text,
                         double ratio, SplitMix64& rng) {
  auto words = split_words(text);
  if (words.empty()) throw Error("perturb_text: empty text");
  const std::size_t k = perturbation_count(words.size(), ratio);

  std::vector<std::size_t> idx(words.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> positions(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(positions.begin(), positions.end());

  const Vocab& vocab = model.vocab();
  const std::array<TokenId, 1> no_eos{vocab.eos()};
  for (auto pos : positions) {
    const auto ctx = model.context_of_words(std::span(words).first(pos));
    const Eigen::VectorXd p = model.distribution(ctx);
    TokenId draw = sample_index(p, rng.uniform(), no_eos);
    if (vocab.token(draw) == words[pos]) draw = sample_index(p, rng.uniform(), no_eos);
    words[pos] = vocab.token(draw);
  }
  return join_words(words);
}

double perturbation_discrepancy(double original, std::span<const double> variants,
                                const DetectGptConfig& cfg) {
  if (variants.size() < 2) throw Error("DetectGPT needs at least 2 perturbations");
  const auto n = static_cast<double>(variants.size());
  const double mean = std::accumulate(variants.begin(), variants.end(), 0.0) / n;
  const double numerator = original - mean;
  if (!cfg.normalize) return numerator;
  double ss = 0.0;
  for (double v : variants) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  return numerator / std::max(sd, cfg.epsilon_std);
}

double detectgpt_score(const Backend& backend, std::string_view text,
                       const DetectGptConfig& cfg) {
  if (cfg.n_perturbations < 2) throw Error("DetectGPT needs at least 2 perturbations");
  if (!(cfg.epsilon_std > 0.0)) throw Error("DetectGPT epsilon_std must be positive");
  const double original = likelihood_term(score_text(backend, text), cfg.use_total);

  std::vector<std::string> variants;
  if (const NgramModel* model = backend.ngram_model()) {
    for (int i = 0; i < cfg.n_perturbations; ++i) {
      SplitMix64 rng(cfg.seed + static_cast<std::uint64_t>(i));
      variants.push_back(perturb_text(*model, text, cfg.mask_ratio, rng));
    }
  } else if (backend.handle().has(Capability::Perturb)) {
    variants = backend.perturb(text, cfg.n_perturbations, cfg.mask_ratio, cfg.seed);
  } else {
    throw Error(fmt::format("backend '{}' cannot perturb text",
                            backend.handle().descriptor));
  }
  std::vector<double> scores;
  scores.reserve(variants.size());
  for (const auto& v : variants) {
    scores.push_back(likelihood_term(score_text(backend, v), cfg.use_total));
  }
  return perturbation_discrepancy(original, scores, cfg);
}

double external_classifier_score(const Backend& backend, std::string_view text) {
  if (!backend.handle().has(Capability::Classify)) {
    throw Error(fmt::format("backend '{}' has no classify capability",
                            backend.handle().descriptor));
  }
  const double p = backend.classify(text);
  if (!(p >= 0.0 && p <= 1.0)) throw Error(fmt::format("invalid probability {}", p));
  return p;
}

Eigen::Index feature_dimension(DetectorKind kind, const DetectorOptions& opts) {
  return kind == DetectorKind::Gltr ? opts.gltr.dimension() : 1;
}

Eigen::VectorXd detector_features(DetectorKind kind, const Backend& backend,
                                  std::string_view text,
                                  const DetectorOptions& opts) {
  auto scalar = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  switch (kind) {
    case DetectorKind::LogLikelihood:
      return scalar(score_log_likelihood(score_text(backend, text)));
    case DetectorKind::Rank:
      return scalar(score_rank(score_text(backend, text)));
    case DetectorKind::LogRank:
      return scalar(score_log_rank(score_text(backend, text)));
    case DetectorKind::Entropy:
      return scalar(score_entropy(score_text(backend, text)));
    case DetectorKind::Gltr:
      return gltr_features(score_text(backend, text), opts.gltr);
    case DetectorKind::DetectGpt:
      return scalar(detectgpt_score(backend, text, opts.detectgpt));
    case DetectorKind::ExternalClassifier:
      return scalar(external_classifier_score(backend, text));
  }
  throw Error("unknown detector kind");
}

}  // namespace mgt
