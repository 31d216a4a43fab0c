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

// Acceptance checks for the core toolkit. Prints one PASS/FAIL line per
// criterion and exits non-zero if any fails. No bridge is involved.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mgtkit/attack.hpp"
#include "mgtkit/benchmark.hpp"
#include "mgtkit/detectors.hpp"
#include "mgtkit/fiteval.hpp"
#include "mgtkit/rng.hpp"
#include "mgtkit/synthetic.hpp"
#include "support/oracle.hpp"
#include "support/testing.hpp"

#ifndef MGTKIT_CLI
#error "MGTKIT_CLI must name the mgtkit executable"
#endif

namespace {

using namespace mgt;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_seconds,
               const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, fmt::format("threw: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    o.pass = false;
    o.detail += fmt::format("; exceeded {:.0f} s", limit_seconds);
  }
  if (!o.pass) ++failures;
  std::cout << fmt::format("{} {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL", name, o.detail,
                           secs)
            << std::flush;
}

Outcome metric_oracle() {
  const std::vector<std::string> corpus{
      "the cat sat on the mat",   "the dog sat on the log",  "a cat and a dog",
      "the mat was red",          "on the log a frog sat",   "the cat saw the dog",
      "dogs and cats",            "red mat red log",         "a frog on a log",
      "the the the",              "sat sat on on",           "cat",
  };
  const std::vector<std::string> probes{
      "the cat sat on the log", "a dog saw a frog",     "unseen words here",
      "the the cat",            "mat",                  "red frog and the dog sat",
      "cats sat on mats",       "the log was red",
  };
  const NgramBackend backend(train_ngram(corpus, 2, 1.0));
  const oracle::BruteNgram brute(corpus, 2, 1.0);

  double worst = 0;
  std::size_t positions = 0;
  for (const auto& text : probes) {
    const TokenScoring s = backend.score(text);
    const auto ref = brute.score(text);
    if (s.size() != ref.size()) return {false, fmt::format("length mismatch on '{}'", text)};
    double sum_lp = 0, sum_rank = 0, sum_logrank = 0, sum_h = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (s.rank[i] != ref[i].rank) {
        return {false, fmt::format("rank mismatch on '{}' at {}", text, i)};
      }
      worst = std::max({worst, std::abs(s.logprob[i] - ref[i].logprob),
                        std::abs(s.entropy[i] - ref[i].entropy)});
      sum_lp += ref[i].logprob;
      sum_rank += static_cast<double>(ref[i].rank);
      sum_logrank += std::log(static_cast<double>(ref[i].rank));
      sum_h += ref[i].entropy;
      ++positions;
    }
    const double n = static_cast<double>(ref.size());
    worst = std::max({worst, std::abs(score_log_likelihood(s) - sum_lp / n),
                      std::abs(score_rank(s) - sum_rank / n),
                      std::abs(score_log_rank(s) - sum_logrank / n),
                      std::abs(score_entropy(s) - sum_h / n)});
  }
  return {worst <= 1e-9,
          fmt::format("{} positions, max abs deviation {:.3g} (tolerance 1e-9)", positions, worst)};
}

Outcome auc_oracle() {
  SplitMix64 rng(20260101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(49);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(6)) * 0.5;
      y[i] = static_cast<int>(rng.below(2));
    }
    // Guarantee both classes at random positions.
    const std::size_t pos = rng.below(n);
    y[pos] = 1;
    y[(pos + 1 + rng.below(n - 1)) % n] = 0;
    const Eigen::Map<const Eigen::VectorXd> sv(s.data(), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXi> yv(y.data(), static_cast<Eigen::Index>(n));
    const double got = auc(sv, yv);
    const double want = oracle::pairwise_auc(s, y);
    if (got != want) {
      return {false, fmt::format("set {}: auc {} vs all-pairs {}", trial, got, want)};
    }
  }
  return {true, "200 tied sets, exact equality"};
}

Outcome gltr_simplex() {
  SplitMix64 rng(77);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    TokenScoring s;
    const std::size_t n = 1 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) {
      s.tokens.push_back("w");
      s.logprob.push_back(-1);
      s.entropy.push_back(1);
      s.rank.push_back(1 + static_cast<std::int64_t>(rng.below(3000)));
    }
    const Eigen::VectorXd f = gltr_features(s);
    if ((f.array() < 0).any()) return {false, fmt::format("negative fraction in vector {}", trial)};
    worst = std::max(worst, std::abs(f.sum() - 1.0));
  }
  return {worst <= 1e-9, fmt::format("1000 vectors, max |sum - 1| = {:.3g}", worst)};
}

Outcome end_to_end() {
  SyntheticConfig cfg;
  cfg.seed = 0;
  cfg.pairs = 400;
  const SyntheticBenchmark b = make_synthetic_benchmark(cfg);
  const NgramBackend scorer(b.model_a);
  const auto [train, test] = split(b.dataset, {4, 5, 0});
  const EvalReport r = run_benchmark(train, test, DetectorKind::LogLikelihood, scorer);

  DetectGptConfig dg;
  dg.seed = 0;
  double sum_a = 0, sum_b = 0;
  std::size_t n_a = 0, n_b = 0;
  for (const auto& rec : b.dataset.records) {
    const double d = detectgpt_score(scorer, rec.text, dg);
    if (rec.label == Label::MGT) {
      sum_a += d;
      ++n_a;
    } else {
      sum_b += d;
      ++n_b;
    }
  }
  const double mean_a = sum_a / static_cast<double>(n_a);
  const double mean_b = sum_b / static_cast<double>(n_b);
  return {r.auc >= 0.9 && mean_a > mean_b && n_a == 400 && n_b == 400,
          fmt::format("{}+{} texts, loglik test AUC {:.4f} (>= 0.9), DetectGPT mean A {:.4f} > "
                      "B {:.4f}",
                      n_a, n_b, r.auc, mean_a, mean_b)};
}

Outcome length_ablation() {
  SyntheticConfig cfg;
  cfg.seed = 0;
  cfg.overlap = 0.7;
  cfg.noise = 0.1;
  cfg.pairs = 1500;
  cfg.hwt_min_words = 5;
  cfg.hwt_max_words = 25;
  cfg.mgt_min_words = 5;
  cfg.mgt_max_words = 80;
  const SyntheticBenchmark b = make_synthetic_benchmark(cfg);
  const NgramBackend scorer(b.model_a);
  const auto [train, test] = split(b.dataset, {4, 5, 0});
  const auto [original, filtered] =
      ablate_length(train, test, DetectorKind::LogLikelihood, scorer, {}, 25);
  return {filtered.auc <= original.auc,
          fmt::format("MGT 5-80 words vs HWT 5-25, AUC {:.4f} -> {:.4f} on <= 25 words",
                      original.auc, filtered.auc)};
}

Outcome attack_soundness() {
  SyntheticConfig cfg;
  cfg.seed = 0;
  cfg.pairs = 400;
  const SyntheticBenchmark b = make_synthetic_benchmark(cfg);
  const auto [train, test] = split(b.dataset, {4, 5, 0});
  const NgramBackend scorer(b.model_a);
  const FittedDetector fitted = fit_detector(train, DetectorKind::LogLikelihood, scorer, {});

  std::size_t calls = 0;
  const DetectorFn counted = [&](std::string_view t) {
    ++calls;
    return fitted.p_mgt(scorer, t);
  };
  const CandidateSource source{&b.model_a, nullptr};
  const AttackConfig attack_cfg;

  std::vector<AttackResult> results;
  for (const auto& rec : test.records) {
    if (rec.label != Label::MGT) continue;
    if (fitted.p_mgt(scorer, rec.text) < kDecisionThreshold) continue;
    calls = 0;
    AttackResult r = attack_record(counted, source, rec, attack_cfg);
    if (r.queries != calls) {
      return {false, fmt::format("{}: reported {} queries, detector saw {}", r.record_id,
                                 r.queries, calls)};
    }
    results.push_back(std::move(r));
  }

  // Re-verify with an independently fitted detector and backend.
  const NgramBackend fresh_scorer(b.model_a);
  const FittedDetector fresh =
      fit_detector(train, DetectorKind::LogLikelihood, fresh_scorer, {});
  std::size_t successes = 0;
  for (const auto& r : results) {
    const std::size_t budget = static_cast<std::size_t>(
        std::floor(attack_cfg.max_perturb_fraction * static_cast<double>(r.words) + 1e-9));
    if (r.substitutions.size() > budget || r.perturbed_fraction > 0.2) {
      return {false, fmt::format("{}: {} substitutions over budget {}", r.record_id,
                                 r.substitutions.size(), budget)};
    }
    if (r.success) {
      ++successes;
      if (fresh.p_mgt(fresh_scorer, r.adversarial_text) >= kDecisionThreshold) {
        return {false, fmt::format("{}: success does not re-verify as HWT", r.record_id)};
      }
    }
  }
  if (results.empty()) return {false, "no MGT text was flagged"};
  const double rate = static_cast<double>(successes) / static_cast<double>(results.size());
  return {rate >= 0.5,
          fmt::format("{} attacked, success rate {:.3f} (>= 0.5), budgets and query counts exact",
                      results.size(), rate)};
}

int run_cli(const std::string& args) {
  const int raw = std::system(fmt::format("'{}' {} > /dev/null", MGTKIT_CLI, args).c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string out;
  for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Outcome determinism() {
  testing_util::TempDir dir;
  const std::string data = (dir / "synth").string();
  if (run_cli(fmt::format("synth --out '{}' --seed 9 --pairs 150", data)) != 0) {
    return {false, "synth failed"};
  }
  const std::string paired = (dir / "synth" / "paired.jsonl").string();
  const std::string base = (dir / "base").string();
  if (run_cli(fmt::format("bench --dataset '{}' --detector loglik,rank,logrank,entropy,gltr,"
                          "detectgpt --perturbations 4 --seed 3 --out '{}'",
                          paired, base)) != 0) {
    return {false, "initial bench run failed"};
  }
  const auto config = dir / "base" / "run_config.json";
  std::vector<std::string> csvs;
  for (int threads : {1, 1, 4, 4}) {
    const auto out = dir / fmt::format("run{}", csvs.size());
    if (run_cli(fmt::format("bench --config '{}' --threads {} --out '{}'", config.string(),
                            threads, out.string())) != 0) {
      return {false, fmt::format("bench rerun with {} threads failed", threads)};
    }
    csvs.push_back(strip_last_column(testing_util::read_file(out / "bench.csv")));
  }
  // The ablation and attack CSVs carry no timing column.
  std::vector<std::string> ablate, attack;
  for (int threads : {1, 1, 4, 4}) {
    const auto a = dir / fmt::format("ablate{}", ablate.size());
    const auto k = dir / fmt::format("attack{}", attack.size());
    if (run_cli(fmt::format("ablate --dataset '{}' --threads {} --out '{}'", paired, threads,
                            a.string())) != 0 ||
        run_cli(fmt::format("attack --dataset '{}' --threads {} --out '{}'", paired, threads,
                            k.string())) != 0) {
      return {false, "ablate or attack run failed"};
    }
    ablate.push_back(testing_util::read_file(a / "ablate.csv"));
    attack.push_back(testing_util::read_file(k / "attack_stats.csv") +
                     testing_util::read_file(k / "attack_results.jsonl"));
  }
  for (std::size_t i = 1; i < 4; ++i) {
    if (csvs[i] != csvs[0]) return {false, fmt::format("bench.csv differs in run {}", i)};
    if (ablate[i] != ablate[0]) return {false, fmt::format("ablate.csv differs in run {}", i)};
    if (attack[i] != attack[0]) return {false, fmt::format("attack output differs in run {}", i)};
  }
  return {true, "bench/ablate/attack outputs byte-identical across 2 runs each at 1 and 4 threads"};
}

Outcome logistic_fit() {
  Eigen::MatrixXd x(40, 1);
  LabelVector y(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    y[i] = i % 2;
    x(i, 0) = (y[i] ? 1.0 : -1.0) * (0.1 + 0.05 * static_cast<double>(i));
  }
  const auto model = fit(x, y);
  const EvalReport r = evaluate(predict_proba(model, x), y);
  bool monotone = true;
  for (std::size_t i = 1; i < model.loss_trace.size(); ++i) {
    monotone = monotone && model.loss_trace[i] <= model.loss_trace[i - 1];
  }
  return {r.f1 == 1.0 && monotone,
          fmt::format("training F1 {:.6f}, loss {:.6f} -> {:.6f} over {} steps, {}", r.f1,
                      model.loss_trace.front(), model.loss_trace.back(),
                      model.loss_trace.size() - 1, monotone ? "monotone" : "NOT monotone")};
}

}  // namespace

int main() {
  criterion("metric oracle equivalence", 5, metric_oracle);
  criterion("AUC oracle", 5, auc_oracle);
  criterion("GLTR simplex", 0, gltr_simplex);
  criterion("synthetic end-to-end benchmark", 60, end_to_end);
  criterion("length-ablation direction", 0, length_ablation);
  criterion("attack soundness", 120, attack_soundness);
  criterion("determinism", 0, determinism);
  criterion("logistic fit", 0, logistic_fit);
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : fmt::format("{} criteria failed\n", failures));
  return failures == 0 ? 0 : 1;
}
