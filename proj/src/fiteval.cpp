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

#include "mgtkit/fiteval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "mgtkit/report.hpp"

namespace mgt {

double auc(const Eigen::Ref<const Eigen::VectorXd>& scores, const LabelVector& labels) {
  if (scores.size() != labels.size()) throw Error("auc: length mismatch");
  const auto n = static_cast<std::size_t>(scores.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(scores[static_cast<Eigen::Index>(i)])) throw Error("auc: NaN score");
    if (labels[static_cast<Eigen::Index>(i)] == 1) ++n_pos;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("AUC undefined: labels hold a single class");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
  });
  // Twice the positive rank sum, so mid-ranks stay integral.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    const double v = scores[static_cast<Eigen::Index>(order[i])];
    while (j < n && scores[static_cast<Eigen::Index>(order[j])] == v) ++j;
    const std::uint64_t twice_mid = i + 1 + j;  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[static_cast<Eigen::Index>(order[k])] == 1) twice_rank_sum += twice_mid;
    }
    i = j;
  }
  const std::uint64_t twice_u =
      twice_rank_sum - static_cast<std::uint64_t>(n_pos) * (n_pos + 1);
  return (static_cast<double>(twice_u) / 2.0) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport evaluate(const Eigen::Ref<const Eigen::VectorXd>& probs,
                    const LabelVector& labels, double threshold) {
  if (probs.size() != labels.size() || probs.size() == 0) {
    throw Error("evaluate: inputs must be non-empty and of equal length");
  }
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  EvalReport r;
  r.n_pos = tp + fn;
  r.n_neg = fp + tn;
  r.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  r.auc = (r.n_pos > 0 && r.n_neg > 0) ? auc(probs, labels)
                                       : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::string to_key_value(const EvalReport& r) {
  return fmt::format(
      "accuracy={}\nprecision={}\nrecall={}\nf1={}\nauc={}\nn_pos={}\nn_neg={}\n"
      "wall_time_seconds={}\n",
      format_metric(r.accuracy), format_metric(r.precision), format_metric(r.recall),
      format_metric(r.f1), format_metric(r.auc), r.n_pos, r.n_neg,
      format_metric(r.wall_time_seconds));
}

std::string csv_header() {
  return "accuracy,precision,recall,f1,auc,n_pos,n_neg,wall_time_seconds";
}

std::string to_csv_row(const EvalReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{}", format_metric(r.accuracy),
                     format_metric(r.precision), format_metric(r.recall),
                     format_metric(r.f1), format_metric(r.auc), r.n_pos, r.n_neg,
                     format_metric(r.wall_time_seconds));
}

}  // namespace mgt
