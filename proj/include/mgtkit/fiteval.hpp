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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgtkit/error.hpp"

namespace mgt {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary labels, 1 = MGT (positive), 0 = HWT.
using LabelVector = Eigen::VectorXi;

/// Per-column affine normalization fitted on training rows.
template <typename Scalar>
struct Standardizer {
  static constexpr Scalar kMinStddev = Scalar(1e-9);

  Vec<Scalar> mean;
  Vec<Scalar> stddev;

  template <typename Derived>
  static Standardizer fit(const Eigen::MatrixBase<Derived>& x) {
    Standardizer s;
    const auto n = static_cast<Scalar>(x.rows());
    s.mean = x.colwise().mean().transpose();
    const Mat<Scalar> centered = x.rowwise() - s.mean.transpose();
    s.stddev = (centered.colwise().squaredNorm().transpose() / n)
                   .cwiseSqrt()
                   .cwiseMax(kMinStddev);
    return s;
  }

  template <typename Derived>
  Mat<Scalar> apply(const Eigen::MatrixBase<Derived>& x) const {
    return (x.rowwise() - mean.transpose()).array().rowwise() /
           stddev.transpose().array();
  }
};

struct LogisticHyperparams {
  double learning_rate = 0.1;
  int epochs = 1000;
  double l2 = 1e-4;
};

template <typename Scalar>
struct LogisticModel {
  Vec<Scalar> weights;
  Scalar bias = 0;
  Standardizer<Scalar> standardizer;
  LogisticHyperparams hyperparams;
  /// Regularized training loss before each epoch's update, then after the
  /// last one (epochs + 1 entries).
  std::vector<Scalar> loss_trace;

  Eigen::Index dimension() const { return weights.size(); }
};

using LogisticModeld = LogisticModel<double>;

namespace detail {

inline constexpr int kMaxStepHalvings = 40;

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= 0) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

// log(1 + exp(z)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

template <typename Scalar>
Scalar logistic_loss(const Mat<Scalar>& z_in, const Vec<Scalar>& w, Scalar b,
                     const Vec<Scalar>& y, Scalar l2) {
  const Vec<Scalar> z = z_in * w + Vec<Scalar>::Constant(z_in.rows(), b);
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    sum += softplus(z[i]) - y[i] * z[i];
  }
  return sum / static_cast<Scalar>(z.size()) + Scalar(0.5) * l2 * w.squaredNorm();
}

}  // namespace detail

/// Standardizes, then runs full-batch gradient descent on the L2-regularized
/// mean logistic loss from zero initialization. A step that would raise the
/// loss is halved, so the loss trace never increases. Throws Error when the labels
/// hold a single class or shapes disagree.
template <typename Derived>
LogisticModel<typename Derived::Scalar> fit(const Eigen::MatrixBase<Derived>& features,
                                            const LabelVector& labels,
                                            const LogisticHyperparams& hp = {}) {
  using Scalar = typename Derived::Scalar;
  if (features.rows() != labels.size()) throw Error("fit: row count mismatch");
  if (features.cols() < 1) throw Error("fit: feature dimension must be >= 1");
  const Eigen::Index n_pos = (labels.array() == 1).count();
  const Eigen::Index n_neg = (labels.array() == 0).count();
  if (n_pos + n_neg != labels.size()) throw Error("fit: labels must be 0 or 1");
  if (n_pos == 0 || n_neg == 0) throw Error("fit: degenerate labels");

  LogisticModel<Scalar> model;
  model.hyperparams = hp;
  model.standardizer = Standardizer<Scalar>::fit(features);
  const Mat<Scalar> x = model.standardizer.apply(features);
  const Vec<Scalar> y = labels.cast<Scalar>();
  const auto n = static_cast<Scalar>(x.rows());
  const auto lr = static_cast<Scalar>(hp.learning_rate);
  const auto l2 = static_cast<Scalar>(hp.l2);

  model.weights = Vec<Scalar>::Zero(x.cols());
  model.bias = 0;
  model.loss_trace.reserve(static_cast<std::size_t>(hp.epochs) + 1);
  Scalar loss = detail::logistic_loss(x, model.weights, model.bias, y, l2);
  model.loss_trace.push_back(loss);
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    Vec<Scalar> residual = (x * model.weights).array() + model.bias;
    residual = residual.unaryExpr([](Scalar z) { return detail::sigmoid(z); }) - y;
    const Vec<Scalar> grad_w = x.transpose() * residual / n + l2 * model.weights;
    const Scalar grad_b = residual.sum() / n;
    // Near the optimum rounding can make a full step nudge the loss up; the
    // step is halved until it does not, and skipped if that never happens.
    Scalar step = lr;
    for (int halving = 0; halving < detail::kMaxStepHalvings; ++halving, step /= 2) {
      const Vec<Scalar> w = model.weights - step * grad_w;
      const Scalar b = model.bias - step * grad_b;
      const Scalar candidate = detail::logistic_loss(x, w, b, y, l2);
      if (candidate <= loss) {
        model.weights = w;
        model.bias = b;
        loss = candidate;
        break;
      }
    }
    model.loss_trace.push_back(loss);
  }
  return model;
}

/// sigmoid(w . standardize(x) + b) per row.
template <typename Scalar, typename Derived>
Vec<Scalar> predict_proba(const LogisticModel<Scalar>& model,
                          const Eigen::MatrixBase<Derived>& features) {
  if (features.cols() != model.dimension()) {
    throw Error("predict_proba: feature dimension mismatch");
  }
  const Vec<Scalar> z =
      (model.standardizer.apply(features) * model.weights).array() + model.bias;
  return z.unaryExpr([](Scalar v) { return detail::sigmoid(v); });
}

/// Classification metrics with MGT as the positive class.
struct EvalReport {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  /// NaN when the labels hold a single class.
  double auc = 0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double wall_time_seconds = 0;
};

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs where the positive scores higher, ties counting
/// one half. Computed from mid-ranks in O(n log n). Throws Error
/// ("AUC undefined") without both classes.
double auc(const Eigen::Ref<const Eigen::VectorXd>& scores, const LabelVector& labels);

/// Predictions are probs >= threshold. Precision, recall and F1 are 0 when
/// their denominators are 0.
EvalReport evaluate(const Eigen::Ref<const Eigen::VectorXd>& probs,
                    const LabelVector& labels, double threshold = 0.5);

/// Flat `key=value` lines in field order.
std::string to_key_value(const EvalReport& r);
/// accuracy,precision,recall,f1,auc,n_pos,n_neg,wall_time_seconds
std::string csv_header();
std::string to_csv_row(const EvalReport& r);

}  // namespace mgt
