// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cohortsel/sparse.hpp"

namespace cohortsel {

// Labels for all binary learners are 1 (met) / 0 (not met).

enum class LinearKind { logreg, svm };

/// Sigmoid calibration P = sigmoid(a * score + b).
struct PlattParams {
  double a = 1.0;
  double b = 0.0;

  bool operator==(const PlattParams&) const = default;
};

struct LinearModel {
  LinearKind kind = LinearKind::logreg;
  std::vector<double> weights;  // dense over the label's feature space
  double bias = 0.0;
  std::optional<PlattParams> calibration;  // svm only

  double decision_value(const SparseVec& x) const noexcept { return x.dot(weights) + bias; }

  bool operator==(const LinearModel&) const = default;
};

struct LogRegParams {
  double l2 = 1e-4;
  int iters = 200;
  double lr = 0.5;
};

struct SvmParams {
  double l2 = 1e-4;
  int epochs = 20;
  std::uint64_t seed = 0;
  std::size_t calibration_folds = 3;
};

/// Mean log loss plus (l2 / 2) * |w|^2; the bias is not regularized.
double logreg_loss(std::span<const double> w, double b, std::span<const SparseVec> X, std::span<const int> y,
                   double l2);

/// Gradient of logreg_loss: mean of (sigmoid(w.x + b) - y) x, plus l2 * w.
void logreg_gradient(std::span<const double> w, double b, std::span<const SparseVec> X, std::span<const int> y,
                     double l2, std::span<double> grad_w, double& grad_b);

/// Full-batch gradient descent. Throws Error unless both classes are present.
LinearModel train_logreg(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                         const LogRegParams& params);

/// Pegasos hinge-loss SGD with step 1/(l2 t); the bias rides along as a
/// constant feature. No calibration is attached.
LinearModel fit_pegasos(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                        const SvmParams& params);

/// fit_pegasos on all data, calibrated with platt_calibrate on out-of-fold
/// decision values from an internal stratified split.
LinearModel train_linear_svm(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                             const SvmParams& params);

// Newton's method with backtracking on the mean log loss of
// sigmoid(a * s + b), using Platt's smoothed targets (n+ + 1) / (n+ + 2) and
// 1 / (n- + 2). Stops when the gradient norm is below 1e-10; throws
// "calibration failed" after 100 iterations.
PlattParams platt_calibrate(std::span<const double> scores, std::span<const int> y);

/// Objective minimized by platt_calibrate, exposed for verification.
double platt_objective(std::span<const double> scores, std::span<const int> y, PlattParams p);

/// Probability of met.
double predict_proba(const LinearModel& model, const SparseVec& x);

}  // namespace cohortsel
