// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cohortsel/error.hpp"
#include "cohortsel/folds.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

namespace {

void check_binary(std::span<const SparseVec> X, std::span<const int> y, const char* who) {
  if (X.size() != y.size()) throw Error(std::string(who) + ": X and y differ in length");
  if (X.size() < 2) throw Error(std::string(who) + ": need at least two examples");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v != 0 && v != 1) throw Error(std::string(who) + ": labels must be 0 or 1");
    (v == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw Error(std::string(who) + ": both classes must be present (single-class labels)");
}

}  // namespace

// ---------------------------------------------------------------------------
// logistic regression

double logreg_loss(std::span<const double> w, double b, std::span<const SparseVec> X, std::span<const int> y,
                   double l2) {
  double loss = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double z = X[i].dot(w) + b;
    // log(1 + e^z) - y z, computed stably
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += softplus - y[i] * z;
  }
  loss /= static_cast<double>(X.size());
  double sq = 0;
  for (double v : w) sq += v * v;
  return loss + 0.5 * l2 * sq;
}

void logreg_gradient(std::span<const double> w, double b, std::span<const SparseVec> X, std::span<const int> y,
                     double l2, std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0;
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = (sigmoid(X[i].dot(w) + b) - y[i]) * inv_n;
    for (const auto& [id, v] : X[i]) grad_w[id] += r * v;
    grad_b += r;
  }
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += l2 * w[j];
}

LinearModel train_logreg(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                         const LogRegParams& params) {
  check_binary(X, y, "train_logreg");
  LinearModel m{LinearKind::logreg, std::vector<double>(n_features, 0.0), 0.0, std::nullopt};
  std::vector<double> g(n_features);
  double gb = 0;
  for (int it = 0; it < params.iters; ++it) {
    logreg_gradient(m.weights, m.bias, X, y, params.l2, g, gb);
    for (std::size_t j = 0; j < n_features; ++j) m.weights[j] -= params.lr * g[j];
    m.bias -= params.lr * gb;
  }
  return m;
}

// ---------------------------------------------------------------------------
// linear SVM

LinearModel fit_pegasos(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                        const SvmParams& params) {
  check_binary(X, y, "train_linear_svm");
  if (!(params.l2 > 0)) throw Error("train_linear_svm: l2 must be positive");
  // w = scale * v, with the bias stored as v[n_features].
  std::vector<double> v(n_features + 1, 0.0);
  double scale = 1.0;
  Rng rng(params.seed);
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (params.l2 * static_cast<double>(t));
      const double sign = y[i] == 1 ? 1.0 : -1.0;
      const double margin = sign * scale * (X[i].dot(std::span<const double>(v.data(), n_features)) + v[n_features]);
      const double shrink = 1.0 - eta * params.l2;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * sign / scale;
        for (const auto& [id, x] : X[i]) v[id] += step * x;
        v[n_features] += step;
      }
      if (scale < 1e-9) {
        for (auto& e : v) e *= scale;
        scale = 1.0;
      }
    }
  }
  LinearModel m{LinearKind::svm, std::vector<double>(n_features), v[n_features] * scale, std::nullopt};
  for (std::size_t j = 0; j < n_features; ++j) m.weights[j] = v[j] * scale;
  return m;
}

LinearModel train_linear_svm(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                             const SvmParams& params) {
  check_binary(X, y, "train_linear_svm");
  LinearModel model = fit_pegasos(X, y, n_features, params);

  std::vector<double> scores(X.size());
  bool out_of_fold = X.size() >= params.calibration_folds && params.calibration_folds >= 2;
  std::vector<int> folds;
  if (out_of_fold) folds = stratified_kfold(y, params.calibration_folds, params.seed);
  for (std::size_t k = 0; out_of_fold && k < params.calibration_folds; ++k) {
    std::vector<SparseVec> tx;
    std::vector<int> ty;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (folds[i] != static_cast<int>(k)) {
        tx.push_back(X[i]);
        ty.push_back(y[i]);
      }
    }
    const bool both = std::count(ty.begin(), ty.end(), 1) > 0 && std::count(ty.begin(), ty.end(), 0) > 0;
    if (!both) {
      out_of_fold = false;
      break;
    }
    const LinearModel inner = fit_pegasos(tx, ty, n_features, params);
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (folds[i] == static_cast<int>(k)) scores[i] = inner.decision_value(X[i]);
    }
  }
  // Too few examples of a class to cross-fit: calibrate on in-sample scores.
  if (!out_of_fold) {
    for (std::size_t i = 0; i < X.size(); ++i) scores[i] = model.decision_value(X[i]);
  }
  model.calibration = platt_calibrate(scores, y);
  return model;
}

// ---------------------------------------------------------------------------
// Platt scaling

namespace {

struct PlattTargets {
  double hi, lo;
};

PlattTargets platt_targets(std::span<const int> y) {
  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double neg = static_cast<double>(y.size()) - pos;
  return {(pos + 1.0) / (pos + 2.0), 1.0 / (neg + 2.0)};
}

}  // namespace

double platt_objective(std::span<const double> scores, std::span<const int> y, PlattParams p) {
  const auto t = platt_targets(y);
  double f = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double z = p.a * scores[i] + p.b;
    const double ti = y[i] == 1 ? t.hi : t.lo;
    // -t log(sigmoid(z)) - (1 - t) log(1 - sigmoid(z)) = log(1 + e^z) - t z
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    f += softplus - ti * z;
  }
  return f / static_cast<double>(scores.size());
}

PlattParams platt_calibrate(std::span<const double> scores, std::span<const int> y) {
  if (scores.size() != y.size() || scores.empty()) throw Error("platt_calibrate: scores and labels differ in length");
  const bool pos = std::count(y.begin(), y.end(), 1) > 0;
  const bool neg = std::count(y.begin(), y.end(), 0) > 0;
  if (!pos || !neg) throw Error("platt_calibrate: both classes must be present");

  const auto t = platt_targets(y);
  const double inv_n = 1.0 / static_cast<double>(scores.size());
  const double n_pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double n_neg = static_cast<double>(y.size()) - n_pos;
  PlattParams p{0.0, std::log((n_pos + 1.0) / (n_neg + 1.0))};
  double f = platt_objective(scores, y, p);
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-10;
  constexpr double kRidge = 1e-12;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double ga = 0, gb = 0, haa = kRidge, hab = 0, hbb = kRidge;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      const double prob = sigmoid(p.a * s + p.b);
      const double d = prob - (y[i] == 1 ? t.hi : t.lo);
      const double h = prob * (1.0 - prob);
      ga += d * s * inv_n;
      gb += d * inv_n;
      haa += h * s * s * inv_n;
      hab += h * s * inv_n;
      hbb += h * inv_n;
    }
    if (std::hypot(ga, gb) < kTol) return p;
    const double det = haa * hbb - hab * hab;
    const double da = -(hbb * ga - hab * gb) / det;
    const double db = -(-hab * ga + haa * gb) / det;
    const double slope = ga * da + gb * db;
    double step = 1.0;
    while (step >= 1e-12) {
      const PlattParams q{p.a + step * da, p.b + step * db};
      const double fq = platt_objective(scores, y, q);
      // Near the optimum the sufficient-decrease test drowns in rounding.
      const bool flat = std::abs(fq - f) <= 8 * kEps * std::max(1.0, std::abs(f));
      if (fq <= f + 1e-4 * step * slope || flat) {
        p = q;
        f = fq;
        break;
      }
      step *= 0.5;
    }
    if (step < 1e-12) break;
  }
  throw Error("calibration failed: Newton iterations did not converge");
}

double predict_proba(const LinearModel& model, const SparseVec& x) {
  const double d = model.decision_value(x);
  if (model.kind == LinearKind::svm && model.calibration) {
    return sigmoid(model.calibration->a * d + model.calibration->b);
  }
  return sigmoid(d);
}

}  // namespace cohortsel
