// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "cohortsel/error.hpp"
#include "cohortsel/gbdt.hpp"
#include "cohortsel/linear.hpp"
#include "cohortsel/util.hpp"
#include "test_support.hpp"

using namespace cohortsel;

namespace {

double mean_log_loss(std::span<const double> probs, std::span<const int> y) {
  double loss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) loss -= std::log(y[i] == 1 ? probs[i] : 1.0 - probs[i]);
  return loss / static_cast<double>(y.size());
}

// Two Gaussian blobs around (+2, +2) and (-2, -2); separable by construction.
testing::Table separable(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  testing::Table t;
  t.n_features = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % 2);
    const double c = y == 1 ? 2.0 : -2.0;
    t.X.push_back(SparseVec::from_sorted({{0, c + rng.uniform() - 0.5}, {1, c + rng.uniform() - 0.5}}));
    t.y.push_back(y);
  }
  return t;
}

// Platt objective minimised by plain gradient descent on the same
// smoothed targets; a slow, independent check on the Newton solver.
PlattParams platt_oracle(const std::vector<double>& s, const std::vector<int>& y) {
  double n_pos = 0, n_neg = 0;
  for (int v : y) (v == 1 ? n_pos : n_neg) += 1;
  const double hi = (n_pos + 1) / (n_pos + 2), lo = 1 / (n_neg + 2);
  double a = 0, b = 0;
  for (int it = 0; it < 400000; ++it) {
    double ga = 0, gb = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double p = 1 / (1 + std::exp(-(a * s[i] + b)));
      const double d = p - (y[i] == 1 ? hi : lo);
      ga += d * s[i];
      gb += d;
    }
    ga /= static_cast<double>(s.size());
    gb /= static_cast<double>(s.size());
    if (std::hypot(ga, gb) < 1e-13) break;
    a -= 0.5 * ga;
    b -= 0.5 * gb;
  }
  return {a, b};
}

// Visits every node a training row passes through.
void walk(const RegressionTree& t, const SparseVec& x, const std::function<void(int)>& visit) {
  int node = 0;
  while (true) {
    visit(node);
    const auto& n = t.nodes[static_cast<std::size_t>(node)];
    if (n.is_leaf()) return;
    node = x.get(static_cast<FeatureId>(n.feature)) <= n.threshold ? n.left : n.right;
  }
}

}  // namespace

TEST_CASE("logreg gradient basics") {
  const std::vector<SparseVec> X{SparseVec::from_sorted({{0, 1.0}})};
  const std::vector<int> y{1};
  std::vector<double> w{0.0}, g(1);
  double gb = 0;
  logreg_gradient(w, 0.0, X, y, 0.0, g, gb);
  CHECK(g[0] == -0.5);
  CHECK(gb == -0.5);

  LinearModel zero{LinearKind::logreg, {0.0, 0.0}, 0.0, std::nullopt};
  CHECK(predict_proba(zero, SparseVec::from_sorted({{0, 3.0}, {1, -7.0}})) == 0.5);
}

TEST_CASE("logreg gradient matches central finite differences") {
  const auto t = testing::load_csv_fixture("classification_200.csv");
  Rng rng(17);
  const double l2 = 1e-2, h = 1e-5;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> w(t.n_features);
    for (auto& v : w) v = 2 * rng.uniform() - 1;
    const double b = 2 * rng.uniform() - 1;
    std::vector<double> g(t.n_features);
    double gb = 0;
    logreg_gradient(w, b, t.X, t.y, l2, g, gb);
    for (std::size_t j = 0; j <= t.n_features; ++j) {
      double numeric;
      if (j < t.n_features) {
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        numeric = (logreg_loss(wp, b, t.X, t.y, l2) - logreg_loss(wm, b, t.X, t.y, l2)) / (2 * h);
      } else {
        numeric = (logreg_loss(w, b + h, t.X, t.y, l2) - logreg_loss(w, b - h, t.X, t.y, l2)) / (2 * h);
      }
      const double analytic = j < t.n_features ? g[j] : gb;
      const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      CHECK(rel <= 1e-4);
    }
  }
}

TEST_CASE("logreg separates a separable fixture and is monotone") {
  const auto t = separable(3, 60);
  const auto m = train_logreg(t.X, t.y, 2, LogRegParams{});
  for (std::size_t i = 0; i < t.X.size(); ++i) CHECK((predict_proba(m, t.X[i]) > 0.5) == (t.y[i] == 1));
  CHECK_FALSE(m.calibration.has_value());

  Rng rng(5);
  std::vector<SparseVec> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(SparseVec::from_sorted({{0, 8 * rng.uniform() - 4}, {1, 8 * rng.uniform() - 4}}));
  std::sort(xs.begin(), xs.end(), [&](const auto& a, const auto& b) { return m.decision_value(a) < m.decision_value(b); });
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(predict_proba(m, xs[i - 1]) <= predict_proba(m, xs[i]));

  const std::vector<int> ones(t.y.size(), 1);
  CHECK_THROWS_AS(train_logreg(t.X, ones, 2, LogRegParams{}), Error);
}

TEST_CASE("linear svm separates, calibrates and is deterministic") {
  const auto t = separable(4, 60);
  SvmParams params;
  params.seed = 9;
  const auto m = train_linear_svm(t.X, t.y, 2, params);
  for (std::size_t i = 0; i < t.X.size(); ++i) {
    const double margin = (t.y[i] == 1 ? 1 : -1) * m.decision_value(t.X[i]);
    CHECK(margin > 0);
  }
  REQUIRE(m.calibration.has_value());
  CHECK(std::isfinite(m.calibration->a));
  CHECK(std::isfinite(m.calibration->b));
  CHECK(train_linear_svm(t.X, t.y, 2, params) == m);

  LinearModel zero{LinearKind::svm, {0.0, 0.0}, 0.0, std::nullopt};
  CHECK(zero.decision_value(SparseVec::from_sorted({{0, 1.0}})) == 0.0);
  const std::vector<int> zeros(t.y.size(), 0);
  CHECK_THROWS_AS(train_linear_svm(t.X, zeros, 2, params), Error);
}

TEST_CASE("platt scaling basics") {
  const std::vector<double> s{-2, -1, 1, 2};
  const std::vector<int> y{0, 1, 0, 1};
  const auto p = platt_calibrate(s, y);
  CHECK(std::abs(p.b) < 1e-6);
  LinearModel m{LinearKind::svm, {}, 0.0, PlattParams{p.a, 0.0}};
  CHECK(predict_proba(m, SparseVec{}) == 0.5);

  const std::vector<double> sym{-3, -1, -0.5, 0.5, 1, 3};
  const std::vector<int> ysym{0, 0, 1, 0, 1, 1};
  CHECK(std::abs(platt_calibrate(sym, ysym).b) < 1e-6);
  CHECK_THROWS_AS(platt_calibrate(s, std::vector<int>{1, 1, 1, 1}), Error);
}

TEST_CASE("platt scaling agrees with a gradient-descent oracle") {
  Rng rng(23);
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    const int label = rng.bernoulli(0.5) ? 1 : 0;
    s.push_back((label ? 1.0 : -1.0) + 1.5 * (2 * rng.uniform() - 1));
    y.push_back(label);
  }
  const auto newton = platt_calibrate(s, y);
  const auto oracle = platt_oracle(s, y);
  CHECK(std::abs(newton.a - oracle.a) < 1e-4);
  CHECK(std::abs(newton.b - oracle.b) < 1e-4);
  CHECK(platt_objective(s, y, newton) <= platt_objective(s, y, oracle) + 1e-12);
}

TEST_CASE("platt scaling converges on separable and large scores") {
  const std::vector<double> s{-150, -80, -3, 2, 90, 160};
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto p = platt_calibrate(s, y);
  CHECK(std::isfinite(p.a));
  CHECK(p.a > 0);
}

TEST_CASE("gbdt halves the log loss on the 200-point fixture") {
  const auto t = testing::load_csv_fixture("classification_200.csv");
  REQUIRE(t.X.size() == 200);
  GbdtParams params;
  params.rounds = 50;
  const auto m = train_gbdt(t.X, t.y, t.n_features, params);

  double pos = 0;
  for (int v : t.y) pos += v;
  const std::vector<double> base(t.y.size(), pos / 200.0);
  std::vector<double> probs;
  for (const auto& x : t.X) probs.push_back(predict_proba(m, x));
  CHECK(mean_log_loss(probs, t.y) <= 0.5 * mean_log_loss(base, t.y));
  CHECK(std::abs(m.initial_score - std::log(pos / (200.0 - pos))) < 1e-12);
}

TEST_CASE("gbdt trees respect depth, min_leaf and partition their samples") {
  const auto t = testing::load_csv_fixture("classification_200.csv");
  for (std::size_t min_leaf : {1, 2, 7, 25}) {
    GbdtParams params;
    params.rounds = 20;
    params.min_leaf = min_leaf;
    const auto m = train_gbdt(t.X, t.y, t.n_features, params);
    REQUIRE_FALSE(m.trees.empty());
    for (const auto& tree : m.trees) {
      CHECK(tree.depth() <= params.max_depth);
      std::vector<std::size_t> reached(tree.nodes.size(), 0);
      for (const auto& x : t.X) walk(tree, x, [&](int n) { ++reached[static_cast<std::size_t>(n)]; });
      for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
        const auto& node = tree.nodes[n];
        CHECK(reached[n] == node.samples);
        if (node.is_leaf()) {
          CHECK(node.samples >= min_leaf);
          CHECK(std::abs(node.value) <= 4.0);
        } else {
          const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
          const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
          CHECK(l.samples + r.samples == node.samples);
          CHECK(l.samples > 0);
          CHECK(r.samples > 0);
        }
      }
    }
  }
}

TEST_CASE("gbdt on constant features predicts the base rate") {
  std::vector<SparseVec> X(30, SparseVec::from_sorted({{0, 1.0}, {1, 2.5}}));
  std::vector<int> y(30, 0);
  for (std::size_t i = 0; i < 12; ++i) y[i] = 1;
  const auto m = train_gbdt(X, y, 2, GbdtParams{});
  CHECK(m.trees.empty());
  CHECK(std::abs(predict_proba(m, X[0]) - 0.4) < 1e-12);
  CHECK(std::abs(predict_proba(m, SparseVec{}) - 0.4) < 1e-12);

  std::vector<int> balanced(30, 0);
  for (std::size_t i = 0; i < 15; ++i) balanced[i] = 1;
  const auto b = train_gbdt(X, balanced, 2, GbdtParams{});
  CHECK(b.initial_score == 0.0);
  CHECK(predict_proba(b, X[0]) == 0.5);
}

TEST_CASE("gbdt is deterministic and serial equals parallel") {
  const auto t = testing::load_csv_fixture("classification_200.csv");
  GbdtParams params;
  params.rounds = 30;
  const auto a = train_gbdt(t.X, t.y, t.n_features, params, SplitSearch::serial);
  const auto b = train_gbdt(t.X, t.y, t.n_features, params, SplitSearch::parallel);
  CHECK(a == b);
  CHECK(train_gbdt(t.X, t.y, t.n_features, params) == b);
  for (const auto& x : t.X) {
    const double p = predict_proba(a, x);
    CHECK(p > 0);
    CHECK(p < 1);
  }
}

TEST_CASE("gbdt rejects single-class targets") {
  const auto t = testing::load_csv_fixture("classification_200.csv");
  const std::vector<int> ones(t.y.size(), 1);
  CHECK_THROWS_AS(train_gbdt(t.X, ones, t.n_features, GbdtParams{}), Error);
}
