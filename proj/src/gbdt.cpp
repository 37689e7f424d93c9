// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

int RegressionTree::leaf_index(const SparseVec& x) const {
  int i = 0;
  while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    i = x.get(static_cast<FeatureId>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return i;
}

double RegressionTree::predict(const SparseVec& x) const {
  return nodes[static_cast<std::size_t>(leaf_index(x))].value;
}

int RegressionTree::depth() const {
  std::function<int(int)> walk = [&](int i) -> int {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    return n.is_leaf() ? 0 : 1 + std::max(walk(n.left), walk(n.right));
  };
  return nodes.empty() ? 0 : walk(0);
}

double GbdtModel::raw_score(const SparseVec& x) const {
  double s = 0;
  for (const auto& t : trees) s += t.predict(x);
  return initial_score + shrinkage * s;
}

double predict_proba(const GbdtModel& model, const SparseVec& x) { return sigmoid(model.raw_score(x)); }

namespace {

constexpr double kLeafClip = 4.0;

class TreeBuilder {
 public:
  TreeBuilder(const ColumnMatrix& X, std::span<const double> residuals, std::span<const double> hessians,
              const GbdtParams& params, SplitSearch search)
      : X_(X), g_(residuals), h_(hessians), params_(params), search_(search), in_node_(X.n_rows, 0) {}

  // Returns an empty tree when the root has no valid split.
  RegressionTree build() {
    std::vector<std::uint32_t> all(X_.n_rows);
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!find_split(all).valid) return {};
    grow(std::move(all), 0);
    return std::move(tree_);
  }

 private:
  SplitCandidate find_split(const std::vector<std::uint32_t>& members) {
    NodeStats stats{members.size(), 0.0};
    for (auto r : members) {
      stats.sum += g_[r];
      in_node_[r] = 1;
    }
    SplitCandidate c = search_ == SplitSearch::parallel
                           ? best_split_parallel(X_, g_, in_node_, stats, params_.min_leaf)
                           : best_split_serial(X_, g_, in_node_, stats, params_.min_leaf);
    for (auto r : members) in_node_[r] = 0;
    return c;
  }

  int grow(std::vector<std::uint32_t> members, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    tree_.nodes.back().samples = members.size();
    SplitCandidate split;
    if (depth < params_.max_depth) split = find_split(members);
    if (!split.valid) {
      double sg = 0, sh = 0;
      for (auto r : members) {
        sg += g_[r];
        sh += h_[r];
      }
      const double v = sh > 0 ? sg / sh : 0.0;
      tree_.nodes[static_cast<std::size_t>(index)].value = std::clamp(v, -kLeafClip, kLeafClip);
      return index;
    }
    std::vector<std::uint32_t> left, right;
    for (auto r : members) (value_of(r, split.feature) <= split.threshold ? left : right).push_back(r);
    members.clear();
    members.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rt = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(index)];
    node.feature = static_cast<int>(split.feature);
    node.threshold = split.threshold;
    node.left = l;
    node.right = rt;
    return index;
  }

  double value_of(std::uint32_t row, FeatureId f) const {
    const auto b = X_.col_start[f], e = X_.col_start[f + 1];
    for (auto i = b; i < e; ++i) {
      if (X_.rows[i] == row) return X_.values[i];
    }
    return 0.0;
  }

  const ColumnMatrix& X_;
  std::span<const double> g_;
  std::span<const double> h_;
  const GbdtParams& params_;
  SplitSearch search_;
  std::vector<std::uint8_t> in_node_;
  RegressionTree tree_;
};

}  // namespace

GbdtModel train_gbdt(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                     const GbdtParams& params, SplitSearch search) {
  if (X.size() != y.size() || X.empty()) throw Error("train_gbdt: X and y must be non-empty and equal in length");
  if (params.max_depth < 1 || params.min_leaf < 1 || params.rounds < 0) throw Error("train_gbdt: bad parameters");
  const auto n_pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const auto n = static_cast<double>(y.size());
  if (n_pos == 0 || n_pos == n) throw Error("train_gbdt: both classes must be present (single-class labels)");

  const ColumnMatrix cols = ColumnMatrix::from_rows(X, n_features);
  GbdtModel model;
  model.shrinkage = params.shrinkage;
  model.max_depth = params.max_depth;
  const double p = n_pos / n;
  model.initial_score = std::log(p / (1.0 - p));

  std::vector<double> F(X.size(), model.initial_score);
  std::vector<double> g(X.size()), h(X.size());
  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < X.size(); ++i) {
      const double prob = sigmoid(F[i]);
      g[i] = y[i] - prob;
      h[i] = prob * (1.0 - prob);
    }
    RegressionTree tree = TreeBuilder(cols, g, h, params, search).build();
    // Without a split F stays put, so every later round would repeat this one.
    if (tree.nodes.empty()) break;
    for (std::size_t i = 0; i < X.size(); ++i) F[i] += params.shrinkage * tree.predict(X[i]);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace cohortsel
