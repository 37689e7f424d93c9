// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "cohortsel/kernels.hpp"
#include "cohortsel/sparse.hpp"

namespace cohortsel {

struct GbdtParams {
  int rounds = 100;
  int max_depth = 3;
  double shrinkage = 0.1;
  std::size_t min_leaf = 2;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;         // leaf output
  std::size_t samples = 0;  // training samples that reached the node

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const SparseVec& x) const;
  /// Index of the leaf reached by x.
  int leaf_index(const SparseVec& x) const;
  int depth() const;

  bool operator==(const RegressionTree&) const = default;
};

struct GbdtModel {
  double initial_score = 0;  // log-odds of the training base rate
  std::vector<RegressionTree> trees;
  double shrinkage = 0.1;
  int max_depth = 3;

  double raw_score(const SparseVec& x) const;

  bool operator==(const GbdtModel&) const = default;
};

enum class SplitSearch { serial, parallel };

// Logistic gradient boosting: each round fits a regression tree to the
// residuals y - sigmoid(F) by greedy variance reduction, with Newton leaf
// values clipped to [-4, 4]. Stops early once the root cannot be split.
GbdtModel train_gbdt(std::span<const SparseVec> X, std::span<const int> y, std::size_t n_features,
                     const GbdtParams& params, SplitSearch search = SplitSearch::parallel);

/// Probability of met: sigmoid(initial_score + shrinkage * sum of trees).
double predict_proba(const GbdtModel& model, const SparseVec& x);

}  // namespace cohortsel
