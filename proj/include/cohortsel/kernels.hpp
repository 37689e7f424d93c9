// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel hot loops. Each kernel has a serial reference with the same
// signature; the OpenMP versions must return bit-identical results.

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/features.hpp"
#include "cohortsel/sparse.hpp"

#include <omp.h>

namespace cohortsel {

// Runs fn(i) for i in [0, n) on the OpenMP team (serially when already
// inside a parallel region). If any call throws, the exception from the
// lowest index is rethrown after the loop.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::exception_ptr error;
  std::size_t error_index = n;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (n > 1 && !omp_in_parallel())
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(cohortsel_parallel_for_error)
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Column-major copy of a sparse design matrix; each column is sorted by (value, row).
struct ColumnMatrix {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::vector<std::size_t> col_start;  // n_features + 1 offsets
  std::vector<std::uint32_t> rows;
  std::vector<double> values;

  static ColumnMatrix from_rows(std::span<const SparseVec> X, std::size_t n_features);
};

struct SplitCandidate {
  bool valid = false;
  FeatureId feature = 0;
  double threshold = 0;  // samples with x <= threshold go left
  double gain = 0;       // reduction of the residual sum of squares
  std::size_t n_left = 0;
};

struct NodeStats {
  std::size_t count = 0;
  double sum = 0;  // sum of residuals over the node's samples
};

// Gains at or below this floor are treated as no improvement.
inline constexpr double kMinSplitGain = 1e-12;

/// Best threshold for one feature: midpoints between distinct node values,
/// both sides holding at least min_leaf samples, lowest threshold on ties.
SplitCandidate best_split_for_feature(const ColumnMatrix& X, FeatureId feature, std::span<const double> residuals,
                                      std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf);

/// Highest gain over all features; ties go to the lowest feature id.
SplitCandidate best_split_serial(const ColumnMatrix& X, std::span<const double> residuals,
                                 std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf);
SplitCandidate best_split_parallel(const ColumnMatrix& X, std::span<const double> residuals,
                                   std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf);

/// Feature extraction for many documents. `doc_clf_probs` is empty or one entry per document.
std::vector<NamedVec> extract_batch_serial(const LabelFeaturizer& featurizer, std::span<const Document> docs,
                                           const Annotations& spans, const TfidfModel& tfidf,
                                           std::span<const std::optional<DocClfProbs>> doc_clf_probs);
std::vector<NamedVec> extract_batch_parallel(const LabelFeaturizer& featurizer, std::span<const Document> docs,
                                             const Annotations& spans, const TfidfModel& tfidf,
                                             std::span<const std::optional<DocClfProbs>> doc_clf_probs);

/// Thread cap from COHORTSEL_THREADS (unset or 0 = OpenMP default).
int configured_threads();
/// Applies configured_threads() to the OpenMP runtime.
void apply_thread_limit();

}  // namespace cohortsel
