// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/evaluation.hpp"
#include "cohortsel/features.hpp"
#include "cohortsel/pipeline.hpp"

namespace cohortsel {

struct TunerGrid {
  std::vector<double> component_values{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> feature_values{0.5, 1.0, 2.0};

  /// Cartesian cube of component_values without the all-zero point, lexicographic.
  std::vector<ComponentWeights> component_candidates() const;
  /// (tfidf_weight, kw_weight) pairs, lexicographic.
  std::vector<std::vector<double>> feature_candidates() const;
};

struct CandidateScore {
  std::vector<double> weights;
  Confusion counts;  // pooled out-of-fold
  double micro_f1 = 0;
};

// Highest pooled micro-F1; ties go to the candidate closest to all-ones in
// L1, then to the lexicographically smallest. Throws Error on an empty list.
std::size_t select_candidate(std::span<const CandidateScore> candidates);

struct FoldFallback {
  std::string label;
  int fold = 0;
};

struct TuneResult {
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  TunerGrid grid;
  ComponentWeights component_weights{1.0, 1.0, 1.0};
  std::map<std::string, std::pair<double, double>> feature_weights;  // label -> (tfidf, kw)
  std::map<std::string, std::vector<CandidateScore>> feature_scores;
  std::vector<CandidateScore> component_scores;
  EvalReport cv_report;  // pooled out-of-fold predictions at the chosen weights
  std::vector<FoldFallback> fallbacks;  // (label, fold) trained on a single class
};

// Stratified k-fold grid search. Feature-family weights (tfidf, kw) are
// tuned first, one label at a time with every other label held at its
// configured weights; the shared component weights are then tuned over the
// resulting out-of-fold probabilities. Each label stratifies on its own
// positives.
TuneResult grid_search_weights(std::span<const Document> docs, const Annotations& spans, const DecisionMap& gold,
                               const LabelSchema& schema, std::span<const LabelConfig> configs,
                               const ComponentWeights& baseline_weights, const Hyperparams& hp,
                               const TunerGrid& grid, std::size_t k, std::uint64_t seed);

/// Copies of `configs` with the tuned feature weights applied.
std::vector<LabelConfig> apply_tuned(std::span<const LabelConfig> configs, const TuneResult& result);

}  // namespace cohortsel
