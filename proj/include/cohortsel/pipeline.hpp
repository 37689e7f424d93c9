// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/doc_classifier.hpp"
#include "cohortsel/ensemble.hpp"
#include "cohortsel/features.hpp"
#include "cohortsel/gbdt.hpp"
#include "cohortsel/linear.hpp"

namespace cohortsel {

struct Hyperparams {
  std::size_t min_df = 2;
  DocClfParams doc_clf;         // seed is derived per label
  std::size_t doc_clf_folds = 3;  // out-of-fold doc-level probabilities for training features
  LogRegParams logreg;
  SvmParams svm;                // seed is derived per label
  GbdtParams gbdt;
};

/// 1 = met, 0 = not met, in document order.
std::vector<int> label_targets(std::span<const Document> docs, const DecisionMap& gold, const std::string& label);

/// Per-label seed derived from the global seed and the label name.
std::uint64_t label_seed(std::uint64_t seed, const std::string& label);

// Trains the doc-level classifier, featurizer space and the three learners
// for one label. Training-set doc-level probabilities are out-of-fold so the
// learners see them as they will look on unseen documents.
LabelModel train_label_model(const LabelConfig& config, std::span<const LabelConfig> all_configs,
                             const ComponentWeights& weights, std::span<const Document> docs,
                             const Annotations& spans, const DecisionMap& gold, const TfidfModel& tfidf,
                             const Hyperparams& hp, std::uint64_t seed);

// Fits TF-IDF on `docs` and trains every schema label (labels in parallel).
// Per-label component weights in the configs override `shared_weights`.
EnsembleModel train_ensemble(const LabelSchema& schema, std::span<const LabelConfig> configs,
                             const ComponentWeights& shared_weights, const Hyperparams& hp,
                             std::span<const Document> docs, const Annotations& spans, const DecisionMap& gold,
                             std::uint64_t seed);

}  // namespace cohortsel
