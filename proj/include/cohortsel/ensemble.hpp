// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/doc_classifier.hpp"
#include "cohortsel/features.hpp"
#include "cohortsel/gbdt.hpp"
#include "cohortsel/linear.hpp"

namespace cohortsel {

/// P(met) from (logreg, svm, gbdt).
using ComponentProbs = std::array<double, 3>;

struct EnsembleScores {
  double met = 0;
  double not_met = 0;
};

// Everything needed to decide one label.
struct LabelModel {
  LabelConfig config;
  FeatureSpace space;
  LinearModel logreg;
  LinearModel svm;
  GbdtModel gbdt;
  ComponentWeights weights{1.0, 1.0, 1.0};
  std::optional<DocClfModel> doc_clf;
  // Set when the training data held a single class: every component then
  // predicts this base rate.
  std::optional<double> constant_proba;

  const std::string& label() const noexcept { return config.label; }
};

struct EnsembleModel {
  LabelSchema schema;
  TfidfModel tfidf;
  std::vector<LabelModel> labels;  // schema order
};

/// Throws Error if any weight is negative/non-finite or all are zero.
void validate_component_weights(const ComponentWeights& w, const std::string& where);

/// score_met = sum w_m p_m, score_not_met = sum w_m (1 - p_m).
EnsembleScores ensemble_scores(const ComponentWeights& weights, const ComponentProbs& probs);

/// Argmax of the two scores; an exact tie is not met.
Decision decide(const EnsembleScores& scores) noexcept;

ComponentProbs component_probs(const LabelModel& model, const SparseVec& x);

/// Feature vector of one document in the label's space.
SparseVec label_features(const LabelModel& model, std::span<const LabelConfig> all_configs, const Document& doc,
                         std::span<const NerSpan> spans, const TfidfModel& tfidf);

EnsembleScores ensemble_scores(const LabelModel& model, const SparseVec& x);

/// One decision per schema label.
std::map<std::string, Decision> predict_all(const EnsembleModel& model, const Document& doc,
                                            std::span<const NerSpan> spans, const TfidfModel& tfidf);

/// predict_all over a corpus; documents run in parallel.
DecisionMap predict_corpus(const EnsembleModel& model, std::span<const Document> docs, const Annotations& spans);

/// Label configurations in schema order.
std::vector<LabelConfig> label_configs(const EnsembleModel& model);

}  // namespace cohortsel
