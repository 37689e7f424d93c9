// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/ensemble.hpp"

#include <cmath>
#include <cstdint>

#include "cohortsel/error.hpp"
#include "cohortsel/kernels.hpp"

namespace cohortsel {

void validate_component_weights(const ComponentWeights& w, const std::string& where) {
  bool any = false;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0) throw Error(where + ": component weights must be finite and non-negative");
    any = any || v > 0;
  }
  if (!any) throw Error(where + ": at least one component weight must be positive");
}

EnsembleScores ensemble_scores(const ComponentWeights& weights, const ComponentProbs& probs) {
  EnsembleScores s;
  for (std::size_t m = 0; m < 3; ++m) {
    s.met += weights[m] * probs[m];
    s.not_met += weights[m] * (1.0 - probs[m]);
  }
  return s;
}

Decision decide(const EnsembleScores& scores) noexcept {
  return scores.met > scores.not_met ? Decision::met : Decision::not_met;
}

ComponentProbs component_probs(const LabelModel& model, const SparseVec& x) {
  if (model.constant_proba) return {*model.constant_proba, *model.constant_proba, *model.constant_proba};
  return {predict_proba(model.logreg, x), predict_proba(model.svm, x), predict_proba(model.gbdt, x)};
}

SparseVec label_features(const LabelModel& model, std::span<const LabelConfig> all_configs, const Document& doc,
                         std::span<const NerSpan> spans, const TfidfModel& tfidf) {
  std::optional<DocClfProbs> probs;
  if (model.config.use_doc_clf && model.doc_clf) probs = doc_class_probs(*model.doc_clf, doc);
  return model.space.encode(assemble(doc, spans, tfidf, probs, model.config, all_configs));
}

EnsembleScores ensemble_scores(const LabelModel& model, const SparseVec& x) {
  return ensemble_scores(model.weights, component_probs(model, x));
}

std::vector<LabelConfig> label_configs(const EnsembleModel& model) {
  std::vector<LabelConfig> out;
  out.reserve(model.labels.size());
  for (const auto& l : model.labels) out.push_back(l.config);
  return out;
}

namespace {

// Featurizers are compiled once per model rather than per document.
struct CompiledEnsemble {
  explicit CompiledEnsemble(const EnsembleModel& model) : configs(label_configs(model)) {
    featurizers.reserve(model.labels.size());
    for (const auto& l : model.labels) featurizers.emplace_back(l.config, configs);
  }
  std::vector<LabelConfig> configs;
  std::vector<LabelFeaturizer> featurizers;
};

std::map<std::string, Decision> predict_compiled(const EnsembleModel& model, const CompiledEnsemble& compiled,
                                                 const Document& doc, std::span<const NerSpan> spans,
                                                 const TfidfModel& tfidf) {
  if (model.labels.size() != model.schema.size()) throw Error("ensemble model does not cover the label schema");
  std::map<std::string, Decision> out;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    const auto& lm = model.labels[i];
    std::optional<DocClfProbs> probs;
    if (lm.config.use_doc_clf && lm.doc_clf) probs = doc_class_probs(*lm.doc_clf, doc);
    const SparseVec x = lm.space.encode(compiled.featurizers[i].extract(doc, spans, tfidf, probs));
    out.emplace(lm.label(), decide(ensemble_scores(lm, x)));
  }
  return out;
}

}  // namespace

std::map<std::string, Decision> predict_all(const EnsembleModel& model, const Document& doc,
                                            std::span<const NerSpan> spans, const TfidfModel& tfidf) {
  return predict_compiled(model, CompiledEnsemble(model), doc, spans, tfidf);
}

DecisionMap predict_corpus(const EnsembleModel& model, std::span<const Document> docs, const Annotations& spans) {
  const CompiledEnsemble compiled(model);
  std::vector<std::map<std::string, Decision>> rows(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    const auto& doc = docs[i];
    auto it = spans.find(doc.id);
    std::span<const NerSpan> s;
    if (it != spans.end()) s = it->second;
    rows[i] = predict_compiled(model, compiled, doc, s, model.tfidf);
  });
  DecisionMap out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.emplace(docs[i].id, std::move(rows[i]));
  return out;
}

}  // namespace cohortsel
