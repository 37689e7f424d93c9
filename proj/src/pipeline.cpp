// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/pipeline.hpp"

#include <algorithm>
#include <set>

#include "cohortsel/error.hpp"
#include "cohortsel/folds.hpp"
#include "cohortsel/kernels.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

std::vector<int> label_targets(std::span<const Document> docs, const DecisionMap& gold, const std::string& label) {
  std::vector<int> y;
  y.reserve(docs.size());
  for (const auto& d : docs) {
    auto row = gold.find(d.id);
    if (row == gold.end()) throw Error("no gold labels for document '" + d.id + "'");
    auto it = row->second.find(label);
    if (it == row->second.end()) throw Error("no gold decision for " + d.id + "/" + label);
    y.push_back(it->second == Decision::met ? 1 : 0);
  }
  return y;
}

std::uint64_t label_seed(std::uint64_t seed, const std::string& label) {
  return splitmix64(seed ^ fnv1a64(label));
}

namespace {

std::vector<std::optional<DocClfProbs>> out_of_fold_doc_probs(std::span<const Document> docs,
                                                              std::span<const int> y, const Hyperparams& hp,
                                                              std::uint64_t seed) {
  std::vector<int> classes(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) classes[i] = y[i] == 1 ? 0 : 1;
  std::vector<std::optional<DocClfProbs>> probs(docs.size());
  const std::size_t k = hp.doc_clf_folds;
  if (k < 2 || docs.size() < k) {
    for (auto& p : probs) p = DocClfProbs{0.5, 0.5};
    return probs;
  }
  const auto folds = stratified_kfold(y, k, seed);
  DocClfParams params = hp.doc_clf;
  params.seed = seed;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Document> train;
    std::vector<int> train_classes;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (folds[i] != static_cast<int>(f)) {
        train.push_back(docs[i]);
        train_classes.push_back(classes[i]);
      }
    }
    const bool both = std::count(train_classes.begin(), train_classes.end(), 0) > 0 &&
                      std::count(train_classes.begin(), train_classes.end(), 1) > 0;
    std::optional<DocClfModel> model;
    if (both) model = train_doc_classifier(train, train_classes, 2, params);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (folds[i] != static_cast<int>(f)) continue;
      probs[i] = model ? doc_class_probs(*model, docs[i]) : DocClfProbs{0.5, 0.5};
    }
  }
  return probs;
}

}  // namespace

LabelModel train_label_model(const LabelConfig& config, std::span<const LabelConfig> all_configs,
                             const ComponentWeights& weights, std::span<const Document> docs,
                             const Annotations& spans, const DecisionMap& gold, const TfidfModel& tfidf,
                             const Hyperparams& hp, std::uint64_t seed) {
  LabelModel model;
  model.config = config;
  model.weights = config.component_weights.value_or(weights);
  validate_component_weights(model.weights, "labels." + config.label);

  const auto y = label_targets(docs, gold, config.label);
  const auto n_pos = std::count(y.begin(), y.end(), 1);
  if (n_pos == 0 || static_cast<std::size_t>(n_pos) == y.size()) {
    model.constant_proba = n_pos == 0 ? 0.0 : 1.0;
    return model;
  }

  std::vector<std::optional<DocClfProbs>> probs;
  if (config.use_doc_clf) {
    probs = out_of_fold_doc_probs(docs, y, hp, seed);
    DocClfParams params = hp.doc_clf;
    params.seed = seed;
    std::vector<int> classes(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) classes[i] = y[i] == 1 ? 0 : 1;
    model.doc_clf = train_doc_classifier(docs, classes, 2, params);
  }

  const LabelFeaturizer featurizer(config, all_configs);
  const auto named = extract_batch_parallel(featurizer, docs, spans, tfidf, probs);
  std::set<std::string> names;
  for (const auto& v : named) {
    for (const auto& [name, w] : v) names.insert(name);
  }
  model.space = FeatureSpace(names);
  std::vector<SparseVec> X;
  X.reserve(named.size());
  for (const auto& v : named) X.push_back(model.space.encode(v));

  const std::size_t d = model.space.size();
  model.logreg = train_logreg(X, y, d, hp.logreg);
  SvmParams svm = hp.svm;
  svm.seed = seed;
  model.svm = train_linear_svm(X, y, d, svm);
  model.gbdt = train_gbdt(X, y, d, hp.gbdt);
  return model;
}

EnsembleModel train_ensemble(const LabelSchema& schema, std::span<const LabelConfig> configs,
                             const ComponentWeights& shared_weights, const Hyperparams& hp,
                             std::span<const Document> docs, const Annotations& spans, const DecisionMap& gold,
                             std::uint64_t seed) {
  validate_label_configs(configs, schema);
  validate_component_weights(shared_weights, "component_weights");
  validate_gold(gold, schema, docs);
  EnsembleModel model;
  model.schema = schema;
  model.tfidf = fit_tfidf(docs, hp.min_df);
  model.labels.resize(schema.size());
  parallel_for(schema.size(), [&](std::size_t i) {
    const auto& name = schema.names()[i];
    const auto it = std::find_if(configs.begin(), configs.end(), [&](const LabelConfig& c) { return c.label == name; });
    model.labels[i] = train_label_model(*it, configs, shared_weights, docs, spans, gold, model.tfidf, hp,
                                        label_seed(seed, name));
  });
  return model;
}

}  // namespace cohortsel
