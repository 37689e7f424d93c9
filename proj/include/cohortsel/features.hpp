// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/sparse.hpp"

namespace cohortsel {

/// Per-component ensemble weights, in the order (logreg, svm, gbdt).
using ComponentWeights = std::array<double, 3>;

// A phrase list whose matches emit features from the surrounding tokens.
// Gazetteers are named by `name`; trigger sets are named after the label
// that owns them.
struct WindowSpec {
  std::string name;
  std::vector<std::string> phrases;
  int window = 5;
  double weight = 2.0;
  std::string source;  // file the phrases came from; empty for built-in lists
};

struct LabelConfig {
  std::string label;
  double tfidf_weight = 1.0;
  double kw_weight = 1.0;
  std::vector<WindowSpec> gazetteers;
  std::vector<WindowSpec> triggers;
  std::vector<std::string> imports;  // labels whose trigger contexts are also emitted
  bool use_doc_clf = true;
  std::optional<ComponentWeights> component_weights;  // overrides the shared weights
};

/// Throws Error on negative/non-finite weights, windows < 1 or unresolvable imports.
void validate_label_configs(std::span<const LabelConfig> configs, const LabelSchema& schema);

struct TfidfModel {
  std::vector<std::string> vocabulary;  // sorted; index is the term id
  std::vector<std::size_t> df;
  std::size_t n_docs = 0;

  std::optional<FeatureId> id(const std::string& term) const;
  /// ln((1 + N) / (1 + df)) + 1
  double idf(FeatureId id) const;

  /// Rebuilds the term index; call after filling the fields by hand.
  void reindex();

 private:
  std::unordered_map<std::string, FeatureId> index_;
};

TfidfModel fit_tfidf(std::span<const Document> train_docs, std::size_t min_df);

/// Raw tf times smoothed idf, L2-normalized. Ids are vocabulary indices.
SparseVec tfidf_vector(const TfidfModel& model, const Document& doc);

// kw:<surface> += kw_weight for every token covered by a span, and
// tag:<tag> += 1 per span.
NamedVec ner_keyword_features(const Document& doc, std::span<const NerSpan> spans, double kw_weight);

/// Adds `weight` to <prefix><surface> for each token within `window` tokens of a match.
void add_window_features(const Document& doc, const PhraseMatcher& matcher, int window, double weight,
                         const std::string& prefix, NamedVec& out);

NamedVec gazetteer_features(const Document& doc, const WindowSpec& gazetteer);
NamedVec context_features(const Document& doc, const WindowSpec& triggers);

/// Doc-level classifier output (P(met), P(not met)).
using DocClfProbs = std::pair<double, double>;

// Compiled form of one label's feature recipe. Immutable after construction
// and safe to share between threads.
class LabelFeaturizer {
 public:
  LabelFeaturizer(const LabelConfig& config, std::span<const LabelConfig> all_configs);

  const LabelConfig& config() const noexcept { return config_; }

  NamedVec extract(const Document& doc, std::span<const NerSpan> spans, const TfidfModel& tfidf,
                   const std::optional<DocClfProbs>& doc_clf_probs) const;

 private:
  struct Compiled {
    std::string prefix;
    PhraseMatcher matcher;
    int window;
    double weight;
  };

  LabelConfig config_;
  std::vector<Compiled> windows_;
};

/// One-shot form of LabelFeaturizer::extract.
NamedVec assemble(const Document& doc, std::span<const NerSpan> spans, const TfidfModel& tfidf,
                  const std::optional<DocClfProbs>& doc_clf_probs, const LabelConfig& config,
                  std::span<const LabelConfig> all_configs);

}  // namespace cohortsel
