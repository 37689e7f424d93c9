// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/features.hpp"

namespace cohortsel {

// Document-level bag-of-n-grams classifier: hashed unigram+bigram
// embeddings are averaged into a hidden vector and fed to a softmax layer.

struct DocClfParams {
  std::size_t dim = 16;
  std::size_t bucket_count = std::size_t{1} << 18;
  std::size_t epochs = 5;
  double lr0 = 0.1;
  std::uint64_t seed = 0;
};

/// Unigram ids then bigram ids ("a b"), each FNV-1a 64 mod bucket_count.
std::vector<std::uint32_t> ngram_ids(std::span<const std::string> tokens, std::size_t bucket_count);
std::vector<std::uint32_t> ngram_ids(const Document& doc, std::size_t bucket_count);

class DocClfModel {
 public:
  DocClfModel() = default;
  DocClfModel(std::size_t dim, std::size_t bucket_count, std::size_t n_classes, std::uint64_t seed);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t bucket_count() const noexcept { return bucket_count_; }
  std::size_t n_classes() const noexcept { return n_classes_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // The embedding table is bucket_count x dim, but only rows touched by
  // training are stored; every other row equals its seeded initial value.
  const std::map<std::uint32_t, std::vector<double>>& trained_rows() const noexcept { return rows_; }
  /// dim x n_classes, row-major.
  const std::vector<double>& output() const noexcept { return output_; }

  /// Initial value of embedding cell (bucket, j): uniform in [-1/dim, 1/dim].
  double initial_value(std::uint32_t bucket, std::size_t j) const noexcept;
  /// Current embedding row for a bucket.
  std::vector<double> row(std::uint32_t bucket) const;

  std::vector<double> hidden(std::span<const std::uint32_t> ids) const;
  std::vector<double> predict_proba(std::span<const std::uint32_t> ids) const;
  std::vector<double> predict_proba(const Document& doc) const;

  /// Restores a serialized model; validates shapes and finiteness.
  static DocClfModel restore(std::size_t dim, std::size_t bucket_count, std::size_t n_classes, std::uint64_t seed,
                             std::map<std::uint32_t, std::vector<double>> rows, std::vector<double> output);

 private:
  friend class DocClfTrainer;

  std::vector<double>& mutable_row(std::uint32_t bucket);

  std::size_t dim_ = 0;
  std::size_t bucket_count_ = 1;
  std::size_t n_classes_ = 2;
  std::uint64_t seed_ = 0;
  std::map<std::uint32_t, std::vector<double>> rows_;
  std::vector<double> output_;
};

// Softmax SGD, one example at a time in a seed-shuffled order per epoch,
// learning rate decaying linearly from lr0 to 0 over all updates.
// `classes[i]` is in [0, n_classes). If `epoch_losses` is given, the mean
// training cross-entropy after each epoch is appended to it.
DocClfModel train_doc_classifier(std::span<const Document> docs, std::span<const int> classes, std::size_t n_classes,
                                 const DocClfParams& params, std::vector<double>* epoch_losses = nullptr);

/// Binary form for one label: class 0 = met, class 1 = not met.
DocClfModel train_doc_classifier(std::span<const Document> docs, const DecisionMap& gold, const std::string& label,
                                 const DocClfParams& params);

/// Mean cross-entropy of the model on a labelled set.
double doc_clf_loss(const DocClfModel& model, std::span<const Document> docs, std::span<const int> classes);

/// (P(met), P(not met)) for a binary model.
DocClfProbs doc_class_probs(const DocClfModel& model, const Document& doc);

}  // namespace cohortsel
