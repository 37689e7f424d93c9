// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/doc_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

std::vector<std::uint32_t> ngram_ids(std::span<const std::string> tokens, std::size_t bucket_count) {
  if (bucket_count == 0) throw Error("ngram_ids: bucket_count must be >= 1");
  std::vector<std::uint32_t> ids;
  if (tokens.empty()) return ids;
  ids.reserve(2 * tokens.size() - 1);
  for (const auto& t : tokens) ids.push_back(static_cast<std::uint32_t>(fnv1a64(t) % bucket_count));
  std::string bigram;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    bigram.assign(tokens[i]);
    bigram += ' ';
    bigram += tokens[i + 1];
    ids.push_back(static_cast<std::uint32_t>(fnv1a64(bigram) % bucket_count));
  }
  return ids;
}

std::vector<std::uint32_t> ngram_ids(const Document& doc, std::size_t bucket_count) {
  std::vector<std::string> surfaces;
  surfaces.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) surfaces.push_back(t.surface);
  return ngram_ids(surfaces, bucket_count);
}

DocClfModel::DocClfModel(std::size_t dim, std::size_t bucket_count, std::size_t n_classes, std::uint64_t seed)
    : dim_(dim), bucket_count_(bucket_count), n_classes_(n_classes), seed_(seed), output_(dim * n_classes, 0.0) {
  if (dim == 0) throw Error("doc classifier: dim must be >= 1");
  if (bucket_count == 0 || bucket_count > (std::size_t{1} << 32)) {
    throw Error("doc classifier: bucket_count must be in [1, 2^32]");
  }
  if (n_classes < 2) throw Error("doc classifier: n_classes must be >= 2");
}

double DocClfModel::initial_value(std::uint32_t bucket, std::size_t j) const noexcept {
  const std::uint64_t cell = static_cast<std::uint64_t>(bucket) * dim_ + j;
  const double u = static_cast<double>(splitmix64(seed_ ^ splitmix64(cell)) >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) / static_cast<double>(dim_);
}

std::vector<double> DocClfModel::row(std::uint32_t bucket) const {
  if (auto it = rows_.find(bucket); it != rows_.end()) return it->second;
  std::vector<double> r(dim_);
  for (std::size_t j = 0; j < dim_; ++j) r[j] = initial_value(bucket, j);
  return r;
}

std::vector<double>& DocClfModel::mutable_row(std::uint32_t bucket) {
  auto it = rows_.find(bucket);
  if (it == rows_.end()) it = rows_.emplace(bucket, row(bucket)).first;
  return it->second;
}

std::vector<double> DocClfModel::hidden(std::span<const std::uint32_t> ids) const {
  std::vector<double> h(dim_, 0.0);
  if (ids.empty()) return h;
  for (auto id : ids) {
    if (auto it = rows_.find(id); it != rows_.end()) {
      for (std::size_t j = 0; j < dim_; ++j) h[j] += it->second[j];
    } else {
      for (std::size_t j = 0; j < dim_; ++j) h[j] += initial_value(id, j);
    }
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (auto& v : h) v *= inv;
  return h;
}

namespace {

std::vector<double> softmax_logits(const std::vector<double>& output, std::span<const double> h,
                                   std::size_t n_classes) {
  std::vector<double> z(n_classes, 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (std::size_t c = 0; c < n_classes; ++c) z[c] += h[j] * output[j * n_classes + c];
  }
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (auto& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : z) v /= sum;
  return z;
}

}  // namespace

std::vector<double> DocClfModel::predict_proba(std::span<const std::uint32_t> ids) const {
  return softmax_logits(output_, hidden(ids), n_classes_);
}

std::vector<double> DocClfModel::predict_proba(const Document& doc) const {
  return predict_proba(ngram_ids(doc, bucket_count_));
}

DocClfModel DocClfModel::restore(std::size_t dim, std::size_t bucket_count, std::size_t n_classes, std::uint64_t seed,
                                 std::map<std::uint32_t, std::vector<double>> rows, std::vector<double> output) {
  DocClfModel m(dim, bucket_count, n_classes, seed);
  if (output.size() != dim * n_classes) throw Error("doc classifier: output matrix has wrong size");
  for (const auto& [bucket, r] : rows) {
    if (bucket >= bucket_count || r.size() != dim) throw Error("doc classifier: bad embedding row");
    for (double v : r) {
      if (!std::isfinite(v)) throw Error("doc classifier: non-finite embedding weight");
    }
  }
  for (double v : output) {
    if (!std::isfinite(v)) throw Error("doc classifier: non-finite output weight");
  }
  m.rows_ = std::move(rows);
  m.output_ = std::move(output);
  return m;
}

class DocClfTrainer {
 public:
  static void update(DocClfModel& m, std::span<const std::uint32_t> ids, int target, double lr) {
    if (ids.empty()) return;
    const std::size_t dim = m.dim_, nc = m.n_classes_;
    const auto h = m.hidden(ids);
    const auto p = softmax_logits(m.output_, h, nc);
    std::vector<double> alpha(nc);
    for (std::size_t c = 0; c < nc; ++c) alpha[c] = lr * ((static_cast<int>(c) == target ? 1.0 : 0.0) - p[c]);
    std::vector<double> grad(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t c = 0; c < nc; ++c) {
        grad[j] += alpha[c] * m.output_[j * nc + c];
        m.output_[j * nc + c] += alpha[c] * h[j];
      }
    }
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (auto id : ids) {
      auto& r = m.mutable_row(id);
      for (std::size_t j = 0; j < dim; ++j) r[j] += grad[j] * inv;
    }
  }
};

DocClfModel train_doc_classifier(std::span<const Document> docs, std::span<const int> classes, std::size_t n_classes,
                                 const DocClfParams& params, std::vector<double>* epoch_losses) {
  if (docs.size() != classes.size()) throw Error("doc classifier: documents and classes differ in length");
  std::vector<std::size_t> per_class(n_classes, 0);
  for (int c : classes) {
    if (c < 0 || static_cast<std::size_t>(c) >= n_classes) throw Error("doc classifier: class out of range");
    ++per_class[static_cast<std::size_t>(c)];
  }
  if (std::count_if(per_class.begin(), per_class.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw Error("doc classifier: degenerate labels (fewer than two classes present)");
  }

  DocClfModel model(params.dim, params.bucket_count, n_classes, params.seed);
  std::vector<std::vector<std::uint32_t>> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) ids.push_back(ngram_ids(d, params.bucket_count));

  Rng rng(params.seed);
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double total = static_cast<double>(params.epochs * docs.size());
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const double lr = params.lr0 * (1.0 - static_cast<double>(step) / total);
      DocClfTrainer::update(model, ids[i], classes[i], lr);
      ++step;
    }
    if (epoch_losses) epoch_losses->push_back(doc_clf_loss(model, docs, classes));
  }
  return model;
}

DocClfModel train_doc_classifier(std::span<const Document> docs, const DecisionMap& gold, const std::string& label,
                                 const DocClfParams& params) {
  std::vector<int> classes;
  classes.reserve(docs.size());
  for (const auto& d : docs) {
    auto row = gold.find(d.id);
    if (row == gold.end() || !row->second.contains(label)) {
      throw Error("doc classifier: no gold decision for " + d.id + "/" + label);
    }
    classes.push_back(row->second.at(label) == Decision::met ? 0 : 1);
  }
  return train_doc_classifier(docs, classes, 2, params);
}

double doc_clf_loss(const DocClfModel& model, std::span<const Document> docs, std::span<const int> classes) {
  double loss = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto p = model.predict_proba(docs[i]);
    loss -= std::log(std::max(p[static_cast<std::size_t>(classes[i])], 1e-300));
  }
  return docs.empty() ? 0.0 : loss / static_cast<double>(docs.size());
}

DocClfProbs doc_class_probs(const DocClfModel& model, const Document& doc) {
  const auto p = model.predict_proba(doc);
  return {p[0], p[1]};
}

}  // namespace cohortsel
