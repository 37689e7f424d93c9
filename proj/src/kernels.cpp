// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include <omp.h>

#include "cohortsel/error.hpp"

namespace cohortsel {

ColumnMatrix ColumnMatrix::from_rows(std::span<const SparseVec> X, std::size_t n_features) {
  ColumnMatrix m;
  m.n_rows = X.size();
  m.n_features = n_features;
  m.col_start.assign(n_features + 1, 0);
  for (const auto& row : X) {
    for (const auto& [id, v] : row) {
      if (id >= n_features) throw Error("design matrix: feature id out of range");
      ++m.col_start[id + 1];
    }
  }
  for (std::size_t f = 0; f < n_features; ++f) m.col_start[f + 1] += m.col_start[f];
  m.rows.resize(m.col_start.back());
  m.values.resize(m.col_start.back());
  std::vector<std::size_t> fill(m.col_start.begin(), m.col_start.end() - 1);
  for (std::uint32_t r = 0; r < X.size(); ++r) {
    for (const auto& [id, v] : X[r]) {
      m.rows[fill[id]] = r;
      m.values[fill[id]] = v;
      ++fill[id];
    }
  }
  std::vector<std::pair<double, std::uint32_t>> tmp;
  for (std::size_t f = 0; f < n_features; ++f) {
    const std::size_t b = m.col_start[f], e = m.col_start[f + 1];
    tmp.clear();
    for (std::size_t i = b; i < e; ++i) tmp.emplace_back(m.values[i], m.rows[i]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t i = b; i < e; ++i) {
      m.values[i] = tmp[i - b].first;
      m.rows[i] = tmp[i - b].second;
    }
  }
  return m;
}

namespace {

struct ValueGroup {
  double value;
  std::size_t count;
  double sum;
};

}  // namespace

SplitCandidate best_split_for_feature(const ColumnMatrix& X, FeatureId feature, std::span<const double> residuals,
                                      std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf) {
  thread_local std::vector<ValueGroup> groups;
  groups.clear();
  std::size_t nonzero = 0;
  double nonzero_sum = 0;
  std::size_t first_positive = static_cast<std::size_t>(-1);
  for (std::size_t i = X.col_start[feature]; i < X.col_start[feature + 1]; ++i) {
    const std::uint32_t r = X.rows[i];
    if (!in_node[r]) continue;
    const double v = X.values[i];
    if (v > 0 && first_positive == static_cast<std::size_t>(-1)) first_positive = groups.size();
    ++nonzero;
    nonzero_sum += residuals[r];
    if (!groups.empty() && groups.back().value == v) {
      ++groups.back().count;
      groups.back().sum += residuals[r];
    } else {
      groups.push_back({v, 1, residuals[r]});
    }
  }
  // Members absent from the column hold an implicit 0.
  if (nonzero < node.count) {
    if (first_positive == static_cast<std::size_t>(-1)) first_positive = groups.size();
    groups.insert(groups.begin() + static_cast<std::ptrdiff_t>(first_positive),
                  ValueGroup{0.0, node.count - nonzero, node.sum - nonzero_sum});
  }

  SplitCandidate best;
  if (groups.size() < 2) return best;
  const double n = static_cast<double>(node.count);
  const double base = node.sum * node.sum / n;
  std::size_t left_count = 0;
  double left_sum = 0;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    left_count += groups[g].count;
    left_sum += groups[g].sum;
    const std::size_t right_count = node.count - left_count;
    if (left_count < min_leaf || right_count < min_leaf) continue;
    const double right_sum = node.sum - left_sum;
    const double gain = left_sum * left_sum / static_cast<double>(left_count) +
                        right_sum * right_sum / static_cast<double>(right_count) - base;
    if (gain > kMinSplitGain && (!best.valid || gain > best.gain)) {
      best = {true, feature, 0.5 * (groups[g].value + groups[g + 1].value), gain, left_count};
    }
  }
  return best;
}

namespace {

SplitCandidate reduce_candidates(const std::vector<SplitCandidate>& per_feature) {
  SplitCandidate best;
  for (const auto& c : per_feature) {
    if (c.valid && (!best.valid || c.gain > best.gain)) best = c;
  }
  return best;
}

}  // namespace

SplitCandidate best_split_serial(const ColumnMatrix& X, std::span<const double> residuals,
                                 std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf) {
  std::vector<SplitCandidate> per_feature(X.n_features);
  for (std::size_t f = 0; f < X.n_features; ++f) {
    per_feature[f] = best_split_for_feature(X, static_cast<FeatureId>(f), residuals, in_node, node, min_leaf);
  }
  return reduce_candidates(per_feature);
}

SplitCandidate best_split_parallel(const ColumnMatrix& X, std::span<const double> residuals,
                                   std::span<const std::uint8_t> in_node, NodeStats node, std::size_t min_leaf) {
  std::vector<SplitCandidate> per_feature(X.n_features);
  const auto n = static_cast<std::int64_t>(X.n_features);
#pragma omp parallel for schedule(dynamic, 256) if (n > 512 && !omp_in_parallel())
  for (std::int64_t f = 0; f < n; ++f) {
    per_feature[static_cast<std::size_t>(f)] =
        best_split_for_feature(X, static_cast<FeatureId>(f), residuals, in_node, node, min_leaf);
  }
  return reduce_candidates(per_feature);
}

namespace {

std::span<const NerSpan> spans_of(const Annotations& spans, const std::string& id) {
  auto it = spans.find(id);
  if (it == spans.end()) return {};
  return it->second;
}

std::optional<DocClfProbs> probs_of(std::span<const std::optional<DocClfProbs>> probs, std::size_t i) {
  return probs.empty() ? std::nullopt : probs[i];
}

}  // namespace

std::vector<NamedVec> extract_batch_serial(const LabelFeaturizer& featurizer, std::span<const Document> docs,
                                           const Annotations& spans, const TfidfModel& tfidf,
                                           std::span<const std::optional<DocClfProbs>> doc_clf_probs) {
  std::vector<NamedVec> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out[i] = featurizer.extract(docs[i], spans_of(spans, docs[i].id), tfidf, probs_of(doc_clf_probs, i));
  }
  return out;
}

std::vector<NamedVec> extract_batch_parallel(const LabelFeaturizer& featurizer, std::span<const Document> docs,
                                             const Annotations& spans, const TfidfModel& tfidf,
                                             std::span<const std::optional<DocClfProbs>> doc_clf_probs) {
  std::vector<NamedVec> out(docs.size());
  parallel_for(docs.size(), [&](std::size_t k) {
    out[k] = featurizer.extract(docs[k], spans_of(spans, docs[k].id), tfidf, probs_of(doc_clf_probs, k));
  });
  return out;
}

int configured_threads() {
  const char* env = std::getenv("COHORTSEL_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  int n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size() || n < 0) {
    throw Error(std::string("COHORTSEL_THREADS must be a non-negative integer, got '") + env + "'");
  }
  return n;
}

void apply_thread_limit() {
  if (const int n = configured_threads(); n > 0) omp_set_num_threads(n);
}

}  // namespace cohortsel
