// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/tuner.hpp"

#include <algorithm>
#include <cmath>

#include "cohortsel/ensemble.hpp"
#include "cohortsel/error.hpp"
#include "cohortsel/folds.hpp"
#include "cohortsel/kernels.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

std::vector<ComponentWeights> TunerGrid::component_candidates() const {
  std::vector<double> v = component_values;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<ComponentWeights> out;
  for (double a : v) {
    for (double b : v) {
      for (double c : v) {
        if (a == 0 && b == 0 && c == 0) continue;
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> TunerGrid::feature_candidates() const {
  std::vector<double> v = feature_values;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<std::vector<double>> out;
  for (double a : v) {
    for (double b : v) out.push_back({a, b});
  }
  return out;
}

std::size_t select_candidate(std::span<const CandidateScore> candidates) {
  if (candidates.empty()) throw Error("grid search: no candidates");
  auto l1_to_uniform = [](const std::vector<double>& w) {
    double d = 0;
    for (double v : w) d += std::abs(v - 1.0);
    return d;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const auto& b = candidates[best];
    const int cmp = compare_f1(c.counts, b.counts);
    if (cmp > 0) {
      best = i;
    } else if (cmp == 0) {
      const double dc = l1_to_uniform(c.weights), db = l1_to_uniform(b.weights);
      if (dc < db || (dc == db && c.weights < b.weights)) best = i;
    }
  }
  return best;
}

namespace {

struct FoldData {
  std::vector<Document> train;
  std::vector<std::size_t> test;  // indices into the full corpus
  TfidfModel tfidf;
};

Confusion count(std::span<const int> y, std::span<const ComponentProbs> probs, const ComponentWeights& w) {
  Confusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    c.add(y[i] == 1 ? Decision::met : Decision::not_met, decide(ensemble_scores(w, probs[i])));
  }
  return c;
}

}  // namespace

TuneResult grid_search_weights(std::span<const Document> docs, const Annotations& spans, const DecisionMap& gold,
                               const LabelSchema& schema, std::span<const LabelConfig> configs,
                               const ComponentWeights& baseline_weights, const Hyperparams& hp,
                               const TunerGrid& grid, std::size_t k, std::uint64_t seed) {
  validate_label_configs(configs, schema);
  validate_component_weights(baseline_weights, "component_weights");
  validate_gold(gold, schema, docs);
  const auto component_grid = grid.component_candidates();
  const auto feature_grid = grid.feature_candidates();
  if (component_grid.empty() || feature_grid.empty()) throw Error("grid search: empty grid");

  TuneResult result;
  result.seed = seed;
  result.folds = k;
  result.grid = grid;

  const std::size_t n_labels = schema.size();
  std::vector<const LabelConfig*> config_of(n_labels);
  std::vector<std::vector<int>> y(n_labels);
  std::vector<std::vector<FoldData>> folds(n_labels, std::vector<FoldData>(k));
  // Feature candidates per label: the grid plus the configured weights.
  std::vector<std::vector<std::vector<double>>> candidates(n_labels);
  std::vector<std::size_t> baseline_index(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) {
    const auto& name = schema.names()[l];
    config_of[l] = &*std::find_if(configs.begin(), configs.end(), [&](const LabelConfig& c) { return c.label == name; });
    y[l] = label_targets(docs, gold, name);
    const auto assignment = stratified_kfold(y[l], k, splitmix64(label_seed(seed, name) + 1));
    for (std::size_t i = 0; i < docs.size(); ++i) {
      auto& fd = folds[l][static_cast<std::size_t>(assignment[i])];
      fd.test.push_back(i);
    }
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (assignment[i] != static_cast<int>(f)) folds[l][f].train.push_back(docs[i]);
      }
      folds[l][f].tfidf = fit_tfidf(folds[l][f].train, hp.min_df);
    }
    candidates[l] = feature_grid;
    const std::vector<double> base{config_of[l]->tfidf_weight, config_of[l]->kw_weight};
    auto it = std::find(candidates[l].begin(), candidates[l].end(), base);
    if (it == candidates[l].end()) {
      candidates[l].push_back(base);
      it = candidates[l].end() - 1;
    }
    baseline_index[l] = static_cast<std::size_t>(it - candidates[l].begin());
  }

  // Out-of-fold component probabilities: probs[l][c][doc].
  struct Item {
    std::size_t label, candidate, fold;
  };
  std::vector<Item> items;
  std::vector<std::vector<std::vector<ComponentProbs>>> probs(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) {
    probs[l].assign(candidates[l].size(), std::vector<ComponentProbs>(docs.size()));
    for (std::size_t c = 0; c < candidates[l].size(); ++c) {
      for (std::size_t f = 0; f < k; ++f) items.push_back({l, c, f});
    }
  }
  std::vector<std::uint8_t> constant_fold(n_labels * k, 0);
  parallel_for(items.size(), [&](std::size_t idx) {
    const auto [l, c, f] = items[idx];
    const auto& fd = folds[l][f];
    LabelConfig cfg = *config_of[l];
    cfg.tfidf_weight = candidates[l][c][0];
    cfg.kw_weight = candidates[l][c][1];
    const LabelModel model = train_label_model(cfg, configs, baseline_weights, fd.train, spans, gold, fd.tfidf, hp,
                                               label_seed(seed, cfg.label));
    if (model.constant_proba) constant_fold[l * k + f] = 1;
    for (std::size_t i : fd.test) {
      auto it = spans.find(docs[i].id);
      std::span<const NerSpan> s;
      if (it != spans.end()) s = it->second;
      probs[l][c][i] = component_probs(model, label_features(model, configs, docs[i], s, fd.tfidf));
    }
  });
  for (std::size_t l = 0; l < n_labels; ++l) {
    for (std::size_t f = 0; f < k; ++f) {
      if (constant_fold[l * k + f]) result.fallbacks.push_back({schema.names()[l], static_cast<int>(f)});
    }
  }

  auto weights_for = [&](std::size_t l, const ComponentWeights& shared) {
    return config_of[l]->component_weights.value_or(shared);
  };

  // Stage 1: feature-family weights, one label at a time.
  std::vector<Confusion> baseline_counts(n_labels);
  Confusion baseline_total;
  for (std::size_t l = 0; l < n_labels; ++l) {
    baseline_counts[l] = count(y[l], probs[l][baseline_index[l]], weights_for(l, baseline_weights));
    baseline_total += baseline_counts[l];
  }
  std::vector<std::size_t> chosen(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) {
    std::vector<CandidateScore> scores;
    for (std::size_t c = 0; c < candidates[l].size(); ++c) {
      Confusion pooled;
      for (std::size_t o = 0; o < n_labels; ++o) {
        pooled += o == l ? count(y[l], probs[l][c], weights_for(l, baseline_weights)) : baseline_counts[o];
      }
      scores.push_back({candidates[l][c], pooled, pooled.f1()});
    }
    chosen[l] = select_candidate(scores);
    result.feature_weights[schema.names()[l]] = {candidates[l][chosen[l]][0], candidates[l][chosen[l]][1]};
    result.feature_scores[schema.names()[l]] = std::move(scores);
  }

  // Stage 2: shared component weights.
  for (const auto& w : component_grid) {
    Confusion pooled;
    for (std::size_t l = 0; l < n_labels; ++l) pooled += count(y[l], probs[l][chosen[l]], weights_for(l, w));
    result.component_scores.push_back({{w[0], w[1], w[2]}, pooled, pooled.f1()});
  }
  const auto& best = result.component_scores[select_candidate(result.component_scores)].weights;
  result.component_weights = {best[0], best[1], best[2]};

  DecisionMap pred;
  DecisionMap truth;
  for (std::size_t l = 0; l < n_labels; ++l) {
    const auto& name = schema.names()[l];
    const auto w = weights_for(l, result.component_weights);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      pred[docs[i].id][name] = decide(ensemble_scores(w, probs[l][chosen[l]][i]));
      truth[docs[i].id][name] = y[l][i] == 1 ? Decision::met : Decision::not_met;
    }
  }
  result.cv_report = micro_f1(truth, pred);
  return result;
}

std::vector<LabelConfig> apply_tuned(std::span<const LabelConfig> configs, const TuneResult& result) {
  std::vector<LabelConfig> out(configs.begin(), configs.end());
  for (auto& c : out) {
    if (auto it = result.feature_weights.find(c.label); it != result.feature_weights.end()) {
      c.tfidf_weight = it->second.first;
      c.kw_weight = it->second.second;
    }
  }
  return out;
}

}  // namespace cohortsel
