// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cohortsel/error.hpp"
#include "cohortsel/evaluation.hpp"
#include "cohortsel/folds.hpp"
#include "cohortsel/resources.hpp"
#include "cohortsel/synthetic.hpp"
#include "cohortsel/tuner.hpp"
#include "cohortsel/util.hpp"

using namespace cohortsel;

namespace {

std::vector<std::size_t> positives_per_fold(const std::vector<int>& y, const std::vector<int>& fold, std::size_t k) {
  std::vector<std::size_t> out(k, 0);
  for (std::size_t i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(fold[i])] += y[i] == 1;
  return out;
}

DecisionMap random_matrix(Rng& rng, std::size_t docs, const std::vector<std::string>& labels) {
  DecisionMap m;
  for (std::size_t d = 0; d < docs; ++d) {
    for (const auto& l : labels) m["d" + std::to_string(d)][l] = rng.bernoulli(0.5) ? Decision::met : Decision::not_met;
  }
  return m;
}

CandidateScore scored(std::vector<double> w, std::size_t tp, std::size_t fp, std::size_t fn) {
  Confusion c;
  c.tp = tp;
  c.fp = fp;
  c.fn = fn;
  return {std::move(w), c, c.f1()};
}

}  // namespace

TEST_CASE("stratified folds: exact divisibility and round robin") {
  const std::vector<int> y{1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
  const auto f = stratified_kfold(y, 5, 3);
  for (std::size_t k = 0; k < 5; ++k) {
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (f[i] == static_cast<int>(k)) (y[i] ? pos : neg) += 1;
    }
    CHECK(pos == 1);
    CHECK(neg == 1);
  }

  std::vector<int> seven(12, 0);
  std::fill(seven.begin(), seven.begin() + 7, 1);
  auto counts = positives_per_fold(seven, stratified_kfold(seven, 5, 1), 5);
  std::sort(counts.begin(), counts.end());
  CHECK(counts == std::vector<std::size_t>{1, 1, 1, 2, 2});

  CHECK(stratified_kfold(seven, 5, 9) == stratified_kfold(seven, 5, 9));
  CHECK_THROWS_AS(stratified_kfold(std::vector<int>{1, 0, 1}, 5, 1), Error);
  CHECK_THROWS_AS(stratified_kfold(seven, 1, 1), Error);
}

TEST_CASE("stratified folds partition and balance random label vectors") {
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.below(200);
    std::vector<int> y(n);
    const double rate = rng.uniform();
    for (auto& v : y) v = rng.bernoulli(rate) ? 1 : 0;
    const auto f = stratified_kfold(y, 5, rng.next());
    REQUIRE(f.size() == n);
    std::vector<std::size_t> sizes(5, 0);
    for (int v : f) {
      REQUIRE(v >= 0);
      REQUIRE(v < 5);
      ++sizes[static_cast<std::size_t>(v)];
    }
    const auto pos = positives_per_fold(y, f, 5);
    CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
  }
}

TEST_CASE("fold assignment by document id") {
  const std::vector<std::string> ids{"a", "b", "c", "d"};
  const std::vector<int> y{1, 0, 1, 0};
  const auto fa = stratified_kfold(ids, y, 2, 5);
  CHECK(fa.k == 2);
  CHECK(fa.fold_of.size() == 4);
}

TEST_CASE("micro F1 arithmetic and identity") {
  Confusion c;
  c.tp = 8;
  c.fp = 2;
  c.fn = 2;
  CHECK(c.precision() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(c.recall() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(c.f1() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(Confusion{}.f1() == 0.0);

  Rng rng(1);
  const auto gold = random_matrix(rng, 10, default_schema().names());
  const auto r = micro_f1(gold, gold);
  CHECK(r.micro_f1 == 1.0);
}

TEST_CASE("micro F1 equals a brute-force confusion count") {
  Rng rng(2718);
  const auto labels = default_schema().names();
  for (int trial = 0; trial < 100; ++trial) {
    const auto gold = random_matrix(rng, 20, labels);
    const auto pred = random_matrix(rng, 20, labels);
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t d = 0; d < 20; ++d) {
      for (const auto& l : labels) {
        const bool g = gold.at("d" + std::to_string(d)).at(l) == Decision::met;
        const bool p = pred.at("d" + std::to_string(d)).at(l) == Decision::met;
        tp += g && p;
        fp += !g && p;
        fn += g && !p;
        tn += !g && !p;
      }
    }
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    const auto r = micro_f1(gold, pred);
    CHECK(r.micro.tp == tp);
    CHECK(r.micro.fp == fp);
    CHECK(r.micro.fn == fn);
    CHECK(r.micro.tn == tn);
    CHECK(r.micro_p == precision);
    CHECK(r.micro_r == recall);
    CHECK(r.micro_f1 == f1);
    for (const auto& [label, counts] : r.per_label) CHECK(counts.tp + counts.fp + counts.fn + counts.tn == 20);
  }
}

TEST_CASE("micro F1 ignores document order and names") {
  Rng rng(8);
  const auto labels = default_schema().names();
  const auto gold = random_matrix(rng, 20, labels);
  const auto pred = random_matrix(rng, 20, labels);
  std::vector<std::size_t> perm(20);
  for (std::size_t i = 0; i < 20; ++i) perm[i] = i;
  rng.shuffle(perm);
  DecisionMap g2, p2;
  for (std::size_t i = 0; i < 20; ++i) {
    g2["z" + std::to_string(perm[i])] = gold.at("d" + std::to_string(i));
    p2["z" + std::to_string(perm[i])] = pred.at("d" + std::to_string(i));
  }
  CHECK(micro_f1(g2, p2).micro == micro_f1(gold, pred).micro);
}

TEST_CASE("micro F1 reports mismatches") {
  const DecisionMap gold{{"a", {{"X", Decision::met}}}};
  CHECK_THROWS_WITH_AS(micro_f1(gold, DecisionMap{}), doctest::Contains("'a'"), Error);
  CHECK_THROWS_WITH_AS(micro_f1(gold, DecisionMap{{"a", {{"Y", Decision::met}}}}), doctest::Contains("X"), Error);
  CHECK_THROWS_AS(micro_f1(gold, DecisionMap{{"a", {{"X", Decision::met}}}, {"b", {{"X", Decision::met}}}}), Error);
}

TEST_CASE("report table shows two decimals") {
  Confusion c;
  c.tp = 83;
  c.fp = 17;
  c.fn = 17;
  EvalReport r;
  r.per_label["A"] = c;
  r.micro = c;
  r.micro_p = c.precision();
  r.micro_r = c.recall();
  r.micro_f1 = c.f1();
  const auto table = format_report_table(r);
  CHECK(table.find("83.00") != std::string::npos);
  CHECK(table.find("micro") != std::string::npos);
}

TEST_CASE("compare_f1 is exact") {
  Confusion a, b;
  a.tp = 1;
  a.fp = 2;
  b.tp = 2;
  b.fp = 4;
  CHECK(compare_f1(a, b) == 0);
  b.fn = 1;
  CHECK(compare_f1(a, b) > 0);
  CHECK(compare_f1(b, a) < 0);
}

TEST_CASE("candidate selection rules") {
  std::vector<CandidateScore> one{scored({0, 0, 1}, 5, 1, 1)};
  CHECK(select_candidate(one) == 0);

  std::vector<CandidateScore> dominant{scored({1, 1, 1}, 5, 3, 3), scored({2, 0, 0}, 9, 0, 0)};
  CHECK(select_candidate(dominant) == 1);

  // Equal F1: closest to all-ones wins, then the lexicographically smallest.
  std::vector<CandidateScore> tie{scored({2, 2, 2}, 4, 1, 1), scored({1, 1, 1.5}, 8, 2, 2), scored({0.5, 1, 1}, 4, 1, 1)};
  CHECK(select_candidate(tie) == 2);
  CHECK_THROWS_AS(select_candidate(std::vector<CandidateScore>{}), Error);
}

TEST_CASE("component grid excludes the all-zero point") {
  const TunerGrid grid;
  const auto c = grid.component_candidates();
  CHECK(c.size() == 124);
  for (const auto& w : c) CHECK((w[0] > 0 || w[1] > 0 || w[2] > 0));
  CHECK(grid.feature_candidates().size() == 9);
}

TEST_CASE("grid search is deterministic and covers every document once") {
  const LabelSchema schema({"ADVANCED-CAD", "CREATININE", "LABEL-07"});
  const auto data = generate_synthetic(21, 60, schema);
  std::vector<LabelConfig> configs;
  for (const auto& c : default_label_configs()) {
    if (schema.contains(c.label)) configs.push_back(c);
  }
  Hyperparams hp;
  hp.gbdt.rounds = 10;
  hp.svm.epochs = 5;
  TunerGrid grid;
  grid.component_values = {0.0, 1.0};
  grid.feature_values = {1.0, 2.0};
  const auto a = grid_search_weights(data.corpus, data.annotations, data.gold, schema, configs, {1, 1, 1}, hp, grid, 3, 42);
  const auto b = grid_search_weights(data.corpus, data.annotations, data.gold, schema, configs, {1, 1, 1}, hp, grid, 3, 42);
  CHECK(a.component_weights == b.component_weights);
  CHECK(a.feature_weights == b.feature_weights);
  CHECK(a.cv_report.micro == b.cv_report.micro);
  CHECK((a.component_weights[0] > 0 || a.component_weights[1] > 0 || a.component_weights[2] > 0));
  CHECK(a.component_scores.size() == 7);
  for (const auto& [label, counts] : a.cv_report.per_label) CHECK(counts.tp + counts.fp + counts.fn + counts.tn == 60);
  CHECK(a.feature_weights.size() == 3);
  CHECK(a.fallbacks.empty());

  const auto tuned = apply_tuned(configs, a);
  for (const auto& c : tuned) {
    CHECK(c.tfidf_weight == a.feature_weights.at(c.label).first);
    CHECK(c.kw_weight == a.feature_weights.at(c.label).second);
  }
}

TEST_CASE("grid search with a single candidate returns it") {
  const LabelSchema schema({"LABEL-07", "LABEL-08"});
  const auto data = generate_synthetic(3, 30, schema);
  std::vector<LabelConfig> configs(2);
  configs[0].label = "LABEL-07";
  configs[1].label = "LABEL-08";
  Hyperparams hp;
  hp.gbdt.rounds = 5;
  TunerGrid grid;
  grid.component_values = {1.0};
  grid.feature_values = {1.0};
  const auto r = grid_search_weights(data.corpus, data.annotations, data.gold, schema, configs, {1, 1, 1}, hp, grid, 2, 1);
  CHECK(r.component_weights == ComponentWeights{1, 1, 1});
  REQUIRE(r.component_scores.size() == 1);
  CHECK(r.component_scores[0].micro_f1 == r.cv_report.micro_f1);
}

TEST_CASE("single-class folds fall back to the base rate and are recorded") {
  const LabelSchema schema({"LABEL-07", "RARE"});
  auto data = generate_synthetic(6, 30, LabelSchema({"LABEL-07", "LABEL-08"}));
  DecisionMap gold;
  for (const auto& [doc, labels] : data.gold) {
    gold[doc]["LABEL-07"] = labels.at("LABEL-07");
    gold[doc]["RARE"] = Decision::not_met;
  }
  gold[data.corpus.front().id]["RARE"] = Decision::met;
  std::vector<LabelConfig> configs(2);
  configs[0].label = "LABEL-07";
  configs[1].label = "RARE";
  Hyperparams hp;
  hp.gbdt.rounds = 5;
  TunerGrid grid;
  grid.component_values = {1.0};
  grid.feature_values = {1.0};
  const auto r = grid_search_weights(data.corpus, data.annotations, gold, schema, configs, {1, 1, 1}, hp, grid, 3, 1);
  // One positive: the two folds that do not hold it out train on it, the
  // fold that does trains on negatives only.
  std::size_t rare = 0;
  for (const auto& f : r.fallbacks) rare += f.label == "RARE";
  CHECK(rare == 1);
}
