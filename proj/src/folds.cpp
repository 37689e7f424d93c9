// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/folds.hpp"

#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

std::vector<int> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be >= 2");
  if (y.size() < k) {
    throw Error("stratified_kfold: " + std::to_string(y.size()) + " samples cannot fill " + std::to_string(k) +
                " folds");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> fold(y.size(), 0);
  std::size_t next = 0;
  for (const auto* group : {&pos, &neg}) {
    for (std::size_t i : *group) {
      fold[i] = static_cast<int>(next);
      next = (next + 1) % k;
    }
  }
  return fold;
}

FoldAssignment stratified_kfold(std::span<const std::string> doc_ids, std::span<const int> y, std::size_t k,
                                std::uint64_t seed) {
  if (doc_ids.size() != y.size()) throw Error("stratified_kfold: ids and labels differ in length");
  const auto folds = stratified_kfold(y, k, seed);
  FoldAssignment out{k, {}};
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    if (!out.fold_of.emplace(doc_ids[i], folds[i]).second) {
      throw Error("stratified_kfold: duplicate document id '" + doc_ids[i] + "'");
    }
  }
  return out;
}

}  // namespace cohortsel
