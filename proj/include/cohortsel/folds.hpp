// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cohortsel {

// Positives and negatives are shuffled independently and dealt round-robin;
// negatives continue from the fold after the last positive so fold sizes
// also stay within one of each other. Returns the fold of each sample.
// Throws Error if k < 2 or y.size() < k.
std::vector<int> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed);

struct FoldAssignment {
  std::size_t k = 0;
  std::map<std::string, int> fold_of;  // doc id -> fold in [0, k)
};

FoldAssignment stratified_kfold(std::span<const std::string> doc_ids, std::span<const int> y, std::size_t k,
                                std::uint64_t seed);

}  // namespace cohortsel
