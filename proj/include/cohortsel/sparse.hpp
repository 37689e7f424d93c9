// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cohortsel {

using FeatureId = std::uint32_t;

// Sparse real vector. Entries are kept sorted by id and zero weights are
// never stored.
class SparseVec {
 public:
  using Entry = std::pair<FeatureId, double>;

  SparseVec() = default;
  explicit SparseVec(const std::map<FeatureId, double>& entries);
  /// Entries must be sorted by id without duplicates; zeros are dropped.
  static SparseVec from_sorted(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// 0 for absent ids.
  double get(FeatureId id) const noexcept;
  double norm() const noexcept;
  /// Ids at or past weights.size() contribute nothing.
  double dot(std::span<const double> weights) const noexcept;

  bool operator==(const SparseVec&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Feature name -> weight, before ids are assigned.
using NamedVec = std::map<std::string, double>;

// Bijective name <-> id registry. Ids follow the lexicographic order of the
// names seen at fit time; the space never grows afterwards.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  explicit FeatureSpace(const std::set<std::string>& names);
  /// Names in id order, as serialized.
  static FeatureSpace from_names(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<FeatureId> id(std::string_view name) const;
  const std::string& name(FeatureId id) const { return names_.at(id); }
  /// Text before the first ':' of the feature name (tfidf, kw, tag, gaz, ctx, dlc).
  std::string_view family(FeatureId id) const;

  /// Unknown names are dropped.
  SparseVec encode(const NamedVec& features) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, FeatureId> index_;
};

}  // namespace cohortsel
