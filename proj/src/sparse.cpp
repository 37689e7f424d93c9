// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "cohortsel/error.hpp"

namespace cohortsel {

SparseVec::SparseVec(const std::map<FeatureId, double>& entries) {
  entries_.reserve(entries.size());
  for (const auto& [id, w] : entries) {
    if (w != 0.0) entries_.emplace_back(id, w);
  }
}

SparseVec SparseVec::from_sorted(std::vector<Entry> entries) {
  SparseVec v;
  std::erase_if(entries, [](const Entry& e) { return e.second == 0.0; });
  v.entries_ = std::move(entries);
  return v;
}

double SparseVec::get(FeatureId id) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, FeatureId key) { return e.first < key; });
  return (it != entries_.end() && it->first == id) ? it->second : 0.0;
}

double SparseVec::norm() const noexcept {
  double s = 0;
  for (const auto& [id, w] : entries_) s += w * w;
  return std::sqrt(s);
}

double SparseVec::dot(std::span<const double> weights) const noexcept {
  double s = 0;
  for (const auto& [id, w] : entries_) {
    if (id < weights.size()) s += w * weights[id];
  }
  return s;
}

FeatureSpace::FeatureSpace(const std::set<std::string>& names) : names_(names.begin(), names.end()) {
  index_.reserve(names_.size());
  for (FeatureId i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
}

FeatureSpace FeatureSpace::from_names(std::vector<std::string> names) {
  FeatureSpace fs;
  fs.names_ = std::move(names);
  fs.index_.reserve(fs.names_.size());
  for (FeatureId i = 0; i < fs.names_.size(); ++i) {
    if (!fs.index_.emplace(fs.names_[i], i).second) throw Error("duplicate feature name '" + fs.names_[i] + "'");
  }
  return fs;
}

std::optional<FeatureId> FeatureSpace::id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view FeatureSpace::family(FeatureId id) const {
  std::string_view n = names_.at(id);
  return n.substr(0, n.find(':'));
}

SparseVec FeatureSpace::encode(const NamedVec& features) const {
  std::vector<SparseVec::Entry> entries;
  entries.reserve(features.size());
  for (const auto& [name, w] : features) {
    if (auto it = index_.find(name); it != index_.end()) entries.emplace_back(it->second, w);
  }
  std::sort(entries.begin(), entries.end());
  return SparseVec::from_sorted(std::move(entries));
}

}  // namespace cohortsel
