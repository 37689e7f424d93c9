// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cohortsel/sparse.hpp"
#include "cohortsel/util.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(COHORTSEL_FIXTURES) / name; }

struct Table {
  std::vector<cohortsel::SparseVec> X;
  std::vector<int> y;
  std::size_t n_features = 0;
};

// y,x0,...,xk with a header row.
inline Table load_csv_fixture(const std::string& name) {
  std::ifstream in(fixture(name));
  std::string line;
  std::getline(in, line);
  Table t;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    t.y.push_back(std::stoi(cell));
    std::vector<cohortsel::SparseVec::Entry> entries;
    cohortsel::FeatureId j = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::stod(cell);
      if (v != 0.0) entries.emplace_back(j, v);
      ++j;
    }
    t.n_features = j;
    t.X.push_back(cohortsel::SparseVec::from_sorted(std::move(entries)));
  }
  return t;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cohortsel-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
