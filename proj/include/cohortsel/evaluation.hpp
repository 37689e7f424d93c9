// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "cohortsel/corpus.hpp"

namespace cohortsel {

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  Confusion& operator+=(const Confusion& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  void add(Decision gold, Decision pred) noexcept;

  double precision() const noexcept;
  double recall() const noexcept;
  /// 2pr / (p + r), or 0 when p + r = 0.
  double f1() const noexcept;

  bool operator==(const Confusion&) const = default;
};

/// -1, 0, 1 as the F1 of a is below, equal to, above the F1 of b; exact.
int compare_f1(const Confusion& a, const Confusion& b) noexcept;

struct EvalReport {
  double micro_p = 0, micro_r = 0, micro_f1 = 0;
  Confusion micro;
  std::map<std::string, Confusion> per_label;
};

// Pools every (doc, label) pair with met as the positive class. Gold and
// predictions must cover the same documents and labels; the first
// discrepancy is reported in the thrown Error.
EvalReport micro_f1(const DecisionMap& gold, const DecisionMap& pred);

/// Per-label P/R/F1 table plus the pooled row, two decimals, as percentages.
std::string format_report_table(const EvalReport& report);

}  // namespace cohortsel
