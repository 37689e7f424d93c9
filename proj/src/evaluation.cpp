// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/evaluation.hpp"

#include <cstdint>
#include <cstdio>

#include "cohortsel/error.hpp"

namespace cohortsel {

void Confusion::add(Decision gold, Decision pred) noexcept {
  if (gold == Decision::met) {
    pred == Decision::met ? ++tp : ++fn;
  } else {
    pred == Decision::met ? ++fp : ++tn;
  }
}

double Confusion::precision() const noexcept {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Confusion::recall() const noexcept {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

// Same value as 2pr / (p + r), computed from the counts directly.
double Confusion::f1() const noexcept {
  const std::size_t den = 2 * tp + fp + fn;
  return tp == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(den);
}

int compare_f1(const Confusion& a, const Confusion& b) noexcept {
  // F1 = 2tp / (2tp + fp + fn), and 0 when tp = 0.
  const auto num_a = static_cast<std::int64_t>(2 * a.tp), den_a = static_cast<std::int64_t>(2 * a.tp + a.fp + a.fn);
  const auto num_b = static_cast<std::int64_t>(2 * b.tp), den_b = static_cast<std::int64_t>(2 * b.tp + b.fp + b.fn);
  const std::int64_t lhs = den_a == 0 ? 0 : num_a * (den_b == 0 ? 1 : den_b);
  const std::int64_t rhs = den_b == 0 ? 0 : num_b * (den_a == 0 ? 1 : den_a);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

EvalReport micro_f1(const DecisionMap& gold, const DecisionMap& pred) {
  EvalReport report;
  for (const auto& [doc, labels] : gold) {
    auto p = pred.find(doc);
    if (p == pred.end()) throw Error("predictions missing document '" + doc + "'");
    for (const auto& [label, g] : labels) {
      auto d = p->second.find(label);
      if (d == p->second.end()) throw Error("predictions for '" + doc + "' missing label " + label);
      report.per_label[label].add(g, d->second);
    }
    for (const auto& [label, d] : p->second) {
      if (!labels.contains(label)) throw Error("predictions for '" + doc + "' have label " + label + " not in gold");
    }
  }
  for (const auto& [doc, labels] : pred) {
    if (!gold.contains(doc)) throw Error("predictions contain document '" + doc + "' not in gold");
  }
  for (const auto& [label, c] : report.per_label) report.micro += c;
  report.micro_p = report.micro.precision();
  report.micro_r = report.micro.recall();
  report.micro_f1 = report.micro.f1();
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %6s %6s %6s %6s\n", "label", "P", "R", "F1", "tp", "fp", "fn",
                "tn");
  out += line;
  auto row = [&](const std::string& name, const Confusion& c) {
    std::snprintf(line, sizeof line, "%-16s %8.2f %8.2f %8.2f %6zu %6zu %6zu %6zu\n", name.c_str(),
                  100 * c.precision(), 100 * c.recall(), 100 * c.f1(), c.tp, c.fp, c.fn, c.tn);
    out += line;
  };
  for (const auto& [label, c] : report.per_label) row(label, c);
  row("micro", report.micro);
  return out;
}

}  // namespace cohortsel
