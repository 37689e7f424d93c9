// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <map>

#include "cohortsel/features.hpp"
#include "cohortsel/kernels.hpp"
#include "cohortsel/resources.hpp"
#include "cohortsel/synthetic.hpp"
#include "cohortsel/util.hpp"

using namespace cohortsel;

namespace {

struct SplitInput {
  ColumnMatrix cols;
  std::vector<double> residuals;
  std::vector<std::uint8_t> in_node;
  NodeStats node;
};

// Sparse design resembling one label's feature matrix: a few thousand
// columns, about 2% dense.
const SplitInput& split_input(std::size_t rows, std::size_t features) {
  static std::map<std::pair<std::size_t, std::size_t>, SplitInput> cache;
  auto [it, fresh] = cache.try_emplace({rows, features});
  if (!fresh) return it->second;
  Rng rng(rows * 31 + features);
  std::vector<SparseVec> X;
  auto& in = it->second;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<SparseVec::Entry> e;
    for (FeatureId f = 0; f < features; ++f) {
      if (rng.bernoulli(0.02)) e.emplace_back(f, rng.uniform());
    }
    X.push_back(SparseVec::from_sorted(std::move(e)));
    in.residuals.push_back(2 * rng.uniform() - 1);
    in.in_node.push_back(1);
    ++in.node.count;
    in.node.sum += in.residuals.back();
  }
  in.cols = ColumnMatrix::from_rows(X, features);
  return in;
}

template <SplitCandidate (*Search)(const ColumnMatrix&, std::span<const double>, std::span<const std::uint8_t>,
                                   NodeStats, std::size_t)>
void BM_SplitSearch(benchmark::State& state) {
  const auto& in = split_input(400, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Search(in.cols, in.residuals, in.in_node, in.node, 2));
}
BENCHMARK(BM_SplitSearch<best_split_serial>)->Name("split_search/serial")->Arg(2000)->Arg(8000);
BENCHMARK(BM_SplitSearch<best_split_parallel>)->Name("split_search/parallel")->Arg(2000)->Arg(8000);

struct ExtractInput {
  SyntheticData data;
  TfidfModel tfidf;
  std::vector<LabelConfig> configs;
};

const ExtractInput& extract_input() {
  static const ExtractInput in = [] {
    ExtractInput e;
    e.data = generate_synthetic(7, 400, default_schema());
    e.tfidf = fit_tfidf(e.data.corpus, 2);
    e.configs = default_label_configs();
    return e;
  }();
  return in;
}

template <bool Parallel>
void BM_Extract(benchmark::State& state) {
  const auto& in = extract_input();
  const LabelFeaturizer f(in.configs[0], in.configs);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(extract_batch_parallel(f, in.data.corpus, in.data.annotations, in.tfidf, {}));
    } else {
      benchmark::DoNotOptimize(extract_batch_serial(f, in.data.corpus, in.data.annotations, in.tfidf, {}));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.data.corpus.size()));
}
BENCHMARK(BM_Extract<false>)->Name("extract_batch/serial");
BENCHMARK(BM_Extract<true>)->Name("extract_batch/parallel");

}  // namespace

BENCHMARK_MAIN();
