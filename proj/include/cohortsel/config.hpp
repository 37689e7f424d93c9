// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cohortsel/corpus.hpp"
#include "cohortsel/features.hpp"
#include "cohortsel/pipeline.hpp"
#include "cohortsel/tuner.hpp"

namespace cohortsel {

struct PipelinePaths {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> model;
};

// Machine-readable form of the whole architecture: label recipes, learner
// hyperparameters, ensemble weights and the tuning grid.
struct PipelineConfig {
  LabelSchema schema;
  std::vector<LabelConfig> labels;  // schema order
  PipelinePaths paths;
  std::optional<Lexicon> lexicon;   // fallback NER when no annotations are given
  Hyperparams hp;
  ComponentWeights component_weights{1.0, 1.0, 1.0};
  TunerGrid grid;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
};

// Parses and validates a config document. Relative file paths resolve
// against `base_dir`; gazetteer and lexicon files are read eagerly. Errors
// name the offending field, e.g. "labels[3].gazetteers[0].window".
PipelineConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// Serializes a config. With inline_resources, gazetteer phrases and the
// lexicon are embedded (model snapshots); otherwise gazetteers reference
// their source files.
nlohmann::json config_to_json(const PipelineConfig& config, bool inline_resources);

/// Built-in demo configuration (default schema, resources inlined, seed 42).
PipelineConfig default_config();

}  // namespace cohortsel
