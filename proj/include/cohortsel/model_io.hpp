// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cohortsel/config.hpp"
#include "cohortsel/ensemble.hpp"

namespace cohortsel {

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  PipelineConfig config;  // snapshot with resources inlined, paths dropped
  EnsembleModel model;
};

// Canonical JSON (sorted keys) with a trailing "checksum": "fnv1a64:<hex>"
// computed over the document without that field.
std::string serialize_model(const PipelineConfig& config, const EnsembleModel& model);
ModelFile parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const PipelineConfig& config, const EnsembleModel& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace cohortsel
