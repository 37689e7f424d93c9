// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Built-in demo resources. The gazetteers and lexicon are synthetic
// reconstructions made for the demo schema, not curated clinical lists.

#include <string>
#include <vector>

#include "cohortsel/corpus.hpp"
#include "cohortsel/features.hpp"

namespace cohortsel {

struct Gazetteer {
  std::string name;
  NerTag tag;
  std::vector<std::string> phrases;
};

/// diet-supplements (120), cardiac-disease, antiplatelet-mi, ketoacidosis.
const std::vector<Gazetteer>& builtin_gazetteers();

/// Cue vocabulary the synthetic generator plants for one label.
struct CueProfile {
  std::string label;
  NerTag tag;
  std::vector<std::string> cues;     // mentions that decide the label
  std::vector<std::string> support;  // weaker related mentions
};

const std::vector<CueProfile>& builtin_cue_profiles();

/// Profile for any label: the built-in one if present, else a generic one derived from the name.
CueProfile cue_profile_for(const std::string& label);

/// The 13 demo labels in schema order.
LabelSchema default_schema();

/// Per-label recipes for the demo schema, with gazetteer phrases inlined.
std::vector<LabelConfig> default_label_configs();

/// Fallback NER lexicon: every cue, support phrase and gazetteer entry, plus common tests.
Lexicon builtin_lexicon();

}  // namespace cohortsel
