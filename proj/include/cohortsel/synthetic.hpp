// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "cohortsel/corpus.hpp"

namespace cohortsel {

struct SyntheticData {
  Corpus corpus;
  Annotations annotations;
  DecisionMap gold;
};

// Deterministic demo corpus. Each label has a base rate in [0.38, 0.62]; a
// positive record mentions one of the label's cues affirmatively with
// probability 0.9 (otherwise a weaker support phrase), and a negative record
// mentions a cue in a negated sentence with probability 0.1. Annotations come
// from dictionary NER with the built-in lexicon. Throws Error if n_docs < 10.
SyntheticData generate_synthetic(std::uint64_t seed, std::size_t n_docs, const LabelSchema& schema);

}  // namespace cohortsel
