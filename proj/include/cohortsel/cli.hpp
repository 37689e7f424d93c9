// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace cohortsel {

// Entry point of the cohortsel tool. Returns 0 on success, 1 on a usage
// error and 2 when inputs, config or a model file are invalid.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohortsel
