// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cohortsel/cli.hpp"

int main(int argc, char** argv) { return cohortsel::run_cli(argc, argv, std::cout, std::cerr); }
