// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "maxstable/cli.hpp"

int main(int argc, char** argv) {
    return maxstable::cli::run_cli(argc, argv, std::cout, std::cerr);
}
