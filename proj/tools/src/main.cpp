// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <iostream>

#include "burstid_cli/commands.hpp"

int main(int argc, char** argv) {
    return burstid::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
