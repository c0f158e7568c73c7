// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "plasmahom/cli/app.hpp"

int main(int argc, char **argv)
{
  return plasmahom::cli::main_entry(argc, argv, std::cout, std::cerr);
}
