// SPDX-License-Identifier: Apache-2.0
#include "hillgap/cli.hpp"

int main(int argc, char** argv) { return hillgap::cli::run(argc, argv); }
