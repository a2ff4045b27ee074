// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

int main(int argc, char **argv)
{
    return pdnn::cli::run_cli(argc, argv);
}
