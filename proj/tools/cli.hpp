// SPDX-License-Identifier: Apache-2.0
//
// pdnn_ssk command line. Option precedence: command line, then PDNN_*
// environment variables, then the --config file, then built-in defaults.
// Exit codes: 0 success, 2 invalid configuration, 3 numeric failure,
// 1 anything else. Failures print one JSON record on stderr.

#pragma once

#include <iosfwd>

namespace pdnn::cli
{

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run_cli(int argc, const char *const *argv);

} // namespace pdnn::cli
