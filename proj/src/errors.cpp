// SPDX-License-Identifier: Apache-2.0

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

std::string join_violations(const std::vector<std::string> &violations)
{
    std::string out = "invalid configuration";
    for (const auto &v : violations)
        out += "\n  - " + v;
    return out;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations))
{
}

NumericError::NumericError(std::string module, std::string op, const std::string &detail)
    : std::runtime_error(module + "::" + op + ": " + detail), module_(std::move(module)), op_(std::move(op))
{
}

} // namespace pdnn
