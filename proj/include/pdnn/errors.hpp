// SPDX-License-Identifier: Apache-2.0
//
// Exception types shared by all pdnn modules.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdnn
{

// Bad argument to a pure function (odd port count, empty vector, ...).
class InvalidArgument : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Degenerate geometry for the free-space interconnect (zero distance).
class GeometryError : public InvalidArgument
{
  public:
    using InvalidArgument::InvalidArgument;
};

// Structural inconsistency in a network or system configuration.
// Carries one human-readable line per violation.
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string> &violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;
};

// A numeric routine failed (non-finite intermediate, quadrature did not converge).
class NumericError : public std::runtime_error
{
  public:
    NumericError(std::string module, std::string op, const std::string &detail);

    const std::string &module() const noexcept { return module_; }
    const std::string &op() const noexcept { return op_; }

  private:
    std::string module_;
    std::string op_;
};

} // namespace pdnn
