#pragma once

#include <stdexcept>
#include <string>

namespace becflow {

/// Invalid configuration or argument values (CLI exit code 1).
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure: divergence, non-convergence, non-finite state (exit code 2).
class numerics_error : public std::runtime_error {
public:
    explicit numerics_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File input/output failure (exit code 3).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace becflow
