#pragma once

// Error taxonomy shared across the library.  The command-line driver maps
// these onto distinct process exit codes, so the types are deliberately
// coarse: bad input, a generator that ran out of retries, and numerical
// divergence that invalidates a result.

#include <stdexcept>
#include <string>

namespace sqa {

// Invalid configuration or malformed input data (exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A randomized generator exhausted its retry budget (exit code 2).
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical result diverged where the caller required it to be finite
// (exit code 3).
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqa
