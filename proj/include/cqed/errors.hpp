#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Fock-space truncation became inadequate (top level populated beyond tolerance).
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// A density-matrix invariant (trace, Hermiticity, positivity) was violated
// beyond tolerance during evolution.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values, singular fits, or other numerical failures.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration / input-file problems.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqed
