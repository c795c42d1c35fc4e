#pragma once

#include <stdexcept>
#include <string>

namespace conic {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Index past the end of a truncated series.
class IndexError : public std::out_of_range {
public:
    explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

// Iterative or adaptive numerics did not reach the requested accuracy.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// A distortion that fails the monotonicity / boundary spot check.
class InvalidDistortion : public std::invalid_argument {
public:
    explicit InvalidDistortion(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace conic
