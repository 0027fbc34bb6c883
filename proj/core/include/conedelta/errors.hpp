#pragma once

#include <stdexcept>
#include <string>

namespace conedelta {

/// Thrown when an argument violates a documented precondition.
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an iterative or quadrature procedure fails to converge.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conedelta
