#pragma once

#include <stdexcept>
#include <string>

namespace povs {

// Bad user input: malformed CSV, invalid config, too few observations.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A statistic cannot be formed (zero variance, vanishing denominator).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative special-function evaluation failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace povs
