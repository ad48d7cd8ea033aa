// errors.hpp — Exception types shared across the toolkit

#pragma once

#include <stdexcept>
#include <string>

namespace collspin {

// Invalid user input: bad parameters, malformed specs, dimension mismatches.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure at runtime: non-convergent eigensolver, step-size
// violations, NaN states.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace collspin
