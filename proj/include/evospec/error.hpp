#pragma once

#include <stdexcept>

namespace evospec {

/// Raised when a computation is well-posed on paper but numerically degenerate
/// for the data at hand (vanishing denominators, infeasible fits, non-finite
/// results). Bad arguments raise std::invalid_argument instead.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace evospec
