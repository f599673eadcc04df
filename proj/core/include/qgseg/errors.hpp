#pragma once

#include <stdexcept>

namespace qgseg {

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Kullback-Leibler divergence with p_j > 0 where q_j = 0.
class UndefinedDivergence : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

}  // namespace qgseg
