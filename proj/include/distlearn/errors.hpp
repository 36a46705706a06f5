#pragma once

#include <stdexcept>
#include <string>

namespace distlearn {

// A point does not belong to the space it is used with (wrong arity or a
// coordinate out of range).
struct InvalidPointError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Estimators need at least one sample.
struct EmptySampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The operation needs a full enumeration of a space that is too large, or
// whose total size does not fit in 64 bits.
struct EnumerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A closed-form bound was requested outside the regime where it applies.
struct BoundInapplicableError : std::domain_error {
    using std::domain_error::domain_error;
};

// A bound's hypothesis (e.g. a minimum rate) is violated.
struct HypothesisError : std::domain_error {
    using std::domain_error::domain_error;
};

// Bad experiment configuration (CLI exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace distlearn
