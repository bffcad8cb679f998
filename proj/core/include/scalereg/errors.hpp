#pragma once

#include <stdexcept>
#include <string>

namespace scalereg {

// Scale generator is singular or numerically rank-deficient.
struct DegenerateGeneratorError : std::runtime_error {
    explicit DegenerateGeneratorError(const std::string& what) : std::runtime_error(what) {}
};

// Index triple violates the admissible ordering (-a < t <= s etc.).
struct InvalidIndicesError : std::invalid_argument {
    explicit InvalidIndicesError(const std::string& what) : std::invalid_argument(what) {}
};

// Nonnegative noise parameters or other argument constraints violated.
struct InvalidParameterError : std::invalid_argument {
    explicit InvalidParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Deterministic functional evaluated on stochastic data.
struct WrongModelError : std::logic_error {
    explicit WrongModelError(const std::string& what) : std::logic_error(what) {}
};

// Forward operator argument left the representable magnitude range.
struct MagnitudeError : std::runtime_error {
    explicit MagnitudeError(const std::string& what) : std::runtime_error(what) {}
};

// Candidate grid does not follow the balancing-principle construction.
struct InvalidGridError : std::invalid_argument {
    explicit InvalidGridError(const std::string& what) : std::invalid_argument(what) {}
};

// Parameter-choice rule hit a flat or non-finite derivative.
struct DegenerateChoiceError : std::runtime_error {
    explicit DegenerateChoiceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace scalereg
