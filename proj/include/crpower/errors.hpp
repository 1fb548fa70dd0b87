#pragma once

#include <stdexcept>
#include <string>

namespace crpower {

// Base for all library errors so callers can catch crpower failures wholesale.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameter or malformed input (CLI exit code 2).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Adaptive quadrature failed to converge within the refinement cap.
// Carries the residual error estimate at the point of giving up.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// A conditional probability whose conditioning event has vanishing
// probability (denominator below 1e-12).
class DegenerateConditioningError : public Error {
public:
    explicit DegenerateConditioningError(const std::string& what) : Error(what) {}
};

// A computed value violates an identity or bound by more than float noise;
// indicates a formula bug rather than bad input.
class InternalConsistencyError : public Error {
public:
    explicit InternalConsistencyError(const std::string& what) : Error(what) {}
};

// Monte Carlo conditioning event was never observed (CLI exit code 4).
class InsufficientSamplesError : public Error {
public:
    explicit InsufficientSamplesError(const std::string& event)
        : Error("conditioning event never observed: " + event), event_(event) {}
    const std::string& event() const { return event_; }

private:
    std::string event_;
};

}  // namespace crpower
