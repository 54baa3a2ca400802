#pragma once

#include <stdexcept>
#include <string>

namespace risnet {

// Bad argument: outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An iteration or quadrature failed to reach its tolerance. Carries the best
// value reached and an error estimate so callers can decide what to do.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double last_iterate, double error_estimate = 0.0)
        : std::runtime_error(what), last_iterate_(last_iterate), error_estimate_(error_estimate) {}

    double last_iterate() const noexcept { return last_iterate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double last_iterate_;
    double error_estimate_;
};

}  // namespace risnet
