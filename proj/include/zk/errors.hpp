#pragma once

#include <stdexcept>
#include <string>

namespace zk {

// Thrown when a banded factorization hits a zero pivot within tolerance.
struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the time stepper detects non-finite field values.
struct BlowUpError : std::runtime_error {
    BlowUpError(double t_, double max_abs_, const std::string& msg)
        : std::runtime_error(msg), t(t_), max_abs(max_abs_) {}
    double t;
    double max_abs;
};

// A weight ladder containing a rung with vanishing derivative.
struct IllPosedLadderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace zk
