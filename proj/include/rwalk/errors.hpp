#ifndef RWALK_ERRORS_HPP
#define RWALK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rwalk {

// Thrown when a finite step-size schedule is asked for an index past its
// last entry.
struct ScheduleExhausted : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Thrown when kernel row probabilities cannot be written as the one-parameter
// mixture rho*delta_y + (1-rho)*q with rho in [0,1].
struct KernelNotRepresentable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an exact enumeration or an ensemble run would exceed its
// memory budget; the message says what to shrink.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a limit-theorem evaluation is requested outside the regime in
// which the statement holds; the message names the violated condition.
struct InadmissibleRegime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace rwalk

#endif
