#ifndef RWALK_SCHEDULE_HPP
#define RWALK_SCHEDULE_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace rwalk {

// Step sizes are capped strictly below 1; r_n = 1 would deterministically
// overwrite the walk state and breaks every variance recursion.
inline constexpr double kStepGuard = 1e-9;

// r_n = c / (n + offset)^gamma_exp, capped at 1 - kStepGuard.  Construction
// with c / offset^gamma_exp >= 1 is rejected by validate() unless the cap is
// explicitly opted into, so silent clamping never hides a bad config.
struct PowerLawSchedule {
    double c = 1.0;
    double gamma_exp = 1.0;
    // Default offset 2 keeps r_0 = 1/2 < 1, so a default-constructed
    // schedule passes validate() as-is.
    std::uint64_t offset = 2;
    bool allow_clamp = false;
};

// Finite list of per-step sizes; indices past the end are an error.
struct ExplicitSchedule {
    std::vector<double> values;
};

// Step sizes read off a growing-graph trajectory: at step n the walk uses
// lambda * max_degree[n] / (n + 1).  max_degree is indexed by the number of
// vertices; entries 0 and 1 predate the two-vertex seed graph and are
// padded with degree 1 so a walk can start at step 0.
struct GraphDerivedSchedule {
    double lambda = 0.5;
    std::vector<std::uint32_t> max_degree;
};

using StepSchedule =
    std::variant<PowerLawSchedule, ExplicitSchedule, GraphDerivedSchedule>;

// r_n for the given schedule.  Throws ScheduleExhausted past the end of a
// finite schedule.
double step_size(const StepSchedule& schedule, std::uint64_t n);

// Parameter checks; throws std::invalid_argument with the offending field.
void validate(const StepSchedule& schedule);

// Number of defined steps, or nullopt when the schedule never runs out.
std::optional<std::uint64_t> schedule_length(const StepSchedule& schedule);

// Whether sum r_n^2 converges; decidable for power-law schedules only.
enum class SquareSum { divergent, convergent, undecidable };
SquareSum classify_square_sum(const StepSchedule& schedule);

}  // namespace rwalk

#endif
