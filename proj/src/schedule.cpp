#include "rwalk/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwalk/errors.hpp"

namespace rwalk {

double step_size(const StepSchedule& schedule, std::uint64_t n) {
    if (const auto* pl = std::get_if<PowerLawSchedule>(&schedule)) {
        double r = pl->c / std::pow(static_cast<double>(n + pl->offset),
                                    pl->gamma_exp);
        return std::min(r, 1.0 - kStepGuard);
    }
    if (const auto* ex = std::get_if<ExplicitSchedule>(&schedule)) {
        if (n >= ex->values.size()) {
            throw ScheduleExhausted("explicit schedule exhausted at step " +
                                    std::to_string(n));
        }
        return ex->values[n];
    }
    const auto& gd = std::get<GraphDerivedSchedule>(schedule);
    if (n >= gd.max_degree.size()) {
        throw ScheduleExhausted("graph schedule has no degree entry for step " +
                                std::to_string(n));
    }
    return gd.lambda * static_cast<double>(gd.max_degree[n]) /
           static_cast<double>(n + 1);
}

void validate(const StepSchedule& schedule) {
    if (const auto* pl = std::get_if<PowerLawSchedule>(&schedule)) {
        if (!(pl->c > 0.0)) {
            throw std::invalid_argument("power-law schedule: c must be > 0");
        }
        if (!(pl->gamma_exp > 0.0) || pl->gamma_exp > 1.0) {
            throw std::invalid_argument(
                "power-law schedule: gamma_exp must lie in (0, 1]");
        }
        if (pl->offset < 1) {
            throw std::invalid_argument(
                "power-law schedule: offset must be >= 1");
        }
        double r0 = pl->c / std::pow(static_cast<double>(pl->offset),
                                     pl->gamma_exp);
        if (r0 >= 1.0 && !pl->allow_clamp) {
            throw std::invalid_argument(
                "power-law schedule: c / offset^gamma_exp >= 1; raise the "
                "offset or opt into clamping");
        }
        return;
    }
    if (const auto* ex = std::get_if<ExplicitSchedule>(&schedule)) {
        if (ex->values.empty()) {
            throw std::invalid_argument(
                "explicit schedule: needs at least one step size");
        }
        for (double r : ex->values) {
            if (!(r >= 0.0) || r >= 1.0) {
                throw std::invalid_argument(
                    "explicit schedule: every step size must lie in [0, 1)");
            }
        }
        return;
    }
    const auto& gd = std::get<GraphDerivedSchedule>(schedule);
    if (!(gd.lambda > 0.0) || gd.lambda >= 1.0) {
        throw std::invalid_argument(
            "graph schedule: lambda must lie in (0, 1)");
    }
    for (std::size_t n = 0; n < gd.max_degree.size(); ++n) {
        // The n-vertex graph is a tree on n vertices, so its maximum degree
        // is at least 1 and at most n - 1; either bound failing means the
        // degree sequence does not come from a growth trajectory.
        std::uint32_t d = gd.max_degree[n];
        std::uint32_t cap = n >= 3 ? static_cast<std::uint32_t>(n - 1) : 1;
        if (d < 1 || d > cap) {
            throw std::invalid_argument(
                "graph schedule: degree entry " + std::to_string(n) +
                " is not attainable by a growth trajectory");
        }
    }
}

std::optional<std::uint64_t> schedule_length(const StepSchedule& schedule) {
    if (std::holds_alternative<PowerLawSchedule>(schedule)) {
        return std::nullopt;
    }
    if (const auto* ex = std::get_if<ExplicitSchedule>(&schedule)) {
        return ex->values.size();
    }
    return std::get<GraphDerivedSchedule>(schedule).max_degree.size();
}

SquareSum classify_square_sum(const StepSchedule& schedule) {
    if (const auto* pl = std::get_if<PowerLawSchedule>(&schedule)) {
        return pl->gamma_exp > 0.5 ? SquareSum::convergent
                                   : SquareSum::divergent;
    }
    return SquareSum::undecidable;
}

}  // namespace rwalk
