#include "rwalk/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace rwalk {

std::uint64_t window_index(std::uint64_t n, double gamma_exp, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("window_index needs t >= 0");
    }
    double anchor = static_cast<double>(n);
    return static_cast<std::uint64_t>(
        std::floor(anchor + std::pow(anchor, gamma_exp) * t));
}

std::uint64_t scaling_index(std::uint64_t n, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("scaling_index needs t >= 0");
    }
    return static_cast<std::uint64_t>(
        std::floor(static_cast<double>(n) * t));
}

std::vector<std::uint64_t> grid_steps(const RecordingGrid& grid) {
    std::vector<std::uint64_t> steps;
    if (const auto* geo = std::get_if<GeometricGrid>(&grid)) {
        if (geo->base_n < 1 || !(geo->ratio > 1.0) || geo->count < 1) {
            throw std::invalid_argument(
                "geometric grid needs base_n >= 1, ratio > 1, count >= 1");
        }
        double v = static_cast<double>(geo->base_n);
        for (int k = 0; k < geo->count; ++k) {
            auto s = static_cast<std::uint64_t>(std::floor(v));
            if (steps.empty() || s > steps.back()) steps.push_back(s);
            v *= geo->ratio;
        }
        return steps;
    }
    if (const auto* ex = std::get_if<ExplicitSteps>(&grid)) {
        if (ex->steps.empty()) {
            throw std::invalid_argument("explicit grid needs >= 1 step");
        }
        for (std::size_t i = 1; i < ex->steps.size(); ++i) {
            if (ex->steps[i] <= ex->steps[i - 1]) {
                throw std::invalid_argument(
                    "explicit grid steps must be strictly increasing");
            }
        }
        return ex->steps;
    }
    const auto& tw = std::get<TimeWindow>(grid);
    if (tw.n < 1 || !(tw.gamma_exp > 0.0) || tw.gamma_exp > 1.0) {
        throw std::invalid_argument(
            "time-window grid needs n >= 1 and gamma_exp in (0, 1]");
    }
    if (tw.t_grid.empty()) {
        throw std::invalid_argument("time-window grid needs >= 1 time");
    }
    for (std::size_t i = 0; i < tw.t_grid.size(); ++i) {
        if (!(tw.t_grid[i] >= 0.0)) {
            throw std::invalid_argument("time-window grid needs t >= 0");
        }
        if (i > 0 && tw.t_grid[i] <= tw.t_grid[i - 1]) {
            throw std::invalid_argument(
                "time-window grid times must be strictly increasing");
        }
        std::uint64_t s = window_index(tw.n, tw.gamma_exp, tw.t_grid[i]);
        if (steps.empty() || s > steps.back()) steps.push_back(s);
    }
    return steps;
}

}  // namespace rwalk
