#ifndef RWALK_GRID_HPP
#define RWALK_GRID_HPP

#include <cstdint>
#include <variant>
#include <vector>

namespace rwalk {

// Snapshot steps floor(base_n * ratio^k), k = 0 .. count-1, deduplicated.
struct GeometricGrid {
    std::uint64_t base_n = 10;
    double ratio = 2.0;
    int count = 1;
};

// Caller-chosen snapshot steps; must be strictly increasing.
struct ExplicitSteps {
    std::vector<std::uint64_t> steps;
};

// Snapshot steps floor(n + n^gamma_exp * t) for each t in t_grid - the
// index map of the windowed limit statements (gamma_exp = 1 gives
// floor(n + n t)).
struct TimeWindow {
    std::uint64_t n = 1;
    double gamma_exp = 1.0;
    std::vector<double> t_grid;
};

using RecordingGrid = std::variant<GeometricGrid, ExplicitSteps, TimeWindow>;

// floor(n + n^gamma_exp * t).
std::uint64_t window_index(std::uint64_t n, double gamma_exp, double t);
// floor(n * t), the index map of the rescaled-time fluctuation statement.
std::uint64_t scaling_index(std::uint64_t n, double t);

// Resolved snapshot steps, strictly increasing.  Throws
// std::invalid_argument on malformed grids.
std::vector<std::uint64_t> grid_steps(const RecordingGrid& grid);

}  // namespace rwalk

#endif
