#ifndef RWALK_URN_HPP
#define RWALK_URN_HPP

// Balanced two-color urn schemes expressed as step schedules.  A draw of
// color y adds c_n * A(y, k) balls of color k; balance (equal row sums of A)
// makes the total growth deterministic, so the proportion of color 1 follows
// the reinforced-walk recursion with an explicit step sequence and a kernel
// read off the rows of A.

#include <array>
#include <cstdint>
#include <variant>

#include "rwalk/model.hpp"
#include "rwalk/schedule.hpp"

namespace rwalk {

// c_n = factor for every n.
struct ConstantScale {
    double factor = 1.0;
};

// c_n = (n+1)^exponent.
struct PowerGrowthScale {
    double exponent = 1.0;
};

// c_n = exp(n^beta); yields step sizes of order n^(beta-1).
struct ExpPowerScale {
    double beta = 0.5;
};

using ScaleRule = std::variant<ConstantScale, PowerGrowthScale, ExpPowerScale>;

struct UrnSpec {
    // base_matrix[y][k]: balls of color k added per unit scale after a draw
    // of color y.
    std::array<std::array<std::uint64_t, 2>, 2> base_matrix{};
    ScaleRule scale = ConstantScale{};
    std::uint64_t initial_total = 2;
};

// Throws std::invalid_argument when rows are unbalanced, the matrix is all
// zero, the initial count is zero, or the scale parameters are out of range.
void validate(const UrnSpec& spec);

// Row sum of the base matrix (equal across rows by the balance invariant).
std::uint64_t row_total(const UrnSpec& spec);

double scale_factor(const ScaleRule& rule, std::uint64_t n);

// c_n / c_{n+1}, computed without forming either factor (ExpPower grows past
// double range long before the ratio does).
double scale_ratio(const ScaleRule& rule, std::uint64_t n);

struct UrnSchedule {
    StepSchedule schedule;  // Explicit, horizon entries
    KernelDecomposition kernel;
};

// r_n = c_n * abar / (N(0) + abar * sum_{k<=n} c_k), evaluated through the
// stable reciprocal recursion 1/r_{n+1} = 1 + (c_n/c_{n+1}) / r_n, together
// with the kernel decomposition of the normalized matrix rows.
UrnSchedule urn_to_schedule(const UrnSpec& spec, std::uint64_t horizon);

}  // namespace rwalk

#endif
