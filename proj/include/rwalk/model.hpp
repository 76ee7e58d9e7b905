#ifndef RWALK_MODEL_HPP
#define RWALK_MODEL_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/schedule.hpp"

namespace rwalk {

// Two-state jump kernel given by its rows: k{y}_to_1 is the probability mass
// the kernel places on state 1 after observing y.
struct KernelSpec {
    double k0_to_1 = 0.0;
    double k1_to_1 = 1.0;
};

// Mixture form of a two-state kernel: weight rho on "copy the observation",
// weight 1 - rho on a fixed Bernoulli(q) target.  When rho = 1 the kernel
// carries no information about q; q_flagged marks that case and q is set to
// 0.5 by convention.
struct KernelDecomposition {
    double rho = 1.0;
    double q = 0.5;
    bool q_flagged = false;
};

KernelDecomposition kernel_decompose(const KernelSpec& kernel);

// Initial laws for the walker positions.  Stochastic laws draw one variate
// per walker, in walker order, from the replication's stream.
struct DeterministicInitial {
    std::vector<double> values;  // one entry per walker
};
struct SymmetricBetaInitial {
    double a = 1.0;  // Beta(a, a), i.i.d. across walkers
};
struct TwoPointInitial {
    double p = 0.5;  // P(hi); value lo otherwise, i.i.d. across walkers
    double lo = 0.0;
    double hi = 1.0;
};
using InitialLaw =
    std::variant<DeterministicInitial, SymmetricBetaInitial, TwoPointInitial>;

struct ModelParams {
    int n_walkers = 1;
    double rho = 1.0;    // weight on copying the drawn indicator
    double alpha = 0.0;  // weight on the population mean in draw probabilities
    double q = 0.5;      // fixed target used when rho < 1
    StepSchedule schedule = PowerLawSchedule{};
    InitialLaw initial = DeterministicInitial{{0.5}};
};

// Throws std::invalid_argument naming the offending field.
void validate(const ModelParams& params);

// Whether the configuration supports limit-theorem verification: initial
// mean exactly 1/2 and positive initial value of E[Zbar(1 - Zbar)].  When
// false, *reason (if non-null) says which requirement failed.
bool verification_admissible(const ModelParams& params, std::string* reason);

struct WalkState {
    std::uint64_t step = 0;
    std::vector<double> z;
    double z_bar = 0.0;  // always recomputed as the exact mean of z
};

// One-step reinforcement update; kept inline so the exact enumeration and
// the Monte Carlo path evaluate bit-identical floating-point expressions.
inline double reinforce(double z, double r, double rho, double q,
                        double indicator) {
    return (1.0 - r) * z + r * (rho * indicator + (1.0 - rho) * q);
}

inline double mean_of(const std::vector<double>& z) {
    double s = 0.0;
    for (double v : z) s += v;
    return s / static_cast<double>(z.size());
}

// Draws initial positions (consuming stream variates for stochastic laws,
// walker index ascending) and sets step = 0.
WalkState initial_state(const ModelParams& params, RandomStream& stream);

// P(indicator_i = 1 | current state) = (1 - alpha) z_i + alpha z_bar.
void draw_probabilities(const WalkState& state, double alpha,
                        std::vector<double>& out);
std::vector<double> draw_probabilities(const WalkState& state, double alpha);

// Advances the state once using step size r.  Consumes exactly one uniform
// per walker, walker index ascending.  When draw_out is non-null the first
// walker's indicator is stored there (used to track single-walker draws).
void step_in_place(WalkState& state, const ModelParams& params, double r,
                   RandomStream& stream, bool* draw_out = nullptr);

// Convenience wrapper: looks up r from the schedule at state.step.
WalkState step(const WalkState& state, const ModelParams& params,
               RandomStream& stream);

// Conditional first moments after one step from the given state:
//   dz_bar_mean      = E[Zbar_next - q | state] = (1 - (1-rho) r)(z_bar - q)
//   dsync_mean_factor = 1 - (1 - rho (1-alpha)) r, the contraction factor of
//                       each walker's deviation from the mean.
struct MeanIncrements {
    double dz_bar_mean = 0.0;
    double dsync_mean_factor = 1.0;
};
MeanIncrements conditional_mean_increments(const WalkState& state,
                                           const ModelParams& params);

// Conditional variance of walker i's deviation from the mean after one step:
// r^2 rho^2 [ (1 - 1/N)^2 p_i(1-p_i) + N^-2 sum_{j != i} p_j(1-p_j) ].
double conditional_variance_deviation(const WalkState& state,
                                      const ModelParams& params, int walker);

// Conditional variance of the mean after one step:
// (r^2 rho^2 / N^2) sum_j p_j (1 - p_j).
double conditional_variance_mean(const WalkState& state,
                                 const ModelParams& params);

}  // namespace rwalk

#endif
