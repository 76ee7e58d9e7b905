#ifndef RWALK_ORACLE_HPP
#define RWALK_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rwalk/model.hpp"
#include "rwalk/schedule.hpp"

namespace rwalk {

// One support point of an exactly enumerated state distribution.
struct Atom {
    std::vector<double> z;
    double prob = 0.0;
};

struct ExactDistribution {
    std::vector<Atom> atoms;  // sorted lexicographically by z
    double total_probability() const;
    // Marginal law of the walker mean, atoms merged at the given tolerance.
    std::vector<std::pair<double, double>> mean_distribution(
        double tol = 1e-12) const;
    double mean_of_zbar() const;
    double var_of_zbar() const;
};

// Exact law of the full walker vector after `horizon` steps from the fixed
// start z0.  Branches on all 2^N indicator outcomes per step and merges
// coinciding states (tolerance 1e-12 per coordinate).  Uses the same
// floating-point update expression as the simulator, so simulated paths land
// exactly on enumerated atoms.  Throws BudgetExceeded when the projected
// atom count passes atom_budget.
ExactDistribution enumerate_distribution(const ModelParams& params,
                                         const std::vector<double>& z0,
                                         int horizon,
                                         std::size_t atom_budget = 1u << 22);

// Locates the atom matching a simulated state (coordinates within tol);
// returns the atom index or -1.
long find_atom(const ExactDistribution& dist, const std::vector<double>& z,
               double tol = 1e-9);

// x_{n+1} = (1 - r_n^2) x_n, the exact evolution of E[Z_n(1 - Z_n)] for a
// single non-interacting walker that copies its own draws (rho = 1).
// Returns x_0 .. x_horizon.
std::vector<double> variance_recursion_alpha0(double x0,
                                              const StepSchedule& schedule,
                                              std::uint64_t horizon);

// Product chains bounding x_n = E[Zbar_n (1 - Zbar_n)] for N interacting
// walkers with rho = 1:
//   lower_n = x0 * prod (1 - r_k^2 / N)
//   upper_n = x0 * prod (1 - C r_k^2),  C = (1 - (1-alpha)^2) / N.
// The chains coincide with the exact recursion at N = 1, alpha = 1.
struct VarianceBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};
VarianceBounds variance_bounds_interacting(double x0,
                                           const StepSchedule& schedule,
                                           double alpha, int n_walkers,
                                           std::uint64_t horizon);

// x_{n+1} = (1 - a r_n) x_n + k_bound r_n^2, the scalar comparison
// iteration used to certify almost-sure convergence arguments.
std::vector<double> comparison_iterate(double a, double k_bound, double x0,
                                     const StepSchedule& schedule,
                                     std::uint64_t horizon);

}  // namespace rwalk

#endif
