#include "rwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rwalk/errors.hpp"

namespace rwalk {

namespace {

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                        b.end());
}

bool all_close(const std::vector<double>& a, const std::vector<double>& b,
               double tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

// Snaps every coordinate to a canonical representative of its tolerance
// cluster.  Distinct indicator histories can reach the same state along
// different arithmetic orderings, leaving twins a few ulp apart; adjacency
// after a plain lexicographic sort would miss twins in an early coordinate
// whenever later coordinates interleave, so clustering must come first.
void canonicalize_coordinates(std::vector<Atom>& atoms, double tol) {
    if (atoms.empty()) return;
    const std::size_t dim = atoms[0].z.size();
    std::vector<double> values(atoms.size());
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            values[i] = atoms[i].z[k];
        }
        std::sort(values.begin(), values.end());
        // Cluster starts; a value belongs to the last start at or below it.
        std::vector<double> starts;
        for (double v : values) {
            if (starts.empty() || v - starts.back() > tol) {
                starts.push_back(v);
            }
        }
        for (auto& atom : atoms) {
            auto it =
                std::upper_bound(starts.begin(), starts.end(), atom.z[k]);
            atom.z[k] = *(it - 1);
        }
    }
}

// Sorts atoms and merges runs whose coordinates all agree within tol.
void merge_atoms(std::vector<Atom>& atoms, double tol) {
    canonicalize_coordinates(atoms, tol);
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return lex_less(a.z, b.z); });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (auto& atom : atoms) {
        if (!merged.empty() && all_close(merged.back().z, atom.z, tol)) {
            merged.back().prob += atom.prob;
        } else {
            merged.push_back(std::move(atom));
        }
    }
    atoms = std::move(merged);
}

}  // namespace

double ExactDistribution::total_probability() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.prob;
    return s;
}

std::vector<std::pair<double, double>> ExactDistribution::mean_distribution(
    double tol) const {
    std::vector<std::pair<double, double>> points;
    points.reserve(atoms.size());
    for (const auto& a : atoms) points.emplace_back(mean_of(a.z), a.prob);
    std::sort(points.begin(), points.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : points) {
        if (!merged.empty() && p.first - merged.back().first <= tol) {
            merged.back().second += p.second;
        } else {
            merged.push_back(p);
        }
    }
    return merged;
}

double ExactDistribution::mean_of_zbar() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.prob * mean_of(a.z);
    return s;
}

double ExactDistribution::var_of_zbar() const {
    double m = mean_of_zbar();
    double s = 0.0;
    for (const auto& a : atoms) {
        double d = mean_of(a.z) - m;
        s += a.prob * d * d;
    }
    return s;
}

ExactDistribution enumerate_distribution(const ModelParams& params,
                                         const std::vector<double>& z0,
                                         int horizon,
                                         std::size_t atom_budget) {
    validate(params);
    if (z0.size() != static_cast<std::size_t>(params.n_walkers)) {
        throw std::invalid_argument("z0 must have one entry per walker");
    }
    for (double v : z0) {
        if (!(v >= 0.0) || v > 1.0) {
            throw std::invalid_argument("z0 entries must lie in [0, 1]");
        }
    }
    if (horizon < 0) {
        throw std::invalid_argument("horizon must be >= 0");
    }
    const int n = params.n_walkers;
    const std::size_t branches = std::size_t{1} << n;
    const double merge_tol = 1e-12;

    ExactDistribution dist;
    dist.atoms.push_back(Atom{z0, 1.0});
    WalkState probe;  // scratch state for draw probabilities

    for (int stage = 0; stage < horizon; ++stage) {
        if (dist.atoms.size() > atom_budget / branches) {
            throw BudgetExceeded(
                "exact enumeration would exceed " +
                std::to_string(atom_budget) +
                " atoms; reduce the horizon or the walker count");
        }
        double r = step_size(params.schedule,
                             static_cast<std::uint64_t>(stage));
        std::vector<Atom> next;
        next.reserve(dist.atoms.size() * branches);
        for (const auto& atom : dist.atoms) {
            probe.z = atom.z;
            probe.z_bar = mean_of(atom.z);
            std::vector<double> p = draw_probabilities(probe, params.alpha);
            for (std::size_t mask = 0; mask < branches; ++mask) {
                double prob = atom.prob;
                Atom child;
                child.z.resize(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    bool one = (mask >> i) & 1u;
                    prob *= one ? p[static_cast<std::size_t>(i)]
                                : 1.0 - p[static_cast<std::size_t>(i)];
                    child.z[static_cast<std::size_t>(i)] =
                        reinforce(atom.z[static_cast<std::size_t>(i)], r,
                                  params.rho, params.q, one ? 1.0 : 0.0);
                }
                if (prob == 0.0) continue;
                child.prob = prob;
                next.push_back(std::move(child));
            }
        }
        merge_atoms(next, merge_tol);
        dist.atoms = std::move(next);
    }
    return dist;
}

long find_atom(const ExactDistribution& dist, const std::vector<double>& z,
               double tol) {
    // Atoms are sorted lexicographically; scan the window whose first
    // coordinate is within tol of the probe.
    auto lo = std::lower_bound(
        dist.atoms.begin(), dist.atoms.end(), z[0] - tol,
        [](const Atom& a, double v) { return a.z[0] < v; });
    for (auto it = lo; it != dist.atoms.end() && it->z[0] <= z[0] + tol;
         ++it) {
        if (all_close(it->z, z, tol)) {
            return static_cast<long>(it - dist.atoms.begin());
        }
    }
    return -1;
}

std::vector<double> variance_recursion_alpha0(double x0,
                                              const StepSchedule& schedule,
                                              std::uint64_t horizon) {
    std::vector<double> x(horizon + 1);
    x[0] = x0;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        double r = step_size(schedule, k);
        x[k + 1] = (1.0 - r * r) * x[k];
    }
    return x;
}

VarianceBounds variance_bounds_interacting(double x0,
                                           const StepSchedule& schedule,
                                           double alpha, int n_walkers,
                                           std::uint64_t horizon) {
    if (n_walkers < 1) {
        throw std::invalid_argument("n_walkers must be >= 1");
    }
    if (!(alpha >= 0.0) || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    double n = static_cast<double>(n_walkers);
    double c_upper = (1.0 - (1.0 - alpha) * (1.0 - alpha)) / n;
    VarianceBounds out;
    out.lower.resize(horizon + 1);
    out.upper.resize(horizon + 1);
    out.lower[0] = x0;
    out.upper[0] = x0;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        double r2 = step_size(schedule, k);
        r2 *= r2;
        out.lower[k + 1] = (1.0 - r2 / n) * out.lower[k];
        out.upper[k + 1] = (1.0 - c_upper * r2) * out.upper[k];
    }
    return out;
}

std::vector<double> comparison_iterate(double a, double k_bound, double x0,
                                     const StepSchedule& schedule,
                                     std::uint64_t horizon) {
    std::vector<double> x(horizon + 1);
    x[0] = x0;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        double r = step_size(schedule, k);
        x[k + 1] = (1.0 - a * r) * x[k] + k_bound * r * r;
    }
    return x;
}

}  // namespace rwalk
