#include "rwalk/model.hpp"

#include <cmath>
#include <stdexcept>

#include "rwalk/errors.hpp"

namespace rwalk {

KernelDecomposition kernel_decompose(const KernelSpec& kernel) {
    if (!(kernel.k0_to_1 >= 0.0) || kernel.k0_to_1 > 1.0 ||
        !(kernel.k1_to_1 >= 0.0) || kernel.k1_to_1 > 1.0) {
        throw std::invalid_argument(
            "kernel rows must be probabilities in [0, 1]");
    }
    double rho = kernel.k1_to_1 - kernel.k0_to_1;
    if (rho < 0.0) {
        // A mixture of "copy" and a fixed coin can never favour 1 more after
        // seeing 0 than after seeing 1.
        throw KernelNotRepresentable(
            "kernel rows with k1_to_1 < k0_to_1 are not representable as a "
            "copy/reset mixture");
    }
    KernelDecomposition out;
    out.rho = rho;
    if (rho >= 1.0) {
        out.rho = 1.0;
        out.q = 0.5;  // arbitrary; the kernel never consults it
        out.q_flagged = true;
        return out;
    }
    out.q = kernel.k0_to_1 / (1.0 - rho);
    if (out.q < 0.0 || out.q > 1.0) {
        throw KernelNotRepresentable(
            "kernel decomposition puts q outside [0, 1]");
    }
    return out;
}

namespace {

void validate_initial(const InitialLaw& initial, int n_walkers) {
    if (const auto* det = std::get_if<DeterministicInitial>(&initial)) {
        if (det->values.size() != static_cast<std::size_t>(n_walkers)) {
            throw std::invalid_argument(
                "deterministic initial law needs one value per walker");
        }
        for (double v : det->values) {
            if (!(v >= 0.0) || v > 1.0) {
                throw std::invalid_argument(
                    "initial positions must lie in [0, 1]");
            }
        }
        return;
    }
    if (const auto* beta = std::get_if<SymmetricBetaInitial>(&initial)) {
        if (!(beta->a > 0.0)) {
            throw std::invalid_argument("beta initial law: a must be > 0");
        }
        return;
    }
    const auto& tp = std::get<TwoPointInitial>(initial);
    if (!(tp.p >= 0.0) || tp.p > 1.0) {
        throw std::invalid_argument("two-point initial law: p outside [0, 1]");
    }
    if (!(tp.lo >= 0.0) || tp.lo > 1.0 || !(tp.hi >= 0.0) || tp.hi > 1.0 ||
        tp.lo > tp.hi) {
        throw std::invalid_argument(
            "two-point initial law: need 0 <= lo <= hi <= 1");
    }
}

// Mean and per-walker variance of the initial law.
void initial_moments(const InitialLaw& initial, double* mean, double* var) {
    if (const auto* det = std::get_if<DeterministicInitial>(&initial)) {
        *mean = mean_of(det->values);
        *var = 0.0;  // no randomness; the positions are fixed numbers
        return;
    }
    if (const auto* beta = std::get_if<SymmetricBetaInitial>(&initial)) {
        *mean = 0.5;
        *var = 0.25 / (2.0 * beta->a + 1.0);
        return;
    }
    const auto& tp = std::get<TwoPointInitial>(initial);
    *mean = tp.p * tp.hi + (1.0 - tp.p) * tp.lo;
    *var = tp.p * (1.0 - tp.p) * (tp.hi - tp.lo) * (tp.hi - tp.lo);
}

}  // namespace

void validate(const ModelParams& params) {
    if (params.n_walkers < 1) {
        throw std::invalid_argument("n_walkers must be >= 1");
    }
    if (!(params.rho >= 0.0) || params.rho > 1.0) {
        throw std::invalid_argument("rho must lie in [0, 1]");
    }
    if (!(params.alpha >= 0.0) || params.alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    if (!(params.q >= 0.0) || params.q > 1.0) {
        throw std::invalid_argument("q must lie in [0, 1]");
    }
    validate(params.schedule);
    validate_initial(params.initial, params.n_walkers);
}

bool verification_admissible(const ModelParams& params, std::string* reason) {
    double mean = 0.0;
    double var = 0.0;
    initial_moments(params.initial, &mean, &var);
    if (std::abs(mean - 0.5) > 1e-12) {
        if (reason) *reason = "initial law mean must equal 1/2";
        return false;
    }
    // For a deterministic start z_bar is exactly 1/2; otherwise walkers are
    // i.i.d. and Var[Zbar_0] = var / N.  The limit theorems degenerate when
    // E[Zbar_0 (1 - Zbar_0)] = 1/4 - Var[Zbar_0] vanishes.
    double x0 = 0.25 - var / static_cast<double>(params.n_walkers);
    if (!(x0 > 0.0)) {
        if (reason) {
            *reason = "initial law gives E[Zbar(1 - Zbar)] = 0";
        }
        return false;
    }
    return true;
}

WalkState initial_state(const ModelParams& params, RandomStream& stream) {
    WalkState state;
    state.step = 0;
    state.z.resize(static_cast<std::size_t>(params.n_walkers));
    if (const auto* det = std::get_if<DeterministicInitial>(&params.initial)) {
        state.z = det->values;
    } else if (const auto* beta =
                   std::get_if<SymmetricBetaInitial>(&params.initial)) {
        for (auto& z : state.z) z = stream.next_beta_symmetric(beta->a);
    } else {
        const auto& tp = std::get<TwoPointInitial>(params.initial);
        for (auto& z : state.z) {
            z = stream.next_bernoulli(tp.p) ? tp.hi : tp.lo;
        }
    }
    state.z_bar = mean_of(state.z);
    return state;
}

void draw_probabilities(const WalkState& state, double alpha,
                        std::vector<double>& out) {
    out.resize(state.z.size());
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        out[i] = (1.0 - alpha) * state.z[i] + alpha * state.z_bar;
    }
}

std::vector<double> draw_probabilities(const WalkState& state, double alpha) {
    std::vector<double> out;
    draw_probabilities(state, alpha, out);
    return out;
}

void step_in_place(WalkState& state, const ModelParams& params, double r,
                   RandomStream& stream, bool* draw_out) {
    const double alpha = params.alpha;
    const double rho = params.rho;
    const double q = params.q;
    const double z_bar = state.z_bar;
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        double p = (1.0 - alpha) * state.z[i] + alpha * z_bar;
        double indicator = stream.next_uniform() < p ? 1.0 : 0.0;
        if (draw_out && i == 0) *draw_out = indicator != 0.0;
        state.z[i] = reinforce(state.z[i], r, rho, q, indicator);
    }
    state.z_bar = mean_of(state.z);
    state.step += 1;
}

WalkState step(const WalkState& state, const ModelParams& params,
               RandomStream& stream) {
    WalkState next = state;
    step_in_place(next, params, step_size(params.schedule, state.step),
                  stream);
    return next;
}

MeanIncrements conditional_mean_increments(const WalkState& state,
                                           const ModelParams& params) {
    double r = step_size(params.schedule, state.step);
    MeanIncrements out;
    out.dz_bar_mean = (1.0 - (1.0 - params.rho) * r) * (state.z_bar - params.q);
    out.dsync_mean_factor =
        1.0 - (1.0 - params.rho * (1.0 - params.alpha)) * r;
    return out;
}

double conditional_variance_deviation(const WalkState& state,
                                      const ModelParams& params, int walker) {
    if (walker < 0 || walker >= params.n_walkers) {
        throw std::invalid_argument("walker index out of range");
    }
    double r = step_size(params.schedule, state.step);
    double n = static_cast<double>(params.n_walkers);
    std::vector<double> p = draw_probabilities(state, params.alpha);
    double others = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (static_cast<int>(j) != walker) others += p[j] * (1.0 - p[j]);
    }
    double own = p[static_cast<std::size_t>(walker)] *
                 (1.0 - p[static_cast<std::size_t>(walker)]);
    double rr = r * r * params.rho * params.rho;
    double frac = 1.0 - 1.0 / n;
    return rr * (frac * frac * own + others / (n * n));
}

double conditional_variance_mean(const WalkState& state,
                                 const ModelParams& params) {
    double r = step_size(params.schedule, state.step);
    double n = static_cast<double>(params.n_walkers);
    std::vector<double> p = draw_probabilities(state, params.alpha);
    double sum = 0.0;
    for (double pj : p) sum += pj * (1.0 - pj);
    return r * r * params.rho * params.rho * sum / (n * n);
}

}  // namespace rwalk
