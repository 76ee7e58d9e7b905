#ifndef RWALK_VERIFY_HPP
#define RWALK_VERIFY_HPP

// End-to-end verification procedures.  Each one builds its recording grid,
// runs the ensemble, and reduces the samples to TestReports; the acceptance
// suite and the CLI `verify` command share these entry points so they can
// never drift apart.

#include <cstdint>
#include <string>
#include <vector>

#include "rwalk/analytics.hpp"
#include "rwalk/config.hpp"
#include "rwalk/ensemble.hpp"
#include "rwalk/io.hpp"
#include "rwalk/model.hpp"

namespace rwalk {

struct VerifyOptions {
    std::uint64_t master_seed = 1;
    std::uint32_t replications = 1000;
    int threads = 0;

    // Windowed/scaled limit checks.
    std::vector<double> t_grid = {0.5, 1.0, 2.0};
    std::uint64_t n_anchor = 10'000;
    double horizon_factor = 4.0;  // plug-in horizon = factor * n_anchor
    // KS rejection at D > scale / sqrt(m); 1.7885 is the 1% level split
    // three ways across the time grid.
    double ks_critical_scale = 1.7885;
    double cov_tolerance = 0.20;
    double degenerate_eps = 0.01;  // plug-in exclusion Zhat(1-Zhat) < eps

    // Mean-square decay rates.
    std::uint64_t rate_min_n = 1'000;
    std::uint64_t rate_max_n = 100'000;
    std::uint64_t rate_horizon = 1'000'000;  // plug-in anchor for conv rates
    std::uint64_t rate_fit_min_n = 10'000;   // lowest decade discarded
    double rate_grid_ratio = 1.7782794100389228;  // 10^(1/4)
    double slope_tol = 0.10;
    double prefactor_tol = 0.15;
    double separation_min = 0.15;
    double pa_slope_tol = 0.05;  // graph-derived exponent check

    // Exact recursion / polarization checks.
    std::vector<std::uint64_t> checkpoints = {100, 1'000, 10'000};
    double sigma = 4.0;
    std::uint64_t polarization_horizon = 100'000;
    PolarizationThresholds polarization;

    // Fixation checks.
    std::uint64_t fixation_horizon = 100'000;
    // A replication counts as fixated when the constant tail covers at
    // least this final fraction of the horizon; presence of a bare detector
    // index is a coin flip on non-fixating runs and separates nothing.
    double fixation_tail_fraction = 0.05;
    double fixation_min_fraction = 0.95;  // runs that must fixate
    double fixation_max_fraction = 0.20;  // control runs that must not

    // Exact-law matching.
    double chi_square_level = 0.01;
};

// Chi-square match of Monte Carlo terminal states against the exact
// enumeration of the same configuration (statistic = p-value; every sample
// must land on an enumerated atom).  The initial law must be deterministic.
TestReport verify_enumeration(const ModelParams& params, int horizon,
                              std::uint32_t replications,
                              std::uint64_t master_seed, double level = 0.01,
                              int threads = 0);

// E[Z_n(1-Z_n)] against the exact one-walker recursion at each checkpoint;
// statistic = worst mismatch in SE units.
TestReport verify_recursion(const ModelParams& params,
                            const VerifyOptions& opts);

// Polarization / no-polarization / mean-to-target dispatch at a decade grid
// ending at polarization_horizon.
TestReport verify_polarization(const ModelParams& params,
                               const VerifyOptions& opts);

// Fraction of replications whose recorded draws are constant over the tail;
// compared against fixation_min_fraction or fixation_max_fraction.
TestReport verify_fixation(const ModelParams& params, bool expect_fixation,
                           const VerifyOptions& opts);

// Sync/conv mean-square decay: free-slope fits, fixed-slope prefactors,
// and the slope separation (the last is void at gamma = 1 where both
// theoretical slopes coincide).
struct RateVerification {
    std::vector<RateRow> table;
    TestReport sync_slope;
    TestReport conv_slope;
    TestReport sync_prefactor;
    TestReport conv_prefactor;
    TestReport separation;
    bool separation_applicable = true;
    double product_moment = 0.0;  // plug-in E[Zhat (1 - Zhat)]
    std::vector<TestReport> reports() const;
};
RateVerification verify_rates(const ModelParams& params,
                              const VerifyOptions& opts);

// One ensemble recorded on the union of the scaling grid floor(n t), the
// window grid floor(n + n^g t), and the plug-in horizon, reusable by every
// marginal/covariance report below.
struct FcltEnsemble {
    ModelParams params;
    EnsembleResult result;
    std::uint64_t n_anchor = 0;
    std::uint64_t horizon = 0;
    double c = 0.0;
    double gamma_exp = 0.0;
};
FcltEnsemble run_fclt_ensemble(const ModelParams& params,
                               const VerifyOptions& opts);

// One KS report per grid time for the selected limit kind.
std::vector<TestReport> fclt_marginal_reports(const FcltEnsemble& ens,
                                              VtKind kind,
                                              const VerifyOptions& opts);

// Covariance of the scaled mean-fluctuation process against plug-in
// V_min(s,t), with the plug-in horizon deficit folded into the prediction.
TestReport fclt_covariance_report(const FcltEnsemble& ens,
                                  const VerifyOptions& opts);

// The same covariance machinery on directly simulated time-changed Brownian
// paths with the given variance clock; calibrates the tolerance.
TestReport synthetic_covariance_calibration(const VtSpec& spec,
                                            const VerifyOptions& opts);

// Median fitted exponent of log r_n vs log n over independent graph
// realizations, against -(1+delta)/(2+delta).
TestReport verify_pa_exponent(double delta, std::uint32_t realizations,
                              std::uint64_t n_max, const VerifyOptions& opts);

// Reruns the configured ensemble with several worker counts and compares
// the CSV exports byte for byte.
TestReport verify_determinism(const RunConfig& config,
                              const std::string& scratch_dir);

}  // namespace rwalk

#endif
