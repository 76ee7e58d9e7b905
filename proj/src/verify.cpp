#include "rwalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rwalk/errors.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/pa_graph.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/schedule.hpp"
#include "rwalk/stats.hpp"

namespace rwalk {

namespace {

std::string step_key(const char* prefix, std::uint64_t n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%llu", prefix,
                  static_cast<unsigned long long>(n));
    return buf;
}

const PowerLawSchedule& require_power_law(const ModelParams& params,
                                          const char* what) {
    const auto* sched = std::get_if<PowerLawSchedule>(&params.schedule);
    if (sched == nullptr) {
        throw std::invalid_argument(std::string(what) +
                                    " needs a power-law step schedule");
    }
    return *sched;
}

EnsembleOptions ensemble_options(const VerifyOptions& opts) {
    EnsembleOptions eo;
    eo.master_seed = opts.master_seed;
    eo.replications = opts.replications;
    eo.threads = opts.threads;
    return eo;
}

// Column of per-replication values at one grid index.
template <typename F>
std::vector<double> per_rep(const EnsembleResult& result, std::size_t gi,
                            F&& value) {
    std::vector<double> xs(result.replications);
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        xs[rep] = value(rep, gi);
    }
    return xs;
}

VtSpec base_vt_spec(const ModelParams& params, double c, double gamma_exp,
                    VtKind kind) {
    VtSpec spec;
    spec.theorem = kind;
    spec.regime = gamma_exp == 1.0 ? VtRegime::gamma_eq_1
                                   : VtRegime::gamma_lt_1;
    spec.c = c;
    spec.gamma_exp = gamma_exp;
    spec.alpha = params.alpha;
    spec.rho = params.rho;
    spec.q = params.q;
    spec.n_walkers = params.n_walkers;
    return spec;
}

const char* kind_name(VtKind kind) {
    switch (kind) {
        case VtKind::FluctZ: return "fluct-z";
        case VtKind::SyncRho1: return "sync-rho1";
        case VtKind::FluctQ: return "fluct-q";
        case VtKind::SyncQ: return "sync-q";
    }
    return "?";
}

}  // namespace

TestReport verify_enumeration(const ModelParams& params, int horizon,
                              std::uint32_t replications,
                              std::uint64_t master_seed, double level,
                              int threads) {
    const auto* init = std::get_if<DeterministicInitial>(&params.initial);
    if (init == nullptr) {
        throw std::invalid_argument(
            "enumeration matching needs a deterministic initial law");
    }
    std::vector<double> z0 = init->values;
    if (z0.size() == 1 && params.n_walkers > 1) {
        z0.assign(static_cast<std::size_t>(params.n_walkers), z0[0]);
    }
    ExactDistribution dist =
        enumerate_distribution(params, z0, horizon);

    EnsembleOptions eo;
    eo.master_seed = master_seed;
    eo.replications = replications;
    eo.threads = threads;
    EnsembleResult result = run_ensemble(
        params, ExplicitSteps{{static_cast<std::uint64_t>(horizon)}}, eo);
    if (!result.has_full) {
        throw std::invalid_argument(
            "enumeration matching needs full snapshots; lower the "
            "replication count");
    }

    std::vector<std::uint64_t> observed(dist.atoms.size(), 0);
    std::uint64_t unmatched = 0;
    const std::size_t n = static_cast<std::size_t>(params.n_walkers);
    std::vector<double> z(n);
    for (std::uint32_t rep = 0; rep < replications; ++rep) {
        const double* state = result.state_at(rep, 0);
        z.assign(state, state + n);
        long idx = find_atom(dist, z);
        if (idx < 0) {
            ++unmatched;
        } else {
            ++observed[static_cast<std::size_t>(idx)];
        }
    }

    std::vector<double> expected(dist.atoms.size());
    for (std::size_t i = 0; i < dist.atoms.size(); ++i) {
        expected[i] = dist.atoms[i].prob * static_cast<double>(replications);
    }
    ChiSquareResult chi = chi_square_gof(expected, observed);

    TestReport report;
    report.name = "enumeration";
    report.statistic = chi.p_value;
    report.threshold = level;
    report.sample_size = replications;
    report.passed = chi.p_value >= level && unmatched == 0;
    if (unmatched > 0) {
        report.note = "samples off the enumerated support";
    }
    report.details = {{"chi_square", chi.statistic},
                      {"dof", chi.dof},
                      {"atoms", static_cast<double>(dist.atoms.size())},
                      {"bins_used", static_cast<double>(chi.bins_used)},
                      {"unmatched", static_cast<double>(unmatched)}};
    return report;
}

TestReport verify_recursion(const ModelParams& params,
                            const VerifyOptions& opts) {
    if (params.n_walkers != 1 || params.rho != 1.0) {
        throw std::invalid_argument(
            "the product-moment recursion is exact only for one walker "
            "with a pure copying kernel");
    }
    if (opts.checkpoints.empty()) {
        throw std::invalid_argument("recursion check needs checkpoints");
    }
    std::vector<std::uint64_t> steps = opts.checkpoints;
    std::sort(steps.begin(), steps.end());
    const std::uint64_t horizon = steps.back();

    const double x0 = initial_product_moment(params.initial);
    std::vector<double> xs =
        variance_recursion_alpha0(x0, params.schedule, horizon);

    EnsembleResult result =
        run_ensemble(params, ExplicitSteps{steps}, ensemble_options(opts));

    TestReport report;
    report.name = "recursion";
    report.threshold = opts.sigma;
    report.sample_size = opts.replications;
    double worst = 0.0;
    for (std::size_t gi = 0; gi < steps.size(); ++gi) {
        std::vector<double> spread =
            per_rep(result, gi, [&](std::uint32_t rep, std::size_t g) {
                double z = result.zbar_at(rep, g);
                return z * (1.0 - z);
            });
        SummaryStats s = summarize(spread);
        const double target = xs[steps[gi]];
        const double se = s.se_mean();
        const double units = se > 0.0 ? std::abs(s.mean - target) / se
                                      : (s.mean == target ? 0.0 : HUGE_VAL);
        worst = std::max(worst, units);
        report.details.emplace_back(step_key("target", steps[gi]), target);
        report.details.emplace_back(step_key("mc", steps[gi]), s.mean);
        report.details.emplace_back(step_key("se", steps[gi]), se);
    }
    report.statistic = worst;
    report.passed = worst <= opts.sigma;
    return report;
}

TestReport verify_polarization(const ModelParams& params,
                               const VerifyOptions& opts) {
    std::vector<std::uint64_t> steps;
    for (std::uint64_t s = 10; s < opts.polarization_horizon; s *= 10) {
        steps.push_back(s);
    }
    steps.push_back(opts.polarization_horizon);
    EnsembleResult result =
        run_ensemble(params, ExplicitSteps{steps}, ensemble_options(opts));
    return polarization_test(result, params, opts.polarization);
}

TestReport verify_fixation(const ModelParams& params, bool expect_fixation,
                           const VerifyOptions& opts) {
    if (params.n_walkers != 1) {
        throw std::invalid_argument(
            "fixation tracking records the draws of a single walker");
    }
    EnsembleOptions eo = ensemble_options(opts);
    eo.record_draws = true;
    EnsembleResult result = run_ensemble(
        params, ExplicitSteps{{opts.fixation_horizon}}, eo);

    const double horizon = static_cast<double>(opts.fixation_horizon);
    const double latest_start =
        (1.0 - opts.fixation_tail_fraction) * horizon;
    std::uint64_t present = 0;
    std::uint64_t qualified = 0;
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        std::int64_t m =
            fixation_index(result.draw_words[rep], opts.fixation_horizon);
        if (m < 1) continue;
        ++present;
        if (static_cast<double>(m - 1) <= latest_start) ++qualified;
    }
    const double reps = static_cast<double>(result.replications);
    const double qualified_frac = qualified / reps;

    TestReport report;
    report.name = expect_fixation ? "fixation" : "fixation-control";
    report.statistic = qualified_frac;
    report.threshold = expect_fixation ? opts.fixation_min_fraction
                                       : opts.fixation_max_fraction;
    report.passed = expect_fixation ? qualified_frac >= report.threshold
                                    : qualified_frac <= report.threshold;
    report.sample_size = result.replications;
    report.details = {
        {"detector_present_fraction", present / reps},
        {"tail_fraction", opts.fixation_tail_fraction},
    };
    return report;
}

std::vector<TestReport> RateVerification::reports() const {
    return {sync_slope, conv_slope, sync_prefactor, conv_prefactor,
            separation};
}

RateVerification verify_rates(const ModelParams& params,
                              const VerifyOptions& opts) {
    const PowerLawSchedule& sched =
        require_power_law(params, "rate verification");
    if (params.rho != 1.0 || params.alpha <= 0.0 || params.n_walkers < 2) {
        throw std::invalid_argument(
            "rate verification needs a copying kernel, alpha > 0 and at "
            "least two walkers");
    }
    const double c = sched.c;
    const double g = sched.gamma_exp;
    const double n_walkers = static_cast<double>(params.n_walkers);

    std::vector<std::uint64_t> steps;
    for (int k = 0;; ++k) {
        const double v = static_cast<double>(opts.rate_min_n) *
                         std::pow(opts.rate_grid_ratio, k);
        const std::uint64_t n = static_cast<std::uint64_t>(std::llround(v));
        if (n > opts.rate_max_n) break;
        steps.push_back(n);
    }
    steps.push_back(opts.rate_horizon);

    EnsembleResult result =
        run_ensemble(params, ExplicitSteps{steps}, ensemble_options(opts));
    std::vector<MomentRow> rows = moment_stream(result);

    // Plug-in spread of the limit, E[Zhat (1 - Zhat)].
    double product_moment = 0.0;
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        const double zh = result.z_hat(rep);
        product_moment += zh * (1.0 - zh);
    }
    product_moment /= static_cast<double>(result.replications);

    RateVerification out;
    std::vector<double> fit_n, fit_sync, fit_conv;
    for (const MomentRow& row : rows) {
        if (row.n > opts.rate_max_n) continue;
        const double deficit =
            fluct_plugin_deficit(g, row.n, opts.rate_horizon);
        const double conv = row.mean_sq_conv_proxy / deficit;
        out.table.push_back({row.n, row.mean_sq_sync, conv, 0.0, 0.0});
        if (row.n >= opts.rate_fit_min_n) {
            fit_n.push_back(static_cast<double>(row.n));
            fit_sync.push_back(row.mean_sq_sync);
            fit_conv.push_back(conv);
        }
    }
    if (fit_n.size() < 3) {
        throw std::invalid_argument(
            "rate verification needs at least three grid points above the "
            "fit cutoff");
    }

    const PowerFit sync_fit = log_log_fit(fit_n, fit_sync);
    const PowerFit conv_fit = log_log_fit(fit_n, fit_conv);
    for (RateRow& row : out.table) {
        const double n = static_cast<double>(row.n);
        row.sync_fit =
            std::exp(sync_fit.intercept) * std::pow(n, sync_fit.slope);
        row.conv_fit =
            std::exp(conv_fit.intercept) * std::pow(n, conv_fit.slope);
    }

    const double sync_slope_target = -g;
    const double conv_slope_target = -(2.0 * g - 1.0);
    double sync_pref_target;
    double conv_pref_target;
    if (g < 1.0) {
        sync_pref_target = (1.0 - 1.0 / n_walkers) * c * product_moment /
                           (2.0 * params.alpha);
        conv_pref_target =
            c * c * product_moment / (n_walkers * (2.0 * g - 1.0));
    } else {
        // At gamma = 1 both mean squares decay like 1/n with amplified
        // prefactors; the limits need 2 c alpha > 1.
        if (2.0 * c * params.alpha <= 1.0) {
            throw InadmissibleRegime(
                "gamma = 1 deviation rate needs 2 c alpha > 1");
        }
        sync_pref_target = (1.0 - 1.0 / n_walkers) * c * c * product_moment /
                           (2.0 * c * params.alpha - 1.0);
        conv_pref_target = c * c * product_moment / n_walkers;
    }

    auto slope_report = [&](const char* name, const PowerFit& fit,
                            double target) {
        TestReport r;
        r.name = name;
        r.statistic = std::abs(fit.slope - target);
        r.threshold = opts.slope_tol;
        r.passed = r.statistic <= r.threshold;
        r.sample_size = fit_n.size();
        r.details = {{"slope", fit.slope},
                     {"target", target},
                     {"r_squared", fit.r_squared}};
        return r;
    };
    auto prefactor_report = [&](const char* name, double slope,
                                const std::vector<double>& ys,
                                double target) {
        const double pref = fixed_slope_prefactor(fit_n, ys, slope);
        TestReport r;
        r.name = name;
        r.statistic = std::abs(pref / target - 1.0);
        r.threshold = opts.prefactor_tol;
        r.passed = r.statistic <= r.threshold;
        r.sample_size = fit_n.size();
        r.details = {{"prefactor", pref},
                     {"target", target},
                     {"product_moment", product_moment}};
        return r;
    };

    out.sync_slope =
        slope_report("sync-rate slope", sync_fit, sync_slope_target);
    out.conv_slope =
        slope_report("conv-rate slope", conv_fit, conv_slope_target);
    out.sync_prefactor = prefactor_report("sync-rate prefactor",
                                          sync_slope_target, fit_sync,
                                          sync_pref_target);
    out.conv_prefactor = prefactor_report("conv-rate prefactor",
                                          conv_slope_target, fit_conv,
                                          conv_pref_target);

    out.separation.name = "rate-separation";
    out.separation.threshold = opts.separation_min;
    out.separation.sample_size = fit_n.size();
    if (g < 1.0) {
        out.separation_applicable = true;
        out.separation.statistic = conv_fit.slope - sync_fit.slope;
        out.separation.passed =
            out.separation.statistic >= opts.separation_min;
        out.separation.details = {{"expected_gap", 1.0 - g}};
    } else {
        out.separation_applicable = false;
        out.separation.statistic = 0.0;
        out.separation.passed = true;
        out.separation.note =
            "slopes coincide at gamma = 1; separation not applicable";
    }
    out.product_moment = product_moment;
    return out;
}

FcltEnsemble run_fclt_ensemble(const ModelParams& params,
                               const VerifyOptions& opts) {
    const PowerLawSchedule& sched =
        require_power_law(params, "scaled-process verification");
    const std::uint64_t n = opts.n_anchor;
    const std::uint64_t horizon = static_cast<std::uint64_t>(
        std::llround(opts.horizon_factor * static_cast<double>(n)));

    std::set<std::uint64_t> grid;
    for (double t : opts.t_grid) {
        const std::uint64_t si = scaling_index(n, t);
        const std::uint64_t wi = window_index(n, sched.gamma_exp, t);
        if (si == 0) {
            throw std::invalid_argument(
                "scaling grid hits step zero; raise the anchor");
        }
        if (wi > horizon || si > horizon) {
            throw std::invalid_argument(
                "time grid exceeds the plug-in horizon; raise "
                "horizon_factor");
        }
        grid.insert(si);
        grid.insert(wi);
    }
    grid.insert(horizon);

    FcltEnsemble ens;
    ens.params = params;
    ens.n_anchor = n;
    ens.horizon = horizon;
    ens.c = sched.c;
    ens.gamma_exp = sched.gamma_exp;
    ens.result = run_ensemble(
        params,
        ExplicitSteps{std::vector<std::uint64_t>(grid.begin(), grid.end())},
        ensemble_options(opts));
    return ens;
}

std::vector<TestReport> fclt_marginal_reports(const FcltEnsemble& ens,
                                              VtKind kind,
                                              const VerifyOptions& opts) {
    VtSpec spec = base_vt_spec(ens.params, ens.c, ens.gamma_exp, kind);
    validate_vt(spec);

    std::vector<std::vector<double>> samples;
    std::vector<bool> excluded;
    const bool plug_in_limit =
        kind == VtKind::FluctZ || kind == VtKind::SyncRho1;
    switch (kind) {
        case VtKind::FluctZ:
            samples = scaled_fluct_process(ens.result, ens.gamma_exp,
                                           ens.n_anchor, opts.t_grid);
            break;
        case VtKind::SyncRho1:
        case VtKind::SyncQ:
            samples = scaled_sync_process(ens.result, spec, ens.n_anchor,
                                          opts.t_grid);
            break;
        case VtKind::FluctQ:
            samples = scaled_mean_to_q_process(ens.result, spec,
                                               ens.n_anchor, opts.t_grid);
            break;
    }
    if (plug_in_limit) {
        excluded = degenerate_plugin_mask(ens.result, opts.degenerate_eps);
    }

    std::vector<TestReport> reports;
    const std::uint32_t reps = ens.result.replications;
    for (std::size_t k = 0; k < opts.t_grid.size(); ++k) {
        const double t = opts.t_grid[k];
        std::vector<double> vts(reps);
        if (plug_in_limit) {
            for (std::uint32_t rep = 0; rep < reps; ++rep) {
                spec.z_limit = ens.result.z_hat(rep);
                double v = excluded.empty() || !excluded[rep]
                               ? v_t(spec, t)
                               : 1.0;  // placeholder, replication dropped
                if (kind == VtKind::FluctZ) {
                    v *= fluct_plugin_deficit(ens.gamma_exp,
                                              scaling_index(ens.n_anchor, t),
                                              ens.horizon);
                }
                vts[rep] = v;
            }
        } else {
            std::fill(vts.begin(), vts.end(), v_t(spec, t));
        }
        std::string name =
            std::string(kind_name(kind)) + " t=" + format_double(t);
        reports.push_back(mixed_gaussian_test(name, samples[k], vts,
                                              excluded,
                                              opts.ks_critical_scale));
    }
    return reports;
}

TestReport fclt_covariance_report(const FcltEnsemble& ens,
                                  const VerifyOptions& opts) {
    VtSpec spec =
        base_vt_spec(ens.params, ens.c, ens.gamma_exp, VtKind::FluctZ);
    validate_vt(spec);

    std::vector<std::vector<double>> samples = scaled_fluct_process(
        ens.result, ens.gamma_exp, ens.n_anchor, opts.t_grid);
    std::vector<bool> excluded =
        degenerate_plugin_mask(ens.result, opts.degenerate_eps);

    std::vector<double> zhats;
    for (std::uint32_t rep = 0; rep < ens.result.replications; ++rep) {
        if (!excluded[rep]) zhats.push_back(ens.result.z_hat(rep));
    }
    std::vector<std::vector<double>> kept(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        kept[k].reserve(zhats.size());
        for (std::uint32_t rep = 0; rep < ens.result.replications; ++rep) {
            if (!excluded[rep]) kept[k].push_back(samples[k][rep]);
        }
    }

    const double g = ens.gamma_exp;
    const std::uint64_t n = ens.n_anchor;
    const std::uint64_t horizon = ens.horizon;
    auto predicted = [spec, zhats, g, n, horizon](double s,
                                                  double t) mutable {
        const double lo = std::min(s, t);
        const double hi = std::max(s, t);
        const double deficit =
            fluct_plugin_deficit(g, scaling_index(n, hi), horizon);
        double acc = 0.0;
        for (double zh : zhats) {
            spec.z_limit = zh;
            acc += v_t(spec, lo) * deficit;
        }
        return acc / static_cast<double>(zhats.size());
    };
    return covariance_structure_test("fluct-z covariance", kept, opts.t_grid,
                                     predicted, opts.cov_tolerance);
}

TestReport synthetic_covariance_calibration(const VtSpec& spec,
                                            const VerifyOptions& opts) {
    validate_vt(spec);
    std::vector<double> times = opts.t_grid;
    std::sort(times.begin(), times.end());
    std::vector<double> variances(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        variances[k] = v_t(spec, times[k]);
        if (k > 0 && variances[k] < variances[k - 1]) {
            throw std::invalid_argument(
                "variance clock must be nondecreasing");
        }
    }

    // Independent Gaussian increments reproduce W at the variance clock
    // exactly, so this isolates the estimator error of the covariance test.
    const std::uint32_t reps = opts.replications;
    std::vector<std::vector<double>> samples(
        times.size(), std::vector<double>(reps, 0.0));
    for (std::uint32_t rep = 0; rep < reps; ++rep) {
        RandomStream stream(opts.master_seed, 0x5C'0000'0000ULL + rep);
        double x = 0.0;
        double prev = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            x += std::sqrt(variances[k] - prev) * stream.next_gaussian();
            prev = variances[k];
            samples[k][rep] = x;
        }
    }
    const VtSpec frozen = spec;
    auto predicted = [frozen](double s, double t) {
        return v_t(frozen, std::min(s, t));
    };
    return covariance_structure_test("synthetic covariance calibration",
                                     samples, times, predicted,
                                     opts.cov_tolerance);
}

TestReport verify_pa_exponent(double delta, std::uint32_t realizations,
                              std::uint64_t n_max,
                              const VerifyOptions& opts) {
    if (realizations == 0 || n_max < 100) {
        throw std::invalid_argument(
            "graph exponent check needs realizations and n_max >= 100");
    }
    // Nine geometric fit points across the final decade.
    std::vector<std::uint64_t> fit_points;
    const double lo = static_cast<double>(n_max) / 10.0;
    for (int k = 0; k <= 8; ++k) {
        fit_points.push_back(static_cast<std::uint64_t>(
            std::llround(lo * std::pow(10.0, k / 8.0))));
    }

    std::vector<double> slopes(realizations);
    for (std::uint32_t j = 0; j < realizations; ++j) {
        RandomStream stream(opts.master_seed, j);
        std::vector<std::uint32_t> md =
            pa_max_degree_trajectory(delta, n_max, stream);
        GraphDerivedSchedule sched{0.5, std::move(md)};
        std::vector<double> xs, ys;
        for (std::uint64_t n : fit_points) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(step_size(sched, n));
        }
        slopes[j] = log_log_fit(xs, ys).slope;
    }
    std::vector<double> sorted = slopes;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = sorted.size() % 2 == 1
                              ? sorted[mid]
                              : 0.5 * (sorted[mid - 1] + sorted[mid]);
    const double target = -(1.0 + delta) / (2.0 + delta);

    TestReport report;
    report.name = std::string("pa-exponent delta=") + format_double(delta);
    report.statistic = std::abs(median - target);
    report.threshold = opts.pa_slope_tol;
    report.passed = report.statistic <= report.threshold;
    report.sample_size = realizations;
    report.details = {{"median_slope", median}, {"target", target}};
    return report;
}

TestReport verify_determinism(const RunConfig& config,
                              const std::string& scratch_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(scratch_dir);

    const int thread_counts[] = {1, 4, 8};
    std::vector<std::string> reduced, moments, full;
    for (int tc : thread_counts) {
        EnsembleOptions eo = config.options;
        eo.threads = tc;
        EnsembleResult result = run_ensemble(config.params, config.grid, eo);

        const std::string tag =
            scratch_dir + "/threads" + std::to_string(tc);
        write_reduced_snapshots_csv(tag + "_reduced.csv", result);
        write_moments_csv(tag + "_moments.csv", moment_stream(result));
        reduced.push_back(read_file(tag + "_reduced.csv"));
        moments.push_back(read_file(tag + "_moments.csv"));
        if (result.has_full) {
            write_full_snapshots_csv(tag + "_full.csv", result);
            full.push_back(read_file(tag + "_full.csv"));
        }
    }

    std::uint64_t mismatches = 0;
    std::uint64_t compared = 0;
    auto compare = [&](const std::vector<std::string>& runs) {
        for (std::size_t i = 1; i < runs.size(); ++i) {
            ++compared;
            if (runs[i] != runs[0]) ++mismatches;
        }
    };
    compare(reduced);
    compare(moments);
    compare(full);

    TestReport report;
    report.name = "determinism";
    report.statistic = static_cast<double>(mismatches);
    report.threshold = 0.0;
    report.passed = mismatches == 0;
    report.sample_size = config.options.replications;
    report.details = {{"files_compared", static_cast<double>(compared)}};
    return report;
}

}  // namespace rwalk
