// Statistical acceptance gate.  Each criterion pins its configuration, seed,
// and tolerance; the binary prints one verdict line per criterion (with the
// sub-checks indented underneath) and exits nonzero if any of them fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "rwalk/analytics.hpp"
#include "rwalk/config.hpp"
#include "rwalk/ensemble.hpp"
#include "rwalk/grid.hpp"
#include "rwalk/model.hpp"
#include "rwalk/stats.hpp"
#include "rwalk/verify.hpp"

using namespace rwalk;

namespace {

struct CriterionResult {
    std::string id;
    std::string headline;
    bool passed = true;
    std::vector<std::string> lines;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string describe(const TestReport& r) {
    std::string line = r.name + ": statistic=" + num(r.statistic) +
                       " threshold=" + num(r.threshold) +
                       (r.passed ? " pass" : " FAIL");
    if (!r.note.empty()) line += " (" + r.note + ")";
    return line;
}

void absorb(CriterionResult& cr, const TestReport& r) {
    cr.passed = cr.passed && r.passed;
    cr.lines.push_back(describe(r));
}

void absorb(CriterionResult& cr, const std::vector<TestReport>& reports) {
    for (const TestReport& r : reports) absorb(cr, r);
}

double detail(const TestReport& r, const std::string& key) {
    for (const auto& [k, v] : r.details) {
        if (k == key) return v;
    }
    return HUGE_VAL;
}

ModelParams single_walker(double c, double gamma_exp, std::uint64_t offset) {
    ModelParams p;
    p.n_walkers = 1;
    p.rho = 1.0;
    p.schedule = PowerLawSchedule{c, gamma_exp, offset};
    p.initial = DeterministicInitial{{0.5}};
    return p;
}

// --- C1: Monte Carlo terminal laws match the exact enumeration -------------

CriterionResult c1_exact_law() {
    struct Case {
        const char* label;
        int n_walkers;
        double rho, alpha, q;
        std::vector<double> steps;
    };
    // Small horizons across kernel/interaction regimes; every terminal law
    // is enumerable exactly.
    const std::vector<Case> cases = {
        {"copy-1w-h3", 1, 1.0, 0.0, 0.5, {0.5, 0.25, 0.125}},
        {"mix-1w-h4", 1, 0.5, 0.0, 0.3, {0.5, 0.25, 0.2, 0.4}},
        {"copy-2w-independent", 2, 1.0, 0.0, 0.5, {0.5, 0.25}},
        {"copy-2w-coupled", 2, 1.0, 0.5, 0.5, {0.5, 0.3, 0.25}},
        {"mix-2w-coupled", 2, 0.5, 0.5, 0.5, {0.5, 0.3, 0.25}},
        {"mix-2w-skew", 2, 0.7, 0.3, 0.6, {0.6, 0.35}},
        {"copy-3w-pooled", 3, 1.0, 1.0, 0.5, {0.5, 0.25}},
        {"mix-3w-weak-copy", 3, 0.25, 0.4, 0.2, {0.5, 0.4}},
        {"copy-1w-harmonic", 1, 1.0, 0.0, 0.5, {1.0 / 3, 0.25, 0.2, 1.0 / 6}},
        {"mix-3w-balanced", 3, 0.6, 0.6, 0.35, {0.45, 0.3}},
    };
    const double level = 0.001;  // 1% split across the ten configurations

    CriterionResult cr;
    cr.id = "C1 exact-law agreement";
    double min_p = 1.0;
    std::uint64_t seed = 101;
    for (const Case& cs : cases) {
        ModelParams p;
        p.n_walkers = cs.n_walkers;
        p.rho = cs.rho;
        p.alpha = cs.alpha;
        p.q = cs.q;
        p.schedule = ExplicitSchedule{cs.steps};
        p.initial =
            DeterministicInitial{std::vector<double>(cs.n_walkers, 0.5)};
        TestReport r = verify_enumeration(
            p, static_cast<int>(cs.steps.size()), 100'000, seed++, level);
        r.name = std::string(cs.label) + " " + r.name;
        absorb(cr, r);
        if (r.statistic < min_p) min_p = r.statistic;
    }
    cr.headline = "min chi-square p-value " + num(min_p) +
                  " across 10 configurations, level " + num(level);
    return cr;
}

// --- C2: single-walker product-moment recursion -----------------------------

CriterionResult c2_recursion() {
    CriterionResult cr;
    cr.id = "C2 second-moment recursion";
    double worst = 0.0;
    std::uint64_t seed = 201;
    for (double gamma_exp : {0.4, 0.8}) {
        VerifyOptions opts;
        opts.master_seed = seed++;
        opts.replications = 100'000;
        ModelParams p = single_walker(0.5, gamma_exp, 1);
        TestReport r = verify_recursion(p, opts);
        r.name = "recursion gamma=" + num(gamma_exp);
        absorb(cr, r);
        if (r.statistic > worst) worst = r.statistic;
    }
    cr.headline =
        "worst checkpoint mismatch " + num(worst) + " SE, allowed 4";
    return cr;
}

// --- C3: polarization dichotomy ---------------------------------------------

CriterionResult c3_polarization() {
    CriterionResult cr;
    cr.id = "C3 polarization dichotomy";

    VerifyOptions diverging;
    diverging.master_seed = 301;
    diverging.replications = 10'000;
    TestReport pol =
        verify_polarization(single_walker(0.7, 0.4, 1), diverging);
    pol.name = "divergent-squares " + pol.name;
    absorb(cr, pol);

    VerifyOptions converging;
    converging.master_seed = 302;
    converging.replications = 10'000;
    TestReport keep =
        verify_polarization(single_walker(0.5, 0.8, 1), converging);
    keep.name = "convergent-squares " + keep.name;
    absorb(cr, keep);

    // The surviving spread must be macroscopic, not a vacuous near-zero
    // match of the recursion.
    double mc_mean = detail(keep, "mc_mean");
    TestReport spread;
    spread.name = "convergent-squares macroscopic spread";
    spread.statistic = mc_mean;
    spread.threshold = 0.05;
    spread.passed = mc_mean >= spread.threshold;
    absorb(cr, spread);

    cr.headline = "quarter-gap " + num(pol.statistic) + " <= " +
                  num(pol.threshold) + "; surviving spread " + num(mc_mean);
    return cr;
}

// --- C4: mixing kernel drives the mean to the target -------------------------

CriterionResult c4_mean_to_target() {
    ModelParams p;
    p.n_walkers = 2;
    p.rho = 0.5;
    p.alpha = 0.5;
    p.q = 0.5;
    p.schedule = PowerLawSchedule{1.0, 0.75, 2};
    p.initial = DeterministicInitial{{0.2, 0.4}};

    EnsembleOptions opt;
    opt.master_seed = 401;
    opt.replications = 1000;
    EnsembleResult res = run_ensemble(p, ExplicitSteps{{10'000}}, opt);

    double acc = 0.0;
    for (std::uint32_t rep = 0; rep < opt.replications; ++rep) {
        acc += std::abs(res.zbar_at(rep, 0) - p.q);
    }
    acc /= opt.replications;

    CriterionResult cr;
    cr.id = "C4 mean-to-target attraction";
    TestReport r;
    r.name = "mean absolute gap |zbar - q| at n=10000";
    r.statistic = acc;
    r.threshold = 0.01;
    r.passed = acc <= r.threshold;
    r.sample_size = opt.replications;
    absorb(cr, r);
    cr.headline = "E|zbar - q| = " + num(acc) + " <= 0.01";
    return cr;
}

// --- C5: fixation of the drawn indicators ------------------------------------

CriterionResult c5_fixation() {
    CriterionResult cr;
    cr.id = "C5 fixation dichotomy";

    VerifyOptions fix;
    fix.master_seed = 501;
    fix.replications = 1000;
    TestReport must = verify_fixation(single_walker(0.7, 0.4, 1), true, fix);
    must.name = "divergent-squares " + must.name;
    absorb(cr, must);

    VerifyOptions control;
    control.master_seed = 502;
    control.replications = 1000;
    TestReport rarely =
        verify_fixation(single_walker(0.5, 0.8, 1), false, control);
    rarely.name = "convergent-squares " + rarely.name;
    absorb(cr, rarely);

    cr.headline = "fixated fractions " + num(must.statistic) +
                  " (>= 0.95 required) vs " + num(rarely.statistic) +
                  " (<= 0.20 required)";
    return cr;
}

// --- C6 / C9a: mean-square decay rates ---------------------------------------

ModelParams rate_params(double c, double gamma_exp, std::uint64_t offset) {
    ModelParams p;
    p.n_walkers = 8;
    p.rho = 1.0;
    p.alpha = 0.5;
    p.schedule = PowerLawSchedule{c, gamma_exp, offset};
    p.initial = DeterministicInitial{std::vector<double>(8, 0.5)};
    return p;
}

CriterionResult c6_rates() {
    VerifyOptions opts;
    opts.master_seed = 601;
    opts.replications = 1000;
    RateVerification rv = verify_rates(rate_params(1.0, 0.75, 2), opts);

    CriterionResult cr;
    cr.id = "C6 decay-rate fits (gamma < 1)";
    absorb(cr, rv.reports());
    cr.headline = "slopes " + num(detail(rv.sync_slope, "slope")) + " / " +
                  num(detail(rv.conv_slope, "slope")) + ", separation " +
                  num(rv.separation.statistic);
    return cr;
}

// --- C7 / C8 / C9b: limit-law marginals and covariance ----------------------

ModelParams fclt_params(double rho, double c, double gamma_exp,
                        std::uint64_t offset) {
    ModelParams p;
    p.n_walkers = 2;
    p.rho = rho;
    p.alpha = 0.5;
    p.q = 0.5;
    p.schedule = PowerLawSchedule{c, gamma_exp, offset};
    p.initial = DeterministicInitial{{0.3, 0.7}};
    return p;
}

VerifyOptions fclt_options(std::uint64_t seed) {
    VerifyOptions opts;
    opts.master_seed = seed;
    opts.replications = 5000;
    return opts;
}

CriterionResult c7_marginals(const FcltEnsemble& copying,
                             const FcltEnsemble& mixing) {
    CriterionResult cr;
    cr.id = "C7 gaussian marginals (gamma < 1)";
    VerifyOptions opts_a = fclt_options(701);
    VerifyOptions opts_b = fclt_options(702);
    absorb(cr, fclt_marginal_reports(copying, VtKind::FluctZ, opts_a));
    absorb(cr, fclt_marginal_reports(copying, VtKind::SyncRho1, opts_a));
    absorb(cr, fclt_marginal_reports(mixing, VtKind::FluctQ, opts_b));
    absorb(cr, fclt_marginal_reports(mixing, VtKind::SyncQ, opts_b));
    cr.headline = "12 KS marginal checks at scale 1.7885 / sqrt(m)";
    return cr;
}

CriterionResult c8_covariance(const FcltEnsemble& copying) {
    CriterionResult cr;
    cr.id = "C8 covariance structure";

    VerifyOptions synth;
    synth.master_seed = 801;
    synth.replications = 5000;
    VtSpec spec;
    spec.theorem = VtKind::FluctZ;
    spec.regime = VtRegime::gamma_lt_1;
    spec.c = 1.0;
    spec.gamma_exp = 0.75;
    spec.n_walkers = 2;
    spec.z_limit = 0.5;
    absorb(cr, synthetic_covariance_calibration(spec, synth));

    VerifyOptions real = fclt_options(701);
    absorb(cr, fclt_covariance_report(copying, real));

    cr.headline = "worst relative covariance error, tolerance 0.20";
    return cr;
}

CriterionResult c9_gamma_one() {
    CriterionResult cr;
    cr.id = "C9 gamma = 1 family";

    VerifyOptions ropts;
    ropts.master_seed = 901;
    ropts.replications = 1000;
    RateVerification rv = verify_rates(rate_params(2.0, 1.0, 3), ropts);
    absorb(cr, rv.reports());

    VerifyOptions copy_opts = fclt_options(902);
    FcltEnsemble copying =
        run_fclt_ensemble(fclt_params(1.0, 2.0, 1.0, 3), copy_opts);
    absorb(cr, fclt_marginal_reports(copying, VtKind::SyncRho1, copy_opts));

    VerifyOptions mix_opts = fclt_options(903);
    FcltEnsemble mixing =
        run_fclt_ensemble(fclt_params(0.5, 2.0, 1.0, 3), mix_opts);
    absorb(cr, fclt_marginal_reports(mixing, VtKind::FluctQ, mix_opts));
    absorb(cr, fclt_marginal_reports(mixing, VtKind::SyncQ, mix_opts));

    cr.headline = "rate fits at slope -1 plus 9 KS marginal checks";
    return cr;
}

// --- C10: preferential-attachment exponent -----------------------------------

CriterionResult c10_graph_exponent() {
    CriterionResult cr;
    cr.id = "C10 attachment-driven schedule exponent";
    VerifyOptions a;
    a.master_seed = 1001;
    TestReport flat = verify_pa_exponent(0.0, 20, 100'000, a);
    absorb(cr, flat);

    VerifyOptions b;
    b.master_seed = 1002;
    TestReport shifted = verify_pa_exponent(2.0, 20, 100'000, b);
    absorb(cr, shifted);

    cr.headline = "median slopes vs -1/2 and -3/4 within 0.05";
    return cr;
}

// --- C11: byte-level determinism ---------------------------------------------

CriterionResult c11_determinism() {
    RunConfig config;
    config.params.n_walkers = 3;
    config.params.rho = 0.5;
    config.params.alpha = 0.4;
    config.params.q = 0.3;
    config.params.schedule = PowerLawSchedule{1.0, 0.75, 2};
    config.params.initial = SymmetricBetaInitial{2.0};
    config.grid = ExplicitSteps{{10, 100, 1000}};
    config.options.master_seed = 1101;
    config.options.replications = 64;

    CriterionResult cr;
    cr.id = "C11 worker-count determinism";
    absorb(cr, verify_determinism(config, "acceptance_scratch"));
    cr.headline = "exports byte-identical across 1/4/8 workers";
    return cr;
}

void print_result(const CriterionResult& cr, double seconds) {
    std::printf("[%s] %s: %s  (%.1fs)\n", cr.passed ? "PASS" : "FAIL",
                cr.id.c_str(), cr.headline.c_str(), seconds);
    for (const std::string& line : cr.lines) {
        std::printf("       %s\n", line.c_str());
    }
    std::fflush(stdout);
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    std::vector<CriterionResult> results;

    auto run = [&](const char* id, auto&& fn) {
        auto start = clock::now();
        CriterionResult cr;
        try {
            cr = fn();
        } catch (const std::exception& e) {
            cr.id = std::string(id) + " (aborted)";
            cr.passed = false;
            cr.headline = std::string("exception: ") + e.what();
        }
        double seconds =
            std::chrono::duration<double>(clock::now() - start).count();
        print_result(cr, seconds);
        results.push_back(cr);
    };

    run("C1", c1_exact_law);
    run("C2", c2_recursion);
    run("C3", c3_polarization);
    run("C4", c4_mean_to_target);
    run("C5", c5_fixation);
    run("C6", c6_rates);

    // C7 and C8 share the gamma < 1 ensembles; build them once.
    {
        auto start = clock::now();
        FcltEnsemble copying =
            run_fclt_ensemble(fclt_params(1.0, 1.0, 0.75, 2),
                              fclt_options(701));
        FcltEnsemble mixing =
            run_fclt_ensemble(fclt_params(0.5, 1.0, 0.75, 2),
                              fclt_options(702));
        double setup =
            std::chrono::duration<double>(clock::now() - start).count();
        std::printf("(shared gamma<1 ensembles simulated in %.1fs)\n", setup);

        run("C7", [&] { return c7_marginals(copying, mixing); });
        run("C8", [&] { return c8_covariance(copying); });
    }

    run("C9", c9_gamma_one);
    run("C10", c10_graph_exponent);
    run("C11", c11_determinism);

    int failed = 0;
    for (const CriterionResult& cr : results) {
        if (!cr.passed) ++failed;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n",
                results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}
