#include "rwalk/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwalk/errors.hpp"
#include "rwalk/grid.hpp"
#include "rwalk/oracle.hpp"

namespace rwalk {

double decay_rate(const VtSpec& spec) {
    switch (spec.theorem) {
        case VtKind::FluctZ:
            return 0.0;
        case VtKind::SyncRho1:
            return spec.c * spec.alpha;
        case VtKind::FluctQ:
            return spec.c * (1.0 - spec.rho);
        case VtKind::SyncQ:
            return spec.c * (1.0 - spec.rho * (1.0 - spec.alpha));
    }
    return 0.0;
}

void validate_vt(const VtSpec& spec) {
    if (!(spec.c > 0.0)) {
        throw std::invalid_argument("limit variance: c must be positive");
    }
    if (spec.n_walkers < 1) {
        throw std::invalid_argument("limit variance: need at least one walker");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(spec.alpha) || !in_unit(spec.rho) || !in_unit(spec.q) ||
        !in_unit(spec.z_limit)) {
        throw std::invalid_argument(
            "limit variance: alpha, rho, q, z_limit must lie in [0, 1]");
    }
    if (spec.regime == VtRegime::gamma_eq_1) {
        if (spec.gamma_exp != 1.0) {
            throw InadmissibleRegime(
                "regime gamma_eq_1 requires gamma_exp == 1");
        }
    } else if (!(spec.gamma_exp > 0.0) || !(spec.gamma_exp < 1.0)) {
        throw InadmissibleRegime(
            "regime gamma_lt_1 requires gamma_exp in (0, 1)");
    }
    const bool eq1 = spec.regime == VtRegime::gamma_eq_1;
    switch (spec.theorem) {
        case VtKind::FluctZ:
            if (!(spec.gamma_exp > 0.5)) {
                throw InadmissibleRegime(
                    "mean-fluctuation limit needs 2 gamma - 1 > 0");
            }
            break;
        case VtKind::SyncRho1:
            if (spec.rho != 1.0) {
                throw InadmissibleRegime(
                    "copying-kernel deviation limit needs rho = 1");
            }
            if (!(spec.alpha > 0.0)) {
                throw InadmissibleRegime(
                    "copying-kernel deviation limit needs alpha > 0");
            }
            if (eq1 && !(2.0 * spec.c * spec.alpha > 1.0)) {
                throw InadmissibleRegime(
                    "gamma = 1 deviation limit needs 2 c alpha > 1");
            }
            break;
        case VtKind::FluctQ:
            if (!(spec.rho < 1.0)) {
                throw InadmissibleRegime(
                    "mean-to-target limit needs rho < 1");
            }
            if (eq1 && !(2.0 * spec.c * (1.0 - spec.rho) > 1.0)) {
                throw InadmissibleRegime(
                    "gamma = 1 mean-to-target limit needs 2 c (1 - rho) > 1");
            }
            break;
        case VtKind::SyncQ: {
            if (!(spec.rho < 1.0)) {
                throw InadmissibleRegime(
                    "q-centred deviation limit needs rho < 1");
            }
            double beta = 1.0 - spec.rho * (1.0 - spec.alpha);
            if (!(beta > 0.0)) {
                throw InadmissibleRegime(
                    "q-centred deviation limit needs rho (1 - alpha) < 1");
            }
            if (eq1 && !(2.0 * spec.c * beta > 1.0)) {
                throw InadmissibleRegime(
                    "gamma = 1 q-centred deviation limit needs "
                    "2 c (1 - rho (1 - alpha)) > 1");
            }
            break;
        }
    }
}

double v_t(const VtSpec& spec, double t) {
    validate_vt(spec);
    if (!(t >= 0.0)) {
        throw std::invalid_argument("limit variance: t must be nonnegative");
    }
    const double c = spec.c;
    const double n = static_cast<double>(spec.n_walkers);
    const double zz = spec.z_limit * (1.0 - spec.z_limit);
    const double qq = spec.q * (1.0 - spec.q);
    const double among = 1.0 - 1.0 / n;
    switch (spec.theorem) {
        case VtKind::FluctZ: {
            double e = 2.0 * spec.gamma_exp - 1.0;
            return c * c / (n * e) * zz * std::pow(t, e);
        }
        case VtKind::SyncRho1: {
            if (spec.regime == VtRegime::gamma_lt_1) {
                return among * c * zz / (2.0 * spec.alpha) *
                       std::exp(2.0 * c * spec.alpha * t);
            }
            double e = 2.0 * c * spec.alpha - 1.0;
            return among * c * c * zz / e * std::pow(1.0 + t, e);
        }
        case VtKind::FluctQ: {
            double u = 1.0 - spec.rho;
            double rr = spec.rho * spec.rho;
            if (spec.regime == VtRegime::gamma_lt_1) {
                return c * qq * rr / (2.0 * n * u) *
                       std::exp(2.0 * c * u * t);
            }
            double e = 2.0 * c * u - 1.0;
            return c * c * qq * rr / (n * e) * std::pow(1.0 + t, e);
        }
        case VtKind::SyncQ: {
            double beta = 1.0 - spec.rho * (1.0 - spec.alpha);
            double rr = spec.rho * spec.rho;
            if (spec.regime == VtRegime::gamma_lt_1) {
                return among * c * rr * qq / (2.0 * beta) *
                       std::exp(2.0 * c * beta * t);
            }
            double e = 2.0 * c * beta - 1.0;
            return among * c * c * rr * qq / e * std::pow(1.0 + t, e);
        }
    }
    return 0.0;
}

std::vector<std::vector<double>> scaled_fluct_process(
    const EnsembleResult& result, double gamma_exp, std::uint64_t n,
    const std::vector<double>& t_grid) {
    if (!(gamma_exp > 0.5) || gamma_exp > 1.0) {
        throw InadmissibleRegime(
            "mean-fluctuation scaling needs gamma_exp in (1/2, 1]");
    }
    const double e = 2.0 * gamma_exp - 1.0;
    const double n_scale = std::pow(static_cast<double>(n), gamma_exp - 0.5);
    std::vector<std::vector<double>> out(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        double t = t_grid[k];
        if (!(t >= 0.0)) {
            throw std::invalid_argument("scaling times must be nonnegative");
        }
        std::size_t gi = result.grid_index(scaling_index(n, t));
        double scale = std::pow(t, e) * n_scale;
        auto& row = out[k];
        row.resize(result.replications);
        for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
            row[rep] = scale * (result.zbar_at(rep, gi) - result.z_hat(rep));
        }
    }
    return out;
}

double fluct_plugin_deficit(double gamma_exp, std::uint64_t index,
                            std::uint64_t horizon) {
    if (index > horizon) {
        throw std::invalid_argument(
            "plug-in deficit: snapshot past the plug-in horizon");
    }
    double ratio = static_cast<double>(index) / static_cast<double>(horizon);
    return 1.0 - std::pow(ratio, 2.0 * gamma_exp - 1.0);
}

namespace {

double window_scale(const VtSpec& spec, std::uint64_t n, double t) {
    double rate = decay_rate(spec);
    if (spec.regime == VtRegime::gamma_lt_1) {
        return std::pow(static_cast<double>(n), spec.gamma_exp / 2.0) *
               std::exp(rate * t);
    }
    return std::sqrt(static_cast<double>(n)) * std::pow(1.0 + t, rate);
}

template <typename Value>
std::vector<std::vector<double>> windowed_process(
    const EnsembleResult& result, const VtSpec& spec, std::uint64_t n,
    const std::vector<double>& t_grid, Value value) {
    validate_vt(spec);
    std::vector<std::vector<double>> out(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        double t = t_grid[k];
        if (!(t >= 0.0)) {
            throw std::invalid_argument("window times must be nonnegative");
        }
        std::size_t gi =
            result.grid_index(window_index(n, spec.gamma_exp, t));
        double scale = window_scale(spec, n, t);
        auto& row = out[k];
        row.resize(result.replications);
        for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
            row[rep] = scale * value(rep, gi);
        }
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> scaled_sync_process(
    const EnsembleResult& result, const VtSpec& spec, std::uint64_t n,
    const std::vector<double>& t_grid) {
    if (spec.theorem != VtKind::SyncRho1 && spec.theorem != VtKind::SyncQ) {
        throw std::invalid_argument(
            "sync process extraction needs a deviation-limit spec");
    }
    return windowed_process(result, spec, n, t_grid,
                            [&result](std::uint32_t rep, std::size_t gi) {
                                return result.dev0_at(rep, gi);
                            });
}

std::vector<std::vector<double>> scaled_mean_to_q_process(
    const EnsembleResult& result, const VtSpec& spec, std::uint64_t n,
    const std::vector<double>& t_grid) {
    if (spec.theorem != VtKind::FluctQ) {
        throw std::invalid_argument(
            "mean-to-target extraction needs a mean-to-target spec");
    }
    const double q = spec.q;
    return windowed_process(result, spec, n, t_grid,
                            [&result, q](std::uint32_t rep, std::size_t gi) {
                                return result.zbar_at(rep, gi) - q;
                            });
}

std::vector<bool> degenerate_plugin_mask(const EnsembleResult& result,
                                         double eps) {
    std::vector<bool> mask(result.replications, false);
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        double zh = result.z_hat(rep);
        mask[rep] = zh * (1.0 - zh) < eps;
    }
    return mask;
}

TestReport mixed_gaussian_test(const std::string& name,
                               const std::vector<double>& samples,
                               const std::vector<double>& vt_per_rep,
                               const std::vector<bool>& excluded,
                               double critical_scale) {
    if (samples.size() != vt_per_rep.size()) {
        throw std::invalid_argument(
            "mixed-gaussian test: one plug-in variance per sample required");
    }
    if (!excluded.empty() && excluded.size() != samples.size()) {
        throw std::invalid_argument(
            "mixed-gaussian test: exclusion mask size mismatch");
    }
    std::vector<double> standardized;
    standardized.reserve(samples.size());
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if ((!excluded.empty() && excluded[i]) || !(vt_per_rep[i] > 0.0)) {
            ++dropped;
            continue;
        }
        standardized.push_back(samples[i] / std::sqrt(vt_per_rep[i]));
    }
    TestReport report;
    report.name = name;
    report.sample_size = standardized.size();
    report.details.emplace_back("excluded", static_cast<double>(dropped));
    if (standardized.empty()) {
        report.statistic = 1.0;
        report.threshold = 0.0;
        report.passed = false;
        report.note = "inconclusive: every replication was excluded";
        return report;
    }
    report.statistic = ks_distance_vs_std_normal(std::move(standardized));
    report.threshold =
        critical_scale / std::sqrt(static_cast<double>(report.sample_size));
    report.passed = report.statistic < report.threshold;
    return report;
}

TestReport covariance_structure_test(
    const std::string& name, const std::vector<std::vector<double>>& samples,
    const std::vector<double>& t_grid,
    const std::function<double(double, double)>& predicted_cov,
    double tolerance) {
    if (t_grid.size() < 3 || samples.size() != t_grid.size()) {
        throw std::invalid_argument(
            "covariance test needs at least three grid times with samples");
    }
    const std::size_t m = samples[0].size();
    if (m < 2) {
        throw std::invalid_argument(
            "covariance test needs at least two replications");
    }
    for (const auto& row : samples) {
        if (row.size() != m) {
            throw std::invalid_argument(
                "covariance test: ragged sample matrix");
        }
    }
    std::vector<double> means(t_grid.size());
    for (std::size_t a = 0; a < t_grid.size(); ++a) {
        double s = 0.0;
        for (double v : samples[a]) s += v;
        means[a] = s / static_cast<double>(m);
    }
    double worst = 0.0;
    double worst_s = t_grid[0];
    double worst_t = t_grid[0];
    for (std::size_t a = 0; a < t_grid.size(); ++a) {
        for (std::size_t b = a; b < t_grid.size(); ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                acc += (samples[a][i] - means[a]) * (samples[b][i] - means[b]);
            }
            double emp = acc / static_cast<double>(m - 1);
            double pred = predicted_cov(t_grid[a], t_grid[b]);
            if (!(pred > 0.0)) {
                throw std::invalid_argument(
                    "covariance test: prediction must be positive on the "
                    "grid");
            }
            double rel = std::abs(emp - pred) / pred;
            if (rel > worst) {
                worst = rel;
                worst_s = t_grid[a];
                worst_t = t_grid[b];
            }
        }
    }
    TestReport report;
    report.name = name;
    report.statistic = worst;
    report.threshold = tolerance;
    report.passed = worst <= tolerance;
    report.sample_size = m;
    report.details.emplace_back("worst_pair_s", worst_s);
    report.details.emplace_back("worst_pair_t", worst_t);
    return report;
}

double initial_product_moment(const InitialLaw& law) {
    if (const auto* det = std::get_if<DeterministicInitial>(&law)) {
        double s = 0.0;
        for (double v : det->values) s += v * (1.0 - v);
        return s / static_cast<double>(det->values.size());
    }
    if (const auto* beta = std::get_if<SymmetricBetaInitial>(&law)) {
        return beta->a / (2.0 * (2.0 * beta->a + 1.0));
    }
    const auto& two = std::get<TwoPointInitial>(law);
    return two.p * two.hi * (1.0 - two.hi) +
           (1.0 - two.p) * two.lo * (1.0 - two.lo);
}

namespace {

// E[Zbar_0 (1 - Zbar_0)].  For stochastic laws the walkers are i.i.d. with
// mean 1/2 (enforced by verification admissibility), so averaging divides
// the spread around 1/4 by N.
double initial_mean_product_moment(const InitialLaw& law, int n_walkers) {
    if (const auto* det = std::get_if<DeterministicInitial>(&law)) {
        double s = 0.0;
        for (double v : det->values) s += v;
        double zbar = s / static_cast<double>(det->values.size());
        return zbar * (1.0 - zbar);
    }
    double single = initial_product_moment(law);
    return 0.25 - (0.25 - single) / static_cast<double>(n_walkers);
}

}  // namespace

TestReport polarization_test(const EnsembleResult& result,
                             const ModelParams& params,
                             const PolarizationThresholds& thresholds) {
    const std::size_t last = result.grid.size() - 1;
    std::vector<double> terminal(result.replications);
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        terminal[rep] = result.zbar_at(rep, last);
    }
    TestReport report;
    report.sample_size = result.replications;

    if (params.rho < 1.0) {
        // Mixing kernel: the mean is driven to the fixed target q.
        SummaryStats stats = summarize(terminal);
        report.name = "mean-to-target";
        report.statistic = std::abs(stats.mean - params.q);
        report.threshold = thresholds.mean_target_tol;
        report.passed = report.statistic <= report.threshold;
        report.details.emplace_back("terminal_mean", stats.mean);
        report.details.emplace_back("se_mean", stats.se_mean());
        return report;
    }

    SquareSum cls = classify_square_sum(params.schedule);
    if (cls == SquareSum::undecidable) {
        throw std::invalid_argument(
            "polarization test: cannot classify the schedule's square sum; "
            "use a power-law schedule");
    }

    if (cls == SquareSum::divergent) {
        // Divergent squares: the law must pile up on {0, 1}, so Var[zbar]
        // climbs to 1/4 (initial mean 1/2) and terminal mass sits at the
        // endpoints.
        bool monotone = true;
        double prev_var = -1.0;
        double prev_se = 0.0;
        SummaryStats stats{};
        std::vector<double> column(result.replications);
        for (std::size_t gi = 0; gi <= last; ++gi) {
            for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
                column[rep] = result.zbar_at(rep, gi);
            }
            stats = summarize(column);
            if (prev_var >= 0.0 &&
                stats.var < prev_var - 3.0 * (prev_se + stats.se_var())) {
                monotone = false;
            }
            prev_var = stats.var;
            prev_se = stats.se_var();
        }
        std::size_t at_endpoint = 0;
        for (double z : terminal) {
            if (z <= thresholds.endpoint_tol ||
                z >= 1.0 - thresholds.endpoint_tol) {
                ++at_endpoint;
            }
        }
        report.name = "polarization";
        report.statistic = 0.25 - stats.var;
        report.threshold = thresholds.quarter_gap_tol;
        report.passed = monotone && report.statistic <= report.threshold;
        report.details.emplace_back("terminal_var", stats.var);
        report.details.emplace_back(
            "endpoint_fraction",
            static_cast<double>(at_endpoint) /
                static_cast<double>(result.replications));
        report.details.emplace_back("var_monotone", monotone ? 1.0 : 0.0);
        if (!monotone) report.note = "Var[zbar] decreased along the grid";
        return report;
    }

    // Convergent squares: E[Z(1-Z)] must stay at its exactly computable
    // level (single walker) or inside the product bounds (interacting).
    std::vector<double> spread(result.replications);
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        double z = terminal[rep];
        spread[rep] = z * (1.0 - z);
    }
    SummaryStats stats = summarize(spread);
    double se = stats.se_mean();
    report.name = "no-polarization";
    report.threshold = thresholds.sigma;
    report.details.emplace_back("mc_mean", stats.mean);
    report.details.emplace_back("se_mean", se);
    if (params.n_walkers == 1) {
        double x0 = initial_product_moment(params.initial);
        std::vector<double> xs =
            variance_recursion_alpha0(x0, params.schedule, result.horizon);
        double target = xs.back();
        report.statistic =
            se > 0.0 ? std::abs(stats.mean - target) / se
                     : (stats.mean == target ? 0.0 : HUGE_VAL);
        report.details.emplace_back("recursion_target", target);
    } else {
        double x0 = initial_mean_product_moment(params.initial,
                                                params.n_walkers);
        VarianceBounds bounds = variance_bounds_interacting(
            x0, params.schedule, params.alpha, params.n_walkers,
            result.horizon);
        double lo = bounds.lower.back();
        double up = bounds.upper.back();
        double breach =
            std::max({lo - stats.mean, stats.mean - up, 0.0});
        report.statistic = se > 0.0 ? breach / se
                                    : (breach == 0.0 ? 0.0 : HUGE_VAL);
        report.details.emplace_back("lower_bound", lo);
        report.details.emplace_back("upper_bound", up);
    }
    report.passed = report.statistic <= report.threshold;
    return report;
}

std::optional<std::uint64_t> fixation_detector(const std::vector<int>& draws) {
    if (draws.size() < 2) return std::nullopt;
    std::uint64_t last_change = 0;
    for (std::size_t i = 1; i < draws.size(); ++i) {
        if ((draws[i] != 0) != (draws[i - 1] != 0)) {
            last_change = i;
        }
    }
    if (last_change == draws.size() - 1) return std::nullopt;
    return last_change + 1;
}

std::optional<std::uint64_t> fixation_detector(
    const std::vector<std::uint64_t>& words, std::uint64_t n_bits) {
    std::int64_t m = fixation_index(words, n_bits);
    if (m < 0) return std::nullopt;
    return static_cast<std::uint64_t>(m);
}

PowerFit rate_regression(
    const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs(points.size());
    std::vector<double> ys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        xs[i] = points[i].first;
        ys[i] = points[i].second;
    }
    return log_log_fit(xs, ys);
}

}  // namespace rwalk
