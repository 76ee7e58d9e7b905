#include "rwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwalk {

double SummaryStats::se_mean() const {
    return n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
}

double SummaryStats::se_var() const {
    if (n < 2) return 0.0;
    double v = m4 - m2 * m2;
    return v > 0.0 ? std::sqrt(v / static_cast<double>(n)) : 0.0;
}

SummaryStats summarize(const std::vector<double>& xs) {
    SummaryStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        double d = x - s.mean;
        double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    s.m2 = m2 / static_cast<double>(s.n);
    s.m4 = m4 / static_cast<double>(s.n);
    s.var = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
    return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("normal_quantile needs p in (0, 1)");
    }
    // Acklam's rational approximation with one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double u = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u +
             c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (p <= 1.0 - p_low) {
        double u = p - 0.5;
        double t = u * u;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t +
             a[5]) *
            u /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t +
             1.0);
    } else {
        double u = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u +
              c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    double e = normal_cdf(x) - p;
    double g = e * std::sqrt(2.0 * 3.14159265358979323846) *
               std::exp(0.5 * x * x);
    return x - g / (1.0 + 0.5 * x * g);
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("gamma_p needs a > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi_square_cdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * dof, 0.5 * x);
}

double ks_distance_vs_std_normal(std::vector<double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("KS distance needs a nonempty sample");
    }
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = normal_cdf(samples[i]);
        double hi = (static_cast<double>(i) + 1.0) / n - f;
        double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

double ks_critical_scale(double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("KS level must lie in (0, 1)");
    }
    return std::sqrt(-0.5 * std::log(level / 2.0));
}

ChiSquareResult chi_square_gof(const std::vector<double>& expected,
                               const std::vector<std::uint64_t>& observed,
                               double min_expected) {
    if (expected.size() != observed.size() || expected.empty()) {
        throw std::invalid_argument(
            "chi-square needs matching nonempty expected/observed bins");
    }
    // Pool every thin bin into one bucket.
    double pooled_exp = 0.0;
    double pooled_obs = 0.0;
    std::vector<std::pair<double, double>> bins;  // (expected, observed)
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] < min_expected) {
            pooled_exp += expected[i];
            pooled_obs += static_cast<double>(observed[i]);
        } else {
            bins.emplace_back(expected[i], static_cast<double>(observed[i]));
        }
    }
    if (pooled_exp > 0.0) {
        if (pooled_exp >= min_expected || bins.empty()) {
            bins.emplace_back(pooled_exp, pooled_obs);
        } else {
            // Fold a still-thin pool into the largest bin.
            auto big = std::max_element(bins.begin(), bins.end());
            big->first += pooled_exp;
            big->second += pooled_obs;
        }
    }
    ChiSquareResult out;
    out.bins_used = bins.size();
    if (bins.size() < 2) {
        // Degenerate (deterministic) distribution: nothing to test.
        out.dof = 0.0;
        out.p_value = 1.0;
        return out;
    }
    double stat = 0.0;
    for (const auto& [e, o] : bins) {
        double d = o - e;
        stat += d * d / e;
    }
    out.statistic = stat;
    out.dof = static_cast<double>(bins.size() - 1);
    out.p_value = 1.0 - chi_square_cdf(stat, out.dof);
    return out;
}

PowerFit log_log_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw std::invalid_argument("log-log fit needs >= 3 points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument(
                "log-log fit needs strictly positive data");
        }
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double n = static_cast<double>(x.size());
    double den = n * sxx - sx * sx;
    if (den <= 0.0) {
        throw std::invalid_argument("log-log fit: degenerate abscissae");
    }
    PowerFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pred = fit.intercept + fit.slope * std::log(x[i]);
        double resid = std::log(y[i]) - pred;
        ss_res += resid * resid;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double fixed_slope_prefactor(const std::vector<double>& x,
                             const std::vector<double>& y, double slope) {
    if (x.size() != y.size() || x.empty()) {
        throw std::invalid_argument("prefactor needs matching nonempty data");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument(
                "prefactor needs strictly positive data");
        }
        acc += std::log(y[i]) - slope * std::log(x[i]);
    }
    return std::exp(acc / static_cast<double>(x.size()));
}

double correlation(const std::vector<double>& a,
                   const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("correlation needs matching samples");
    }
    SummaryStats sa = summarize(a);
    SummaryStats sb = summarize(b);
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - sa.mean) * (b[i] - sb.mean);
    }
    cov /= static_cast<double>(a.size());
    double den = std::sqrt(sa.m2 * sb.m2);
    return den > 0.0 ? cov / den : 0.0;
}

}  // namespace rwalk
