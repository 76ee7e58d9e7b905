#ifndef RWALK_STATS_HPP
#define RWALK_STATS_HPP

#include <cstdint>
#include <vector>

namespace rwalk {

// Moments of a sample, with the standard errors used by the 4-sigma
// acceptance checks.  var is the unbiased sample variance; m2/m4 are central
// moments with 1/n normalisation.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    double se_mean() const;
    // Asymptotic standard error of the sample variance, sqrt((m4-m2^2)/n).
    double se_var() const;
};
SummaryStats summarize(const std::vector<double>& xs);

double normal_cdf(double x);
// Inverse standard normal CDF (Acklam's rational approximation, |eps| ~ 1e-9).
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x); series/continued-fraction split.
double gamma_p(double a, double x);
double chi_square_cdf(double x, double dof);

// One-sample Kolmogorov-Smirnov distance against the standard normal.
double ks_distance_vs_std_normal(std::vector<double> samples);
// Critical scale s(level) with rejection at D > s/sqrt(n); 1.63 at the 1%
// level, 1.7885 at 1%/3 (three-way Bonferroni).
double ks_critical_scale(double level);

// Pearson chi-square goodness of fit.  Bins with expected count below
// min_expected are pooled into one bucket before the statistic is formed
// (and that bucket is folded into the largest bin if it is still thin).
struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t bins_used = 0;
};
ChiSquareResult chi_square_gof(const std::vector<double>& expected,
                               const std::vector<std::uint64_t>& observed,
                               double min_expected = 5.0);

// Least squares on (log x, log y): y ~ exp(intercept) * x^slope.
struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
PowerFit log_log_fit(const std::vector<double>& x,
                     const std::vector<double>& y);

// Geometric-mean prefactor of y ~ A x^slope with the slope held fixed:
// exp(mean(log y - slope log x)).  Free-slope intercepts extrapolate to
// x = 1 and amplify slope noise by log(x); this estimator does not.
double fixed_slope_prefactor(const std::vector<double>& x,
                             const std::vector<double>& y, double slope);

// Pearson correlation.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rwalk

#endif
