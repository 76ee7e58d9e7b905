#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/stats.hpp"

using namespace rwalk;

TEST_CASE("summary statistics on a known sample") {
    SummaryStats s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.n == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.var == doctest::Approx(5.0 / 3.0));  // unbiased
    CHECK(s.se_mean() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("normal cdf and quantile invert each other") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525).epsilon(1e-6));
    for (double x : {-3.0, -1.5, -0.2, 0.0, 0.7, 2.4}) {
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-7));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
}

TEST_CASE("chi-square cdf special cases") {
    // dof 2: cdf(x) = 1 - exp(-x/2).
    CHECK(chi_square_cdf(2.0, 2.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
    // dof 1 at x=1: 2 Phi(1) - 1.
    CHECK(chi_square_cdf(1.0, 1.0) ==
          doctest::Approx(2.0 * normal_cdf(1.0) - 1.0).epsilon(1e-7));
    CHECK(chi_square_cdf(0.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("kolmogorov-smirnov distance against the standard normal") {
    const int m = 4000;
    std::vector<double> good(m);
    for (int i = 0; i < m; ++i) {
        good[i] = normal_quantile((i + 0.5) / m);
    }
    CHECK(ks_distance_vs_std_normal(good) < 0.5 / m + 1e-4);

    std::vector<double> zeros(m, 0.0);
    CHECK(ks_distance_vs_std_normal(zeros) == doctest::Approx(0.5));

    // 1% two-sided asymptotic critical scale.
    CHECK(ks_critical_scale(0.01) == doctest::Approx(1.6276).epsilon(1e-3));
}

TEST_CASE("chi-square goodness of fit pools thin bins") {
    // Exact agreement scores zero.
    ChiSquareResult exact =
        chi_square_gof({25.0, 25.0, 50.0}, {25, 25, 50});
    CHECK(exact.statistic == doctest::Approx(0.0));
    CHECK(exact.p_value == doctest::Approx(1.0));
    CHECK(exact.dof == doctest::Approx(2.0));

    // Thin bins are pooled into one bucket.
    ChiSquareResult pooled =
        chi_square_gof({1.0, 2.0, 3.0, 94.0}, {2, 1, 3, 94});
    CHECK(pooled.bins_used == 2);

    // A gross mismatch is detected.
    ChiSquareResult bad = chi_square_gof({50.0, 50.0}, {90, 10});
    CHECK(bad.p_value < 1e-6);

    CHECK_THROWS_AS(chi_square_gof({1.0}, {1, 2}), std::invalid_argument);
}

TEST_CASE("log-log regression recovers power laws") {
    std::vector<double> x, y_power, y_flat;
    for (int k = 1; k <= 12; ++k) {
        double n = 100.0 * k;
        x.push_back(n);
        y_power.push_back(3.0 * std::pow(n, -0.75));
        y_flat.push_back(5.0);
    }
    PowerFit fit = log_log_fit(x, y_power);
    CHECK(fit.slope == doctest::Approx(-0.75).epsilon(1e-9));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));

    PowerFit flat = log_log_fit(x, y_flat);
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-9));

    CHECK(fixed_slope_prefactor(x, y_power, -0.75) ==
          doctest::Approx(3.0).epsilon(1e-9));
    // Held at the wrong slope the prefactor absorbs the geometric-mean
    // residual but stays positive.
    CHECK(fixed_slope_prefactor(x, y_power, -0.5) > 0.0);
}

TEST_CASE("correlation") {
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {2, 4, 6, 8, 10};
    std::vector<double> c = {5, 4, 3, 2, 1};
    CHECK(correlation(a, b) == doctest::Approx(1.0));
    CHECK(correlation(a, c) == doctest::Approx(-1.0));

    RandomStream stream(11, 0);
    const int m = 50000;
    std::vector<double> u(m), v(m);
    for (int i = 0; i < m; ++i) {
        u[i] = stream.next_gaussian();
        v[i] = stream.next_gaussian();
    }
    CHECK(std::abs(correlation(u, v)) < 4.0 / std::sqrt(static_cast<double>(m)));
}
