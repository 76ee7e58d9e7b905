#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/stats.hpp"

using namespace rwalk;

TEST_CASE("streams are pure functions of (seed, id)") {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct stream ids decorrelate") {
    RandomStream a(42, 0);
    RandomStream b(42, 1);
    RandomStream c(43, 0);
    int equal_ab = 0;
    int equal_ac = 0;
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t x = a.next_u64();
        if (x == b.next_u64()) ++equal_ab;
        if (x == c.next_u64()) ++equal_ac;
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("uniforms live in [0,1) with the right first moments") {
    RandomStream stream(1, 0);
    const int m = 200000;
    std::vector<double> xs(m);
    for (double& x : xs) {
        x = stream.next_uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
    SummaryStats s = summarize(xs);
    // SE(mean) = 1/sqrt(12 m); allow 4 SE.
    CHECK(std::abs(s.mean - 0.5) < 4.0 / std::sqrt(12.0 * m));
    CHECK(s.var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("bernoulli matches its probability") {
    RandomStream stream(2, 0);
    const int m = 200000;
    int ones = 0;
    for (int i = 0; i < m; ++i) {
        ones += stream.next_bernoulli(0.3) ? 1 : 0;
    }
    double se = std::sqrt(0.3 * 0.7 / m);
    CHECK(std::abs(ones / static_cast<double>(m) - 0.3) < 4.0 * se);

    // Degenerate probabilities never fire the wrong way.
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(stream.next_bernoulli(0.0));
        CHECK(stream.next_bernoulli(1.0));
    }
}

TEST_CASE("gaussian moments") {
    RandomStream stream(3, 0);
    const int m = 200000;
    std::vector<double> xs(m);
    for (double& x : xs) x = stream.next_gaussian();
    SummaryStats s = summarize(xs);
    CHECK(std::abs(s.mean) < 4.0 / std::sqrt(static_cast<double>(m)));
    CHECK(s.var == doctest::Approx(1.0).epsilon(0.02));
    // Fourth moment 3 for a standard normal.
    CHECK(s.m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("symmetric beta draws for each parameter branch") {
    // Var(Beta(a, a)) = 1 / (4 (2a + 1)).
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        CAPTURE(a);
        RandomStream stream(4, static_cast<std::uint64_t>(a * 10));
        const int m = 100000;
        std::vector<double> xs(m);
        for (double& x : xs) {
            x = stream.next_beta_symmetric(a);
            REQUIRE(x >= 0.0);
            REQUIRE(x <= 1.0);
        }
        SummaryStats s = summarize(xs);
        const double var = 1.0 / (4.0 * (2.0 * a + 1.0));
        CHECK(std::abs(s.mean - 0.5) < 4.0 * std::sqrt(var / m));
        CHECK(s.var == doctest::Approx(var).epsilon(0.05));
    }
}
