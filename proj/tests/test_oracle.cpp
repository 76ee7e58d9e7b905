#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwalk/errors.hpp"
#include "rwalk/model.hpp"
#include "rwalk/oracle.hpp"

using namespace rwalk;

namespace {

ModelParams single_walker(std::vector<double> steps) {
    ModelParams params;
    params.n_walkers = 1;
    params.rho = 1.0;
    params.schedule = ExplicitSchedule{std::move(steps)};
    params.initial = DeterministicInitial{{0.5}};
    return params;
}

}  // namespace

TEST_CASE("one copying step from 1/2 splits evenly") {
    ModelParams params = single_walker({0.5});
    ExactDistribution dist = enumerate_distribution(params, {0.5}, 1);
    REQUIRE(dist.atoms.size() == 2);
    CHECK(dist.atoms[0].z[0] == doctest::Approx(0.25));
    CHECK(dist.atoms[0].prob == doctest::Approx(0.5));
    CHECK(dist.atoms[1].z[0] == doctest::Approx(0.75));
    CHECK(dist.atoms[1].prob == doctest::Approx(0.5));
    CHECK(dist.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.mean_of_zbar() == doctest::Approx(0.5));
    CHECK(dist.var_of_zbar() == doctest::Approx(0.0625));
}

TEST_CASE("two-walker mean after one symmetric step") {
    ModelParams params;
    params.n_walkers = 2;
    params.rho = 1.0;
    params.alpha = 0.5;
    params.schedule = ExplicitSchedule{{0.5}};
    params.initial = DeterministicInitial{{0.5, 0.5}};
    ExactDistribution dist = enumerate_distribution(params, {0.5, 0.5}, 1);
    auto mean_law = dist.mean_distribution();
    REQUIRE(mean_law.size() == 3);
    CHECK(mean_law[0].first == doctest::Approx(0.25));
    CHECK(mean_law[0].second == doctest::Approx(0.25));
    CHECK(mean_law[1].first == doctest::Approx(0.5));
    CHECK(mean_law[1].second == doctest::Approx(0.5));
    CHECK(mean_law[2].first == doctest::Approx(0.75));
    CHECK(mean_law[2].second == doctest::Approx(0.25));
}

TEST_CASE("the mean is a martingale under the copying kernel") {
    ModelParams params;
    params.n_walkers = 2;
    params.rho = 1.0;
    params.alpha = 0.7;
    params.schedule = ExplicitSchedule{{0.5, 0.4, 0.3}};
    params.initial = DeterministicInitial{{0.3, 0.6}};
    ExactDistribution dist = enumerate_distribution(params, {0.3, 0.6}, 3);
    CHECK(dist.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.mean_of_zbar() == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("mixing kernels contract the mean toward q") {
    ModelParams params;
    params.n_walkers = 1;
    params.rho = 0.5;
    params.q = 0.8;
    params.schedule = ExplicitSchedule{{0.5, 0.25}};
    params.initial = DeterministicInitial{{0.2}};
    ExactDistribution dist = enumerate_distribution(params, {0.2}, 2);
    // E[Zbar_n] - q contracts by prod(1 - (1-rho) r_k).
    const double expect = 0.8 + (0.2 - 0.8) * (1 - 0.25) * (1 - 0.125);
    CHECK(dist.mean_of_zbar() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("states reached along different histories merge") {
    // Shared arithmetic can produce ulp-level twins along reordered
    // histories; the enumeration must still report one atom per state.
    ModelParams params;
    params.n_walkers = 2;
    params.rho = 0.5;
    params.alpha = 0.5;
    params.q = 0.5;
    params.schedule = ExplicitSchedule{{0.5, 0.25, 0.2}};
    params.initial = DeterministicInitial{{0.3, 0.7}};
    ExactDistribution dist = enumerate_distribution(params, {0.3, 0.7}, 3);
    CHECK(dist.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.atoms.size() == 36);
    for (std::size_t i = 1; i < dist.atoms.size(); ++i) {
        const auto& a = dist.atoms[i - 1].z;
        const auto& b = dist.atoms[i].z;
        CHECK_FALSE(b < a);  // sorted
        bool distinct = false;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (std::abs(a[k] - b[k]) > 1e-9) distinct = true;
        }
        CHECK(distinct);
    }
}

TEST_CASE("find_atom locates exact states and rejects strangers") {
    ModelParams params = single_walker({0.5, 0.25});
    ExactDistribution dist = enumerate_distribution(params, {0.5}, 2);
    for (std::size_t i = 0; i < dist.atoms.size(); ++i) {
        CHECK(find_atom(dist, dist.atoms[i].z) == static_cast<long>(i));
    }
    CHECK(find_atom(dist, {0.123456}) == -1);
}

TEST_CASE("enumeration guards") {
    ModelParams params = single_walker({0.5});
    CHECK_THROWS_AS(enumerate_distribution(params, {0.5, 0.5}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(enumerate_distribution(params, {1.5}, 1),
                    std::invalid_argument);

    ModelParams big;
    big.n_walkers = 3;
    big.rho = 1.0;
    big.alpha = 0.5;
    big.schedule = PowerLawSchedule{0.5, 0.75, 1};
    big.initial = DeterministicInitial{{0.4, 0.5, 0.6}};
    CHECK_THROWS_AS(
        enumerate_distribution(big, {0.4, 0.5, 0.6}, 10, /*atom_budget=*/512),
        BudgetExceeded);
}

TEST_CASE("product-moment recursion") {
    // x_{n+1} = (1 - r_n^2) x_n from x_0 = 1/4.
    std::vector<double> xs = variance_recursion_alpha0(
        0.25, StepSchedule{ExplicitSchedule{{0.5, 0.25}}}, 2);
    REQUIRE(xs.size() == 3);
    CHECK(xs[0] == doctest::Approx(0.25));
    CHECK(xs[1] == doctest::Approx(0.1875));
    CHECK(xs[2] == doctest::Approx(0.1875 * (1.0 - 0.0625)));

    // Against the exact law: E[Z_2(1-Z_2)] from the enumeration.
    ModelParams params = single_walker({0.5, 0.25});
    ExactDistribution dist = enumerate_distribution(params, {0.5}, 2);
    double moment = 0.0;
    for (const Atom& atom : dist.atoms) {
        moment += atom.prob * atom.z[0] * (1.0 - atom.z[0]);
    }
    CHECK(moment == doctest::Approx(xs[2]).epsilon(1e-12));
}

TEST_CASE("interacting product-moment bounds sandwich the exact value") {
    ModelParams params;
    params.n_walkers = 2;
    params.rho = 1.0;
    params.alpha = 0.5;
    params.schedule = ExplicitSchedule{{0.5, 0.4, 0.3}};
    params.initial = DeterministicInitial{{0.5, 0.5}};
    ExactDistribution dist = enumerate_distribution(params, {0.5, 0.5}, 3);
    double exact = 0.0;
    for (const Atom& atom : dist.atoms) {
        double zb = (atom.z[0] + atom.z[1]) / 2.0;
        exact += atom.prob * zb * (1.0 - zb);
    }
    VarianceBounds bounds = variance_bounds_interacting(
        0.25, params.schedule, params.alpha, params.n_walkers, 3);
    REQUIRE(bounds.lower.size() == 4);
    REQUIRE(bounds.upper.size() == 4);
    CHECK(bounds.lower[3] <= exact + 1e-12);
    CHECK(bounds.upper[3] >= exact - 1e-12);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(bounds.lower[n] <= bounds.upper[n] + 1e-15);
    }

    // At N=1, alpha=1 the two product chains coincide.
    VarianceBounds tight = variance_bounds_interacting(
        0.25, params.schedule, 1.0, 1, 3);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(tight.lower[n] == doctest::Approx(tight.upper[n]).epsilon(1e-12));
    }
}

TEST_CASE("comparison iterate telescopes for a test schedule") {
    // r_k = 1/(k+2), a = 1, k_bound = 0: x_n = x_0 / (n+1).
    std::vector<double> steps;
    for (int k = 0; k < 20; ++k) steps.push_back(1.0 / (k + 2));
    std::vector<double> xs = comparison_iterate(
        1.0, 0.0, 0.5, StepSchedule{ExplicitSchedule{steps}}, 20);
    REQUIRE(xs.size() == 21);
    for (std::size_t n = 0; n <= 20; ++n) {
        CHECK(xs[n] == doctest::Approx(0.5 / (n + 1)).epsilon(1e-12));
    }
}
