#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwalk/errors.hpp"
#include "rwalk/grid.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/schedule.hpp"

using namespace rwalk;

TEST_CASE("power-law step sizes") {
    PowerLawSchedule p{1.0, 1.0, 1, false};
    CHECK(step_size(p, 1) == doctest::Approx(0.5));
    CHECK(step_size(p, 3) == doctest::Approx(0.25));
    CHECK(step_size(p, 4) == doctest::Approx(0.2));
    // r_0 would be 1; the guard caps it strictly below 1.
    CHECK(step_size(p, 0) < 1.0);
    CHECK(step_size(p, 0) > 0.999);

    PowerLawSchedule frac{2.0, 0.5, 4, false};
    CHECK(step_size(frac, 0) == doctest::Approx(1.0));  // capped: 2/sqrt(4)=1
    CHECK(step_size(frac, 5) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("power-law validation") {
    CHECK_NOTHROW(validate(StepSchedule{PowerLawSchedule{0.5, 0.75, 1}}));
    // r_0 = 1 is refused unless clamping is requested.
    CHECK_THROWS_AS(validate(StepSchedule{PowerLawSchedule{1.0, 1.0, 1}}),
                    std::invalid_argument);
    CHECK_NOTHROW(
        validate(StepSchedule{PowerLawSchedule{1.0, 1.0, 1, true}}));
    CHECK_THROWS_AS(validate(StepSchedule{PowerLawSchedule{0.0, 1.0, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{PowerLawSchedule{1.0, 0.0, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{PowerLawSchedule{1.0, 1.5, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{PowerLawSchedule{1.0, 1.0, 0}}),
                    std::invalid_argument);
}

TEST_CASE("explicit schedules exhaust precisely") {
    ExplicitSchedule ex{{0.5, 0.25}};
    CHECK(step_size(ex, 0) == 0.5);
    CHECK(step_size(ex, 1) == 0.25);
    CHECK_THROWS_AS(step_size(ex, 2), ScheduleExhausted);
    CHECK(schedule_length(StepSchedule{ex}).value() == 2);
    CHECK_FALSE(schedule_length(StepSchedule{PowerLawSchedule{0.5, 1.0, 1}})
                    .has_value());

    CHECK_THROWS_AS(validate(StepSchedule{ExplicitSchedule{{0.5, 1.0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{ExplicitSchedule{{-0.1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{ExplicitSchedule{{}}}),
                    std::invalid_argument);
}

TEST_CASE("graph-derived schedules read the degree trajectory") {
    GraphDerivedSchedule g{0.5, {1, 1, 1, 2, 3}};
    CHECK(step_size(g, 2) == doctest::Approx(0.5 / 3.0));  // 0.5*1/3
    CHECK(step_size(g, 3) == doctest::Approx(0.25));       // 0.5*2/4
    CHECK(step_size(g, 4) == doctest::Approx(0.3));        // 0.5*3/5
    CHECK_THROWS_AS(step_size(g, 5), ScheduleExhausted);

    // A star on k+1 vertices has max degree k: r_n = lambda (n-1)/(n+1).
    std::vector<std::uint32_t> star(101, 1);
    for (std::uint32_t k = 2; k <= 100; ++k) star[k] = k - 1;
    GraphDerivedSchedule s{0.5, star};
    for (std::uint64_t n : {10ULL, 50ULL, 100ULL}) {
        CHECK(step_size(s, n) ==
              doctest::Approx(0.5 * static_cast<double>(n - 1) /
                              static_cast<double>(n + 1)));
    }

    CHECK_THROWS_AS(validate(StepSchedule{GraphDerivedSchedule{1.0, {1, 1}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(StepSchedule{GraphDerivedSchedule{0.5, {0, 1}}}),
                    std::invalid_argument);
    // Degree above n-1 is impossible in a simple growth tree.
    CHECK_THROWS_AS(
        validate(StepSchedule{GraphDerivedSchedule{0.5, {1, 1, 1, 5}}}),
        std::invalid_argument);
}

TEST_CASE("square-sum classification") {
    CHECK(classify_square_sum(StepSchedule{PowerLawSchedule{1.0, 0.6, 2}}) ==
          SquareSum::convergent);
    CHECK(classify_square_sum(StepSchedule{PowerLawSchedule{1.0, 0.5, 2}}) ==
          SquareSum::divergent);
    CHECK(classify_square_sum(StepSchedule{PowerLawSchedule{1.0, 0.4, 2}}) ==
          SquareSum::divergent);
    CHECK(classify_square_sum(StepSchedule{ExplicitSchedule{{0.5}}}) ==
          SquareSum::undecidable);
}

TEST_CASE("geometric and explicit recording grids") {
    CHECK(grid_steps(GeometricGrid{10, 2.0, 3}) ==
          std::vector<std::uint64_t>{10, 20, 40});
    // Sub-integer ratio growth dedups floors.
    CHECK(grid_steps(GeometricGrid{1, 1.5, 4}) ==
          std::vector<std::uint64_t>{1, 2, 3});
    CHECK(grid_steps(ExplicitSteps{{5, 9, 12}}) ==
          std::vector<std::uint64_t>{5, 9, 12});
    CHECK_THROWS_AS(grid_steps(ExplicitSteps{{5, 5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(grid_steps(ExplicitSteps{{}}), std::invalid_argument);
    CHECK_THROWS_AS(grid_steps(GeometricGrid{10, 1.0, 3}),
                    std::invalid_argument);
}

TEST_CASE("window and scaling index maps") {
    CHECK(scaling_index(1000, 0.5) == 500);
    CHECK(scaling_index(10000, 2.0) == 20000);
    CHECK(window_index(10000, 0.75, 2.0) == 12000);  // 10^3 * 2 past anchor
    CHECK(window_index(100, 0.5, 1.0) == 110);
    CHECK(window_index(100, 1.0, 2.0) == 300);
    CHECK_THROWS_AS(window_index(100, 0.5, -1.0), std::invalid_argument);

    // The TimeWindow grid agrees with the scalar map across random triples.
    RandomStream stream(9, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n =
            static_cast<std::uint64_t>(100 + stream.next_uniform() * 10000);
        const double g = 0.4 + 0.6 * stream.next_uniform();
        const double t0 = stream.next_uniform();
        const double t1 = t0 + 0.5 + stream.next_uniform();
        TimeWindow tw{n, g, {t0, t1}};
        auto steps = grid_steps(tw);
        std::vector<std::uint64_t> expect;
        for (double t : {t0, t1}) {
            std::uint64_t s = window_index(n, g, t);
            if (expect.empty() || s > expect.back()) expect.push_back(s);
        }
        CHECK(steps == expect);
    }
}
