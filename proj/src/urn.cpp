#include "rwalk/urn.hpp"

#include <cmath>
#include <stdexcept>

namespace rwalk {

void validate(const UrnSpec& spec) {
    const auto& a = spec.base_matrix;
    if (a[0][0] + a[0][1] != a[1][0] + a[1][1]) {
        throw std::invalid_argument(
            "urn matrix rows must have equal sums (balanced urn)");
    }
    if (a[0][0] + a[0][1] == 0) {
        throw std::invalid_argument("urn matrix must add at least one ball");
    }
    if (spec.initial_total == 0) {
        throw std::invalid_argument("urn must start with at least one ball");
    }
    std::visit(
        [](const auto& rule) {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, ConstantScale>) {
                if (!(rule.factor > 0.0)) {
                    throw std::invalid_argument(
                        "constant scale factor must be positive");
                }
            } else if constexpr (std::is_same_v<T, PowerGrowthScale>) {
                if (!std::isfinite(rule.exponent)) {
                    throw std::invalid_argument(
                        "power-growth exponent must be finite");
                }
            } else {
                if (!(rule.beta > 0.0) || !(rule.beta < 1.0)) {
                    throw std::invalid_argument(
                        "exp-power beta must lie in (0, 1)");
                }
            }
        },
        spec.scale);
}

std::uint64_t row_total(const UrnSpec& spec) {
    return spec.base_matrix[0][0] + spec.base_matrix[0][1];
}

double scale_factor(const ScaleRule& rule, std::uint64_t n) {
    return std::visit(
        [n](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ConstantScale>) {
                return r.factor;
            } else if constexpr (std::is_same_v<T, PowerGrowthScale>) {
                return std::pow(static_cast<double>(n) + 1.0, r.exponent);
            } else {
                return std::exp(std::pow(static_cast<double>(n), r.beta));
            }
        },
        rule);
}

double scale_ratio(const ScaleRule& rule, std::uint64_t n) {
    return std::visit(
        [n](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            double m = static_cast<double>(n);
            if constexpr (std::is_same_v<T, ConstantScale>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, PowerGrowthScale>) {
                return std::pow((m + 1.0) / (m + 2.0), r.exponent);
            } else {
                return std::exp(std::pow(m, r.beta) -
                                std::pow(m + 1.0, r.beta));
            }
        },
        rule);
}

UrnSchedule urn_to_schedule(const UrnSpec& spec, std::uint64_t horizon) {
    validate(spec);
    if (horizon < 1) {
        throw std::invalid_argument("urn horizon must be at least 1");
    }
    const double abar = static_cast<double>(row_total(spec));
    KernelSpec rows{/*k0_to_1=*/static_cast<double>(spec.base_matrix[0][1]) /
                        abar,
                    /*k1_to_1=*/static_cast<double>(spec.base_matrix[1][1]) /
                        abar};

    UrnSchedule out;
    out.kernel = kernel_decompose(rows);

    std::vector<double> values(horizon);
    // 1/r_0 = N(0) / (abar c_0) + 1; thereafter the reciprocal recursion.
    double inv_r =
        static_cast<double>(spec.initial_total) /
            (abar * scale_factor(spec.scale, 0)) +
        1.0;
    values[0] = 1.0 / inv_r;
    for (std::uint64_t n = 1; n < horizon; ++n) {
        inv_r = 1.0 + scale_ratio(spec.scale, n - 1) * inv_r;
        values[n] = 1.0 / inv_r;
    }
    out.schedule = ExplicitSchedule{std::move(values)};
    return out;
}

}  // namespace rwalk
