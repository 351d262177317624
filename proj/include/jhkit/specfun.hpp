#pragma once

// Closed-form moments of the logarithmic Coulomb kernel L(z) = ln((1+z)/|1-z|):
//
//   f_half(a)             = int_0^a  z^{1/2}  L(z) dz
//   f_minus_half(a)       = int_0^a  z^{-1/2} L(z) dz
//   g_minus_three_half(a) = int_a^oo z^{-3/2} L(z) dz
//
// The literal closed forms lose digits in three places: near a = 1 where two
// logarithms diverge against each other, and at small / large a where the
// result is much smaller than the individual terms. Each of those regions has
// its own branch.

#include <cmath>
#include <limits>
#include <numbers>

#include "jhkit/errors.hpp"

namespace jhkit::specfun {

namespace detail {

inline constexpr double kSmallArg = 0.25;
inline constexpr double kLargeArg = 4.0;
inline constexpr double kNearOne = 1e-3;

/// sum_k x^(2k + p) / den(k), k = 0, 1, ...; x < 1 so the terms decay geometrically.
template <class Den>
double power_series(double x, double p, Den den) {
    const double x2 = x * x;
    double term_pow = std::pow(x, p);
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double t = term_pow / den(k);
        sum += t;
        if (std::abs(t) <= 1e-18 * std::abs(sum)) {
            break;
        }
        term_pow *= x2;
    }
    return sum;
}

inline void require_nonnegative(double a, const char* who) {
    if (!(a >= 0.0)) {
        throw DomainError(std::string(who) + ": argument must be positive");
    }
}

// ln|1 - sqrt(a)| computed from 1 - a so the near-one branch keeps its digits.
inline double log_abs_one_minus_root(double a) {
    return std::log(std::abs(1.0 - a)) - std::log1p(std::sqrt(a));
}

}  // namespace detail

/// ln((1+z)/|1-z|) for z >= 0, z != 1.
inline double log_kernel(double z) {
    if (!(z >= 0.0)) {
        throw DomainError("log_kernel: argument must be nonnegative");
    }
    if (z == 1.0) {
        throw SingularityError("log_kernel: logarithmic singularity at z = 1");
    }
    if (std::isinf(z)) {
        return 0.0;
    }
    return z < 1.0 ? 2.0 * std::atanh(z) : 2.0 * std::atanh(1.0 / z);
}

/// Value of f_half at a = 1: (2/3)(4 - pi/2 - ln 2).
inline double f_half_at_one() {
    return 2.0 / 3.0 * (4.0 - std::numbers::pi / 2.0 - std::numbers::ln2);
}

/// Common value of f_minus_half and g_minus_three_half at a = 1: pi - 2 ln 2.
inline double minus_half_at_one() { return std::numbers::pi - 2.0 * std::numbers::ln2; }

inline double f_half(double a) {
    detail::require_nonnegative(a, "f_half");
    if (a == 0.0) {
        return 0.0;
    }
    if (std::isinf(a)) {
        return a;
    }
    if (a < detail::kSmallArg) {
        return 4.0 * detail::power_series(a, 2.5, [](int k) { return (2.0 * k + 1.0) * (4.0 * k + 5.0); });
    }
    const double r = std::sqrt(a);
    const double a32 = a * r;
    if (std::abs(a - 1.0) < detail::kNearOne) {
        if (a == 1.0) {
            return f_half_at_one();
        }
        const double lr = std::log1p(r);
        const double t = a32 * (std::log1p(a) - lr) - lr + (1.0 - a32) * detail::log_abs_one_minus_root(a);
        return 2.0 / 3.0 * (t + 4.0 * r - 2.0 * std::atan(r));
    }
    return 2.0 / 3.0 *
           (a32 * std::log(std::abs((1.0 + a) / (1.0 - a))) + 4.0 * r - 2.0 * std::atan(r) -
            std::log(std::abs((1.0 + r) / (1.0 - r))));
}

inline double f_minus_half(double a) {
    using std::numbers::pi;
    detail::require_nonnegative(a, "f_minus_half");
    if (a == 0.0) {
        return 0.0;
    }
    if (std::isinf(a)) {
        return 2.0 * pi;
    }
    if (a < detail::kSmallArg) {
        return 4.0 * detail::power_series(a, 1.5, [](int k) { return (2.0 * k + 1.0) * (4.0 * k + 3.0); });
    }
    if (a > detail::kLargeArg) {
        return 2.0 * pi -
               4.0 * detail::power_series(1.0 / a, 0.5, [](int k) { return (2.0 * k + 1.0) * (4.0 * k + 1.0); });
    }
    const double r = std::sqrt(a);
    if (std::abs(a - 1.0) < detail::kNearOne) {
        if (a == 1.0) {
            return minus_half_at_one();
        }
        const double lr = std::log1p(r);
        return 2.0 * r * (std::log1p(a) - lr) - 2.0 * lr + 4.0 * std::atan(r) +
               (2.0 - 2.0 * r) * detail::log_abs_one_minus_root(a);
    }
    return 2.0 * r * std::log(std::abs((1.0 + a) / (1.0 - a))) + 4.0 * std::atan(r) -
           2.0 * std::log(std::abs((r + 1.0) / (r - 1.0)));
}

inline double g_minus_three_half(double a) {
    using std::numbers::pi;
    detail::require_nonnegative(a, "g_minus_three_half");
    if (a == 0.0) {
        return 2.0 * pi;
    }
    if (std::isinf(a)) {
        return 0.0;
    }
    if (a < detail::kSmallArg) {
        return 2.0 * pi -
               4.0 * detail::power_series(a, 0.5, [](int k) { return (2.0 * k + 1.0) * (4.0 * k + 1.0); });
    }
    if (a > detail::kLargeArg) {
        return 4.0 * detail::power_series(1.0 / a, 1.5, [](int k) { return (2.0 * k + 1.0) * (4.0 * k + 3.0); });
    }
    const double r = std::sqrt(a);
    if (std::abs(a - 1.0) < detail::kNearOne) {
        if (a == 1.0) {
            return minus_half_at_one();
        }
        const double lr = std::log1p(r);
        return 2.0 * pi - 4.0 * std::atan(r) - 2.0 * lr + 2.0 / r * (std::log1p(a) - lr) +
               (2.0 - 2.0 / r) * detail::log_abs_one_minus_root(a);
    }
    return 2.0 * pi - 2.0 * std::log(std::abs((r + 1.0) / (r - 1.0))) - 4.0 * std::atan(r) +
           2.0 / r * std::log(std::abs((1.0 + a) / (1.0 - a)));
}

enum class LogKernelExponent { Half, MinusHalf, MinusThreeHalf };

/// One moment of the log kernel, tagged with the power of z it was taken against.
struct LogKernelIntegral {
    LogKernelExponent exponent = LogKernelExponent::Half;
    double a = 0.0;
    double value = 0.0;
};

inline LogKernelIntegral evaluate(LogKernelExponent exponent, double a) {
    switch (exponent) {
        case LogKernelExponent::Half:
            return {exponent, a, f_half(a)};
        case LogKernelExponent::MinusHalf:
            return {exponent, a, f_minus_half(a)};
        case LogKernelExponent::MinusThreeHalf:
            return {exponent, a, g_minus_three_half(a)};
    }
    return {exponent, a, std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace jhkit::specfun
