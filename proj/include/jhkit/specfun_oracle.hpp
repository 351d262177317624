#pragma once

// Quadrature oracles for the log-kernel moments. They integrate the defining
// integrals directly with Gauss-Kronrod and share nothing with the closed
// forms except log_kernel itself.

#include <cmath>

#include "jhkit/quadrature.hpp"
#include "jhkit/specfun.hpp"

namespace jhkit::oracle {

namespace detail {

inline QuadratureSpec oracle_spec() {
    QuadratureSpec s;
    s.rel_tol = 1e-12;
    s.gk_max_depth = 20;
    return s;
}

// int_lo^hi h(z) dz for 0 <= lo < hi < oo. On [1/2, 2] the log singularity at
// z = 1 is removed by z = 1 - t^2 (left) and z = 1 + t^2 (right); elsewhere the
// integrand is smooth and is integrated in z directly.
template <class H>
double integrate_across_one(const H& h, double lo, double hi) {
    const auto spec = oracle_spec();
    auto piece = [&](double a, double b) {
        return a < b ? integrate_gauss_kronrod(h, a, b, spec).value : 0.0;
    };
    // t log t -> 0, so the rounded z == 1 points contribute nothing.
    auto left = [&](double t) { return 1.0 - t * t == 1.0 ? 0.0 : 2.0 * t * h(1.0 - t * t); };
    auto right = [&](double t) { return 1.0 + t * t == 1.0 ? 0.0 : 2.0 * t * h(1.0 + t * t); };
    double sum = piece(lo, std::min(hi, 0.5)) + piece(std::max(lo, 2.0), hi);
    const double l1 = std::max(lo, 0.5), h1 = std::min(hi, 1.0);
    if (l1 < h1) {
        sum += integrate_gauss_kronrod(left, std::sqrt(1.0 - h1), std::sqrt(1.0 - l1), spec).value;
    }
    const double l2 = std::max(lo, 1.0), h2 = std::min(hi, 2.0);
    if (l2 < h2) {
        sum += integrate_gauss_kronrod(right, std::sqrt(l2 - 1.0), std::sqrt(h2 - 1.0), spec).value;
    }
    return sum;
}

}  // namespace detail

inline double f_half(double a) {
    return detail::integrate_across_one([](double z) { return std::sqrt(z) * specfun::log_kernel(z); }, 0.0, a);
}

inline double f_minus_half(double a) {
    return detail::integrate_across_one(
        [](double z) { return z == 0.0 ? 0.0 : specfun::log_kernel(z) / std::sqrt(z); }, 0.0, a);
}

/// int_a^oo z^{-3/2} L(z) dz. The tail beyond max(a, 2) is mapped to a finite
/// interval with z = 1/u^2, which turns the integrand into 2 L(u^2).
inline double g_minus_three_half(double a) {
    auto h = [](double z) { return specfun::log_kernel(z) / (z * std::sqrt(z)); };
    const double split = std::max(a, 2.0);
    double sum = a < split ? detail::integrate_across_one(h, a, split) : 0.0;
    auto tail = [](double u) { return u == 0.0 ? 0.0 : 2.0 * specfun::log_kernel(u * u); };
    sum += integrate_gauss_kronrod(tail, 0.0, 1.0 / std::sqrt(split), detail::oracle_spec()).value;
    return sum;
}

}  // namespace jhkit::oracle
