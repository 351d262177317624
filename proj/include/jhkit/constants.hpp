#pragma once

// Coupling data model, the analytic bound constants of the two-electron
// Brown-Ravenhall / Jansen-Hess estimates, and a bisection root finder used
// to locate every critical coupling.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "jhkit/errors.hpp"

namespace jhkit {

/// Sommerfeld fine-structure constant e^2 used throughout unless overridden.
inline constexpr double kDefaultE2 = 1.0 / 137.04;

/// Central field strength gamma = Z e^2 together with its charge number.
/// Both fields are fixed at construction; gamma == z * e2 always.
class Coupling {
public:
    Coupling() = default;

    static Coupling from_gamma(double gamma, double e2 = kDefaultE2) {
        check_e2(e2);
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
            throw DomainError("coupling: gamma must be a finite nonnegative number");
        }
        return Coupling(gamma, gamma / e2, e2);
    }

    static Coupling from_z(double z, double e2 = kDefaultE2) {
        check_e2(e2);
        if (!(z >= 0.0) || !std::isfinite(z)) {
            throw DomainError("coupling: Z must be a finite nonnegative number");
        }
        return Coupling(z * e2, z, e2);
    }

    double gamma() const { return gamma_; }
    double z() const { return z_; }
    double e2() const { return e2_; }

private:
    Coupling(double gamma, double z, double e2) : gamma_(gamma), z_(z), e2_(e2) {}

    static void check_e2(double e2) {
        if (!(e2 > 0.0) || !std::isfinite(e2)) {
            throw DomainError("coupling: e2 must be positive");
        }
    }

    double gamma_ = 0.0;
    double z_ = 0.0;
    double e2_ = kDefaultE2;
};

enum class CouplingInput { Gamma, Z };

/// Builds a Coupling from either gamma or Z.
inline Coupling z_gamma_convert(CouplingInput kind, double value, double e2 = kDefaultE2) {
    return kind == CouplingInput::Gamma ? Coupling::from_gamma(value, e2) : Coupling::from_z(value, e2);
}

/// Critical Brown-Ravenhall coupling 2 / (2/pi + pi/2).
inline double gamma_br() {
    using std::numbers::pi;
    return 2.0 / (2.0 / pi + pi / 2.0);
}

/// d = (pi/2 - 2/pi)^2 / 8, the quadratic correction in the single-particle bound.
inline double d_const() {
    using std::numbers::pi;
    const double t = pi / 2.0 - 2.0 / pi;
    return t * t / 8.0;
}

inline double c_v(double e2) { return 4.0 * e2 * e2; }

inline double c_w(double gamma) {
    const double t = 4.0 * gamma / 3.0 + 2.0 * gamma * gamma / 9.0;
    return t * t;
}

inline double c_s(double gamma, double e2) {
    using std::numbers::pi;
    const double t = 2.0 * gamma / pi * (pi * pi / 4.0 - 1.0);
    return t * t * c_v(e2);
}

/// Single-particle relative form bound gamma/gamma_BR - d gamma^2.
inline double kato_c0(double gamma) { return gamma / gamma_br() - d_const() * gamma * gamma; }

/// Relative T_0-form bound of the full two-particle potential.
inline double c_tilde0(const Coupling& c) {
    using std::numbers::pi;
    const double g = c.gamma();
    return kato_c0(g) + g * c.e2() * pi * pi / 4.0 + c.e2() / (2.0 * gamma_br());
}

/// Relative T_0-operator bound of the full two-particle potential.
inline double c_tilde1(const Coupling& c) {
    const double g = c.gamma();
    return std::sqrt(c_w(g)) + std::sqrt(c_v(c.e2()) / 2.0) + std::sqrt(2.0) * std::sqrt(c_s(g, c.e2()));
}

/// xi0 = 0 coefficient of the Brown-Ravenhall potential's T_theta bound.
inline double br_norm_coefficient(const Coupling& c) {
    return 4.0 * c.gamma() / 3.0 + std::sqrt(2.0) * c.e2();
}

struct AppendixBConstants {
    double c_prime1 = 0.0;
    double c_2 = 0.0;
};

inline AppendixBConstants appendix_b_constants(const Coupling& c, double xi0) {
    if (!(xi0 >= 0.0) || !(xi0 < 0.5)) {
        throw DomainError("appendix_b_constants: xi0 must lie in [0, 1/2)");
    }
    const double g = c.gamma();
    const double cw_half = std::sqrt(c_w(g) / 2.0);
    const double scale = 1.0 / (1.0 - xi0);
    return {cw_half * scale,
            (cw_half + std::sqrt(c_v(c.e2()) / 2.0) + std::sqrt(2.0 * c_s(g, c.e2()))) * scale};
}

/// Every explicit bound constant at one coupling and dilation cap.
struct BoundConstants {
    double gamma_br = 0.0;
    double d = 0.0;
    double c_w = 0.0;
    double c_v = 0.0;
    double c_s = 0.0;
    double c_tilde0 = 0.0;
    double c_tilde1 = 0.0;
    double kato_c0 = 0.0;
    double c_prime1 = 0.0;
    double c_2 = 0.0;
    double xi0 = 0.0;
};

inline BoundConstants bound_constants(const Coupling& c, double xi0) {
    const auto b = appendix_b_constants(c, xi0);
    return {gamma_br(),  d_const(),   c_w(c.gamma()),      c_v(c.e2()), c_s(c.gamma(), c.e2()),
            c_tilde0(c), c_tilde1(c), kato_c0(c.gamma()), b.c_prime1,  b.c_2,
            xi0};
}

/// Bisection for f(x) = target on [lo, hi]. f need only be monotone on the
/// bracket; the returned point sits in a final bracket of width <= tol.
template <class F>
double solve_threshold(const F& f, double target, double lo, double hi, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("solve_threshold: tol must be positive");
    }
    if (!(lo < hi)) {
        throw BracketError("solve_threshold: need lo < hi");
    }
    double flo = f(lo) - target;
    const double fhi = f(hi) - target;
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw BracketError("solve_threshold: f(lo) and f(hi) do not bracket the target");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid) - target;
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// One located unit crossing together with the rounded value it reproduces.
struct Threshold {
    std::string name;
    double gamma = 0.0;
    double z = 0.0;
    double published = 0.0;
    std::string anchor;
};

/// Unit crossings of the four constant-based bounds, ordered by gamma.
inline std::vector<Threshold> constant_thresholds(double e2 = kDefaultE2, double tol = 1e-12) {
    auto at = [e2](double g) { return Coupling::from_gamma(g, e2); };
    const double ct1 = solve_threshold([&](double g) { return c_tilde1(at(g)); }, 1.0, 0.0, 1.2, tol);
    const double br = solve_threshold([&](double g) { return br_norm_coefficient(at(g)); }, 1.0, 0.0, 1.2, tol);
    const double ct0 = solve_threshold([&](double g) { return c_tilde0(at(g)); }, 1.0, 0.0, 1.2, tol);
    const double kc0 = solve_threshold([](double g) { return kato_c0(g); }, 1.0, 0.0, 1.2, tol);
    return {
        {"c_tilde1", ct1, ct1 / e2, 0.66, "relative operator bound c~1 < 1 for gamma <= 0.66 (Z <= 90)"},
        {"br_norm", br, br / e2, 0.74, "Brown-Ravenhall potential T_theta-bounded for gamma < 0.74 (Z < 102)"},
        {"c_tilde0", ct0, ct0 / e2, 0.98, "relative form bound c~0 < 1 for gamma < 0.98 (Z <= 134)"},
        {"kato_c0", kc0, kc0 / e2, 1.006, "single-particle bound c0 < 1 for gamma < 1.006"},
    };
}

}  // namespace jhkit
