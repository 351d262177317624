#pragma once

// Thin adaptive-quadrature layer over Boost.Math. Every numeric integral in
// the toolkit goes through here so tolerances live in one QuadratureSpec.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <boost/math/policies/error_handling.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "jhkit/errors.hpp"

namespace jhkit {

/// Grid/tolerance configuration shared by the numeric-integration routines.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    std::size_t max_refinements = 15;
    std::size_t gk_max_depth = 40;
    /// A result whose error estimate exceeds fail_tol * L1 is reported as divergent.
    double fail_tol = 1e-4;
    /// Error estimates below this absolute level are always accepted.
    double abs_tol = 1e-30;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

namespace detail {

inline std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

inline void check_result(const QuadResult& r, const QuadratureSpec& spec, const char* what) {
    if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
        throw DivergenceError(std::string(what) + ": non-finite quadrature result");
    }
    const double scale = std::max(r.l1, std::numeric_limits<double>::min());
    if (r.error > spec.fail_tol * scale && r.error > spec.abs_tol) {
        throw DivergenceError(std::string(what) + ": quadrature did not converge (error " +
                              fmt_g(r.error) + ", L1 " + fmt_g(r.l1) + ")");
    }
}

// Boost grows a rule's abscissa tables lazily inside integrate(), so a rule
// must not be reused by a nested integral. Rules are keyed by nesting depth
// and refinement level, per thread. They are handed out non-const because
// Boost 1.74 defines integrate() without the const qualifier.
inline int& nesting_depth() {
    thread_local int depth = 0;
    return depth;
}

struct NestingGuard {
    NestingGuard() { ++nesting_depth(); }
    ~NestingGuard() { --nesting_depth(); }
    NestingGuard(const NestingGuard&) = delete;
    NestingGuard& operator=(const NestingGuard&) = delete;
};

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule(std::size_t refinements) {
    using Rule = boost::math::quadrature::tanh_sinh<double>;
    thread_local std::map<std::pair<int, std::size_t>, std::unique_ptr<Rule>> rules;
    auto& rule = rules[{nesting_depth(), refinements}];
    if (!rule) {
        rule = std::make_unique<Rule>(refinements);
    }
    return *rule;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
    using Rule = boost::math::quadrature::exp_sinh<double>;
    thread_local std::map<int, std::unique_ptr<Rule>> rules;
    auto& rule = rules[nesting_depth()];
    if (!rule) {
        rule = std::make_unique<Rule>(9);
    }
    return *rule;
}

}  // namespace detail

/// Integrates f over [a, b]. b may be +infinity. Endpoint singularities are
/// fine (double-exponential rules); interior singularities must be split by
/// the caller.
template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    QuadResult r;
    if (a == b) {
        return r;
    }
    // Explicit return type keeps Boost's one/two-argument overload detection
    // from instantiating integrands with deduced return types.
    auto g = [&f](double x) -> double { return f(x); };
    auto& ts = detail::tanh_sinh_rule(spec.max_refinements);
    auto& es = detail::exp_sinh_rule();
    const detail::NestingGuard guard;
    try {
        if (std::isinf(b)) {
            r.value = es.integrate(g, a, b, spec.rel_tol, &r.error, &r.l1);
        } else {
            // The two-argument form sidesteps an endpoint assertion in the
            // one-argument path of Boost 1.74.
            auto g2 = [&f](double x, double) -> double { return f(x); };
            r.value = ts.integrate(g2, a, b, spec.rel_tol, &r.error, &r.l1);
        }
    } catch (const boost::math::evaluation_error& e) {
        throw DivergenceError(e.what());
    } catch (const std::domain_error& e) {
        // Boost reports non-decaying integrands at infinity as domain errors.
        if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const SingularityError*>(&e)) {
            throw;
        }
        throw DivergenceError(e.what());
    }
    detail::check_result(r, spec, "integrate");
    return r;
}

/// Adaptive 61-point Gauss-Kronrod on a finite interval. Used by the oracles so
/// they do not share a rule with the production path.
template <class F>
QuadResult integrate_gauss_kronrod(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    QuadResult r;
    if (a == b) {
        return r;
    }
    r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, static_cast<unsigned>(spec.gk_max_depth), spec.rel_tol, &r.error, &r.l1);
    detail::check_result(r, spec, "integrate_gauss_kronrod");
    return r;
}

}  // namespace jhkit
