#pragma once

// Virial bound expression s*phi(q1, q2) for the two-electron Brown-Ravenhall
// operator, its supremum over the momentum quadrant, and the coupling where
// that supremum crosses zero. Momenta are in units of m.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jhkit/constants.hpp"
#include "jhkit/errors.hpp"
#include "jhkit/parallel.hpp"
#include "jhkit/specfun.hpp"

namespace jhkit::virial {

using Point = std::array<double, 2>;

/// Log-spaced (q1, q2) grid. The q2 axis additionally carries q2 = 0.
struct GridSpec {
    double q_min = 1e-3;
    double q_max = 1e6;
    std::size_t points = 200;
};

struct VirialConfig {
    double c0 = 2.0;
    Coupling coupling = Coupling::from_gamma(0.37);
    GridSpec grid;
};

inline void validate_c0(double c0) {
    if (!(c0 > 0.0) || !(c0 <= 2.0)) {
        throw DomainError("virial: c0 must lie in (0, 2]");
    }
}

inline void validate_grid(const GridSpec& g) {
    if (g.points == 0) {
        throw ConfigError("virial grid: no points");
    }
    if (!(g.q_min > 0.0) || !(g.q_max > g.q_min) || !std::isfinite(g.q_max)) {
        throw ConfigError("virial grid: need 0 < q_min < q_max < inf");
    }
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo * std::exp(step * static_cast<double>(i));
    }
    out.back() = hi;
    return out;
}

namespace detail {

inline void require_nonnegative(double q1, double q2) {
    if (!(q1 >= 0.0) || !(q2 >= 0.0)) {
        throw DomainError("virial: momenta must be nonnegative");
    }
}

/// Shared kinematics. Differences like l - 1 are formed without cancellation.
struct Kinematics {
    double l = 1.0;         // sqrt(q1^2 + 1)
    double l_minus_1 = 0.0;
    double w_minus_1 = 0.0;  // sqrt(q2^2 + 1) - 1
    double d = 1.0;          // l + w - 1
    double pre = 0.0;        // 1 - 1/l = q1^2 / (l (l + 1))

    Kinematics(double q1, double q2) {
        l = std::hypot(q1, 1.0);
        l_minus_1 = q1 * q1 / (l + 1.0);
        w_minus_1 = q2 * q2 / (std::hypot(q2, 1.0) + 1.0);
        d = 1.0 + l_minus_1 + w_minus_1;
        pre = l_minus_1 / l;
    }
};

/// The two brace terms shared by M1 and M2.
inline double shared_terms(double q1, const Kinematics& k, double c0) {
    using std::numbers::pi;
    const double a = 1.0 / q1;
    const double t1 = std::abs(1.0 / k.l - c0 / k.d) * q1 * (q1 + 2.0) / (k.l + 1.0);
    const double t2 = k.l / (2.0 * pi) * (q1 * specfun::f_half(a) + specfun::g_minus_three_half(a) / q1);
    return t1 + t2;
}

}  // namespace detail

/// s = 1 - 2 c0 (1 - 1/l) / (l + sqrt(q2^2+1) - 1).
inline double s_factor(double q1, double q2, double c0) {
    detail::require_nonnegative(q1, q2);
    const detail::Kinematics k(q1, q2);
    return 1.0 - 2.0 * c0 * k.pre / k.d;
}

/// q1^2 M1~: the five-term estimate of the first-order potential contribution.
inline double m1_scaled(double q1, double q2, double c0) {
    using std::numbers::pi;
    detail::require_nonnegative(q1, q2);
    if (q1 == 0.0) {
        return 0.0;
    }
    const detail::Kinematics k(q1, q2);
    const double a = 1.0 / q1;
    const double t3 = c0 * q2 / k.d;
    double t4 = 0.0;
    if (q2 > 0.0) {
        const double b = k.l / q2;
        t4 = c0 / (2.0 * pi) * (q2 / k.l * specfun::f_minus_half(b) + specfun::g_minus_three_half(b));
    }
    const double t5 =
        (2.0 * pi * q1 / k.l + q1 * specfun::f_minus_half(a) + specfun::g_minus_three_half(a)) / (2.0 * pi);
    return k.pre * (detail::shared_terms(q1, k, c0) + t3 + t4 + t5);
}

/// q1^2 M2~: the electron-electron interaction estimate.
inline double m2_scaled(double q1, double q2, double c0) {
    detail::require_nonnegative(q1, q2);
    if (q1 == 0.0) {
        return 0.0;
    }
    const detail::Kinematics k(q1, q2);
    return k.pre * (detail::shared_terms(q1, k, c0) + q1 / k.l + 1.0);
}

inline double m1_tilde(double q1, double q2, double c0) {
    if (!(q1 > 0.0)) {
        throw DomainError("m1_tilde: q1 must be positive");
    }
    return m1_scaled(q1, q2, c0) / (q1 * q1);
}

inline double m2_tilde(double q1, double q2, double c0) {
    if (!(q1 > 0.0)) {
        throw DomainError("m2_tilde: q1 must be positive");
    }
    return m2_scaled(q1, q2, c0) / (q1 * q1);
}

/// s*phi at one momentum pair with its three additive parts.
struct SPhiEvaluation {
    double q1 = 0.0;
    double q2 = 0.0;
    double l = 1.0;
    double s = 1.0;
    double s_phi = 0.0;
    double negative_term = 0.0;
    double m1_term = 0.0;  // gamma q1^2 M1~
    double m2_term = 0.0;  // e^2 q1^2 M2~
};

/// Negative (kinetic) part of s*phi.
inline double negative_term(double q1, double q2, double c0) {
    detail::require_nonnegative(q1, q2);
    const detail::Kinematics k(q1, q2);
    return -k.pre * (1.0 + c0 * (k.l_minus_1 + k.w_minus_1) / k.d);
}

/// Evaluated directly from the three parts, never as s times phi, so the
/// s = 0 point at c0 = 2 needs no special treatment.
inline SPhiEvaluation s_phi(double q1, double q2, const VirialConfig& cfg) {
    detail::require_nonnegative(q1, q2);
    SPhiEvaluation r;
    r.q1 = q1;
    r.q2 = q2;
    r.l = std::hypot(q1, 1.0);
    r.s = s_factor(q1, q2, cfg.c0);
    r.negative_term = negative_term(q1, q2, cfg.c0);
    r.m1_term = cfg.coupling.gamma() * m1_scaled(q1, q2, cfg.c0);
    r.m2_term = cfg.coupling.e2() * m2_scaled(q1, q2, cfg.c0);
    r.s_phi = r.negative_term + r.m1_term + r.m2_term;
    return r;
}

/// Limit of s*phi for q1 -> oo with q2/q1 -> oo.
inline double asymptotic_s_phi(const Coupling& c, double c0) {
    return -(1.0 + c0) + c.gamma() * (4.0 + 2.0 * c0) + 4.0 * c.e2();
}

/// Coupling at which the corner limit vanishes: (1 + c0 - 4 e^2) / (4 + 2 c0).
inline double asymptotic_critical_gamma(double c0, double e2 = kDefaultE2) {
    return (1.0 + c0 - 4.0 * e2) / (4.0 + 2.0 * c0);
}

/// s*phi along (10^k, 10^(k + offset)) and its distance to the corner limit.
struct AsymptoteSequence {
    std::vector<Point> points;
    std::vector<double> values;
    std::vector<double> residuals;
    double limit = 0.0;
    bool monotone = false;  // residuals strictly decreasing
};

inline AsymptoteSequence asymptote_sequence(const VirialConfig& cfg, int k_first, int k_last, double q2_exponent_scale,
                                            double q2_exponent_offset) {
    AsymptoteSequence out;
    out.limit = asymptotic_s_phi(cfg.coupling, cfg.c0);
    for (int k = k_first; k <= k_last; ++k) {
        const double q1 = std::pow(10.0, k);
        const double q2 = std::pow(10.0, q2_exponent_scale * k + q2_exponent_offset);
        const double v = s_phi(q1, q2, cfg).s_phi;
        out.points.push_back({q1, q2});
        out.values.push_back(v);
        out.residuals.push_back(std::abs(v - out.limit));
    }
    out.monotone = true;
    for (std::size_t i = 1; i < out.residuals.size(); ++i) {
        out.monotone = out.monotone && out.residuals[i] < out.residuals[i - 1];
    }
    return out;
}

/// s*phi on the grid stored as a + gamma * b (it is affine in gamma), so one
/// evaluation pass serves every coupling tried by the root finder.
struct Landscape {
    GridSpec grid;
    double c0 = 2.0;
    double e2 = kDefaultE2;
    std::vector<double> q1;  // q1 > 0 only
    std::vector<double> q2;  // 0 followed by the log grid
    std::vector<double> a;   // row-major [i1 * q2.size() + i2]
    std::vector<double> b;

    std::size_t size() const { return a.size(); }
    Point point(std::size_t idx) const { return {q1[idx / q2.size()], q2[idx % q2.size()]}; }
    double value(std::size_t idx, double gamma) const { return a[idx] + gamma * b[idx]; }
};

inline Landscape build_landscape(const GridSpec& grid, double c0, double e2) {
    validate_grid(grid);
    validate_c0(c0);
    Landscape land;
    land.grid = grid;
    land.c0 = c0;
    land.e2 = e2;
    land.q1 = log_grid(grid.q_min, grid.q_max, grid.points);
    land.q2.push_back(0.0);
    const auto tail = log_grid(grid.q_min, grid.q_max, grid.points);
    land.q2.insert(land.q2.end(), tail.begin(), tail.end());
    const std::size_t n2 = land.q2.size();
    land.a.assign(land.q1.size() * n2, 0.0);
    land.b.assign(land.q1.size() * n2, 0.0);
    parallel_for(land.q1.size(), [&](std::size_t i) {
        const double q1 = land.q1[i];
        for (std::size_t j = 0; j < n2; ++j) {
            const double q2 = land.q2[j];
            land.a[i * n2 + j] = negative_term(q1, q2, c0) + e2 * m2_scaled(q1, q2, c0);
            land.b[i * n2 + j] = m1_scaled(q1, q2, c0);
        }
    });
    return land;
}

/// Far-corner probe: s*phi on (10^k, 10^(2k)). The corner limit is accepted
/// as the supremum only when these values rise toward it from below.
struct CornerTrend {
    std::vector<Point> points;
    std::vector<double> values;
    double limit = 0.0;
    bool increasing = false;
    bool below_limit = false;
    bool supports_limit() const { return increasing && below_limit; }
};

inline constexpr int kCornerProbeDecades = 6;

inline CornerTrend corner_trend(const VirialConfig& cfg) {
    CornerTrend t;
    t.limit = asymptotic_s_phi(cfg.coupling, cfg.c0);
    for (int k = 1; k <= kCornerProbeDecades; ++k) {
        const double q1 = std::pow(10.0, k);
        const double q2 = std::pow(10.0, 2 * k);
        t.points.push_back({q1, q2});
        t.values.push_back(s_phi(q1, q2, cfg).s_phi);
    }
    t.increasing = true;
    t.below_limit = true;
    const double slack = 1e-9 * (1.0 + std::abs(t.limit));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        if (i > 0) {
            t.increasing = t.increasing && t.values[i] > t.values[i - 1];
        }
        t.below_limit = t.below_limit && t.values[i] <= t.limit + slack;
    }
    return t;
}

struct PolishResult {
    Point argmax{};
    double value = -std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

/// Nelder-Mead maximization of s*phi in (ln q1, ln q2), clamped to the grid box.
inline PolishResult polish(const VirialConfig& cfg, Point start, double step_log, std::size_t max_iter = 200) {
    const double lo = std::log(cfg.grid.q_min);
    const double hi = std::log(cfg.grid.q_max);
    PolishResult out;
    auto clamp = [&](std::array<double, 2> x) {
        return std::array<double, 2>{std::clamp(x[0], lo, hi), std::clamp(x[1], lo, hi)};
    };
    auto f = [&](const std::array<double, 2>& x) {
        ++out.evaluations;
        return s_phi(std::exp(x[0]), std::exp(x[1]), cfg).s_phi;
    };
    const double q2_start = start[1] > 0.0 ? start[1] : cfg.grid.q_min;
    std::array<std::array<double, 2>, 3> simplex{{{std::log(start[0]), std::log(q2_start)}}};
    simplex[1] = clamp({simplex[0][0] + step_log, simplex[0][1]});
    simplex[2] = clamp({simplex[0][0], simplex[0][1] + step_log});
    if (simplex[1] == simplex[0]) {
        simplex[1] = clamp({simplex[0][0] - step_log, simplex[0][1]});
    }
    if (simplex[2] == simplex[0]) {
        simplex[2] = clamp({simplex[0][0], simplex[0][1] - step_log});
    }
    std::array<double, 3> fx{f(simplex[0]), f(simplex[1]), f(simplex[2])};

    for (std::size_t it = 0; it < max_iter; ++it) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int i, int j) { return fx[i] > fx[j]; });
        const int best = order[0], mid = order[1], worst = order[2];
        if (std::abs(fx[best] - fx[worst]) <= 1e-15 * (1.0 + std::abs(fx[best]))) {
            break;
        }
        const std::array<double, 2> centroid{0.5 * (simplex[best][0] + simplex[mid][0]),
                                             0.5 * (simplex[best][1] + simplex[mid][1])};
        auto along = [&](double t) {
            return clamp({centroid[0] + t * (simplex[worst][0] - centroid[0]),
                          centroid[1] + t * (simplex[worst][1] - centroid[1])});
        };
        const auto xr = along(-1.0);
        const double fr = f(xr);
        if (fr > fx[best]) {
            const auto xe = along(-2.0);
            const double fe = f(xe);
            if (fe > fr) {
                simplex[worst] = xe;
                fx[worst] = fe;
            } else {
                simplex[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr > fx[mid]) {
            simplex[worst] = xr;
            fx[worst] = fr;
        } else {
            const auto xc = along(0.5);
            const double fc = f(xc);
            if (fc > fx[worst]) {
                simplex[worst] = xc;
                fx[worst] = fc;
            } else {
                for (int v : {mid, worst}) {
                    simplex[v] = clamp({0.5 * (simplex[v][0] + simplex[best][0]),
                                        0.5 * (simplex[v][1] + simplex[best][1])});
                    fx[v] = f(simplex[v]);
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::max_element(fx.begin(), fx.end()) - fx.begin());
    out.value = fx[best];
    out.argmax = {std::exp(simplex[best][0]), std::exp(simplex[best][1])};
    return out;
}

struct SupremumReport {
    double gamma = 0.0;
    double c0 = 0.0;
    double e2 = 0.0;
    GridSpec grid;

    /// Supremum over q1 > 0: the polished grid maximum, or the corner limit
    /// when the corner probe supports it and it is larger.
    double sup_value = 0.0;
    Point argmax{};
    std::string attained_at;  // "corner", "q1->0 boundary" or "grid interior"

    double grid_max = 0.0;
    Point grid_argmax{};
    double polished_max = 0.0;
    Point polished_argmax{};
    /// Maximum over grid points with q1 >= 1, away from the q1 -> 0 layer
    /// where s*phi tends to 0 from below.
    double far_field_max = 0.0;
    Point far_field_argmax{};
    /// Far-field maximizer lies on the q2 = q_max edge with q2 >= 100 q1.
    bool trends_to_corner = false;
    /// Largest |s*phi| on the q1 = 0 axis. It is identically zero there and is
    /// therefore not part of the supremum.
    double q1_axis_max_abs = 0.0;

    double asymptote = 0.0;
    CornerTrend corner;
    std::size_t evaluations = 0;
};

namespace detail {

struct GridMax {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    double far_value = -std::numeric_limits<double>::infinity();
    std::size_t far_index = 0;
};

inline GridMax grid_max(const Landscape& land, double gamma) {
    GridMax m;
    for (std::size_t idx = 0; idx < land.size(); ++idx) {
        const double v = land.value(idx, gamma);
        if (v > m.value) {
            m.value = v;
            m.index = idx;
        }
        if (land.q1[idx / land.q2.size()] >= 1.0 && v > m.far_value) {
            m.far_value = v;
            m.far_index = idx;
        }
    }
    return m;
}

inline SupremumReport summarize(const Landscape& land, const VirialConfig& cfg) {
    SupremumReport r;
    r.gamma = cfg.coupling.gamma();
    r.c0 = cfg.c0;
    r.e2 = cfg.coupling.e2();
    r.grid = cfg.grid;
    r.evaluations = land.size();

    const auto m = grid_max(land, r.gamma);
    r.grid_max = m.value;
    r.grid_argmax = land.point(m.index);
    if (std::isfinite(m.far_value)) {
        r.far_field_max = m.far_value;
        r.far_field_argmax = land.point(m.far_index);
        r.trends_to_corner =
            r.far_field_argmax[1] == land.q2.back() && r.far_field_argmax[1] >= 100.0 * r.far_field_argmax[0];
    } else {
        r.far_field_max = std::numeric_limits<double>::quiet_NaN();
    }

    const double step = cfg.grid.points > 1
                            ? std::log(cfg.grid.q_max / cfg.grid.q_min) / static_cast<double>(cfg.grid.points - 1)
                            : 1.0;
    const auto p = polish(cfg, r.grid_argmax, step);
    r.evaluations += p.evaluations;
    if (p.value > r.grid_max) {
        r.polished_max = p.value;
        r.polished_argmax = p.argmax;
    } else {
        r.polished_max = r.grid_max;
        r.polished_argmax = r.grid_argmax;
    }

    for (double q2 : land.q2) {
        r.q1_axis_max_abs = std::max(r.q1_axis_max_abs, std::abs(s_phi(0.0, q2, cfg).s_phi));
    }

    r.asymptote = asymptotic_s_phi(cfg.coupling, cfg.c0);
    r.corner = corner_trend(cfg);
    r.evaluations += r.corner.values.size() + land.q2.size();

    if (r.corner.supports_limit() && r.asymptote >= r.polished_max) {
        r.sup_value = r.asymptote;
        r.argmax = r.trends_to_corner ? r.far_field_argmax : r.corner.points.back();
        r.attained_at = "corner";
    } else {
        r.sup_value = r.polished_max;
        r.argmax = r.polished_argmax;
        r.attained_at = r.polished_argmax[0] <= cfg.grid.q_min * (1.0 + 1e-9) ? "q1->0 boundary" : "grid interior";
    }
    return r;
}

}  // namespace detail

/// Requires the grid to reach q_max >= 1e6 so the corner region is sampled.
inline SupremumReport supremum_search(const VirialConfig& cfg) {
    validate_c0(cfg.c0);
    validate_grid(cfg.grid);
    if (cfg.grid.q_max < 1e6) {
        throw ConfigError("supremum_search: grid must reach q_max >= 1e6");
    }
    const auto land = build_landscape(cfg.grid, cfg.c0, cfg.coupling.e2());
    return detail::summarize(land, cfg);
}

/// Same as supremum_search but reuses an already evaluated landscape.
inline SupremumReport supremum_search(const Landscape& land, const Coupling& coupling) {
    VirialConfig cfg{land.c0, coupling, land.grid};
    return detail::summarize(land, cfg);
}

struct CriticalGammaReport {
    double c0 = 0.0;
    double e2 = 0.0;
    double tol = 0.0;
    GridSpec grid;
    double gamma_c = 0.0;
    double closed_form = 0.0;
    std::array<double, 2> bracket{};
    /// Coupling where the grid maximum alone (corner limit ignored) reaches 0;
    /// NaN when it stays negative across the search bracket.
    double grid_only_crossing = std::numeric_limits<double>::quiet_NaN();
    double sup_below = 0.0;  // full search at gamma_c - tol
    double sup_above = 0.0;  // full search at gamma_c + tol
    bool corner_supported = false;
    bool validated = false;
    std::size_t iterations = 0;
};

/// Coupling at which sup s*phi crosses 0. The closed-form corner crossing
/// centers a +-0.1 bracket; every bisection step consults both the grid and
/// the corner probe, and the result is re-checked by two full searches.
inline CriticalGammaReport critical_gamma(double c0, double tol, double e2 = kDefaultE2, const GridSpec& grid = {}) {
    validate_c0(c0);
    if (!(tol > 0.0)) {
        throw DomainError("critical_gamma: tol must be positive");
    }
    CriticalGammaReport rep;
    rep.c0 = c0;
    rep.e2 = e2;
    rep.tol = tol;
    rep.grid = grid;
    rep.closed_form = asymptotic_critical_gamma(c0, e2);

    const auto land = build_landscape(grid, c0, e2);
    auto corner_at = [&](double g) { return corner_trend(VirialConfig{c0, Coupling::from_gamma(g, e2), grid}); };
    auto sup_at = [&](double g) {
        double s = detail::grid_max(land, g).value;
        const auto t = corner_at(g);
        if (t.supports_limit()) {
            s = std::max(s, t.limit);
        }
        return s;
    };

    const double lo = std::max(0.0, rep.closed_form - 0.1);
    const double hi = rep.closed_form + 0.1;
    rep.bracket = {lo, hi};
    rep.gamma_c = solve_threshold(
        [&](double g) {
            ++rep.iterations;
            return sup_at(g);
        },
        0.0, lo, hi, tol);
    rep.corner_supported = corner_at(rep.gamma_c).supports_limit();

    auto grid_only = [&](double g) { return detail::grid_max(land, g).value; };
    if (grid_only(lo) < 0.0 && grid_only(hi) > 0.0) {
        rep.grid_only_crossing = solve_threshold(grid_only, 0.0, lo, hi, tol);
    }

    rep.sup_below = supremum_search(land, Coupling::from_gamma(std::max(0.0, rep.gamma_c - tol), e2)).sup_value;
    rep.sup_above = supremum_search(land, Coupling::from_gamma(rep.gamma_c + tol, e2)).sup_value;
    rep.validated = rep.sup_below <= 0.0 && rep.sup_above > 0.0;
    return rep;
}

}  // namespace jhkit::virial
