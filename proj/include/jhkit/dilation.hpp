#pragma once

// Complex-dilation geometry: the dilated kinetic curve sqrt(p^2/theta^2 + m^2),
// two-cluster sum sets, the sector opening angle of the dilated single-particle
// operator, and pointwise checks of the dilation estimates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jhkit/constants.hpp"
#include "jhkit/errors.hpp"

namespace jhkit::dilation {

using cplx = std::complex<double>;

/// theta = e^xi with |xi| <= xi0 < 1/2.
class DilationParam {
public:
    DilationParam(cplx xi, double xi0, double mass = 1.0) : xi_(xi), xi0_(xi0), mass_(mass) {
        if (!(xi0 > 0.0) || !(xi0 < 0.5)) {
            throw DomainError("dilation: xi0 must lie in (0, 1/2)");
        }
        if (!(std::abs(xi) <= xi0)) {
            throw DomainError("dilation: |xi| exceeds xi0");
        }
        if (!(mass > 0.0) || !std::isfinite(mass)) {
            throw DomainError("dilation: mass must be positive");
        }
        theta_ = std::exp(xi);
    }

    cplx xi() const { return xi_; }
    double xi0() const { return xi0_; }
    double mass() const { return mass_; }
    cplx theta() const { return theta_; }

private:
    cplx xi_;
    double xi0_;
    double mass_;
    cplx theta_;
};

/// Parses "0.1i", "-0.05+0.1i", "0.2" and similar into a complex number.
inline cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text) {
        if (ch != ' ') {
            s.push_back(ch);
        }
    }
    if (s.empty()) {
        throw ConfigError("complex literal is empty");
    }
    auto to_double = [&](const std::string& part) {
        if (part.empty() || part == "+") {
            return 1.0;
        }
        if (part == "-") {
            return -1.0;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse complex literal '" + text + "'");
        }
        if (used != part.size()) {
            throw ConfigError("cannot parse complex literal '" + text + "'");
        }
        return v;
    };
    if (s.back() != 'i' && s.back() != 'j') {
        return {to_double(s), 0.0};
    }
    s.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        return {0.0, to_double(s)};
    }
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

/// Dilated single-particle kinetic energy sqrt(p^2 + m^2 theta^2), Re > 0.
inline cplx e_theta(double p, const DilationParam& d) {
    return std::sqrt(cplx(p * p, 0.0) + d.mass() * d.mass() * d.theta() * d.theta());
}

struct SpectralCurve {
    std::vector<double> p;
    std::vector<cplx> samples;
    double asymptote_angle = 0.0;  // -Im xi
    cplx start_point{};
};

namespace detail {

inline void check_p_grid(const std::vector<double>& p_grid) {
    if (p_grid.empty()) {
        throw ConfigError("p grid is empty");
    }
    if (p_grid.front() != 0.0) {
        throw ConfigError("p grid must start at 0");
    }
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > p_grid[i - 1]) || !std::isfinite(p_grid[i])) {
            throw ConfigError("p grid must be strictly increasing and finite");
        }
    }
}

}  // namespace detail

/// sqrt(p^2/theta^2 + m^2) along the grid. Each root takes the sign closer to
/// its predecessor, so the curve stays on one branch starting from +m.
inline SpectralCurve curve_sample(const DilationParam& d, const std::vector<double>& p_grid) {
    detail::check_p_grid(p_grid);
    SpectralCurve c;
    c.p = p_grid;
    c.asymptote_angle = -d.xi().imag();
    const cplx inv_theta2 = 1.0 / (d.theta() * d.theta());
    const double m2 = d.mass() * d.mass();
    c.samples.reserve(p_grid.size());
    cplx prev(d.mass(), 0.0);
    for (double p : p_grid) {
        cplx s = std::sqrt(p * p * inv_theta2 + m2);
        if (std::abs(-s - prev) < std::abs(s - prev)) {
            s = -s;
        }
        c.samples.push_back(s);
        prev = s;
    }
    c.start_point = c.samples.front();
    return c;
}

/// Log-spaced momenta in [lo, hi] preceded by p = 0.
inline std::vector<double> p_grid_with_zero(double lo, double hi, std::size_t n) {
    std::vector<double> g{0.0};
    if (n == 0) {
        return g;
    }
    const double step = n > 1 ? std::log(hi / lo) / static_cast<double>(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        g.push_back(lo * std::exp(step * static_cast<double>(i)));
    }
    g.back() = hi;
    return g;
}

struct ClusterSumSet {
    /// One curve lambda2 + sqrt(p^2/theta^2 + m^2) per bound-state energy; each
    /// starts at m + lambda2.
    std::vector<SpectralCurve> shifted;
    /// sqrt(p1^2/theta^2 + m^2) + sqrt(p2^2/theta^2 + m^2) on the grid product.
    std::vector<cplx> sum_points;
    /// Sum-set samples with |Im| < real_tol.
    std::vector<cplx> real_points;
    double real_tol = 1e-10;
};

inline ClusterSumSet cluster_sum_set(const DilationParam& d, const std::vector<double>& lambda2_list,
                                     const std::vector<double>& p_grid, double real_tol = 1e-10) {
    const auto base = curve_sample(d, p_grid);
    ClusterSumSet out;
    out.real_tol = real_tol;
    for (double lambda2 : lambda2_list) {
        SpectralCurve c = base;
        for (auto& s : c.samples) {
            s += lambda2;
        }
        c.start_point = c.samples.front();
        out.shifted.push_back(std::move(c));
    }
    out.sum_points.reserve(base.samples.size() * base.samples.size());
    for (const auto& s1 : base.samples) {
        for (const auto& s2 : base.samples) {
            const cplx s = s1 + s2;
            out.sum_points.push_back(s);
            if (std::abs(s.imag()) < real_tol) {
                out.real_points.push_back(s);
            }
        }
    }
    return out;
}

/// Opening angle phi with tan(phi/2) = (tan|Im xi| + c1) / (1 - c1).
inline double sector_angle(double im_xi, double c1) {
    if (!(c1 >= 0.0) || !(c1 < 1.0)) {
        throw DomainError("sector_angle: c1 must lie in [0, 1)");
    }
    if (!(std::abs(im_xi) < std::numbers::pi / 4.0)) {
        throw DomainError("sector_angle: |Im xi| must be below pi/4");
    }
    return 2.0 * std::atan((std::tan(std::abs(im_xi)) + c1) / (1.0 - c1));
}

/// c1 = kato_c0(gamma) / (1 - xi0), the relative bound of the dilated
/// single-particle potential.
inline double sector_c1(double gamma, double xi0) { return kato_c0(gamma) / (1.0 - xi0); }

struct Xi0Choice {
    double xi0 = 0.0;
    double c1 = 0.0;
    double phi0 = 0.0;          // sector angle at |Im xi| = xi0
    std::size_t halvings = 0;   // xi0 halvings needed to get c1 < 1
    bool delta_step = false;    // the angle-splitting step was used
    bool feasible() const { return xi0 > 0.0 && xi0 < 0.5 && c1 < 1.0 && 2.0 * xi0 + phi0 < std::numbers::pi; }
};

/// Picks xi0 with c1 < 1 and 2 xi0 + phi(xi0) < pi. Starts from `start`,
/// halves until c1 < 1, and if the angle sum is still too large replaces xi0
/// by (pi - delta)/2 with delta halfway between phi0 and pi.
inline Xi0Choice select_xi0(double gamma, double start = 0.1) {
    using std::numbers::pi;
    if (!(gamma >= 0.0)) {
        throw DomainError("xi0_selection: gamma must be nonnegative");
    }
    if (!(start > 0.0) || !(start < 0.5)) {
        throw DomainError("xi0_selection: start must lie in (0, 1/2)");
    }
    if (!(kato_c0(gamma) < 1.0)) {
        throw InfeasibleError("xi0_selection: single-particle bound c0 >= 1, no admissible xi0");
    }
    Xi0Choice ch;
    ch.xi0 = start;
    while (sector_c1(gamma, ch.xi0) >= 1.0) {
        ch.xi0 *= 0.5;
        ++ch.halvings;
        if (ch.xi0 < 1e-12) {
            throw InfeasibleError("xi0_selection: c1 < 1 not reachable");
        }
    }
    ch.c1 = sector_c1(gamma, ch.xi0);
    ch.phi0 = sector_angle(ch.xi0, ch.c1);
    if (2.0 * ch.xi0 + ch.phi0 >= pi) {
        const double delta = 0.5 * (ch.phi0 + pi);
        ch.xi0 = 0.5 * (pi - delta);
        ch.c1 = sector_c1(gamma, ch.xi0);
        ch.phi0 = sector_angle(ch.xi0, ch.c1);
        ch.delta_step = true;
    }
    if (!ch.feasible()) {
        throw InfeasibleError("xi0_selection: no xi0 satisfies both sector constraints");
    }
    return ch;
}

inline double xi0_selection(double gamma) { return select_xi0(gamma).xi0; }

/// One family of dilation estimates, reduced to the worst lhs/rhs ratio.
struct InequalityCheck {
    std::string name;
    std::string anchor;
    double max_ratio = 0.0;  // <= 1 means the estimate holds everywhere
    std::size_t evaluations = 0;
    std::size_t violations = 0;
    double worst_p = 0.0;
    cplx worst_xi{};
};

struct DilationReport {
    std::vector<InequalityCheck> checks;
    std::size_t violations() const {
        std::size_t n = 0;
        for (const auto& c : checks) {
            n += c.violations;
        }
        return n;
    }
    double max_ratio() const {
        double r = 0.0;
        for (const auto& c : checks) {
            r = std::max(r, c.max_ratio);
        }
        return r;
    }
    void merge(const DilationReport& other);
};

inline void DilationReport::merge(const DilationReport& other) {
    if (checks.empty()) {
        checks = other.checks;
        return;
    }
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& o = other.checks[i];
        auto& c = checks[i];
        if (o.max_ratio > c.max_ratio) {
            c.max_ratio = o.max_ratio;
            c.worst_p = o.worst_p;
            c.worst_xi = o.worst_xi;
        }
        c.evaluations += o.evaluations;
        c.violations += o.violations;
    }
}

namespace detail {

// Ratios within this relative distance of 1 count as equality.
inline constexpr double kRatioSlack = 1e-12;

enum Check : std::size_t {
    kEnergyLower,
    kEnergyUpper,
    kAmplitude,
    kMomentumWeight,
    kResolventSum,
    kRealPartCos,
    kRealPartLinear,
    kFormLower,
    kOperatorLower,
    kCheckCount
};

inline std::vector<InequalityCheck> empty_checks() {
    std::vector<InequalityCheck> v(kCheckCount);
    v[kEnergyLower] = {"energy_lower", "(1 - xi0) E_p <= |E_theta(p)|"};
    v[kEnergyUpper] = {"energy_upper", "|E_theta(p)| <= (1 + 2 xi0) E_p"};
    v[kAmplitude] = {"fw_amplitude", "|A_theta(p)|^2 <= (1 + 2 xi0)/(1 - xi0) A(p)^2"};
    v[kMomentumWeight] = {"fw_momentum_weight", "|p g_theta(p)/theta|^2 <= (1 - xi0)^-4 p^2 g(p)^2"};
    v[kResolventSum] = {"energy_sum_inverse", "|1/(E_theta(p) + E_theta(p'))| <= (1 - xi0)^-3 / (E_p + E_p')"};
    v[kRealPartCos] = {"real_part_cos", "Re sqrt(p^2 + m^2 theta^2) >= p cos(Im xi)"};
    v[kRealPartLinear] = {"real_part_linear", "p cos(Im xi) >= p (1 - xi0)"};
    v[kFormLower] = {"dilated_form_lower", "|E_theta(p)| >= Re E_theta(p) >= (1 - xi0) p"};
    v[kOperatorLower] = {"dilated_operator_lower",
                         "(Re E_theta(p1) + Re E_theta(p2))^2 >= (1 - xi0)^2 (p1 + p2)^2"};
    return v;
}

inline void record(InequalityCheck& c, double lhs, double rhs, double p, cplx xi) {
    ++c.evaluations;
    double ratio = 0.0;
    if (rhs > 0.0) {
        ratio = lhs / rhs;
    } else if (lhs > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
    }
    if (ratio > c.max_ratio) {
        c.max_ratio = ratio;
        c.worst_p = p;
        c.worst_xi = xi;
    }
    if (ratio > 1.0 + kRatioSlack) {
        ++c.violations;
    }
}

/// All single-point estimates at momentum p (units of the mass).
inline void check_point(std::vector<InequalityCheck>& v, const DilationParam& d, double p) {
    const double m = d.mass();
    const double xi0 = d.xi0();
    const cplx th = d.theta();
    const cplx xi = d.xi();
    const double e = std::hypot(p, m);
    const cplx et = e_theta(p, d);
    const double abs_et = std::abs(et);

    record(v[kEnergyLower], (1.0 - xi0) * e, abs_et, p, xi);
    record(v[kEnergyUpper], abs_et, (1.0 + 2.0 * xi0) * e, p, xi);

    const double a2 = (e + m) / (2.0 * e);
    const double at2 = std::abs(et + m * th) / (2.0 * abs_et);
    record(v[kAmplitude], at2, (1.0 + 2.0 * xi0) / (1.0 - xi0) * a2, p, xi);

    const double pg2 = p * p / (2.0 * e * (e + m));
    const double pgt2 = p * p / std::abs(2.0 * et * (et + m * th));
    record(v[kMomentumWeight], pgt2, pg2 / std::pow(1.0 - xi0, 4), p, xi);

    const double cos_im = std::cos(xi.imag());
    record(v[kRealPartCos], p * cos_im, et.real(), p, xi);
    record(v[kRealPartLinear], p * (1.0 - xi0), p * cos_im, p, xi);
    record(v[kFormLower], (1.0 - xi0) * p, std::min(abs_et, std::abs(et.real())), p, xi);
}

inline void check_pair(std::vector<InequalityCheck>& v, const DilationParam& d, double p, double q) {
    const double xi0 = d.xi0();
    const cplx et = e_theta(p, d) + e_theta(q, d);
    const double e = std::hypot(p, d.mass()) + std::hypot(q, d.mass());
    record(v[kResolventSum], 1.0 / std::abs(et), 1.0 / (std::pow(1.0 - xi0, 3) * e), p, d.xi());
    const double re = e_theta(p, d).real() + e_theta(q, d).real();
    const double lin = (1.0 - xi0) * (p + q);
    record(v[kOperatorLower], lin * lin, re * re, p, d.xi());
}

}  // namespace detail

/// Checks every estimate at each grid momentum and on the pairs
/// (p_i, p_{n-1-i}) and (p_i, p_{i+1}). Violations are counted, never thrown.
inline DilationReport validate_dilation_inequalities(const DilationParam& d, const std::vector<double>& grid) {
    DilationReport rep;
    rep.checks = detail::empty_checks();
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        detail::check_point(rep.checks, d, grid[i]);
        detail::check_pair(rep.checks, d, grid[i], grid[n - 1 - i]);
        if (i + 1 < n) {
            detail::check_pair(rep.checks, d, grid[i], grid[i + 1]);
        }
    }
    return rep;
}

/// Random (xi, p) stress scan: xi uniform in the disc |xi| <= xi_radius, ln p
/// uniform in [ln p_lo, ln p_hi] (units of m). Each sample uses xi0 = |xi|,
/// the tightest cap its own xi admits.
inline DilationReport random_dilation_scan(std::uint64_t seed, std::size_t samples, double xi_radius, double p_lo,
                                           double p_hi, double mass = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DilationReport rep;
    rep.checks = detail::empty_checks();
    for (std::size_t s = 0; s < samples; ++s) {
        const double r = xi_radius * std::sqrt(unit(rng));
        const double ang = 2.0 * std::numbers::pi * unit(rng);
        const cplx xi = std::polar(r, ang);
        const double xi0 = std::max(std::abs(xi), 1e-12);
        const DilationParam d(xi, xi0, mass);
        const double p = mass * p_lo * std::exp(std::log(p_hi / p_lo) * unit(rng));
        const double q = mass * p_lo * std::exp(std::log(p_hi / p_lo) * unit(rng));
        detail::check_point(rep.checks, d, p);
        detail::check_pair(rep.checks, d, p, q);
    }
    return rep;
}

}  // namespace jhkit::dilation
