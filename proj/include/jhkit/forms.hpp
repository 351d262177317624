#pragma once

// Dirac / Foldy-Wouthuysen algebra, momentum-space kernels of the no-pair
// operators, Lieb-Yau weighted kernel integrals, the auxiliary integral
// bounds, and the massless l = 0 Brown-Ravenhall quadratic form.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jhkit/constants.hpp"
#include "jhkit/errors.hpp"
#include "jhkit/parallel.hpp"
#include "jhkit/quadrature.hpp"
#include "jhkit/specfun.hpp"

namespace jhkit::forms {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------- algebra

struct DiracAlgebra {
    std::array<Mat4, 3> alpha;
    Mat4 beta;
};

/// Standard (Dirac) representation: beta = diag(I, -I), alpha_k = offdiag(sigma_k).
inline DiracAlgebra build_dirac() {
    const cplx i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 3> sigma;
    sigma[0] << 0, 1, 1, 0;
    sigma[1] << 0, -i, i, 0;
    sigma[2] << 1, 0, 0, -1;
    DiracAlgebra d;
    for (int k = 0; k < 3; ++k) {
        d.alpha[k] = Mat4::Zero();
        d.alpha[k].topRightCorner<2, 2>() = sigma[k];
        d.alpha[k].bottomLeftCorner<2, 2>() = sigma[k];
    }
    d.beta = Mat4::Identity();
    d.beta.bottomRightCorner<2, 2>() *= -1.0;
    return d;
}

inline const DiracAlgebra& dirac() {
    static const DiracAlgebra d = build_dirac();
    return d;
}

inline Mat4 alpha_dot(const Vec3& p) {
    const auto& d = dirac();
    return p.x() * d.alpha[0] + p.y() * d.alpha[1] + p.z() * d.alpha[2];
}

/// Free Dirac operator alpha.p + beta m.
inline Mat4 free_dirac(const Vec3& p, double m) { return alpha_dot(p) + m * dirac().beta; }

struct FWTransform {
    Vec3 p = Vec3::Zero();
    double m = 1.0;
    double e_p = 1.0;
    double a = 1.0;  // sqrt((E + m) / (2E))
    double g = 0.0;  // 1 / sqrt(2E (E + m))
    Mat4 u0 = Mat4::Identity();
    Mat4 u0_inv = Mat4::Identity();
};

inline FWTransform fw_transform(const Vec3& p, double m) {
    if (!(m > 0.0)) {
        throw DomainError("fw_transform: mass must be positive");
    }
    FWTransform t;
    t.p = p;
    t.m = m;
    t.e_p = std::hypot(p.norm(), m);
    t.a = std::sqrt((t.e_p + m) / (2.0 * t.e_p));
    t.g = 1.0 / std::sqrt(2.0 * t.e_p * (t.e_p + m));
    const Mat4 ap = alpha_dot(p);
    const Mat4& beta = dirac().beta;
    t.u0 = t.a * Mat4::Identity() + t.g * beta * ap;
    t.u0_inv = t.a * Mat4::Identity() + t.g * ap * beta;
    return t;
}

/// (alpha.p + beta m) / E_p: hermitian, squares to I.
inline Mat4 d_tilde(const Vec3& p, double m) {
    const double e = std::hypot(p.norm(), m);
    if (!(e > 0.0)) {
        throw DomainError("d_tilde: p and m both vanish");
    }
    return free_dirac(p, m) / e;
}

/// Worst residuals of the algebraic identities over a set of momenta. Norms
/// are Frobenius; the block-diagonalization residual is relative to E_p.
struct AlgebraResiduals {
    std::size_t samples = 0;
    double anticommutation = 0.0;  // {alpha_i, alpha_j} = 2 delta_ij, {alpha_i, beta} = 0, beta^2 = I
    double unitarity = 0.0;        // U0 U0^dagger = I
    double inverse = 0.0;          // U0 U0^-1 = I
    double block_diagonal = 0.0;   // U0 (alpha.p + beta m) U0^-1 = beta E_p
    double d_tilde_square = 0.0;   // D~^2 = I
    double max() const {
        return std::max({anticommutation, unitarity, inverse, block_diagonal, d_tilde_square});
    }
};

inline double anticommutation_residual(const DiracAlgebra& d) {
    double worst = (d.beta * d.beta - Mat4::Identity()).norm();
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, (d.alpha[i] * d.beta + d.beta * d.alpha[i]).norm());
        for (int j = 0; j < 3; ++j) {
            const Mat4 target = (i == j ? 2.0 : 0.0) * Mat4::Identity();
            worst = std::max(worst, (d.alpha[i] * d.alpha[j] + d.alpha[j] * d.alpha[i] - target).norm());
        }
    }
    return worst;
}

/// Identities at the given momenta (mass m).
inline AlgebraResiduals algebra_residuals(const std::vector<Vec3>& momenta, double m) {
    AlgebraResiduals r;
    r.samples = momenta.size();
    r.anticommutation = anticommutation_residual(dirac());
    const Mat4 id = Mat4::Identity();
    for (const auto& p : momenta) {
        const auto t = fw_transform(p, m);
        r.unitarity = std::max(r.unitarity, (t.u0 * t.u0.adjoint() - id).norm());
        r.inverse = std::max(r.inverse, (t.u0 * t.u0_inv - id).norm());
        const Mat4 h = t.u0 * free_dirac(p, m) * t.u0_inv;
        r.block_diagonal = std::max(r.block_diagonal, (h - t.e_p * dirac().beta).norm() / t.e_p);
        const Mat4 dt = d_tilde(p, m);
        r.d_tilde_square = std::max(r.d_tilde_square, (dt * dt - id).norm());
    }
    return r;
}

/// Random momenta: isotropic direction, |p|/m log-uniform in [p_lo, p_hi].
inline std::vector<Vec3> random_momenta(std::uint64_t seed, std::size_t n, double m, double p_lo = 1e-3,
                                        double p_hi = 1e3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec3> out;
    out.reserve(n);
    while (out.size() < n) {
        const Vec3 v(normal(rng), normal(rng), normal(rng));
        const double len = v.norm();
        if (!(len > 0.0)) {
            continue;
        }
        const double mag = m * p_lo * std::exp(std::log(p_hi / p_lo) * unit(rng));
        out.push_back(v / len * mag);
    }
    return out;
}

// ---------------------------------------------------------------- kernels

enum class KernelKind { F0, B1m, V12 };

struct KernelMomenta {
    Vec3 p = Vec3::Zero();        // first particle, unprimed
    Vec3 p_prime = Vec3::Zero();  // first particle, primed
    Vec3 p2 = Vec3::Zero();       // second particle (V12 only)
};

struct KernelSample {
    KernelKind kind = KernelKind::B1m;
    double scalar = 0.0;          // scalar kernels and the F0 prefactor
    Mat4 matrix = Mat4::Zero();   // F0 only
    Vec3 p2_prime = Vec3::Zero(); // V12: fixed by momentum conservation
};

/// I - D~(p) D~(p'), the spinor factor of the F0 kernel.
inline Mat4 f0_matrix_factor(const Vec3& p, const Vec3& pp, double m) {
    return Mat4::Identity() - d_tilde(p, m) * d_tilde(pp, m);
}

namespace detail {

inline double inverse_square_distance(const Vec3& p, const Vec3& pp) {
    const double d2 = (p - pp).squaredNorm();
    if (!(d2 > 0.0)) {
        throw SingularityError("kernel: coincident momenta");
    }
    return 1.0 / d2;
}

}  // namespace detail

/// -gamma/(2 pi)^2 |p - p'|^-2 (E_p + E_p')^-1 (I - D~(p) D~(p')).
inline KernelSample kernel_f0(const Vec3& p, const Vec3& pp, const Coupling& c, double m) {
    using std::numbers::pi;
    KernelSample s;
    s.kind = KernelKind::F0;
    const double e = std::hypot(p.norm(), m) + std::hypot(pp.norm(), m);
    s.scalar = -c.gamma() / (4.0 * pi * pi) * detail::inverse_square_distance(p, pp) / e;
    s.matrix = s.scalar * f0_matrix_factor(p, pp, m);
    return s;
}

/// -gamma/(2 pi^2) |p - p'|^-2; the second particle's delta is left implicit.
inline KernelSample kernel_b1m(const Vec3& p, const Vec3& pp, const Coupling& c) {
    using std::numbers::pi;
    KernelSample s;
    s.kind = KernelKind::B1m;
    s.scalar = -c.gamma() / (2.0 * pi * pi) * detail::inverse_square_distance(p, pp);
    return s;
}

/// e^2/(2 pi^2) |p1 - p1'|^-2 on the momentum-conserving shell p2' = p2 + p1 - p1'.
inline KernelSample kernel_v12(const Vec3& p1, const Vec3& p1p, const Vec3& p2, const Coupling& c) {
    using std::numbers::pi;
    KernelSample s;
    s.kind = KernelKind::V12;
    s.scalar = c.e2() / (2.0 * pi * pi) * detail::inverse_square_distance(p1, p1p);
    s.p2_prime = p2 + p1 - p1p;
    return s;
}

inline KernelSample kernel_eval(KernelKind kind, const KernelMomenta& k, const Coupling& c, double m) {
    switch (kind) {
        case KernelKind::F0:
            return kernel_f0(k.p, k.p_prime, c, m);
        case KernelKind::B1m:
            return kernel_b1m(k.p, k.p_prime, c);
        case KernelKind::V12:
            return kernel_v12(k.p, k.p_prime, k.p2, c);
    }
    throw DomainError("kernel_eval: unknown kernel kind");
}

// ------------------------------------------------------- angular reductions

/// Legendre Q0 of z = (p^2 + p'^2)/(2 p p'), written in the ratio y = p'/p:
/// ln((1 + y)/|1 - y|).
inline double legendre_q0_ratio(double y) { return specfun::log_kernel(y); }

/// Legendre Q1 = z Q0(z) - 1 in the ratio y = p'/p. Small r = 1/z uses the
/// series of atanh(r)/r - 1 to avoid cancellation.
inline double legendre_q1_ratio(double y) {
    if (y > 1.0) {
        y = 1.0 / y;
    }
    const double r = 2.0 * y / (1.0 + y * y);
    if (r < 1e-2) {
        const double r2 = r * r;
        double term = r2;
        double sum = 0.0;
        for (int k = 1; k < 12; ++k) {
            sum += term / (2.0 * k + 1.0);
            term *= r2;
        }
        return sum;
    }
    return legendre_q0_ratio(y) / r - 1.0;
}

/// Angular integral of |p - p'|^-2 over the direction of p':
/// (2 pi / (p p')) Q0.
inline double angular_inverse_square(double p, double pp) {
    if (!(p > 0.0) || !(pp > 0.0)) {
        throw DomainError("angular_inverse_square: momenta must be positive");
    }
    return 2.0 * std::numbers::pi / (p * pp) * legendre_q0_ratio(pp / p);
}

/// Same with the extra factor p^.p^': (2 pi / (p p')) Q1.
inline double angular_inverse_square_cos(double p, double pp) {
    if (!(p > 0.0) || !(pp > 0.0)) {
        throw DomainError("angular_inverse_square_cos: momenta must be positive");
    }
    if (pp == p) {
        throw SingularityError("angular_inverse_square_cos: equal momenta");
    }
    return 2.0 * std::numbers::pi / (p * pp) * legendre_q1_ratio(pp / p);
}

/// Q0 + Q1 in the ratio y: the l = 0 massless Brown-Ravenhall kernel.
inline double br_ratio_kernel(double y) {
    if (y == 1.0) {
        throw SingularityError("br_ratio_kernel: y = 1");
    }
    return legendre_q0_ratio(y) + legendre_q1_ratio(y);
}

// -------------------------------------------------------------- Lieb-Yau

/// Angle-integrated kernel K(p, p') including the p'^2 measure.
using RadialKernel = std::function<double(double, double)>;
using RadialWeight = std::function<double(double)>;

struct LiebYauPoint {
    double p = 0.0;
    double value = 0.0;  // int |K(p, p')| f(p)/g(p') dp'
    double error = 0.0;
};

namespace detail {

// int_0^oo h(p') dp' with the diagonal p' = p split out. Abscissas that round
// onto the diagonal or leave (0, oo) sit at integrable endpoint singularities
// and are dropped.
template <class H>
QuadResult integrate_split_diagonal(const H& h, double p, const QuadratureSpec& q) {
    const auto safe = [&](double x) { return x <= 0.0 || !std::isfinite(x) || x / p == 1.0 ? 0.0 : h(x); };
    const auto a = integrate(safe, 0.0, p, q);
    const auto b = integrate(safe, p, 2.0 * p, q);
    const auto c = integrate(safe, 2.0 * p, std::numeric_limits<double>::infinity(), q);
    return {a.value + b.value + c.value, a.error + b.error + c.error, a.l1 + b.l1 + c.l1};
}

}  // namespace detail

/// Weighted kernel integral of the Lieb-Yau inequality for a radial kernel,
/// int |K(p, p')| f(p)/g(p') dp' at each evaluation point. When the second
/// particle enters through a delta (p2' = p2) its weight ratio is 1 and drops
/// out. Non-convergence raises DivergenceError.
inline std::vector<LiebYauPoint> lieb_yau_bound(const RadialKernel& kernel, const RadialWeight& f,
                                                const RadialWeight& g, const std::vector<double>& p_eval,
                                                const QuadratureSpec& q = {}) {
    std::vector<LiebYauPoint> out(p_eval.size());
    for (std::size_t i = 0; i < p_eval.size(); ++i) {
        const double p = p_eval[i];
        if (!(p > 0.0)) {
            throw DomainError("lieb_yau_bound: evaluation points must be positive");
        }
        const double fp = f(p);
        // Far out the weight ratio reaches zero before the kernel overflows;
        // near zero the kernel underflows before the weight does.
        auto h = [&](double pp) {
            const double w = fp / g(pp);
            if (w == 0.0) {
                return 0.0;
            }
            const double k = kernel(p, pp);
            return k == 0.0 ? 0.0 : std::abs(k) * w;
        };
        const auto r = detail::integrate_split_diagonal(h, p, q);
        out[i] = {p, r.value, r.error};
    }
    return out;
}

inline std::vector<LiebYauPoint> lieb_yau_bound(const RadialKernel& kernel, const RadialWeight& f,
                                                const std::vector<double>& p_eval, const QuadratureSpec& q = {}) {
    return lieb_yau_bound(kernel, f, f, p_eval, q);
}

/// Angle-integrated b1m kernel times the virial weight factors:
/// (gamma/2pi^2) q'^2 (2pi/(q q')) Q0 (1 - 1/E') |1/E' - c0/(E' + E2 - 1)|.
inline RadialKernel ib_kernel(const Coupling& c, double c0, double q2) {
    using std::numbers::pi;
    const double e2_minus_1 = q2 * q2 / (std::hypot(q2, 1.0) + 1.0);
    return [g = c.gamma(), c0, e2_minus_1](double q, double qp) {
        const double e = std::hypot(qp, 1.0);
        const double one_minus_inv_e = (qp / e) * (qp / (e + 1.0));
        const double weight = one_minus_inv_e * std::abs(1.0 / e - c0 / (e + e2_minus_1));
        if (!(q > 0.0) || !(qp > 0.0)) {
            throw DomainError("ib_kernel: momenta must be positive");
        }
        // q'^2 times the angular integral 2 pi Q0 / (q q').
        return g / (2.0 * pi * pi) * (2.0 * pi * qp / q) * legendre_q0_ratio(qp / q) * weight;
    };
}

/// Convergence-generating weight q^(5/2) / (sqrt(q^2+1) + 1).
inline double ib_weight(double q) { return std::pow(q, 2.5) / (std::hypot(q, 1.0) + 1.0); }

/// Closed-form upper estimate (gamma/pi) q^2/(l+1) [q F_1/2(1/q) + G_-3/2(1/q)/q].
inline double ib_closed_form(const Coupling& c, double q1) {
    if (!(q1 > 0.0)) {
        throw DomainError("ib_closed_form: q1 must be positive");
    }
    const double a = 1.0 / q1;
    return c.gamma() / std::numbers::pi * q1 * q1 / (std::hypot(q1, 1.0) + 1.0) *
           (q1 * specfun::f_half(a) + specfun::g_minus_three_half(a) / q1);
}

struct IbComparison {
    double q1 = 0.0;
    double numeric = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // bound - numeric
    double quad_error = 0.0;
};

/// Numeric I_b on a q1 grid against its closed-form estimate (valid for c0 <= 2).
inline std::vector<IbComparison> ib_dominance(const Coupling& c, double c0, double q2, const std::vector<double>& q1s,
                                              const QuadratureSpec& q = {}) {
    if (!(c0 >= 0.0) || !(c0 <= 2.0)) {
        throw DomainError("ib_dominance: c0 must lie in [0, 2]");
    }
    const auto pts = lieb_yau_bound(ib_kernel(c, c0, q2), ib_weight, q1s, q);
    std::vector<IbComparison> out;
    out.reserve(pts.size());
    for (const auto& pt : pts) {
        const double b = ib_closed_form(c, pt.p);
        out.push_back({pt.p, pt.value, b, b - pt.value, pt.error});
    }
    return out;
}

// ------------------------------------------------ two-particle bound chain

/// 2 pi int_0^oo y^-1/2 L(y) sqrt(xi2) y / (xi2 (1 + y) + 1) dy.
inline double appendix_a_inner(double xi2, const QuadratureSpec& q = {}) {
    if (!(xi2 > 0.0)) {
        throw DomainError("appendix_a_inner: xi2 must be positive");
    }
    const double s = std::sqrt(xi2);
    auto h = [&](double y) {
        if (y == 1.0 || y == 0.0) {
            return 0.0;
        }
        return specfun::log_kernel(y) / std::sqrt(y) * s * y / (xi2 * (1.0 + y) + 1.0);
    };
    const double v = integrate(h, 0.0, 1.0, q).value + integrate(h, 1.0, 2.0, q).value +
                     integrate(h, 2.0, std::numeric_limits<double>::infinity(), q).value;
    return 2.0 * std::numbers::pi * v;
}

struct InnerBoundReport {
    std::vector<double> xi2;
    std::vector<double> j;
    std::vector<double> product;  // J (1 + sqrt(xi2))
    double sup_product = 0.0;
    double argsup = 0.0;
    /// (max - min)/max of the product over the top decade of the grid.
    double top_decade_variation = 0.0;
    bool bounded = false;
};

inline InnerBoundReport appendix_a_inner_bound(const std::vector<double>& xi2_grid, const QuadratureSpec& q = {}) {
    if (xi2_grid.empty()) {
        throw ConfigError("appendix_a_inner_bound: empty grid");
    }
    InnerBoundReport r;
    r.xi2 = xi2_grid;
    r.j.resize(xi2_grid.size());
    r.product.resize(xi2_grid.size());
    parallel_for(xi2_grid.size(), [&](std::size_t i) {
        r.j[i] = appendix_a_inner(xi2_grid[i], q);
        r.product[i] = r.j[i] * (1.0 + std::sqrt(xi2_grid[i]));
    });
    const double top = *std::max_element(xi2_grid.begin(), xi2_grid.end());
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < xi2_grid.size(); ++i) {
        if (r.product[i] > r.sup_product) {
            r.sup_product = r.product[i];
            r.argsup = xi2_grid[i];
        }
        if (xi2_grid[i] >= top / 10.0) {
            lo = std::min(lo, r.product[i]);
            hi = std::max(hi, r.product[i]);
        }
    }
    r.top_decade_variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
    r.bounded = std::isfinite(r.sup_product);
    return r;
}

/// Radial, polar and azimuthal resolution of the outer integral.
struct OuterQuadrature {
    double rel_tol = 1e-7;
    std::size_t phi_points = 96;
};

/// int d^3q q^-2 |q + e2|^-2 / (p1^-1/2 + |q p2/p1 - e1|^1/2) with e_i = p_i/|p_i|.
/// Polar axis along e2; radial splits at q = 1 and q = p1/p2 where the
/// integrand has its log and square-root features.
inline double appendix_a_outer(const Vec3& p1, const Vec3& p2, const OuterQuadrature& oq = {}) {
    using std::numbers::pi;
    const double n1 = p1.norm();
    const double n2 = p2.norm();
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        throw DomainError("appendix_a_outer: momenta must be nonzero");
    }
    const Vec3 e1 = p1 / n1;
    const Vec3 e2 = p2 / n2;
    const Vec3 t1 = e2.unitOrthogonal();
    const Vec3 t2 = e2.cross(t1);
    const double ratio = n2 / n1;
    const double offset = 1.0 / std::sqrt(n1);
    QuadratureSpec qs;
    qs.rel_tol = oq.rel_tol;
    qs.max_refinements = 10;
    qs.fail_tol = 1e-3;
    const std::size_t nphi = oq.phi_points;
    const double dphi = 2.0 * pi / static_cast<double>(nphi);

    // phi-average by the periodic trapezoid rule at polar cosine u.
    auto phi_sum = [&](double q, double u) {
        const double sn = std::sqrt(std::max(0.0, 1.0 - u * u));
        double acc = 0.0;
        for (std::size_t k = 0; k < nphi; ++k) {
            const double phi = (static_cast<double>(k) + 0.5) * dphi;
            const Vec3 dir = sn * std::cos(phi) * t1 + sn * std::sin(phi) * t2 + u * e2;
            const double dist = (q * ratio * dir - e1).norm();
            acc += 1.0 / (offset + std::sqrt(dist));
        }
        return acc * dphi;
    };
    // Near q = 1 the factor 1/|q + e2|^2 = 1/(q^2 + 1 + 2 q u) peaks at u = -1;
    // there the polar integral is taken in s = ln(q^2 + 1 + 2 q u), which
    // flattens the peak. Elsewhere u itself is used.
    auto angular = [&](double q) {
        if (std::abs(q - 1.0) < 0.5) {
            if (q == 1.0) {
                return 0.0;
            }
            // Offset from the lower end so the rule's abscissas never round onto it.
            const double lo = 2.0 * std::log(std::abs(1.0 - q));
            auto in_s = [&](double t) {
                const double u = std::clamp((std::exp(lo + t) - q * q - 1.0) / (2.0 * q), -1.0, 1.0);
                return phi_sum(q, u) / (2.0 * q);
            };
            return integrate(in_s, 0.0, 2.0 * std::log1p(q) - lo, qs).value;
        }
        auto in_u = [&](double u) { return phi_sum(q, u) / (q * q + 1.0 + 2.0 * q * u); };
        return integrate(in_u, -1.0, 1.0, qs).value;
    };
    std::vector<double> cuts{0.0, 1.0, 1.0 / ratio};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(angular, cuts[i], cuts[i + 1], qs).value;
    }
    total += integrate(angular, cuts.back(), std::numeric_limits<double>::infinity(), qs).value;
    return total;
}

struct OuterScanReport {
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> values;  // row-major [i1 * p2.size() + i2]
    double max_value = 0.0;
    /// Largest ratio value(p1_last)/value(p1_first) over the p2 columns.
    double growth_ratio = 0.0;
    /// Largest ratio of consecutive increments along p1, over all columns.
    double max_increment_ratio = 0.0;
    /// Largest |last increment| / last value over the columns.
    double last_relative_increment = 0.0;
    /// Increments contract along p1 and the last one is below 5% of the value.
    bool no_growth = false;
};

/// Scans the outer integral with p1 along z and p2 at 60 degrees from it.
/// p1_grid should be increasing with at least three points.
inline OuterScanReport appendix_a_outer_scan(const std::vector<double>& p1_grid, const std::vector<double>& p2_grid,
                                             const OuterQuadrature& oq = {}) {
    if (p1_grid.size() < 3 || p2_grid.empty()) {
        throw ConfigError("appendix_a_outer_scan: need at least three p1 values and one p2 value");
    }
    if (!std::is_sorted(p1_grid.begin(), p1_grid.end())) {
        throw ConfigError("appendix_a_outer_scan: p1 grid must be increasing");
    }
    OuterScanReport r;
    r.p1 = p1_grid;
    r.p2 = p2_grid;
    const std::size_t n1 = p1_grid.size();
    const std::size_t n2 = p2_grid.size();
    r.values.assign(n1 * n2, 0.0);
    const double tilt = std::numbers::pi / 3.0;
    const Vec3 dir2(std::sin(tilt), 0.0, std::cos(tilt));
    parallel_for(r.values.size(), [&](std::size_t idx) {
        const double a = p1_grid[idx / n2];
        const double b = p2_grid[idx % n2];
        r.values[idx] = appendix_a_outer(Vec3(0.0, 0.0, a), b * dir2, oq);
    });
    r.max_value = *std::max_element(r.values.begin(), r.values.end());
    for (std::size_t j = 0; j < n2; ++j) {
        auto v = [&](std::size_t i) { return r.values[i * n2 + j]; };
        r.growth_ratio = std::max(r.growth_ratio, v(n1 - 1) / v(0));
        for (std::size_t i = 2; i < n1; ++i) {
            const double prev = v(i - 1) - v(i - 2);
            const double cur = v(i) - v(i - 1);
            // Renewed growth after a flat or falling step counts as unbounded.
            if (cur > 0.0) {
                const double ratio = prev > 0.0 ? cur / prev : std::numeric_limits<double>::infinity();
                r.max_increment_ratio = std::max(r.max_increment_ratio, ratio);
            }
        }
        r.last_relative_increment =
            std::max(r.last_relative_increment, std::abs(v(n1 - 1) - v(n1 - 2)) / std::abs(v(n1 - 1)));
    }
    r.no_growth = std::isfinite(r.max_value) && r.max_increment_ratio < 1.0 && r.last_relative_increment < 0.05;
    return r;
}

// ------------------------------------------------ massless BR radial form

/// Spherically symmetric trial u(p) = p psi(p) (radial momentum amplitude).
struct RadialTrial {
    std::string name;
    std::function<double(double)> u;
};

/// The test family: exponential, Gaussian, algebraic and a slowly decaying
/// power-law member close to the critical Mellin exponent.
inline std::vector<RadialTrial> trial_family() {
    return {
        {"p*exp(-p)", [](double p) { return p * std::exp(-p); }},
        {"p^2*exp(-p)", [](double p) { return p * p * std::exp(-p); }},
        {"p*exp(-p^2/2)", [](double p) { return p * std::exp(-0.5 * p * p); }},
        {"p/(1+p^2)^2",
         [](double p) {
             const double d = 1.0 + p * p;
             return p / (d * d);
         }},
        {"p^-0.45*(1+p)^-0.6", [](double p) { return std::pow(p, -0.45) * std::pow(1.0 + p, -0.6); }},
    };
}

inline RadialTrial named_trial(const std::string& name) {
    for (auto& t : trial_family()) {
        if (t.name == name) {
            return t;
        }
    }
    throw ConfigError("unknown trial '" + name + "'");
}

/// Trial rescaled in momentum: u_lambda(p) = lambda^-1/2 u(p/lambda), same norm.
inline RadialTrial scaled_trial(const RadialTrial& t, double lambda) {
    return {t.name + "@" + std::to_string(lambda),
            [u = t.u, lambda](double p) { return u(p / lambda) / std::sqrt(lambda); }};
}

enum class FormKind { Kinetic, B1Massless };

namespace detail {

inline double safe_u(const std::function<double(double)>& u, double p) {
    if (!std::isfinite(p) || p <= 0.0) {
        return 0.0;
    }
    const double v = u(p);
    return std::isfinite(v) ? v : 0.0;
}

inline double norm_squared(const RadialTrial& t, const QuadratureSpec& q) {
    double v = 0.0;
    try {
        auto h = [&](double p) {
            const double u = safe_u(t.u, p);
            return u * u;
        };
        v = integrate(h, 0.0, 1.0, q).value + integrate(h, 1.0, std::numeric_limits<double>::infinity(), q).value;
    } catch (const DivergenceError&) {
        throw DomainError("trial '" + t.name + "' is not normalizable");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("trial '" + t.name + "' is not normalizable");
    }
    return v;
}

}  // namespace detail

/// int_0^oo p u(p)^2 dp.
inline double kinetic_integral(const RadialTrial& t, const QuadratureSpec& q = {}) {
    auto h = [&](double p) {
        const double u = detail::safe_u(t.u, p);
        return p * u * u;
    };
    return integrate(h, 0.0, 1.0, q).value + integrate(h, 1.0, std::numeric_limits<double>::infinity(), q).value;
}

/// B[u] = int int u(p) u(p') K(p'/p) dp dp' with K = Q0 + Q1. The inner
/// integral is split at p' = p: the near part is taken in y = p'/p, the far
/// part directly in p' with cuts at 2p and 1 so that tiny p stays resolved.
inline double br_double_integral(const RadialTrial& t, const QuadratureSpec& q = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto inner = [&](double p) {
        auto near = [&](double y) {
            return y <= 0.0 || y >= 1.0 ? 0.0 : br_ratio_kernel(y) * detail::safe_u(t.u, p * y);
        };
        // p' in [p, 2p] as p' = p (1 + x); the rounded x -> 0 points carry a
        // log singularity of negligible weight.
        auto shell = [&](double x) {
            return x <= 0.0 || 1.0 + x == 1.0 ? 0.0 : br_ratio_kernel(1.0 + x) * detail::safe_u(t.u, p * (1.0 + x));
        };
        auto far = [&](double s) { return br_ratio_kernel(s / p) * detail::safe_u(t.u, s); };
        const double cut = std::max(2.0 * p, 1.0);
        // The tail is taken in units of the cut so exp-sinh sees an O(1) scale.
        auto tail = [&](double v) { return cut * far(cut * v); };
        double v = p * (integrate(near, 0.0, 1.0, q).value + integrate(shell, 0.0, 1.0, q).value) +
                   integrate(tail, 1.0, inf, q).value;
        if (cut > 2.0 * p) {
            v += integrate(far, 2.0 * p, cut, q).value;
        }
        return v;
    };
    auto outer = [&](double p) {
        const double u = detail::safe_u(t.u, p);
        return u == 0.0 ? 0.0 : u * inner(p);
    };
    return integrate(outer, 0.0, 1.0, q).value +
           integrate(outer, 1.0, std::numeric_limits<double>::infinity(), q).value;
}

/// Normalized quadratic form (u, O u)/(u, u). B1Massless is the l = 0 massless
/// Brown-Ravenhall potential -(gamma/2pi) B[u], sandwiched between the
/// massless Foldy-Wouthuysen factors A = g p = 1/sqrt(2).
inline double radial_form_value(const RadialTrial& t, FormKind kind, const Coupling& c, const QuadratureSpec& q = {}) {
    const double n = detail::norm_squared(t, q);
    if (kind == FormKind::Kinetic) {
        return kinetic_integral(t, q) / n;
    }
    return -c.gamma() / (2.0 * std::numbers::pi) * br_double_integral(t, q) / n;
}

struct RayleighResult {
    std::string trial;
    double gamma = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double quotient = 0.0;     // (kinetic + potential) / kinetic
    double lower_bound = 0.0;  // 1 - gamma/gamma_BR
};

inline RayleighResult rayleigh_quotient(const RadialTrial& t, const Coupling& c, const QuadratureSpec& q = {}) {
    RayleighResult r;
    r.trial = t.name;
    r.gamma = c.gamma();
    r.kinetic = radial_form_value(t, FormKind::Kinetic, c, q);
    r.potential = radial_form_value(t, FormKind::B1Massless, c, q);
    r.quotient = (r.kinetic + r.potential) / r.kinetic;
    r.lower_bound = 1.0 - c.gamma() / gamma_br();
    return r;
}

/// Mellin-space supremum of the reduced kernel, int_0^oo K(x) x^-1 dx = 2 + pi^2/2.
inline double br_mellin_constant(const QuadratureSpec& q = {}) {
    auto h = [](double x) { return x <= 0.0 || x >= 1.0 ? 0.0 : br_ratio_kernel(x) / x; };
    return 2.0 * integrate(h, 0.0, 1.0, q).value;
}

}  // namespace jhkit::forms
