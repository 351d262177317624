#pragma once

// Monte Carlo oracles for the angular reductions and the reduced massless
// Brown-Ravenhall form. They sample the original three- and six-dimensional
// integrals and share no code with the quadrature path beyond the algebra.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace jhkit::oracle {

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

namespace detail {

class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    McEstimate result(double scale = 1.0) const {
        const double var = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
        return {scale * mean_, scale * std::sqrt(var / static_cast<double>(n_)), n_};
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline Eigen::Vector3d random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {n(rng), n(rng), n(rng)};
    } while (v.squaredNorm() == 0.0);
    return v.normalized();
}

}  // namespace detail

struct AngularMc {
    McEstimate inverse_square;      // int dOmega' |p - p'|^-2
    McEstimate inverse_square_cos;  // int dOmega' (p^.p^') |p - p'|^-2
};

/// Uniform directions of p' with |p'| = pp; p along z with |p| = p.
inline AngularMc angular_mc(double p, double pp, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    detail::Accumulator a, b;
    const Eigen::Vector3d pv(0.0, 0.0, p);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto dir = detail::random_direction(rng);
        const double w = 1.0 / (pv - pp * dir).squaredNorm();
        a.add(w);
        b.add(w * dir.z());
    }
    const double sphere = 4.0 * std::numbers::pi;
    return {a.result(sphere), b.result(sphere)};
}

/// Six-dimensional form int int phi(p) phi(p') (1 + p^.p^') |p - p'|^-2 d^3p d^3p'
/// for the Gaussian phi = exp(-p^2/2). p is drawn from the normalized Gaussian,
/// d = p' - p has a uniform direction and an Exp(1) length, so the density of
/// d cancels the |d|^-2 singularity exactly.
inline McEstimate gaussian_br_form_mc(std::size_t samples, std::uint64_t seed) {
    using std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    detail::Accumulator acc;
    const double phi_over_rho = std::pow(2.0 * pi, 1.5);
    for (std::size_t i = 0; i < samples; ++i) {
        const Eigen::Vector3d p(normal(rng), normal(rng), normal(rng));
        const double r = expo(rng);
        const Eigen::Vector3d pp = p + r * detail::random_direction(rng);
        const double cosine = p.dot(pp) / (p.norm() * pp.norm());
        // phi(p)/rho(p) * phi(p') (1 + cos) / (|d|^2 h(d)), h(d) = e^-r / (4 pi r^2).
        acc.add(phi_over_rho * std::exp(-0.5 * pp.squaredNorm()) * (1.0 + cosine) * 4.0 * pi * std::exp(r));
    }
    return acc.result();
}

}  // namespace jhkit::oracle
