#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "jhkit/forms.hpp"
#include "jhkit/forms_oracle.hpp"

using namespace jhkit;
using namespace jhkit::forms;

TEST(DiracAlgebra, AnticommutationExact) { EXPECT_EQ(anticommutation_residual(dirac()), 0.0); }

TEST(DiracAlgebra, ZeroMomentumTransformIsIdentity) {
    const auto t = fw_transform(Vec3::Zero(), 1.0);
    EXPECT_DOUBLE_EQ(t.a, 1.0);
    EXPECT_LT((t.u0 - Mat4::Identity()).norm(), 1e-15);
    EXPECT_THROW(fw_transform(Vec3::Zero(), 0.0), DomainError);
    EXPECT_THROW(d_tilde(Vec3::Zero(), 0.0), DomainError);
}

TEST(DiracAlgebra, LargeMomentumAmplitude) {
    const auto t = fw_transform(Vec3(0.0, 0.0, 1e8), 1.0);
    EXPECT_NEAR(t.a, 1.0 / std::numbers::sqrt2, 1e-7);
    EXPECT_NEAR(t.g * 1e8, 1.0 / std::numbers::sqrt2, 1e-7);
}

TEST(DiracAlgebra, IdentitiesOnRandomMomenta) {
    const auto r = algebra_residuals(random_momenta(42, 100, 1.0), 1.0);
    EXPECT_EQ(r.samples, 100u);
    EXPECT_LT(r.max(), 1e-12);
}

TEST(Kernels, PrefactorsAndShell) {
    const auto c = Coupling::from_gamma(0.5);
    const Vec3 p(1.0, 0.0, 0.0);
    const Vec3 pp(0.0, 2.0, 0.0);
    const double inv = 1.0 / 5.0;
    EXPECT_NEAR(kernel_b1m(p, pp, c).scalar, -0.5 / (2.0 * std::numbers::pi * std::numbers::pi) * inv, 1e-16);
    const auto v = kernel_v12(p, pp, Vec3(0.0, 0.0, 3.0), c);
    EXPECT_NEAR(v.scalar, c.e2() / (2.0 * std::numbers::pi * std::numbers::pi) * inv, 1e-16);
    EXPECT_LT((v.p2_prime - Vec3(1.0, -2.0, 3.0)).norm(), 1e-15);
    const auto f = kernel_f0(p, pp, c, 1.0);
    EXPECT_LT((f.matrix - f.scalar * f0_matrix_factor(p, pp, 1.0)).norm(), 1e-16);
    EXPECT_THROW(kernel_b1m(p, p, c), SingularityError);
    EXPECT_EQ(kernel_eval(KernelKind::V12, {p, pp, Vec3(0.0, 0.0, 3.0)}, c, 1.0).kind, KernelKind::V12);
}

// Reference: mpmath, direct angular integration at p = 1, p' = 1.7.
TEST(Angular, ReductionsMatchReference) {
    EXPECT_NEAR(angular_inverse_square(1.0, 1.7), 4.9893174786489602, 1e-13);
    EXPECT_NEAR(angular_inverse_square_cos(1.0, 1.7), 2.0123748169368477, 1e-13);
    EXPECT_THROW(angular_inverse_square_cos(1.0, 1.0), SingularityError);
    EXPECT_THROW(angular_inverse_square(0.0, 1.0), DomainError);
}

TEST(Angular, ReductionsMatchMonteCarlo) {
    const auto mc = oracle::angular_mc(1.0, 0.6, 400000, 7);
    EXPECT_NEAR(angular_inverse_square(1.0, 0.6), mc.inverse_square.mean, 4.0 * mc.inverse_square.stderr_);
    EXPECT_NEAR(angular_inverse_square_cos(1.0, 0.6), mc.inverse_square_cos.mean,
                4.0 * mc.inverse_square_cos.stderr_);
}

TEST(Legendre, SeriesBranchJoinsClosedForm) {
    // r = 2y/(1+y^2) crosses 1e-2 near y = 0.005.
    const double y = 0.0050001250;
    const double lo = legendre_q1_ratio(std::nextafter(y, 0.0));
    const double hi = legendre_q1_ratio(std::nextafter(y, 1.0));
    EXPECT_NEAR(lo, hi, 1e-12 * std::abs(hi));
    EXPECT_NEAR(legendre_q1_ratio(1e-4), (2e-4) * (2e-4) / 3.0, 1e-14);
}

TEST(RadialForm, MellinConstant) {
    EXPECT_NEAR(br_mellin_constant(), 2.0 + std::numbers::pi * std::numbers::pi / 2.0, 1e-9);
    EXPECT_NEAR(2.0 * std::numbers::pi / br_mellin_constant(), gamma_br(), 1e-9);
}

// Reference: mpmath, 25 digits, B in the variables (p, y = p'/p).
TEST(RadialForm, DoubleIntegralMatchesReference) {
    EXPECT_NEAR(br_double_integral(named_trial("p*exp(-p)")), 2.0, 1e-8);
    EXPECT_NEAR(br_double_integral(named_trial("p^2*exp(-p)")), 9.33333333333333, 1e-7);
    EXPECT_NEAR(br_double_integral(named_trial("p*exp(-p^2/2)")), 2.40272751514933, 1e-8);
    EXPECT_NEAR(br_double_integral(named_trial("p/(1+p^2)^2")), 0.459325032666365, 1e-8);
}

TEST(RadialForm, GaussianReductionMatchesSixDimensionalMonteCarlo) {
    const double reduced = 8.0 * std::numbers::pi * std::numbers::pi *
                           br_double_integral(named_trial("p*exp(-p^2/2)"));
    const auto mc = oracle::gaussian_br_form_mc(400000, 3);
    EXPECT_NEAR(reduced, mc.mean, 4.0 * mc.stderr_);
}

TEST(RadialForm, KineticAndNormalization) {
    EXPECT_NEAR(kinetic_integral(named_trial("p*exp(-p)")), 6.0 / 16.0, 1e-12);
    const auto c = Coupling::from_gamma(0.3);
    EXPECT_NEAR(radial_form_value(named_trial("p*exp(-p)"), FormKind::Kinetic, c), 1.5, 1e-12);
    const RadialTrial bad{"flat", [](double) { return 1.0; }};
    EXPECT_THROW(radial_form_value(bad, FormKind::Kinetic, c), DomainError);
    EXPECT_THROW(named_trial("nope"), ConfigError);
}

TEST(RadialForm, RayleighQuotientsAboveBound) {
    for (const auto& t : trial_family()) {
        for (double g : {0.3, 0.66, 0.9}) {
            const auto r = rayleigh_quotient(t, Coupling::from_gamma(g));
            EXPECT_GE(r.quotient, r.lower_bound) << t.name << " gamma " << g;
            EXPECT_LT(r.quotient, 1.0);
        }
    }
}

TEST(LiebYau, KnownKernel) {
    const auto pts = lieb_yau_bound([](double, double pp) { return -std::exp(-pp); }, [](double) { return 1.0; },
                                    {0.5, 2.0});
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(pts[0].value, 1.0, 1e-10);
    EXPECT_NEAR(pts[1].value, 1.0, 1e-10);
    EXPECT_THROW(lieb_yau_bound([](double, double) { return 1.0; }, [](double) { return 1.0; }, {0.0}),
                 DomainError);
}

TEST(LiebYau, WeightedKernelBelowClosedForm) {
    const auto c = Coupling::from_gamma(0.37);
    for (double c0 : {0.0, 1.0, 2.0}) {
        for (const auto& r : ib_dominance(c, c0, 1.0, {0.01, 0.3, 1.0, 7.0, 100.0})) {
            EXPECT_GT(r.numeric, 0.0);
            EXPECT_GE(r.slack, 0.0) << "c0 " << c0 << " q1 " << r.q1;
        }
    }
    EXPECT_THROW(ib_dominance(c, 2.5, 1.0, {1.0}), DomainError);
    EXPECT_THROW(ib_closed_form(c, 0.0), DomainError);
}

// Reference: mpmath, 25 digits.
TEST(TwoParticleBound, InnerIntegralReference) {
    EXPECT_NEAR(appendix_a_inner(0.01), 37.973064074079793, 1e-8);
    EXPECT_NEAR(appendix_a_inner(1.0), 20.938788903370253, 1e-8);
    EXPECT_NEAR(appendix_a_inner(100.0), 2.5728122725281397, 1e-9);
    EXPECT_THROW(appendix_a_inner(0.0), DomainError);
}

TEST(TwoParticleBound, InnerProductSaturates) {
    const auto r = appendix_a_inner_bound({1e3, 1e4, 1e5, 1e6});
    EXPECT_TRUE(r.bounded);
    EXPECT_LT(r.top_decade_variation, 0.05);
    EXPECT_THROW(appendix_a_inner_bound({}), ConfigError);
}

TEST(TwoParticleBound, OuterScanSaturates) {
    const auto r = appendix_a_outer_scan({1.0, 10.0, 100.0, 1e3, 1e4}, {1.0});
    EXPECT_TRUE(r.no_growth);
    EXPECT_LT(r.max_value, std::pow(std::numbers::pi, 3));
    for (std::size_t i = 1; i < r.values.size(); ++i) {
        EXPECT_GT(r.values[i], r.values[i - 1]);
    }
    EXPECT_THROW(appendix_a_outer_scan({1.0, 10.0}, {1.0}), ConfigError);
    EXPECT_THROW(appendix_a_outer_scan({10.0, 1.0, 100.0}, {1.0}), ConfigError);
}

// U0 is unitary and block-diagonalizes the free operator at any momentum and
// mass; D~ is a hermitian involution.
TEST(FormsProperty, AlgebraAcrossScales) {
    proptest::Gen gen;
    for (std::size_t i = 0; i < 50; ++i) {
        const double m = gen.log_uniform(1e-2, 1e2);
        const auto r = algebra_residuals(random_momenta(gen.seed(), 20, m, 1e-6, 1e6), m);
        EXPECT_LT(r.max(), 1e-12) << "mass " << m;
        const Vec3 p = random_momenta(gen.seed(), 1, m)[0];
        const Mat4 dt = d_tilde(p, m);
        EXPECT_LT((dt - dt.adjoint()).norm(), 1e-15);
    }
}

// The quotient of the massless form is scale invariant: u(p) -> u(p/lambda)
// rescales kinetic and potential parts identically.
TEST(FormsProperty, RayleighQuotientScaleInvariant) {
    proptest::Gen gen(31);
    const auto c = Coupling::from_gamma(0.5);
    const auto fam = trial_family();
    for (std::size_t i = 0; i < 8; ++i) {
        const auto& t = fam[i % 4];
        const double lambda = gen.log_uniform(0.05, 20.0);
        const double q = rayleigh_quotient(t, c).quotient;
        const double qs = rayleigh_quotient(scaled_trial(t, lambda), c).quotient;
        EXPECT_NEAR(q, qs, 1e-7) << t.name << " lambda " << lambda;
    }
}

TEST(FormsProperty, KernelSymmetryUnderRatioInversion) {
    proptest::Gen gen(37);
    for (std::size_t i = 0; i < proptest::kCases; ++i) {
        const double y = gen.away_from_one(1e-3, 1.0, 1e-6);
        EXPECT_NEAR(br_ratio_kernel(y), br_ratio_kernel(1.0 / y), 1e-12 * br_ratio_kernel(y)) << "y " << y;
        EXPECT_GT(br_ratio_kernel(y), 0.0);
    }
}
