#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "jhkit/constants.hpp"

using namespace jhkit;

// Reference values below were computed with mpmath at 30 digits from the
// defining expressions and frozen here.

TEST(Coupling, GammaAndZStayConsistent) {
    const auto a = Coupling::from_gamma(0.37);
    EXPECT_DOUBLE_EQ(a.z(), 0.37 * 137.04);
    const auto b = Coupling::from_z(50.0);
    EXPECT_DOUBLE_EQ(b.gamma(), 50.0 / 137.04);
    const auto c = z_gamma_convert(CouplingInput::Z, 90.0, 1.0 / 137.0);
    EXPECT_DOUBLE_EQ(c.gamma(), 90.0 / 137.0);
    EXPECT_DOUBLE_EQ(z_gamma_convert(CouplingInput::Gamma, 0.5).gamma(), 0.5);
}

TEST(Coupling, RejectsInvalidInput) {
    EXPECT_THROW(Coupling::from_gamma(-0.1), DomainError);
    EXPECT_THROW(Coupling::from_z(std::nan("")), DomainError);
    EXPECT_THROW(Coupling::from_gamma(0.3, 0.0), DomainError);
    EXPECT_THROW(Coupling::from_z(1.0, -1.0), DomainError);
}

TEST(Constants, CriticalBrownRavenhallCoupling) {
    EXPECT_NEAR(gamma_br(), 0.90603670090058041, 1e-15);
    EXPECT_GT(gamma_br(), 0.9060);
    EXPECT_LT(gamma_br(), 0.9061);
}

TEST(Constants, QuadraticCorrection) { EXPECT_NEAR(d_const(), 0.10908572935521134, 1e-15); }

TEST(Constants, KatoBoundValues) {
    EXPECT_DOUBLE_EQ(kato_c0(0.0), 0.0);
    EXPECT_NEAR(kato_c0(0.5), 0.5 / 0.90603670090058041 - 0.10908572935521134 * 0.25, 1e-14);
}

TEST(Constants, UnitCrossingsMatchOracle) {
    const auto list = constant_thresholds();
    ASSERT_EQ(list.size(), 4u);
    EXPECT_EQ(list[0].name, "c_tilde1");
    EXPECT_NEAR(list[0].gamma, 0.66009411644268737, 1e-10);
    EXPECT_EQ(list[1].name, "br_norm");
    EXPECT_NEAR(list[1].gamma, 0.74226021474182851, 1e-10);
    EXPECT_EQ(list[2].name, "c_tilde0");
    EXPECT_NEAR(list[2].gamma, 0.98160865034328436, 1e-10);
    EXPECT_EQ(list[3].name, "kato_c0");
    EXPECT_NEAR(list[3].gamma, 1.0060773420445847, 1e-10);
    for (const auto& t : list) {
        EXPECT_NEAR(t.z, t.gamma * 137.04, 1e-9);
    }
}

TEST(Constants, UnitCrossingsBracketPublishedRounding) {
    const auto list = constant_thresholds();
    EXPECT_GT(list[0].gamma, 0.66);
    EXPECT_LT(list[0].gamma, 0.67);
    EXPECT_NEAR(list[1].gamma, 0.7423, 1e-4);
    EXPECT_GT(list[2].gamma, 0.98);
    EXPECT_LT(list[2].gamma, 0.99);
    EXPECT_NEAR(list[3].gamma, 1.006, 1e-3);
}

TEST(Constants, BoundConstantsAtZeroDilation) {
    const auto c = Coupling::from_gamma(0.5);
    const auto b = bound_constants(c, 0.0);
    EXPECT_DOUBLE_EQ(b.c_prime1, std::sqrt(c_w(0.5) / 2.0));
    EXPECT_DOUBLE_EQ(b.c_tilde1, c_tilde1(c));
    EXPECT_NEAR(b.c_2, b.c_tilde1 - std::sqrt(c_w(0.5)) + std::sqrt(c_w(0.5) / 2.0), 1e-14);
    EXPECT_THROW(appendix_b_constants(c, 0.5), DomainError);
    EXPECT_THROW(appendix_b_constants(c, -0.01), DomainError);
}

TEST(SolveThreshold, FindsRootAndRejectsBadBracket) {
    const double r = solve_threshold([](double x) { return x * x; }, 2.0, 0.0, 2.0, 1e-13);
    EXPECT_NEAR(r, std::numbers::sqrt2, 1e-12);
    EXPECT_THROW(solve_threshold([](double x) { return x; }, 5.0, 0.0, 1.0, 1e-12), BracketError);
}

// Every constant-based bound is increasing in gamma, and the quotient
// kato_c0 stays below the linear term gamma/gamma_BR.
TEST(ConstantsProperty, MonotoneInCoupling) {
    proptest::Gen gen;
    for (std::size_t i = 0; i < proptest::kCases; ++i) {
        const double g1 = gen.uniform(0.0, 1.2);
        const double g2 = g1 + gen.uniform(1e-6, 0.1);
        const auto c1 = Coupling::from_gamma(g1);
        const auto c2 = Coupling::from_gamma(g2);
        EXPECT_LT(c_tilde1(c1), c_tilde1(c2)) << "gamma " << g1;
        EXPECT_LT(c_tilde0(c1), c_tilde0(c2)) << "gamma " << g1;
        EXPECT_LT(br_norm_coefficient(c1), br_norm_coefficient(c2)) << "gamma " << g1;
        EXPECT_LT(kato_c0(g1), kato_c0(g2)) << "gamma " << g1;
        EXPECT_LE(kato_c0(g1), g1 / gamma_br()) << "gamma " << g1;
    }
}

TEST(ConstantsProperty, DilationScalesBoundsUp) {
    proptest::Gen gen(7);
    for (std::size_t i = 0; i < proptest::kCases; ++i) {
        const auto c = Coupling::from_gamma(gen.uniform(0.0, 1.0));
        const double xi0 = gen.uniform(0.0, 0.49);
        const auto a = appendix_b_constants(c, 0.0);
        const auto b = appendix_b_constants(c, xi0);
        EXPECT_NEAR(b.c_prime1, a.c_prime1 / (1.0 - xi0), 1e-14);
        EXPECT_NEAR(b.c_2, a.c_2 / (1.0 - xi0), 1e-14);
        EXPECT_LE(b.c_prime1, b.c_2);
    }
}
