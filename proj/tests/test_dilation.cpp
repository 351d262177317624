#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "generators.hpp"
#include "jhkit/dilation.hpp"

using namespace jhkit;
using namespace jhkit::dilation;

TEST(ParseComplex, Literals) {
    EXPECT_EQ(parse_complex("0.1i"), cplx(0.0, 0.1));
    EXPECT_EQ(parse_complex("-0.05+0.1i"), cplx(-0.05, 0.1));
    EXPECT_EQ(parse_complex("0.2"), cplx(0.2, 0.0));
    EXPECT_EQ(parse_complex("1e-2-2e-1j"), cplx(0.01, -0.2));
    EXPECT_EQ(parse_complex("-i"), cplx(0.0, -1.0));
    EXPECT_EQ(parse_complex(" 0.1 + 0.2i "), cplx(0.1, 0.2));
    EXPECT_THROW(parse_complex(""), ConfigError);
    EXPECT_THROW(parse_complex("abc"), ConfigError);
    EXPECT_THROW(parse_complex("0.1x+i"), ConfigError);
}

TEST(DilationParam, Validation) {
    EXPECT_NO_THROW(DilationParam(cplx(0.0, 0.1), 0.1));
    EXPECT_THROW(DilationParam(cplx(0.0, 0.2), 0.1), DomainError);
    EXPECT_THROW(DilationParam(cplx(0.0, 0.1), 0.5), DomainError);
    EXPECT_THROW(DilationParam(cplx(0.0, 0.1), 0.2, 0.0), DomainError);
}

// mpmath reference for theta = exp(0.1 i), m = 1.
TEST(Curve, MatchesReferenceSamples) {
    const DilationParam d(cplx(0.0, 0.1), 0.1);
    const auto c = curve_sample(d, {0.0, 1.0, 1e3});
    EXPECT_NEAR(c.samples[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(c.samples[0].imag(), 0.0, 1e-15);
    EXPECT_NEAR(c.samples[1].real(), 1.4089135722955637, 1e-14);
    EXPECT_NEAR(c.samples[1].imag(), -0.070504442111153185, 1e-14);
    EXPECT_NEAR(c.samples[2].real(), 995.00466277998899, 1e-11);
    EXPECT_NEAR(c.samples[2].imag(), -99.833366730156769, 1e-11);
    EXPECT_DOUBLE_EQ(c.asymptote_angle, -0.1);
    const auto far = curve_sample(d, {0.0, 1e6});
    EXPECT_NEAR(std::arg(far.samples[1]), -0.099999999999900665, 1e-12);
}

TEST(Curve, GridValidation) {
    const DilationParam d(cplx(0.0, 0.1), 0.1);
    EXPECT_THROW(curve_sample(d, {}), ConfigError);
    EXPECT_THROW(curve_sample(d, {0.1, 1.0}), ConfigError);
    EXPECT_THROW(curve_sample(d, {0.0, 2.0, 1.0}), ConfigError);
}

TEST(ETheta, MatchesReference) {
    const DilationParam d(cplx(0.0, 0.1), 0.1);
    const auto e = e_theta(2.0, d);
    EXPECT_NEAR(e.real(), 2.2320499914697722, 1e-14);
    EXPECT_NEAR(e.imag(), 0.044503781625482405, 1e-14);
}

TEST(SumSet, ShiftedCurvesStartAtMassPlusBoundState) {
    const DilationParam d(cplx(0.0, 0.1), 0.1);
    const auto grid = p_grid_with_zero(1e-3, 1e3, 40);
    const auto s = cluster_sum_set(d, {-0.5, -0.1}, grid, 1e-14);
    ASSERT_EQ(s.shifted.size(), 2u);
    EXPECT_NEAR(std::abs(s.shifted[0].start_point - cplx(0.5, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.shifted[1].start_point - cplx(0.9, 0.0)), 0.0, 1e-15);
    EXPECT_EQ(s.sum_points.size(), grid.size() * grid.size());
    ASSERT_EQ(s.real_points.size(), 1u);
    EXPECT_NEAR(std::abs(s.real_points[0] - cplx(2.0, 0.0)), 0.0, 1e-15);
}

TEST(Sector, AngleReference) {
    EXPECT_NEAR(sector_angle(0.1, 0.3), 1.0390129122196014, 1e-14);
    EXPECT_NEAR(sector_angle(-0.1, 0.3), 1.0390129122196014, 1e-14);
    EXPECT_DOUBLE_EQ(sector_angle(0.0, 0.0), 0.0);
    EXPECT_THROW(sector_angle(0.1, 1.0), DomainError);
    EXPECT_THROW(sector_angle(1.0, 0.1), DomainError);
}

TEST(Sector, Xi0SelectionSmallCoupling) {
    const auto ch = select_xi0(0.3);
    EXPECT_DOUBLE_EQ(ch.xi0, 0.1);
    EXPECT_EQ(ch.halvings, 0u);
    EXPECT_FALSE(ch.delta_step);
    EXPECT_TRUE(ch.feasible());
    EXPECT_DOUBLE_EQ(ch.c1, kato_c0(0.3) / 0.9);
}

TEST(Sector, Xi0SelectionInfeasibleAboveKatoThreshold) {
    EXPECT_THROW(select_xi0(1.2), InfeasibleError);
    EXPECT_THROW(select_xi0(-0.1), DomainError);
    EXPECT_THROW(select_xi0(0.3, 0.6), DomainError);
}

TEST(Inequalities, GridScanHasNoViolations) {
    const DilationParam d(cplx(0.0, 0.1), 0.1);
    const auto rep = validate_dilation_inequalities(d, p_grid_with_zero(1e-3, 1e6, 200));
    EXPECT_EQ(rep.violations(), 0u);
    EXPECT_LE(rep.max_ratio(), 1.0 + 1e-12);
    EXPECT_EQ(rep.checks.size(), 9u);
}

TEST(Inequalities, MergeAccumulates) {
    auto a = random_dilation_scan(1, 50, 0.45, 1e-3, 1e6);
    const auto b = random_dilation_scan(2, 50, 0.45, 1e-3, 1e6);
    const std::size_t before = a.checks[0].evaluations;
    a.merge(b);
    EXPECT_EQ(a.checks[0].evaluations, before + b.checks[0].evaluations);
}

TEST(Inequalities, ScanIsDeterministic) {
    const auto a = random_dilation_scan(42, 300, 0.45, 1e-3, 1e6);
    const auto b = random_dilation_scan(42, 300, 0.45, 1e-3, 1e6);
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].max_ratio, b.checks[i].max_ratio);
    }
}

// The dilated curve stays on the side of the real axis opposite to Im xi and
// its argument moves monotonically from 0 toward -Im xi.
TEST(DilationProperty, CurveGeometry) {
    proptest::Gen gen;
    for (std::size_t i = 0; i < 100; ++i) {
        const cplx xi = gen.disc(0.45);
        const DilationParam d(xi, std::max(std::abs(xi), 1e-12), gen.log_uniform(0.1, 10.0));
        const auto c = curve_sample(d, p_grid_with_zero(1e-4 * d.mass(), 1e6 * d.mass(), 60));
        EXPECT_LT(std::abs(c.start_point - cplx(d.mass(), 0.0)), 1e-12 * d.mass());
        const double side = xi.imag() >= 0.0 ? 1.0 : -1.0;
        double prev_arg = 0.0;
        for (const auto& s : c.samples) {
            EXPECT_GT(s.real(), 0.0);
            EXPECT_LE(side * s.imag(), 1e-12 * std::abs(s));
            const double a = std::abs(std::arg(s));
            EXPECT_GE(a, prev_arg - 1e-12);
            prev_arg = a;
        }
        EXPECT_LE(prev_arg, std::abs(xi.imag()) + 1e-9);
    }
}

TEST(DilationProperty, RandomSamplesRespectEstimates) {
    proptest::Gen gen(3);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto rep = random_dilation_scan(gen.seed(), 200, 0.45, 1e-3, 1e6, gen.log_uniform(0.5, 2.0));
        EXPECT_EQ(rep.violations(), 0u);
    }
}

TEST(DilationProperty, SelectedXi0IsFeasibleBelowKatoThreshold) {
    proptest::Gen gen(21);
    for (std::size_t i = 0; i < proptest::kCases; ++i) {
        const double g = gen.uniform(0.0, 1.0);
        const auto ch = select_xi0(g);
        EXPECT_TRUE(ch.feasible()) << "gamma " << g;
        EXPECT_LT(ch.c1, 1.0);
        EXPECT_LT(2.0 * ch.xi0 + ch.phi0, std::numbers::pi);
    }
}
