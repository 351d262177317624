// Acceptance runner: one pass/fail line per criterion at the stated
// tolerances. `acceptance` runs all ten; `acceptance --only N` runs one.
// Exit status is 0 only if every criterion that ran passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jhkit/jhkit.hpp"

using namespace jhkit;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict critical_coupling() {
    // Runtime bound is single-threaded.
    setenv("JHKIT_THREADS", "1", 1);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = virial::critical_gamma(2.0, 1e-6);
    const auto sup = virial::supremum_search(virial::VirialConfig{2.0, Coupling::from_gamma(0.37), {}});
    const double elapsed = seconds_since(t0);
    unsetenv("JHKIT_THREADS");
    const double rounded = std::round(rep.gamma_c * 100.0) / 100.0;
    const bool pass = std::abs(rep.gamma_c - 0.3714) <= 1e-3 && rounded == 0.37 && sup.sup_value <= 1e-3 &&
                      rep.validated && elapsed < 60.0;
    return {pass, fmt("gamma_c=%.7f (0.3714 +- 1e-3, rounds to %.2f), sup at 0.37 = %.3e (<= 1e-3), %.2f s (< 60 s)",
                      rep.gamma_c, rounded, sup.sup_value, elapsed)};
}

Verdict asymptote_law() {
    const virial::VirialConfig cfg{2.0, Coupling::from_gamma(0.37), {}};
    const auto seq = virial::asymptote_sequence(cfg, 1, 3, 1.0, 3.0);
    const double last = seq.residuals.back();
    const bool pass = seq.monotone && std::abs(seq.limit - (-0.0108)) < 5e-5 && last < 2e-2;
    return {pass, fmt("limit=%.5f, residuals %.4g %.4g %.4g, monotone=%d, final residual %.4g (< 2e-2)", seq.limit,
                      seq.residuals[0], seq.residuals[1], seq.residuals[2], seq.monotone ? 1 : 0, last)};
}

Verdict threshold_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto list = constant_thresholds();
    const double elapsed = seconds_since(t0);
    double ct1 = 0, br = 0, ct0 = 0, kc0 = 0;
    for (const auto& t : list) {
        if (t.name == "c_tilde1") ct1 = t.gamma;
        if (t.name == "br_norm") br = t.gamma;
        if (t.name == "c_tilde0") ct0 = t.gamma;
        if (t.name == "kato_c0") kc0 = t.gamma;
    }
    const bool pass = ct1 > 0.66 && ct1 < 0.67 && std::abs(br - 0.7423) <= 1e-4 && ct0 > 0.98 && ct0 < 0.99 &&
                      std::abs(kc0 - 1.006) <= 1e-3 && elapsed < 5.0;
    return {pass, fmt("c~1=%.6f in (0.66,0.67), br=%.6f (0.7423 +- 1e-4), c~0=%.6f in (0.98,0.99), "
                      "c0=%.6f (1.006 +- 1e-3), %.3f s (< 5 s)",
                      ct1, br, ct0, kc0, elapsed)};
}

Verdict special_functions() {
    const auto grid = virial::log_grid(0.01, 100.0, 50);
    double worst = 0.0;
    std::size_t used = 0;
    for (double a : grid) {
        if (a > 0.999 && a < 1.001) {
            continue;
        }
        ++used;
        auto rel = [](double x, double r) { return std::abs(x - r) / std::abs(r); };
        worst = std::max({worst, rel(specfun::f_half(a), oracle::f_half(a)),
                          rel(specfun::f_minus_half(a), oracle::f_minus_half(a)),
                          rel(specfun::g_minus_three_half(a), oracle::g_minus_three_half(a))});
    }
    using std::numbers::ln2;
    using std::numbers::pi;
    const double lm = pi - 2.0 * ln2;
    const double lh = 2.0 / 3.0 * (4.0 - pi / 2.0 - ln2);
    double lim = 0.0;
    for (double a : {1.0, 1.0 - 1e-10, 1.0 + 1e-10}) {
        lim = std::max({lim, std::abs(specfun::f_minus_half(a) - lm), std::abs(specfun::g_minus_three_half(a) - lm),
                        std::abs(specfun::f_half(a) - lh)});
    }
    const bool pass = worst <= 1e-8 && lim <= 1e-6;
    return {pass, fmt("max rel err %.3e over %zu points (<= 1e-8), limit deviation at a=1 %.3e (<= 1e-6)", worst,
                      used, lim)};
}

Verdict matrix_algebra() {
    const auto r = forms::algebra_residuals(forms::random_momenta(42, 100, 1.0), 1.0);
    const bool pass = r.samples == 100 && r.max() <= 1e-12;
    return {pass, fmt("unitarity %.2e, block-diag %.2e, D~^2 %.2e, anticomm %.2e, inverse %.2e (<= 1e-12)",
                      r.unitarity, r.block_diagonal, r.d_tilde_square, r.anticommutation, r.inverse)};
}

Verdict dilation_inequalities() {
    const auto rep = dilation::random_dilation_scan(42, 10000, 0.45, 1e-3, 1e6);
    const bool pass = rep.violations() == 0;
    return {pass, fmt("%zu violations over 10000 samples across %zu estimates, max ratio %.12f", rep.violations(),
                      rep.checks.size(), rep.max_ratio())};
}

Verdict spectral_geometry() {
    const dilation::DilationParam d(std::complex<double>(0.0, 0.1), 0.1);
    const auto c = dilation::curve_sample(d, dilation::p_grid_with_zero(1e-6, 1e6, 400));
    double worst_side = 0.0;
    for (const auto& s : c.samples) {
        worst_side = std::max(worst_side, s.imag());
    }
    const double end_arg = std::arg(c.samples.back());
    const double real_tol = 4.0 * std::numeric_limits<double>::epsilon();
    const auto sums = dilation::cluster_sum_set(d, {}, dilation::p_grid_with_zero(1e-6, 1e6, 120), real_tol);
    const bool unique = sums.real_points.size() == 1 && std::abs(sums.real_points[0] - 2.0) <= 1e-12;
    const bool pass = std::abs(c.start_point.imag()) < 1e-12 && std::abs(c.start_point.real() - 1.0) < 1e-12 &&
                      worst_side <= 0.0 && std::abs(end_arg + 0.1) <= 1e-3 && unique;
    return {pass, fmt("start=(%.3g,%.3g), max Im=%.3g (<= 0), arg at 1e6 m = %.6f (-0.1 +- 1e-3), "
                      "%zu real sum point(s)",
                      c.start_point.real(), c.start_point.imag(), worst_side, end_arg, sums.real_points.size())};
}

Verdict lieb_yau_dominance() {
    const auto q1s = virial::log_grid(0.01, 100.0, 30);
    const auto c = Coupling::from_gamma(0.37);
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    for (double c0 : {0.0, 2.0}) {
        for (const auto& r : forms::ib_dominance(c, c0, 1.0, q1s)) {
            min_slack = std::min(min_slack, r.slack);
            ++points;
        }
    }
    return {min_slack >= 0.0, fmt("min slack %.4e over %zu points (c0 in {0, 2}, >= 0)", min_slack, points)};
}

Verdict two_particle_boundedness() {
    const auto inner = forms::appendix_a_inner_bound(virial::log_grid(1e-3, 1e6, 37));
    const auto outer = forms::appendix_a_outer_scan({1.0, 10.0, 100.0, 1e3, 1e4}, {0.1, 1.0, 10.0});
    const bool pass = inner.bounded && inner.top_decade_variation < 0.05 && outer.no_growth;
    return {pass, fmt("sup J(1+sqrt xi2)=%.4f, top-decade variation %.3e (< 5%%), outer max %.4f, "
                      "increment ratio %.3f, last rel. increment %.3e",
                      inner.sup_product, inner.top_decade_variation, outer.max_value, outer.max_increment_ratio,
                      outer.last_relative_increment)};
}

Verdict channel_inequality() {
    double worst_margin = std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    for (const auto& t : forms::trial_family()) {
        for (double g : {0.3, 0.66, 0.9}) {
            const auto r = forms::rayleigh_quotient(t, Coupling::from_gamma(g));
            worst_margin = std::min(worst_margin, r.quotient - r.lower_bound);
            ++n;
        }
    }
    const double reduced = 8.0 * std::numbers::pi * std::numbers::pi *
                           forms::br_double_integral(forms::named_trial("p*exp(-p^2/2)"));
    const auto mc = oracle::gaussian_br_form_mc(2000000, 42);
    const double z6 = std::abs(reduced - mc.mean) / mc.stderr_;
    const auto ang = oracle::angular_mc(1.0, 1.7, 1000000, 43);
    const double z3a = std::abs(forms::angular_inverse_square(1.0, 1.7) - ang.inverse_square.mean) /
                       ang.inverse_square.stderr_;
    const double z3b = std::abs(forms::angular_inverse_square_cos(1.0, 1.7) - ang.inverse_square_cos.mean) /
                       ang.inverse_square_cos.stderr_;
    const bool pass = n == 15 && worst_margin >= 0.0 && z6 <= 3.0 && z3a <= 3.0 && z3b <= 3.0;
    return {pass, fmt("min quotient margin %.4e over %zu cases (>= 0), MC deviations %.2f / %.2f / %.2f sigma (<= 3)",
                      worst_margin, n, z6, z3a, z3b)};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "critical virial coupling", critical_coupling},
        {2, "asymptote law", asymptote_law},
        {3, "threshold suite", threshold_suite},
        {4, "special functions", special_functions},
        {5, "matrix algebra", matrix_algebra},
        {6, "dilation inequalities", dilation_inequalities},
        {7, "spectral geometry", spectral_geometry},
        {8, "Lieb-Yau dominance", lieb_yau_dominance},
        {9, "two-particle boundedness", two_particle_boundedness},
        {10, "Brown-Ravenhall channel inequality", channel_inequality},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 1;
        }
    }
    if (only != 0 && (only < 1 || only > static_cast<int>(all.size()))) {
        std::fprintf(stderr, "--only expects 1..%zu\n", all.size());
        return 1;
    }
    bool ok = true;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) {
            continue;
        }
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        std::printf("criterion %2d %-36s %s  %s\n", c.id, c.title, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
