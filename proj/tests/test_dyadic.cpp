#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "sharplog/calibration.hpp"
#include "sharplog/dyadic.hpp"
#include "sharplog/fourier.hpp"

using namespace sharplog;

namespace {

constexpr double pi = std::numbers::pi;

RadialProfile bump2() { return RadialProfile({Segment{0.0, 1.0, PolynomialForm{{{0, 1.0}, {2, -2.0}, {4, 1.0}}}}}, true); }

// Delta^k of a Gaussian: spectrum rho^{2k} e^{-w^2 rho^2 / 2}, peaked at sqrt(2k) / w.
RadialProfile banded(int k, double w) {
    Segment s{0.0, 12.0 * w, GaussianForm{w, {1.0}}};
    for (int i = 0; i < k; ++i) s = laplacian_segment(s);
    return RadialProfile({s});
}

} // namespace

TEST(Fourier, KernelMatchesBoostBessel) {
    for (double x : {1e-6, 1e-3, 0.05, 0.0999, 0.1, 0.5, 1.0, 3.7, 10.0, 55.5, 300.0, 2500.0}) {
        const double k = boost::math::cyl_bessel_j(1, x) / x;
        const double kp = -boost::math::cyl_bessel_j(2, x) / x;
        EXPECT_NEAR(detail::bessel_k(x), k, 1e-15 * std::max(1.0, std::abs(k)) + 1e-16) << x;
        EXPECT_NEAR(detail::bessel_k_prime(x), kp, 5e-15) << x;
    }
}

TEST(Fourier, GaussianIsSelfDual) {
    const auto g = gaussian_profile(1.0, {1.0}, 12.0);
    const ForwardTransform F(g, 20.0);
    for (double rho : {0.0, 0.3, 1.0, 2.5, 4.0, 7.0}) {
        const double exact = 4.0 * pi * pi * std::exp(-rho * rho / 2.0);
        EXPECT_NEAR(F(rho), exact, 1e-11 * 4.0 * pi * pi) << rho;
    }
}

TEST(Fourier, BumpMatchesSonineFormula) {
    // F[(1 - r^2)^2] = (2 pi)^2 8 J_4(rho) / rho^4
    const ForwardTransform F(bump2(), 250.0);
    for (double rho : {0.5, 1.0, 3.3, 10.0, 47.0, 120.0, 249.0}) {
        const double exact = 4.0 * pi * pi * 8.0 * boost::math::cyl_bessel_j(4, rho) / std::pow(rho, 4);
        EXPECT_NEAR(F(rho), exact, 1e-13) << rho;
    }
    EXPECT_NEAR(F(0.0), 4.0 * pi * pi / 48.0, 1e-13);
}

TEST(Fourier, RoundTripOfBump) {
    const auto u = bump2();
    const auto f = radial_fourier(u, frequency_grid(1000.0, 1.0, 1.0));
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double r = k / 200.0;
        worst = std::max(worst, std::abs(inverse_radial_fourier_at(f, r).f - u(r)));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Fourier, PlancherelOnRandomBandLimitedProfiles) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> width(0.3, 1.0), coef(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double w = width(rng);
        std::vector<double> q(1 + trial % 3);
        for (auto& c : q) c = coef(rng);
        const auto u = gaussian_profile(w, q, 12.0 * w);
        const auto f = radial_fourier(u, frequency_grid(40.0 / w, 0.0, u.radius()));
        const double spec = f.l2_sq() / std::pow(2.0 * pi, 4);
        EXPECT_NEAR(spec / weighted_l2_norm_sq(u), 1.0, 1e-6) << trial;
    }
}

TEST(Fourier, ResolutionErrors) {
    const auto u = bump2();
    const auto f = radial_fourier(u, frequency_grid(100.0, 1.0, 1.0));
    EXPECT_THROW((void)inverse_radial_fourier_at(f, 50.0), ResolutionError);
    EXPECT_THROW((void)ForwardTransform(u, 10.0)(11.0), ResolutionError);
    TransformOptions bad;
    bad.max_phase = 4.0;
    EXPECT_THROW(bad.validate(), ResolutionError);
    EXPECT_THROW((void)frequency_grid(100.0, 1.0, 1.0, bad), ResolutionError);
}

TEST(Cutoffs, SupportsAndValues) {
    const auto c = build_cutoffs();
    EXPECT_EQ(c.chi(0.0), 1.0);
    EXPECT_EQ(c.phi(0.5), 0.0);
    EXPECT_EQ(c.phi(3.0), 0.0);
    for (int k = 0; k <= 4000; ++k) {
        const double xi = 4.0 * k / 4000.0;
        if (xi <= 0.75 || xi >= 8.0 / 3.0) { EXPECT_EQ(c.phi(xi), 0.0) << xi; }
        if (xi >= 4.0 / 3.0) { EXPECT_EQ(c.chi(xi), 0.0) << xi; }
        EXPECT_GE(c.phi(xi), 0.0);
        EXPECT_LE(c.chi(xi), 1.0);
    }
}

TEST(Cutoffs, PartitionOfUnity) {
    const auto c = build_cutoffs();
    EXPECT_LT(c.inhomogeneous_residual(14), tol::partition);
    EXPECT_LT(c.homogeneous_residual(-12, 16), tol::partition);
    EXPECT_NEAR(c.chi(1.0) + c.window_sum(0, 3, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(c.window_sum(-3, 3, 1.0), 1.0, 1e-15);
}

TEST(Cutoffs, RejectsSupportsOutsideTheAnnulus) {
    EXPECT_THROW((void)build_cutoffs({0.7, 1.25}), DomainError);
    EXPECT_THROW((void)build_cutoffs({0.8, 1.4}), DomainError);
    EXPECT_THROW((void)build_cutoffs({1.0, 0.9}), DomainError);
}

TEST(Dyadic, WindowTooNarrow) {
    DecomposeOptions o;
    o.j_min = -1;
    o.j_max = 0;
    EXPECT_THROW((void)decompose(bump2(), o), WindowError);
}

TEST(Dyadic, InhomogeneousIndexing) {
    const auto d = decompose(bump2());
    EXPECT_EQ(d.inhomogeneous(-2), nullptr);
    EXPECT_EQ(d.inhomogeneous(-5), nullptr);
    EXPECT_EQ(d.inhomogeneous(-1), &d.low);
    EXPECT_EQ(d.inhomogeneous(0), &d.homogeneous(0));
    EXPECT_EQ(d.inhomogeneous(3)->j, 3);
    EXPECT_THROW((void)d.homogeneous(d.j_max + 1), DomainError);
    EXPECT_THROW((void)d.homogeneous(d.j_min - 1), DomainError);
    EXPECT_EQ(d.homogeneous(-1).j, -1);
    EXPECT_NEAR(d.low_value(0.3), d.low.profile(0.3), 1e-4 * d.low.sup);  // cubic Hermite samples
    EXPECT_LT(d.plancherel_error, 1e-6);
}

TEST(Dyadic, BandLimitedProfileHasOneDominantBlock) {
    const auto u = banded(8, 4.0 / (1.41 * 16.0));
    DecomposeOptions o;
    o.j_max = 7;
    const auto d = decompose(u, o);
    double total = 0.0;
    for (const auto& b : d.blocks) total += b.l2 * b.l2;
    EXPECT_GT(d.homogeneous(4).l2 * d.homogeneous(4).l2 / total, 0.99);
    for (const auto& b : d.blocks)
        if (b.j != 4) { EXPECT_LT(b.l2 * b.l2 / total, 0.01) << b.j; }
    EXPECT_LT(d.low.l2, 1e-12 * d.homogeneous(4).l2);
}

TEST(Dyadic, SmoothProfilesReconstruct) {
    const auto g = gaussian_profile(0.2, {1.0}, 1.8);
    const auto d = decompose(g);
    EXPECT_LT(d.reconstruction_error, 1e-10);
    EXPECT_LT(d.homogeneous_reconstruction_error, 1e-10);
    EXPECT_LT(d.plancherel_error, 1e-10);
    EXPECT_LT(d.tail_energy_fraction, tol::tail_energy);
    const auto b = decompose(bump2());
    EXPECT_LT(b.reconstruction_error, 1e-4);
}

TEST(Dyadic, MinimizerReconstructsWithinTolerance) {
    const auto u = minimizer_profile(coefficients_from_contact(0.5, 0.25));
    const auto d = decompose(u);
    EXPECT_LT(d.plancherel_error, 1e-6);
    EXPECT_LT(d.tail_energy_fraction, tol::tail_energy);
    EXPECT_LT(d.reconstruction_error, 1e-4) << "argmax r = " << d.reconstruction_argmax;
}

TEST(Dyadic, DilationShiftsBlocksByOne) {
    const auto u = bump2();
    const auto u2 = u.dilated(2.0);  // u(2r)
    DecomposeOptions a, b;
    a.j_min = -8;
    a.j_max = 6;
    b.j_min = -7;
    b.j_max = 7;
    const auto d = decompose(u, a);
    const auto d2 = decompose(u2, b);
    for (int j = -3; j <= 6; ++j) {
        const auto& bj = d.homogeneous(j);
        const auto& bj2 = d2.homogeneous(j + 1);
        EXPECT_NEAR(bj2.l2, 0.25 * bj.l2, 1e-9 * bj.l2) << j;
        EXPECT_NEAR(bj2.bernstein, bj.bernstein, 1e-6 * bj.bernstein) << j;
        for (double r : {0.0, 0.1, 0.37, 0.5}) EXPECT_NEAR(d2.block_value(j + 1, r), d.block_value(j, 2.0 * r), 1e-9 * bj.sup) << j;
    }
}

TEST(Besov, SquareFunctionWithinTheoreticalConstant) {
    const auto c = build_cutoffs();
    const double K = c.square_function_constant();
    EXPECT_GT(K, 1.0);
    EXPECT_LT(K, 13.0);
    for (double a : {0.3, 0.7}) {
        const auto u = minimizer_profile(coefficients_from_contact(a, 0.25));
        const auto d = decompose(u);
        const auto b = besov_functionals(d, a);
        const double ratio = b.lap_equiv / laplacian_l2_sq(u);
        EXPECT_LE(ratio, K);
        EXPECT_GE(ratio, 1.0 / K);
        double prev = 0.0;
        for (std::size_t i = 0; i < b.bernstein.size(); ++i) {
            EXPECT_LT(b.bernstein[i], 0.3) << b.j[i];
            if (b.j[i] >= 0 && prev > 0.0) { EXPECT_LT(std::abs(b.bernstein[i] - prev), 0.2) << b.j[i]; }
            prev = b.bernstein[i];
        }
    }
}

TEST(Besov, GeometricTailIdentity) {
    for (double a : {0.1, 0.25, 0.5, 0.9})
        for (int m : {1, 2, 5, 17}) {
            long double s = 0.0L;
            for (int j = 4000; j >= m; --j) s += std::exp2l(-static_cast<long double>(j) * a);
            EXPECT_NEAR(geometric_tail(m, a), static_cast<double>(s), 1e-14 * static_cast<double>(s)) << a << " " << m;
        }
}

TEST(Besov, CutIndices) {
    EXPECT_EQ(cut_index_printed(0.5), 1);
    EXPECT_EQ(cut_index_printed(1.0), 1);
    EXPECT_EQ(cut_index_printed(2.0), 5);
    EXPECT_EQ(cut_index_printed(10.0), 14);  // 1 + floor(4 log2 10)
    EXPECT_EQ(cut_index_balanced(1.0, 0.5), 5);
    EXPECT_EQ(cut_index_balanced(0.0, 0.5), 4);
}

TEST(Besov, PrintedCutLeavesHolderTailUnboundedBelowOneQuarter) {
    auto tail_sq = [](int m, double a, double n) { return std::pow(geometric_tail(m, a) * n, 2); };
    // the balanced cut keeps 2^{-m alpha} N <= 1 / (1 - 2^{-alpha})
    const double cap = std::pow(1.0 / (1.0 - std::exp2(-0.2)), 2);
    double prev = 0.0, prev3 = HUGE_VAL;
    for (double n : {1e2, 1e4, 1e6, 1e8}) {
        const double t = tail_sq(cut_index_printed(n), 0.2, n);
        EXPECT_GT(t, prev) << n;
        prev = t;
        EXPECT_LT(tail_sq(cut_index_balanced(n, 0.2), 0.2, n), cap) << n;
        const double t3 = tail_sq(cut_index_printed(n), 0.3, n);
        EXPECT_LT(t3, prev3) << n;
        prev3 = t3;
    }
    EXPECT_GT(prev, 1e4);
}

// Calibration fits on one corpus, the frozen constants are checked on another.
TEST(Calibration, FitReproducesFrozenConstants) {
    std::vector<calibration::Measurement> ms;
    for (const auto& e : calibration::calibration_corpus()) ms.push_back(calibration::measure(e));
    const auto fit = calibration::fit(ms);
    const auto fz = calibration::frozen();
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-6 * std::abs(b); };
    EXPECT_TRUE(close(fit.K, fz.K)) << fit.K;
    EXPECT_TRUE(close(fit.K_holder, fz.K_holder)) << fit.K_holder;
    EXPECT_TRUE(close(fit.ll.split, fz.ll.split)) << fit.ll.split;
    EXPECT_TRUE(close(fit.ll.squared, fz.ll.squared)) << fit.ll.squared;
    EXPECT_TRUE(close(fit.ll.prop, fz.ll.prop)) << fit.ll.prop;
    EXPECT_TRUE(close(fit.ll.ball, fz.ll.ball)) << fit.ll.ball;
    EXPECT_TRUE(close(fit.split.low, fz.split.low)) << fit.split.low;
    EXPECT_TRUE(close(fit.split.h1, fz.split.h1)) << fit.split.h1;
    EXPECT_TRUE(close(fit.split.final, fz.split.final)) << fit.split.final;
    const double Kt = build_cutoffs().square_function_constant();
    for (const auto& m : ms) {
        EXPECT_TRUE(calibration::check(m, fz).all()) << m.id;
        EXPECT_LE(m.lap_ratio, Kt) << m.id;
        EXPECT_GE(m.lap_ratio, 1.0 / Kt) << m.id;
        EXPECT_LT(m.plancherel_error, 1e-6) << m.id;
    }
}

TEST(Calibration, ValidationCorpusPassesWithFrozenConstants) {
    const auto fz = calibration::frozen();
    const double Kt = build_cutoffs().square_function_constant();
    for (const auto& e : calibration::validation_corpus()) {
        const auto m = calibration::measure(e);
        const auto v = calibration::check(m, fz);
        EXPECT_TRUE(v.lap) << m.id << " " << m.lap_ratio;
        EXPECT_TRUE(v.holder) << m.id << " " << m.holder_ratio;
        EXPECT_TRUE(v.split) << m.id;
        EXPECT_TRUE(v.squared) << m.id;
        EXPECT_TRUE(v.prop) << m.id;
        EXPECT_TRUE(v.ball) << m.id;
        EXPECT_TRUE(v.low) << m.id;
        EXPECT_TRUE(v.h1) << m.id;
        EXPECT_TRUE(v.final) << m.id;
        EXPECT_TRUE(m.split.triangle_holds) << m.id;
        EXPECT_TRUE(m.split.v_holds) << m.id;
        EXPECT_TRUE(m.split.absorbed_holds) << m.id;
        EXPECT_LE(m.lap_ratio, Kt) << m.id;
        EXPECT_GE(m.lap_ratio, 1.0 / Kt) << m.id;
    }
}

TEST(Calibration, ExtremalSweepMarginShrinksButHolds) {
    const auto fz = calibration::frozen();
    double prev = HUGE_VAL;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
        const auto u = build_loglog_extremal(eps).u_profile;
        const auto r = verify_ll_estimate(u, 0.5, &fz.ll);
        const double margin = fz.ll.prop / r.prop_ratio;
        EXPECT_TRUE(r.prop_holds) << eps;
        EXPECT_TRUE(r.ball_holds) << eps;
        EXPECT_GE(margin, 1.0) << eps;
        EXPECT_LT(margin, prev) << eps;
        prev = margin;
    }
}
