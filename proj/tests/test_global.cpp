#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sharplog/calibration.hpp"
#include "sharplog/extremal.hpp"
#include "sharplog/global.hpp"

using namespace sharplog;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

double lambda_at(double alpha, double factor = 1.5) { return factor / (8.0 * pi2 * alpha); }

RadialProfile minimizer(double alpha, double x) { return minimizer_profile(coefficients_from_contact(alpha, x)); }

RadialProfile bump(double R) {
    return RadialProfile({Segment{0.0, 1.0, PolynomialForm{{{0, 1.0}, {2, -2.0}, {4, 1.0}}}}}, true).dilated(1.0 / R);
}

// Largest drop of phi from a plateau [0, a] to r = 4 when |Delta phi| <= 1 and
// phi'(4) = 0: Delta phi = -1 on [a, b], +1 on [b, 4] with b^4 = (a^4 + 256) / 2.
double bang_bang_drop(double a) {
    const double b = std::pow((std::pow(a, 4) + 256.0) / 2.0, 0.25);
    const double inner = (b * b - a * a) / 8.0 + std::pow(a, 4) / 8.0 * (1.0 / (b * b) - 1.0 / (a * a));
    const double outer = 32.0 * (1.0 / (b * b) - 1.0 / 16.0) - (16.0 - b * b) / 8.0;
    return inner + outer;
}

} // namespace

TEST(GlobalCutoff, ConstraintsHoldOnTheCheckGrid) {
    for (double mu : {0.25, 0.5, 1.0}) {
        const auto g = build_phi_mu(mu);
        EXPECT_LE(g.max_gradient, 1.0);
        EXPECT_LE(g.max_laplacian, 1.0);
        EXPECT_GE(g.min_value, -1e-9);
        EXPECT_LE(g.max_value, 1.0 + 1e-12);
        EXPECT_DOUBLE_EQ(g.support_radius(), 8.0 / mu);
        EXPECT_DOUBLE_EQ(g.phi_mu.radius(), 8.0 / mu);
        for (double r : {0.0, 0.3, 1.7, 3.0, 5.5, 7.9})
            if (r < g.support_radius()) { EXPECT_NEAR(g.jet_mu(r).f, g.phi(mu * r / 2.0), 1e-14) << r; }
    }
}

TEST(GlobalCutoff, SmoothAcrossPiecesAndFlatAtBothEnds) {
    const auto g = build_phi_mu(1.0);
    EXPECT_LT(g.phi.continuity_residual(), 1e-9);
    for (std::size_t i = 1; i < g.phi.segments().size(); ++i) {
        const auto l = g.phi.jet_left(i), r = g.phi.jet_right(i);
        EXPECT_NEAR(l.d2f, r.d2f, 1e-8) << i;
    }
    for (double r : {0.0, 0.25, 0.5, 0.99}) EXPECT_EQ(g.phi(r), 1.0);
    const auto end = g.phi.segments().back().jet(4.0);
    EXPECT_NEAR(end.f, 0.0, 1e-9);
    EXPECT_NEAR(end.df, 0.0, 1e-9);
    // decreasing: phi' <= 0 everywhere
    for (int k = 1; k < 4000; ++k) EXPECT_LE(g.phi.jet(4.0 * k / 4000.0).df, 1e-9);
}

TEST(GlobalCutoff, SupportRadiusEightAtMuOne) {
    const auto g = build_phi_mu(1.0);
    EXPECT_DOUBLE_EQ(g.support_radius(), 8.0);
    EXPECT_GT(g.jet_mu(7.0).f, 0.0);
    EXPECT_EQ(g.jet_mu(8.5).f, 0.0);
}

TEST(GlobalCutoff, PlateauOfRadiusTwoCannotMeetTheBounds) {
    // |Delta phi| <= 1 alone caps the drop below 1 once the plateau reaches ~1.74
    EXPECT_LT(bang_bang_drop(2.0), 1.0);
    EXPECT_GT(bang_bang_drop(1.7), 1.0);
    EXPECT_LT(bang_bang_drop(1.75), 1.0);
    EXPECT_THROW((void)build_phi_mu(1.0, CutoffShape{1.9, 0.2, std::nullopt, 10000}), ConstructionError);
}

TEST(GlobalCutoff, EqualsOneOnFourOverMu) {
    for (double mu : {0.25, 0.5, 1.0}) {
        CutoffShape s;
        s.plateau = 2.0;
        EXPECT_NO_THROW((void)build_phi_mu(mu, s)) << mu;
    }
}

TEST(GlobalCutoff, DomainErrors) {
    EXPECT_THROW((void)build_phi_mu(0.0), DomainError);
    EXPECT_THROW((void)build_phi_mu(1.5), DomainError);
    EXPECT_THROW((void)build_phi_mu(0.5, CutoffShape{4.5, 0.2, std::nullopt, 10000}), DomainError);
    CutoffShape s;
    s.split = 0.5;
    EXPECT_THROW((void)build_phi_mu(0.5, s), DomainError);
}

TEST(MuNorm, DominatesLaplacianAndIncreasesWithMu) {
    for (const auto& u : {minimizer(0.5, 0.25), bump(3.0), gaussian_profile(0.5, {1.0}, 6.0)}) {
        double prev = 0.0;
        for (double mu : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
            const auto n = mu_norm(u, mu);
            EXPECT_GE(n.value_sq(), n.lap_sq);
            EXPECT_GE(n.value_sq(), prev);
            prev = n.value_sq();
        }
        EXPECT_DOUBLE_EQ(mu_norm(u, 0.0).value_sq(), laplacian_l2_sq(u));
    }
}

TEST(Rescale, UnitRadiusIsIdentity) {
    const auto r = rescale_check(minimizer(0.5, 0.25), 1.0, 0.5);
    EXPECT_EQ(r.lap_ratio, 1.0);
    EXPECT_EQ(r.holder_ratio, 1.0);
    EXPECT_EQ(r.n_ratio, 1.0);
    EXPECT_EQ(r.log_margin, r.log_margin_unit);
}

TEST(Rescale, ScalingInvariants) {
    for (double a : {0.3, 0.5, 0.7})
        for (double R : {2.0, 10.0, 0.3}) {
            const auto r = rescale_check(minimizer(a, 0.25), R, a);
            EXPECT_NEAR(r.lap_ratio, 1.0, 1e-8) << a << " " << R;
            EXPECT_NEAR(r.holder_ratio, 1.0, 1e-8) << a << " " << R;
            EXPECT_NEAR(r.n_ratio, 1.0, 1e-8) << a << " " << R;
            EXPECT_NEAR(r.sup_R, r.sup, 1e-14);
        }
}

TEST(Rescale, LogEstimateMarginIsScaleInvariant) {
    const auto u = build_loglog_extremal(1e-4).u_profile;
    const auto unit = rescale_check(u, 1.0, 0.5);
    for (double R : {2.0, 10.0}) {
        const auto r = rescale_check(u, R, 0.5);
        EXPECT_NEAR(r.log_margin, unit.log_margin, 1e-8) << R;
        EXPECT_NEAR(r.loglog_log_margin, unit.loglog_log_margin, 1e-8) << R;
        EXPECT_TRUE(r.holds);
        EXPECT_TRUE(r.loglog_holds);
    }
}

TEST(GlobalLog, SupportInsidePlateauCollapsesExpansion) {
    const auto u = minimizer(0.5, 0.25);
    for (double mu : {0.25, 0.5, 1.0}) {
        const auto r = verify_global_log(u, 0.5, lambda_at(0.5), mu);
        EXPECT_EQ(r.terms.t1, 0.0);
        EXPECT_EQ(r.terms.t3, 0.0);
        EXPECT_EQ(r.terms.i, 0.0);
        EXPECT_EQ(r.terms.ii, 0.0);
        EXPECT_EQ(r.terms.iii, 0.0);
        EXPECT_NEAR(r.terms.t2, r.norm.lap_sq, 1e-10 * r.norm.lap_sq);
        EXPECT_NEAR(r.lap_mu_sq, r.norm.lap_sq, 1e-10 * r.norm.lap_sq);
        EXPECT_TRUE(r.cross_bounds_hold);
        EXPECT_TRUE(r.sup_preserved);
    }
}

TEST(GlobalLog, CrossTermBoundsWhenTheTailCrossesTheTransition) {
    for (const auto& u : {bump(6.0), gaussian_profile(1.0, {1.0}, 10.0), gaussian_profile(1.5, {1.0, 0.2}, 15.0)}) {
        for (double mu : {0.5, 1.0}) {
            const auto r = verify_global_log(u, 0.5, lambda_at(0.5), mu);
            EXPECT_LT(r.expansion_residual, 1e-10) << mu;
            for (std::size_t k = 0; k < 6; ++k) EXPECT_TRUE(r.term_holds[k]) << "term " << k << " mu " << mu;
            EXPECT_TRUE(r.absorbed) << mu;
            EXPECT_GT(std::abs(r.terms.iii), 0.0) << mu;
        }
    }
}

TEST(GlobalLog, CoefficientBookkeeping) {
    const auto c = cross_term_coefficients();
    EXPECT_TRUE(c.holds);
    // (1 + 3 mu) and 3 mu reproduced: slack for ||Delta u||^2 is 2 mu - mu^2 / 4
    EXPECT_DOUBLE_EQ(c.slack[2][1], 2.0);
    EXPECT_DOUBLE_EQ(c.slack[2][2], -0.25);
    for (int k = 1; k <= 1000; ++k) {
        const double mu = k / 1000.0;
        for (std::size_t n = 0; n < 3; ++n) {
            double b = 0.0, v = 0.0;
            for (std::size_t p = 0; p < CoefficientCheck::degree; ++p) {
                b += c.bound[n][p] * std::pow(mu, p);
                v += c.norm[n][p] * std::pow(mu, p);
            }
            EXPECT_LE(b, v) << mu << " " << n;
        }
    }
    // the printed bounds summed with their weights
    const auto b = cross_term_bounds(0.7, 2.0, 3.0, 5.0);
    const double total = b.t1 + b.t2 + b.t3 + 2.0 * b.i + 4.0 * b.ii + 4.0 * b.iii;
    EXPECT_LE(total, mu_norm(0.7, 5.0, 2.0, 3.0).value_sq());
}

TEST(GlobalLog, MuNormEstimateHoldsOnCorpusForEachMu) {
    std::vector<std::pair<RadialProfile, double>> corpus{
        {minimizer(0.3, 0.1), 0.3}, {minimizer(0.5, 0.25), 0.5}, {minimizer(0.7, 0.6), 0.7},
        {bump(6.0), 0.5},           {bump(20.0), 0.4},           {gaussian_profile(1.0, {1.0}, 10.0), 0.5},
        {build_loglog_extremal(1e-6).u_profile, 0.5}};
    for (const auto& [u, a] : corpus)
        for (double mu : {0.25, 0.5, 1.0}) {
            const auto r = verify_global_log(u, a, lambda_at(a), mu);
            EXPECT_TRUE(r.holds) << a << " " << mu << " margin " << r.margin;
            EXPECT_TRUE(r.cross_bounds_hold) << a << " " << mu;
            EXPECT_TRUE(r.absorbed) << a << " " << mu;
            EXPECT_TRUE(r.monotone) << a << " " << mu;
            EXPECT_TRUE(r.sup_preserved) << a << " " << mu;
            EXPECT_TRUE(r.holder_preserved) << a << " " << mu;
            EXPECT_LE(r.lhs, r.intermediate_rhs) << a << " " << mu;
        }
}

TEST(GlobalLog, HoldsForEveryAdmissibleLambda) {
    const auto u = minimizer(0.5, 0.25);
    for (double f : {3.0, 1.5, 1.1, 1.01}) {
        const auto r = verify_global_log(u, 0.5, lambda_at(0.5, f), 1.0);
        EXPECT_TRUE(r.holds) << f;
        EXPECT_GT(r.margin, 0.0) << f;
    }
}

TEST(GlobalLog, DomainErrors) {
    const auto u = bump(1.0);
    EXPECT_THROW((void)verify_global_log(u, 0.5, 1.0 / (8.0 * pi2 * 0.5), 1.0), DomainError);
    EXPECT_THROW((void)verify_global_log(u, 0.5, lambda_at(0.5), 0.0), DomainError);
    EXPECT_THROW((void)verify_global_log(u, 1.0, lambda_at(0.5), 1.0), DomainError);
    EXPECT_THROW((void)rescale_check(bump(2.0), 2.0, 0.5), DomainError);
    EXPECT_THROW((void)rescale_check(bump(1.0), -1.0, 0.5), DomainError);
}

TEST(LowHigh, BandLimitedProfileHasEmptyHighPart) {
    const auto u = gaussian_profile(6.0, {1.0}, 72.0);
    DecomposeOptions o;
    o.j_max = 1;
    const auto d = decompose(u, o);
    const auto r = verify_low_high_split(u, 0.5, lambda_at(0.5), d);
    EXPECT_LT(r.v_sup, 1e-4 * r.sup);
    EXPECT_LT(r.v_norm.l2_sq, 1e-8 * weighted_l2_norm_sq(u));
    EXPECT_NEAR(r.low_sup, r.sup, 1e-4 * r.sup);
    EXPECT_TRUE(r.triangle_holds);
    EXPECT_LE(r.sup, r.final_rhs_zero);
}

TEST(LowHigh, HighFrequencyBumpHasEmptyLowPart) {
    Segment s{0.0, 12.0 * 4.0 / 22.56, GaussianForm{4.0 / 22.56, {1.0}}};
    for (int i = 0; i < 8; ++i) s = laplacian_segment(s);
    const RadialProfile u({s});
    DecomposeOptions o;
    o.j_max = 7;
    const auto d = decompose(u, o);
    const auto r = verify_low_high_split(u, 0.5, lambda_at(0.5), d);
    EXPECT_LT(r.low_ratio, 1e-10);
    EXPECT_NEAR(r.v_sup, r.sup, 1e-10 * r.sup);
    EXPECT_NEAR(r.v_norm.lap_sq, laplacian_l2_sq(u), 1e-8 * laplacian_l2_sq(u));
    EXPECT_TRUE(r.v_holds);
    EXPECT_TRUE(r.absorbed_holds);
    // the theoretical H^1 constant for spectra above 0.8
    EXPECT_LE(r.h1_ratio, std::sqrt(1.0 / std::pow(0.8, 4) + 1.0 / std::pow(0.8, 2)));
}

TEST(LowHigh, HighPartSobolevRatioBelowTheoreticalBound) {
    const double bound = std::sqrt(1.0 / std::pow(0.8, 4) + 1.0 / std::pow(0.8, 2));
    for (const auto& u : {minimizer(0.5, 0.25), bump(1.0)}) {
        const auto d = decompose(u);
        const auto r = verify_low_high_split(u, 0.5, lambda_at(0.5), d, nullptr);
        EXPECT_LE(r.h1_ratio, bound);
        EXPECT_TRUE(r.triangle_holds);
        EXPECT_TRUE(r.v_holds);
        EXPECT_TRUE(r.absorbed_holds);
        const auto fz = calibration::frozen();
        const auto c = verify_low_high_split(u, 0.5, lambda_at(0.5), d, &fz.split);
        EXPECT_TRUE(c.low_holds && c.h1_holds && c.final_holds);
    }
}
