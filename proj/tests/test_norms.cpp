#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sharplog/norms.hpp"

using namespace sharplog;
using std::numbers::pi;

TEST(Norms, UnitBallVolume) {
    EXPECT_NEAR(weighted_l2_norm_sq(power_profile(1.0, 0.0, 0.0)), pi * pi / 2, 1e-14);
    EXPECT_NEAR(weighted_l2_norm_sq(polynomial_profile({{0, 1.0}})), pi * pi / 2, 1e-13);
}

TEST(Norms, SingularPowerAnalytic) {
    for (double a : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(weighted_l2_norm_sq(power_profile(0.0, 1.0, a - 2)), 2 * pi * pi / (2 * a),
                    1e-12 * 2 * pi * pi / (2 * a));
        // The same integrand through the quadrature path.
        auto p = polynomial_profile({{0, 0.0}});
        (void)p;
    }
}

TEST(Norms, NonIntegrableThrows) {
    EXPECT_THROW(weighted_l2_norm_sq(power_profile(0.0, 1.0, -2.0)), DivergenceError);
    EXPECT_THROW(weighted_l2_norm_sq(power_profile(0.0, 1.0, -2.5)), DivergenceError);
    EXPECT_THROW(weighted_l2_norm_sq(polynomial_profile({{-2, 1.0}})), DivergenceError);
}

TEST(Norms, PolynomialEnergy) {
    // (1-r^2)^2: Delta = -16 + 24 r^2 in R^4, int (Delta)^2 r^3 = 256/4 - 2*16*24/6 + 576/8 = 8
    auto p = polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}});
    EXPECT_NEAR(laplacian_l2_sq(p), 2 * pi * pi * 8.0, 1e-11);
    // grad: u' = -4r + 4r^3; int u'^2 r^3 = 16(1/6 - 2/8 + 1/10)
    EXPECT_NEAR(gradient_l2_sq(p), 2 * pi * pi * 16 * (1.0 / 6 - 0.25 + 0.1), 1e-12);
}

TEST(Norms, QuadratureDoublingStable) {
    std::vector<RadialProfile> corpus{
        polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}}),
        gaussian_profile(0.4, {1.0, 2.0}, 2.0),
        RadialProfile({Segment{0.0, 0.5, PowerForm{1.0, -1.2, 0.3}}, Segment{0.5, 1.0, biharmonic_log(0.3, 0.1)}},
                      false, false),
    };
    QuadratureScheme q;
    for (const auto& p : corpus) {
        const double a = weighted_l2_norm_sq(p, q), b = weighted_l2_norm_sq(p, q.refined());
        EXPECT_NEAR(a, b, 1e-8 * std::abs(b));
    }
}

TEST(Norms, HolderOfObstacleShapeIsOne) {
    for (double a : {0.2, 0.5, 0.8}) {
        auto p = power_profile(1.0, -1.0, a);
        EXPECT_NEAR(holder_seminorm(p, a), 1.0, 1e-9) << a;
    }
}

TEST(Norms, HolderDenseEnumerationOracle) {
    // Brute-force pair enumeration on a dense uniform-plus-geometric grid.
    const double a = 0.5;
    const double edge = (1.0 - 0.9 * std::sqrt(0.6)) / 0.4;
    auto p = RadialProfile(
        {Segment{0.0, 0.6, PowerForm{1.0, -0.9, a}}, Segment{0.6, 1.0, PolynomialForm{{{0, edge}, {1, -edge}}}}});
    std::vector<double> x;
    for (int i = 0; i <= 2000; ++i) x.push_back(i / 2000.0);
    for (int k = 1; k < 60; ++k) x.push_back(std::pow(0.7, k));
    double best = 0;
    for (double r : x)
        for (double s : x)
            if (r < s) best = std::max(best, std::abs(p(r) - p(s)) / std::pow(s - r, a));
    const double h = holder_seminorm(p, a);
    EXPECT_GE(h, best * (1 - 1e-12));
    EXPECT_LE(h, best * 1.01);
}

TEST(Norms, ConstantHasZeroSeminorms) {
    auto p = power_profile(2.0, 0.0, 0.0);
    EXPECT_EQ(holder_seminorm(p, 0.5), 0.0);
    EXPECT_EQ(lipschitz_seminorm(p), 0.0);
}

TEST(Norms, UnboundedProfileThrows) {
    EXPECT_THROW(holder_seminorm(power_profile(0.0, 1.0, -0.5), 0.5), DivergenceError);
    EXPECT_THROW(sup_norm(RadialProfile({Segment{0.0, 1.0, BiharmonicLogForm{0, 0, 0, 1}}})), DivergenceError);
}

TEST(Norms, AlphaOneIsSupOfDerivative) {
    auto p = polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}});
    // |u'| = 4r(1-r^2) max at r = 1/sqrt3: 8/(3 sqrt3)
    EXPECT_NEAR(holder_seminorm(p, 1.0), 8.0 / (3.0 * std::sqrt(3.0)), 1e-6);
    EXPECT_TRUE(std::isinf(lipschitz_seminorm(power_profile(1.0, -1.0, 0.5))));
}

TEST(Norms, ZeroProfileReport) {
    auto r = norms(power_profile(0.0, 0.0, 0.0), 0.5);
    EXPECT_EQ(r.sup_norm, 0.0);
    EXPECT_EQ(r.l2_ball, 0.0);
    EXPECT_EQ(r.lap_l2, 0.0);
    EXPECT_EQ(r.holder_seminorm, 0.0);
    EXPECT_FALSE(r.n_alpha.has_value());
}

TEST(Norms, ReportForObstacleShape) {
    auto r = norms(power_profile(1.0, -1.0, 0.5), 0.5);
    EXPECT_NEAR(r.sup_norm, 1.0, 1e-15);
    EXPECT_EQ(r.sup_argmax, 0.0);
    EXPECT_NEAR(r.holder_seminorm, 1.0, 1e-9);
    ASSERT_TRUE(r.n_alpha.has_value());
    EXPECT_NEAR(*r.n_alpha, r.holder_seminorm / r.lap_l2, 1e-15);
}

TEST(Norms, InterpolationInequalityOnRandomPiecewisePolynomials) {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 25; ++t) {
        // Nonnegative C^1 piecewise cubics (Hermite data with flat nodes), so the
        // oscillation is bounded by the sup norm.
        std::vector<double> x{0.0};
        while (x.back() < 1.0) x.push_back(std::min(1.0, x.back() + 0.1 + 0.3 * std::abs(U(gen))));
        std::vector<double> v, m;
        for (std::size_t i = 0; i < x.size(); ++i) {
            v.push_back(std::abs(U(gen)));
            m.push_back(0.0);
        }
        auto p = sampled_profile(x, v, m);
        for (double a : {0.25, 0.5, 0.75}) {
            const double h = holder_seminorm(p, a);
            const double bound = std::pow(sup_norm(p).value, 1 - a) * std::pow(lipschitz_seminorm(p), a);
            EXPECT_LE(h, bound * (1 + 1e-9));
            EXPECT_GE(h, 0.0);
        }
    }
}
