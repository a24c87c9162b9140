#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sharplog/profile.hpp"

using namespace sharplog;

TEST(Profile, LaplacianOfRSquaredIsEight) {
    auto p = polynomial_profile({{2, 1.0}});
    auto L = laplacian_radial(p);
    for (double r : {1e-3, 0.2, 0.7, 1.0}) EXPECT_NEAR(L(r), 8.0, 1e-13);
}

TEST(Profile, LaplacianOfObstaclePower) {
    const double D = 1.3, a = 0.5;
    auto L = laplacian_radial(power_profile(1.0, -D, a));
    for (double r : {1e-4, 0.1, 0.5, 0.9})
        EXPECT_NEAR(L(r), -D * a * (a + 2) * std::pow(r, a - 2), 1e-12 * std::abs(L(r)));
}

TEST(Profile, LaplacianOfBiharmonicLog) {
    const double b = 0.7, c = -0.2;
    RadialProfile p({Segment{0.0, 1.0, biharmonic_log(b, c)}});
    auto L = laplacian_radial(p);
    for (double r : {0.1, 0.5, 1.0}) EXPECT_NEAR(L(r), 4 * (c - b) / (r * r) + 8 * b, 1e-12);
}

TEST(Profile, LaplacianMatchesFiniteDifferences) {
    std::vector<Segment> segs{{0.0, 1.0, GaussianForm{0.6, {1.0, -0.5, 0.25}}}};
    RadialProfile p(segs);
    auto L = laplacian_radial(p);
    for (double r : {0.2, 0.45, 0.8}) {
        const double h = 1e-4;
        const double f0 = p(r), fp = p(r + h), fm = p(r - h);
        const double fd = (fp - 2 * f0 + fm) / (h * h) + 3.0 / r * (fp - fm) / (2 * h);
        EXPECT_NEAR(L(r), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Profile, LaplacianIsLinear) {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int t = 0; t < 20; ++t) {
        const double a = U(gen), b = U(gen), c1 = U(gen), c2 = U(gen), c3 = U(gen);
        auto p = polynomial_profile({{2, c1}, {3, c2}});
        auto q = polynomial_profile({{3, c3}, {4, 1.0}});
        auto s = polynomial_profile({{2, a * c1}, {3, a * c2 + b * c3}, {4, b}});
        auto Lp = laplacian_radial(p), Lq = laplacian_radial(q), Ls = laplacian_radial(s);
        for (double r : {0.05, 0.3, 0.95}) EXPECT_NEAR(Ls(r), a * Lp(r) + b * Lq(r), 1e-12 * (1 + std::abs(Ls(r))));
    }
}

TEST(Profile, SampledLaplacianUnsupported) {
    auto p = sampled_profile({0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}, {0.0, -1.0, 0.0});
    EXPECT_THROW(laplacian_radial(p), UnsupportedOperation);
}

TEST(Profile, ValidationRejectsGapsAndBadStart) {
    EXPECT_THROW(RadialProfile({Segment{0.1, 1.0, PowerForm{1, 0, 0}}}), DomainError);
    EXPECT_THROW(RadialProfile({Segment{0.0, 0.4, PowerForm{1, 0, 0}}, Segment{0.5, 1.0, PowerForm{1, 0, 0}}}),
                 DomainError);
}

TEST(Profile, ZeroOutsideDomainAndOneSidedBreakpoints) {
    RadialProfile p({Segment{0.0, 0.5, PowerForm{1.0, 0.0, 0.0}}, Segment{0.5, 1.0, PowerForm{2.0, 0.0, 0.0}}}, false,
                    false);
    EXPECT_EQ(p(1.5), 0.0);
    EXPECT_EQ(p.jet_left(1).f, 1.0);
    EXPECT_EQ(p.jet_right(1).f, 2.0);
    EXPECT_EQ(p(0.5), 2.0);
    EXPECT_GT(p.continuity_residual(), 0.1);
}

TEST(Profile, DilationAndScaling) {
    auto p = polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}});  // (1-r^2)^2
    auto q = p.dilated(0.5);
    EXPECT_DOUBLE_EQ(q.radius(), 2.0);
    for (double r : {0.1, 1.0, 1.9}) EXPECT_NEAR(q(r), p(0.5 * r), 1e-15);
    EXPECT_TRUE(q.boundary_ok());
    auto s = p.scaled(3.0);
    EXPECT_NEAR(s(0.3), 3 * p(0.3), 1e-15);
    RadialProfile b({Segment{0.0, 1.0, biharmonic_log(0.4, 0.3)}});
    auto bd = b.dilated(2.0);
    for (double r : {0.1, 0.4}) EXPECT_NEAR(bd(r), b(2 * r), 1e-14);
    auto g = gaussian_profile(0.7, {1.0, 0.5}, 3.0);
    auto gd = g.dilated(1.5);
    for (double r : {0.1, 1.2}) EXPECT_NEAR(gd(r), g(1.5 * r), 1e-14);
}

TEST(Profile, HermiteSampledReproducesCubics) {
    auto f = [](double r) { return 1 - 3 * r * r + 2 * r * r * r; };
    auto df = [](double r) { return -6 * r + 6 * r * r; };
    std::vector<double> x{0.0, 0.3, 0.55, 1.0}, v, m;
    for (double r : x) {
        v.push_back(f(r));
        m.push_back(df(r));
    }
    auto p = sampled_profile(x, v, m, true);
    for (double r : {0.1, 0.4, 0.77}) {
        EXPECT_NEAR(p(r), f(r), 1e-14);
        EXPECT_NEAR(p.jet(r).d2f, -6 + 12 * r, 1e-12);
    }
    EXPECT_TRUE(p.boundary_ok());
}
