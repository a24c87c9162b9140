#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sharplog/obstacle.hpp"

using namespace sharplog;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

const SolveResult& qp_quarter() {
    static const SolveResult r = qp_oracle(0.5, D_of_x(0.5, 0.25), RadialGrid::graded(1024, 30));
    return r;
}

const SolveResult& penalized_quarter() {
    static const SolveResult r = solve_penalized(0.5, D_of_x(0.5, 0.25), RadialGrid::graded(1024, 30));
    return r;
}

} // namespace

TEST(Theta, Branches) {
    EXPECT_EQ(theta(-1.0, 0.5), 1.0);
    EXPECT_EQ(theta(0.25, 0.5), 0.5);
    EXPECT_EQ(theta(1.0, 0.5), 0.0);
    EXPECT_EQ(theta(0.0, 0.5), 1.0);
    EXPECT_EQ(theta(0.5, 0.5), 0.0);
}

TEST(Theta, RandomProperties) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> t(-2.0, 2.0), le(-8.0, 0.0);
    for (int i = 0; i < 5000; ++i) {
        const double eps = std::pow(10.0, le(rng));
        const double a = t(rng), b = t(rng);
        const double ta = theta(a, eps), tb = theta(b, eps);
        EXPECT_GE(ta, 0.0);
        EXPECT_LE(ta, 1.0);
        if (a <= b) {
            EXPECT_GE(ta, tb);
        }
        EXPECT_LE(std::abs(ta - tb), std::abs(a - b) / eps * (1.0 + 1e-12) + 1e-300);
        // the primitive is the antiderivative
        const double s = eps * 0.3;
        EXPECT_NEAR(theta_primitive(s, eps) - theta_primitive(0.0, eps), s - 0.5 * s * s / eps, 1e-15);
    }
}

TEST(Grid, ShapeAndValidation) {
    const auto g = RadialGrid::graded(8, 5);
    EXPECT_EQ(g.size(), 8u + 1u + 5u);
    EXPECT_EQ(g.nodes.front(), 0.0);
    EXPECT_EQ(g.nodes.back(), 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g.nodes[i], g.nodes[i - 1]);
    EXPECT_NEAR(g.nodes[1], 0.125 / 32.0, 1e-18);
    EXPECT_THROW(RadialGrid::uniform(1), DomainError);
    RadialGrid bad = RadialGrid::uniform(4);
    bad.nodes[2] = bad.nodes[1];
    EXPECT_THROW(assemble(bad), AssemblyError);
}

TEST(Assembly, SymmetricBandedAndZeroOnZero) {
    const auto E = assemble(RadialGrid::graded(64, 10));
    for (std::size_t i = 0; i < E.A.size(); ++i)
        for (std::size_t j = 0; j < E.A.size(); ++j) EXPECT_EQ(E.A.get(i, j), E.A.get(j, i));
    EXPECT_EQ(E.energy(std::vector<double>(E.grid.dofs(), 0.0)), 0.0);
}

TEST(Assembly, ClampedQuarticEnergy) {
    // u = (1 - r^2)^2: Delta u = -8 + 24 r^2 - ... ; 2 pi^2 int (Delta u)^2 r^3 dr = 16 pi^2
    const auto p = polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}}, 1.0);
    const double exact = 16.0 * pi2;
    const auto g = RadialGrid::uniform(512);
    EXPECT_NEAR(assemble(g).energy(interpolate(g, p)) / exact, 1.0, 1e-6);
}

TEST(Assembly, ConvergesAtFourthOrder) {
    const auto p = polynomial_profile({{0, 1.0}, {2, -2.0}, {4, 1.0}}, 1.0);
    const double exact = 16.0 * pi2;
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
        const auto g = RadialGrid::uniform(n);
        const double err = std::abs(assemble(g).energy(interpolate(g, p)) - exact);
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 16.0, 2.0) << n;
        }
        prev = err;
    }
}

TEST(Assembly, CholeskyRejectsIndefinite) {
    BandMatrix M(3);
    M.at(0, 0) = 1.0;
    M.at(1, 1) = -1.0;
    M.at(2, 2) = 1.0;
    EXPECT_THROW(M.factorize(), NonConvergence);
}

TEST(QpOracle, MatchesClosedFormEnergyAndCertifiesKkt) {
    const auto& q = qp_quarter();
    const auto m = coefficients_from_contact(0.5, 0.25);
    EXPECT_LT(q.kkt_residual, tol::kkt);
    EXPECT_EQ(q.feasibility_gap, 0.0);
    EXPECT_NEAR(q.energy / m.energy(), 1.0, 0.01);
    EXPECT_GE(q.energy, 0.0);
    for (std::size_t i = 1; i < q.trace.size(); ++i) EXPECT_LE(q.trace[i].energy, q.trace[i - 1].energy * (1 + 1e-10));
}

TEST(QpOracle, ContactRadiusWithinTwoCells) {
    const auto& q = qp_quarter();
    EXPECT_LE(std::abs(q.contact_radius - 0.5), 2.0 / 1024.0);
}

TEST(QpOracle, MultiplierSupportEndsAtFreeBoundary) {
    const auto& q = qp_quarter();
    EXPECT_LE(std::abs(q.support_radius - 0.5), 2.0 / 1024.0);
}

TEST(QpOracle, NearBoundaryContactRadius) {
    const auto q = qp_oracle(0.5, D_of_x(0.5, 0.81), RadialGrid::graded(1024, 30));
    EXPECT_LE(std::abs(q.support_radius - 0.9), 2.0 / 1024.0);
    EXPECT_LE(std::abs(q.contact_radius - 0.9), 2.0 / 1024.0);
}

TEST(QpOracle, FeasibleCandidatesDominate) {
    const auto g = RadialGrid::graded(1024, 30);
    const auto E = assemble(g);
    const auto& q = qp_quarter();
    const auto m = coefficients_from_contact(0.5, 0.25);
    // nodal interpolant of the closed form, with the unbounded slope at the origin replaced by 0
    auto v = interpolate(g, minimizer_profile(m));
    v[1] = 0.0;
    EXPECT_LE(q.energy, E.energy(v) * (1 + 1e-12));
    // lifted by a clamped bump it stays feasible
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        v[2 * i] += 0.1 * (1 - r * r) * (1 - r * r);
        v[2 * i + 1] += 0.1 * (-4 * r * (1 - r * r));
    }
    EXPECT_LE(q.energy, E.energy(v));
}

TEST(QpOracle, DiscreteVariationalInequality) {
    const auto g = RadialGrid::graded(1024, 30);
    const auto E = assemble(g);
    const auto& q = qp_quarter();
    const auto Au = E.A.multiply(q.dofs);
    double uAu = 0.0;
    for (std::size_t i = 0; i < Au.size(); ++i) uAu += q.dofs[i] * Au[i];
    const auto psi = detail::obstacle_nodal(g, 0.5, D_of_x(0.5, 0.25));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        // feasible v: nonnegative nodal lift of u plus random slopes, clamped at r = 1
        std::vector<double> v = q.dofs;
        const double c = 0.5 * U(rng), w = 0.05 + 0.5 * U(rng);
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const double r = g.nodes[i];
            v[2 * i] += c * std::exp(-(r - 0.5) * (r - 0.5) / (w * w)) * (1 - r) * (1 - r);
            v[2 * i + 1] += 0.1 * (U(rng) - 0.5) * (1 - r) * (1 - r);
        }
        for (std::size_t i = 0; i < g.size(); ++i) ASSERT_GE(v[2 * i], psi[i]);
        double vAu = 0.0;
        for (std::size_t i = 0; i < Au.size(); ++i) vAu += v[i] * Au[i];
        EXPECT_GE(vAu - uAu, -10.0 * tol::kkt * uAu) << trial;
    }
}

TEST(QpOracle, GradedMeshResolvesStrongSingularity) {
    const double D = D_of_x(0.2, 0.04);
    const double target = coefficients_from_contact(0.2, 0.04).energy();
    const auto graded = qp_oracle(0.2, D, RadialGrid::graded(1024, 40));
    const auto uniform = qp_oracle(0.2, D, RadialGrid::uniform(1024));
    EXPECT_LT(std::abs(graded.energy / target - 1.0), 0.03);
    EXPECT_GT(std::abs(uniform.energy / target - 1.0), 0.03);
}

TEST(QpOracle, RichardsonSanity) {
    const auto m = coefficients_from_contact(0.5, 0.25);
    const auto coarse = qp_oracle(0.5, m.D, RadialGrid::graded(256, 30));
    const auto fine = qp_oracle(0.5, m.D, RadialGrid::graded(512, 30));
    EXPECT_LT(std::abs(fine.energy - coarse.energy), std::abs(coarse.energy - m.energy()) + 1e-9 * m.energy());
}

TEST(Penalization, LoadHasSignOfBilaplacianOfObstacle) {
    // Delta^2 (1 - D r^alpha) = D alpha^2 (4 - alpha^2) r^{alpha - 4} > 0
    const double alpha = 0.5, D = 2.0;
    const auto g = RadialGrid::uniform(16);
    const detail::LoadQuadrature lq(g, alpha, D);
    for (double w : lq.w) EXPECT_GT(w, 0.0);
    double total = 0.0;
    for (double w : lq.w) total += w;
    // int_0^1 2 pi^2 D alpha^2 (4 - alpha^2) r^{alpha-1} dr
    EXPECT_NEAR(total, 2.0 * pi2 * D * alpha * (4.0 - alpha * alpha), 1e-10);
}

TEST(Penalization, NewtonTraceIsMonotone) {
    const auto& p = penalized_quarter();
    ASSERT_FALSE(p.trace.empty());
    for (std::size_t i = 1; i < p.trace.size(); ++i) {
        EXPECT_TRUE(std::isfinite(p.trace[i].energy));
        if (p.trace[i].eps == p.trace[i - 1].eps && p.trace[i - 1].step < 1.0) {
            EXPECT_LT(p.trace[i].residual, p.trace[i - 1].residual);
        }
    }
}

TEST(Penalization, LargeAmplitudeAgreesWithOracle) {
    const double D = 10.0 * D_of_x(0.5, 0.25);
    const auto g = RadialGrid::graded(256, 30);
    const auto q = qp_oracle(0.5, D, g);
    const auto p = solve_penalized(0.5, D, g);
    EXPECT_NEAR(p.energy / q.energy, 1.0, 0.005);
}

TEST(Penalization, FeasibilityGapShrinksAlongSchedule) {
    const auto& p = penalized_quarter();
    ASSERT_GE(p.stage_gap.size(), 2u);
    for (std::size_t i = 1; i < p.stage_gap.size(); ++i) EXPECT_LT(p.stage_gap[i], p.stage_gap[i - 1]);
    EXPECT_LT(p.stage_gap.back(), 1e-3);
}

TEST(Penalization, AgreesWithOracle) {
    EXPECT_NEAR(penalized_quarter().energy / qp_quarter().energy, 1.0, 0.005);
}

TEST(Penalization, EpsOverloadAndConfigValidation) {
    const auto g = RadialGrid::graded(128, 20);
    const double D = D_of_x(0.5, 0.25);
    const auto p = solve_penalized(0.5, D, 1e-3, g);
    EXPECT_EQ(p.stage_eps.size(), 2u);
    EXPECT_DOUBLE_EQ(p.stage_eps.back(), 1e-3);
    PenalizationConfig cfg;
    cfg.eps_schedule = {1e-2, 1e-3};
    EXPECT_THROW(solve_penalized(0.5, D, g, cfg), DomainError);
    cfg.eps_schedule = {1e-2, 1e-2, 1e-6};
    EXPECT_THROW(solve_penalized(0.5, D, g, cfg), DomainError);
    EXPECT_THROW(solve_penalized(0.5, 1.0, g), DomainError);
    EXPECT_THROW(qp_oracle(0.5, 0.5, g), DomainError);
    cfg = PenalizationConfig();
    cfg.max_inner_iterations = 1;
    EXPECT_THROW(solve_penalized(0.5, D, g, cfg), NonConvergence);
}

TEST(CrossValidate, QuarterContact) {
    const auto cv = cross_validate(0.5, 0.25, RadialGrid::graded(1024, 30));
    EXPECT_LT(cv.qp_energy_error, 0.01);
    EXPECT_LT(cv.qp_sup_error, 1e-3);
    EXPECT_LE(cv.qp_contact_cells, 2.0);
    EXPECT_LT(cv.pen_energy_error, 0.01);
    EXPECT_LT(cv.qp_vs_pen, 0.005);
}
