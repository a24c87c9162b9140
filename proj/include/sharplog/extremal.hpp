#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "sharplog/closed_form.hpp"
#include "sharplog/errors.hpp"
#include "sharplog/norms.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/tolerances.hpp"

namespace sharplog {

/// The concentrating family v_eps on [0, 2] and u_eps(r) = v_eps(2r) on [0, 1].
struct LogLogExtremal {
    double eps = 0.0;
    double L = 0.0;  // log(1/eps)
    RadialProfile v_profile;
    RadialProfile u_profile;

    /// sqrt(L / (32 pi^2)) + 1 / sqrt(8 pi^2 L), the value at the origin.
    [[nodiscard]] double sup_closed_form() const {
        constexpr double pi2 = std::numbers::pi * std::numbers::pi;
        return std::sqrt(L / (32.0 * pi2)) + 1.0 / std::sqrt(8.0 * pi2 * L);
    }
    /// 2 sup |v'| = 2 / (pi sqrt(2 eps^{1/2} L)), attained at r = eps^{1/4} / 2.
    [[nodiscard]] double lipschitz_closed_form() const {
        return 2.0 / (std::numbers::pi * std::sqrt(2.0 * std::exp(-0.5 * L) * L));
    }
};

namespace detail {

inline LogLogExtremal build_extremal_from_L(double L) {
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    LogLogExtremal e;
    e.L = L;
    e.eps = std::exp(-L);
    const double s1 = std::sqrt(8.0 * pi2 * L) * std::exp(-0.5 * L);  // sqrt(8 pi^2 eps L)
    const double s2 = std::sqrt(2.0 * pi2 * L);
    const double A = std::sqrt(L / (32.0 * pi2)) + 1.0 / std::sqrt(8.0 * pi2 * L);
    const double rho = std::exp(-0.25 * L);  // eps^{1/4}
    std::vector<Segment> v{
        {0.0, rho, PolynomialForm{{{0, A}, {2, -1.0 / s1}}}},
        {rho, 1.0, BiharmonicLogForm{0.0, 0.0, 0.0, -1.0 / s2}},
        {1.0, 2.0, PolynomialForm{{{0, 4.0 / s2}, {1, -8.0 / s2}, {2, 5.0 / s2}, {3, -1.0 / s2}}}},
    };
    e.v_profile = RadialProfile(std::move(v), true, true);
    e.u_profile = e.v_profile.dilated(2.0);
    return e;
}

} // namespace detail

/// Builds v_eps and u_eps for 1e-12 <= eps < 1/e.
inline LogLogExtremal build_loglog_extremal(double eps) {
    if (!(eps >= tol::eps_floor && eps < std::exp(-1.0)))
        throw DomainError("build_loglog_extremal: eps must lie in [1e-12, 1/e)");
    auto e = detail::build_extremal_from_L(std::log(1.0 / eps));
    e.eps = eps;
    return e;
}

struct LogLogQuotient {
    double eps = 0.0;
    double L = 0.0;
    double sup = 0.0;
    double lap_sq = 0.0;
    double lip = 0.0;
    double holder = 0.0;
    double N_alpha = 0.0;
    double quotient = 0.0;
};

namespace detail {

inline LogLogQuotient quotient_of(const LogLogExtremal& e, double alpha, double C0) {
    LogLogQuotient q;
    q.eps = e.eps;
    q.L = e.L;
    q.sup = sup_norm(e.u_profile).value;
    q.lap_sq = laplacian_l2_sq(e.u_profile);
    q.lip = lipschitz_seminorm(e.u_profile);
    q.holder = holder_seminorm(e.u_profile, alpha);
    q.N_alpha = q.holder / std::sqrt(q.lap_sq);
    const double inner = q.N_alpha * std::sqrt(std::log(2.0 * std::numbers::e + q.N_alpha));
    q.quotient = q.lap_sq / (q.sup * q.sup) * std::log(std::exp(3.0) + C0 * inner);
    return q;
}

} // namespace detail

/// ||Delta u_eps||^2 / ||u_eps||_inf^2 * log[e^3 + C0 N sqrt(log(2e + N))] with every
/// norm measured on the profile.
inline LogLogQuotient loglog_quotient(double eps, double alpha, double C0) {
    detail::require_alpha(alpha);
    if (!(C0 > 0.0)) throw DomainError("loglog_quotient: C0 must be positive");
    return detail::quotient_of(build_loglog_extremal(eps), alpha, C0);
}

/// Same quotient parametrized by L = log(1/eps), for L beyond the eps floor
/// (up to about 700, where eps is still a normal double).
inline LogLogQuotient loglog_quotient_at_L(double L, double alpha, double C0) {
    detail::require_alpha(alpha);
    if (!(L > 1.0 && L <= 700.0)) throw DomainError("loglog_quotient_at_L: L must lie in (1, 700]");
    if (!(C0 > 0.0)) throw DomainError("loglog_quotient_at_L: C0 must be positive");
    return detail::quotient_of(detail::build_extremal_from_L(L), alpha, C0);
}

/// One term of the sequence x_n = 1/n showing that lambda = 1/(8 pi^2 alpha) fails.
struct SharpnessSequence {
    double alpha = 0.0;
    long long n = 0;
    double x_n = 0.0;
    double a_n = 0.0;
    double D_n = 0.0, b_n = 0.0, c_n = 0.0;
    RadialProfile u_n;
    double g_n = 0.0;
    double H_n = 0.0;           // D_n^2 g_n log(n^{alpha/2} + 1/sqrt(g_n))
    double lap_sq = 0.0;        // quadrature ||Delta u_n||^2
    double holder = 0.0;        // measured seminorm
    double H_n_measured = 0.0;  // lap_sq log(n^{alpha/2} + holder / sqrt(lap_sq))
    double sup = 0.0;
    double sup_argmax = 0.0;
};

inline SharpnessSequence sharpness_term(double alpha, long long n) {
    detail::require_alpha(alpha);
    if (n < 2) throw DomainError("sharpness_term: n must be >= 2");
    SharpnessSequence s;
    s.alpha = alpha;
    s.n = n;
    s.x_n = 1.0 / static_cast<double>(n);
    s.a_n = std::sqrt(s.x_n);
    const auto m = coefficients_from_contact(alpha, s.x_n);
    s.D_n = m.D;
    s.b_n = m.b;
    s.c_n = m.c;
    s.u_n = minimizer_profile(m);
    s.g_n = g_of_x(alpha, s.x_n);
    const double lead = 0.5 * alpha * std::log(static_cast<double>(n));
    s.H_n = s.D_n * s.D_n * s.g_n * detail::logaddexp(lead, -0.5 * std::log(s.g_n));
    s.lap_sq = laplacian_l2_sq(s.u_n);
    s.holder = holder_seminorm(s.u_n, alpha);
    s.H_n_measured = s.lap_sq * detail::logaddexp(lead, std::log(s.holder / std::sqrt(s.lap_sq)));
    const auto sup = sup_norm(s.u_n);
    s.sup = sup.value;
    s.sup_argmax = sup.argmax;
    return s;
}

} // namespace sharplog
