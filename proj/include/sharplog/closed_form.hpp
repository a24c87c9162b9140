#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sharplog/errors.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/quadrature.hpp"
#include "sharplog/tolerances.hpp"

namespace sharplog {

namespace detail {

inline void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

inline void require_open_x(double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must lie in (0, 1)");
}

// y - log(1 + y) and (1 + y) log(1 + y) - y with x = 1 + y, by series for
// small |y|. Away from 1 the x form is used, since 1 + y rounds to 0 for tiny x.
inline double p_term(double y, double x) {
    if (std::abs(y) < tol::near_one_series) {
        double s = 0.0, yk = y * y;
        for (int k = 2; k < 12; ++k, yk *= y) s += (k % 2 == 0 ? 1.0 : -1.0) * yk / k;
        return s;
    }
    return y - std::log(x);
}

inline double q_term(double y, double x) {
    if (std::abs(y) < tol::near_one_series) {
        double s = 0.0, yk = y * y;
        for (int k = 2; k < 12; ++k, yk *= y) s += (k % 2 == 0 ? 1.0 : -1.0) * yk / (k * (k - 1.0));
        return s;
    }
    return x * std::log(x) - y;
}

inline double logaddexp(double a, double b) {
    if (a == -HUGE_VAL) return b;
    if (b == -HUGE_VAL) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

} // namespace detail

/// Unit-amplitude coefficients: b = D * b_hat(x), c = D * c_hat(x).
inline double b_hat(double alpha, double x) {
    const double w = 1.0 - x;
    return 0.25 * alpha * std::pow(x, 0.5 * alpha) * (alpha * w + 2.0) / (w * w);
}

inline double c_hat(double alpha, double x) {
    const double w = 1.0 - x;
    return -0.25 * alpha * std::pow(x, 0.5 * alpha + 1.0) * ((alpha - 2.0) * w + 2.0) / (w * w);
}

/// b_hat + c_hat = (alpha/4) x^{alpha/2} (alpha + 2 - (alpha - 2) x) / (1 - x), free of the
/// 1/(1-x)^2 cancellation.
inline double bc_hat_sum(double alpha, double x) {
    return 0.25 * alpha * std::pow(x, 0.5 * alpha) * (alpha + 2.0 - (alpha - 2.0) * x) / (1.0 - x);
}

/// Bracket of the amplitude denominator as a function of y = x - 1, for the
/// D that solves the value-matching equation:
/// 4y^2 + alpha(2 - alpha y)(y - log(1+y)) - alpha(2 - (alpha-2) y)((1+y)log(1+y) - y).
inline double h_consistent(double alpha, double y, double x) {
    return 4.0 * y * y + alpha * (2.0 - alpha * y) * detail::p_term(y, x) -
           alpha * (2.0 - (alpha - 2.0) * y) * detail::q_term(y, x);
}

inline double h_consistent(double alpha, double y) { return h_consistent(alpha, y, 1.0 + y); }

/// The same bracket with the sign of the (alpha-2) y term as typeset in the
/// source derivation. Kept for comparison only.
inline double h_printed(double alpha, double y, double x) {
    return 4.0 * y * y + alpha * (2.0 - alpha * y) * detail::p_term(y, x) -
           alpha * ((alpha - 2.0) * y + 2.0) * detail::q_term(y, x);
}

inline double h_printed(double alpha, double y) { return h_printed(alpha, y, 1.0 + y); }

/// Obstacle amplitude D(x) making the two-piece profile C^2 at r0 = sqrt(x).
inline double D_of_x(double alpha, double x) {
    detail::require_alpha(alpha);
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("D(x): x must lie in (0, 1]");
    if (x == 1.0) return 1.0;
    const double y = x - 1.0;
    const double h = h_consistent(alpha, y, x);
    if (!(std::abs(h) > tol::degenerate_denominator))
        throw DegenerateContact("D(x): bracket of the denominator below 1e-30 at x = " + std::to_string(x));
    return 4.0 * y * y / (std::pow(x, 0.5 * alpha) * h);
}

/// D(x) with the typeset bracket (does not satisfy value matching; see h_printed).
inline double D_printed(double alpha, double x) {
    detail::require_alpha(alpha);
    detail::require_open_x(x);
    const double y = x - 1.0;
    return 4.0 * y * y / (std::pow(x, 0.5 * alpha) * h_printed(alpha, y, x));
}

/// Energy density g(x) = ||Delta u*||^2 / D(x)^2. Three evaluation regimes:
/// the closed form for x <= 1/2, a cancellation-free integral form on
/// (1/2, 1 - 1e-3), and the Laurent series in y = x - 1 closer to 1.
inline double g_of_x(double alpha, double x) {
    detail::require_alpha(alpha);
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("g(x): x must lie in (0, 1]");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double a = alpha, a2 = a * a;
    if (x == 1.0) return HUGE_VAL;
    const double y = x - 1.0;
    if (std::abs(y) < tol::near_one_series) {
        const double s = -16.0 * a2 / (3.0 * y) - a * (9.0 * a2 + 8.0 * a - 12.0) / 3.0 -
                         2.0 * a2 * (5.0 * a2 - 16.0) * y / 15.0 -
                         a2 * (5.0 * a2 * a - 30.0 * a2 - 20.0 * a + 96.0) * y * y / 90.0 +
                         a2 * (35.0 * a2 * a - 126.0 * a2 - 140.0 * a + 408.0) * y * y * y / 630.0;
        return pi2 * s;
    }
    if (x > 0.5) {
        // g = pi^2 alpha (alpha+2)^2 x^alpha + 16 pi^2 int_x^1 k(t)^2 / t dt with
        // k(t) = (b_hat + c_hat) - 2 b_hat (1 - t), the t = r^2 form of the outer energy.
        const double s = bc_hat_sum(a, x), bh = b_hat(a, x);
        const GaussRule& rule = gauss_legendre(40);
        CompensatedSum acc;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double w = (1.0 - x) * rule.nodes[i];  // 1 - t
            const double t = 1.0 - w;
            const double k = s - 2.0 * bh * w;
            acc += rule.weights[i] * (1.0 - x) * k * k / t;
        }
        return pi2 * a * (a + 2.0) * (a + 2.0) * std::pow(x, a) + 16.0 * pi2 * acc.value();
    }
    const double w = 1.0 - x;
    const double lx = std::log(x);
    const double t1 = a * (a + 2.0) * (a + 2.0);
    const double q = a + 2.0 - (a - 2.0) * x * x;
    const double t2 = -a2 * lx * q * q / (w * w * w * w);
    const double t3 = 2.0 * a2 / (w * w * w) * (a + 2.0 - a * x) * ((a - 4.0) * x * x + 2.0 * x - a - 2.0);
    return pi2 * std::pow(x, a) * (t1 + t2 + t3);
}

/// g(x) from the typeset closed form everywhere (reference for tests).
inline double g_printed(double alpha, double x) {
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double a = alpha, a2 = a * a, w = 1.0 - x, lx = std::log(x);
    const double q = a + 2.0 - (a - 2.0) * x * x;
    return pi2 * std::pow(x, a) *
           (a * (a + 2.0) * (a + 2.0) - a2 * lx * q * q / (w * w * w * w) +
            2.0 * a2 / (w * w * w) * (a + 2.0 - a * x) * ((a - 4.0) * x * x + 2.0 * x - a - 2.0));
}

/// det of the 2x2 derivative-matching matrix, -(8/r0^5)(r0^2 - 1)^2.
inline double det_A(double r0) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("det_A: r0 must lie in (0, 1)");
    const double w = r0 * r0 - 1.0;
    return -8.0 / std::pow(r0, 5) * w * w;
}

/// The matrix itself, row-major.
inline std::array<double, 4> matrix_A(double r0) {
    const double ir = 1.0 / r0, ir2 = ir * ir;
    return {2.0 * (r0 - ir), 2.0 * ir * (1.0 - ir2), 2.0 * (1.0 + ir2), 2.0 * ir2 * (3.0 * ir2 - 1.0)};
}

/// Parameters of the two-piece minimizer u* over the obstacle set.
struct MinimizerClosedForm {
    double alpha = 0.5;
    double x = 0.25;
    double r0 = 0.5;
    double D = 1.0;
    double b = 0.0;
    double c = 0.0;

    /// Relative residuals of the value, slope and curvature matching at r0.
    [[nodiscard]] std::array<double, 3> matching_residuals() const {
        const double r = r0, lr = std::log(r);
        const double ra = std::pow(r, alpha);
        std::array<double, 3> out{};
        {
            const double lhs = 1.0 - D * ra;
            const double t1 = (r * r - 1.0 - 2.0 * lr) * b, t2 = (1.0 / (r * r) - 1.0 + 2.0 * lr) * c;
            out[0] = std::abs(lhs - t1 - t2) / std::max({1.0, std::abs(t1), std::abs(t2)});
        }
        {
            const double lhs = -alpha * D * ra / r;
            const double t1 = 2.0 * (r - 1.0 / r) * b, t2 = 2.0 / r * (1.0 - 1.0 / (r * r)) * c;
            out[1] = std::abs(lhs - t1 - t2) / std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)});
        }
        {
            const double lhs = -alpha * (alpha - 1.0) * D * ra / (r * r);
            const double t1 = 2.0 * (1.0 + 1.0 / (r * r)) * b, t2 = 2.0 / (r * r) * (3.0 / (r * r) - 1.0) * c;
            out[2] = std::abs(lhs - t1 - t2) / std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)});
        }
        return out;
    }

    /// |u*(1)| and |u*'(1)| of the outer closed form.
    [[nodiscard]] std::array<double, 2> boundary_residuals() const {
        const Jet j = detail::jet_of(biharmonic_log(b, c), 1.0);
        return {std::abs(j.f), std::abs(j.df)};
    }

    [[nodiscard]] double g() const { return g_of_x(alpha, x); }
    [[nodiscard]] double energy() const { return D * D * g(); }
};

/// b, c and D(x) for contact radius r0 = sqrt(x).
inline MinimizerClosedForm coefficients_from_contact(double alpha, double x) {
    detail::require_alpha(alpha);
    detail::require_open_x(x);
    MinimizerClosedForm m;
    m.alpha = alpha;
    m.x = x;
    m.r0 = std::sqrt(x);
    m.D = D_of_x(alpha, x);
    m.b = m.D * b_hat(alpha, x);
    m.c = m.D * c_hat(alpha, x);
    return m;
}

/// The two-piece profile: 1 - D r^alpha on [0, r0], biharmonic-log on [r0, 1].
/// Checks u* >= 1 - D r^alpha on a dense grid of the outer piece.
inline RadialProfile minimizer_profile(const MinimizerClosedForm& m) {
    RadialProfile p({Segment{0.0, m.r0, PowerForm{1.0, -m.D, m.alpha}}, Segment{m.r0, 1.0, biharmonic_log(m.b, m.c)}},
                    true, true);
    constexpr int n = 4000;
    // The outer closed form carries roundoff of order eps (|b| + |c|), which
    // grows like (1 - x)^-2 as the contact radius approaches 1.
    const double slack = tol::contact_gap * std::max(1.0, m.D) +
                         64.0 * std::numeric_limits<double>::epsilon() * (std::abs(m.b) + std::abs(m.c));
    for (int i = 1; i <= n; ++i) {
        const double r = m.r0 + (1.0 - m.r0) * i / n;
        const double gap = p(r) - (1.0 - m.D * std::pow(r, m.alpha));
        if (gap < -slack)
            throw InconsistentParameters("minimizer_profile: u* falls below the obstacle at r = " + std::to_string(r));
    }
    return p;
}

/// The composite energy curves for a fixed alpha.
class EnergyCurves {
public:
    explicit EnergyCurves(double alpha) : alpha_(alpha) { detail::require_alpha(alpha); }

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double g(double x) const { return g_of_x(alpha_, x); }
    [[nodiscard]] double D(double x) const { return D_of_x(alpha_, x); }
    [[nodiscard]] double energy(double x) const {
        const double d = D(x);
        return d * d * g(x);
    }
    /// N_alpha(u*) under the substitution ||u*||_{C^alpha} = D: 1/sqrt(g).
    [[nodiscard]] double N(double x) const { return 1.0 / std::sqrt(g(x)); }

    /// F_C(x) = D^2 g log[e^3 + C sqrt(log(2e + 1/sqrt g) / g)], with C = exp(log_C).
    [[nodiscard]] double F_log(double x, double log_C) const {
        const double gx = g(x);
        if (std::isinf(gx)) return HUGE_VAL;
        const double d = D(x);
        const double s = std::log(2.0 * std::numbers::e + 1.0 / std::sqrt(gx)) / gx;
        return d * d * gx * detail::logaddexp(3.0, log_C + 0.5 * std::log(s));
    }
    [[nodiscard]] double F(double x, double C) const {
        if (!(C > 0.0)) throw DomainError("F_C: C must be positive");
        return F_log(x, std::log(C));
    }

    /// H(x) = D^2 g log(C + 1/sqrt g), with C = exp(log_C).
    [[nodiscard]] double H_log(double x, double log_C) const {
        const double gx = g(x);
        if (std::isinf(gx)) return HUGE_VAL;
        const double d = D(x);
        return d * d * gx * detail::logaddexp(log_C, -0.5 * std::log(gx));
    }
    [[nodiscard]] double H(double x, double C) const {
        if (!(C > 0.0)) throw DomainError("H: C must be positive");
        return H_log(x, std::log(C));
    }

    [[nodiscard]] double h(double y) const {
        if (!(y > -1.0 && y <= 0.0)) throw DomainError("h(y): y must lie in (-1, 0]");
        return h_consistent(alpha_, y);
    }

    /// Small-x equivalents of g and D.
    [[nodiscard]] double g_asymptotic(double x) const {
        constexpr double pi2 = std::numbers::pi * std::numbers::pi;
        const double a = alpha_;
        return pi2 * a * a * (a + 2.0) * (a + 2.0) * std::pow(x, a) * std::log(1.0 / x);
    }
    [[nodiscard]] double D_asymptotic(double x) const {
        const double a = alpha_;
        return 4.0 / (a * (2.0 + a) * std::pow(x, 0.5 * a) * std::log(1.0 / x));
    }

private:
    double alpha_;
};

inline EnergyCurves energy_curves(double alpha) { return EnergyCurves(alpha); }

/// x grid for scans: log-spaced from x_min up to 1/2, then 1 - 2^{-k} toward 1.
struct GridSpec {
    double x_min = 1e-10;
    int points_per_decade = 20;
    int near_one_levels = 20;
    std::vector<double> explicit_points;  // used verbatim when non-empty

    [[nodiscard]] std::vector<double> points() const {
        if (!explicit_points.empty()) {
            auto p = explicit_points;
            std::sort(p.begin(), p.end());
            return p;
        }
        if (!(x_min > 0.0 && x_min < 0.5) || points_per_decade < 1)
            throw DomainError("GridSpec: need 0 < x_min < 1/2 and points_per_decade >= 1");
        std::vector<double> p;
        const double lo = std::log10(x_min), hi = std::log10(0.5);
        const int n = static_cast<int>(std::ceil((hi - lo) * points_per_decade));
        for (int i = 0; i <= n; ++i) p.push_back(std::pow(10.0, lo + (hi - lo) * i / n));
        for (int k = 2; k <= near_one_levels; ++k) p.push_back(1.0 - std::ldexp(1.0, -k));
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        return p;
    }
};

struct ScanRow {
    double x, D, g, F, H;
};

struct ScanResult {
    double alpha = 0.0;
    std::optional<double> lambda;
    std::vector<ScanRow> grid;  // F at C_alpha, H at C_lambda (or C = 1 when lambda is absent)
    double target = 0.0;        // 8 pi^2 alpha
    double x_alpha = 0.0;
    double y_alpha = 0.0;
    double D_at_x_alpha = 0.0;
    double D_inf_alpha = 0.0;   // min of D over the grid on [x_alpha, 1)
    double log_C_trial = 0.0;
    double log_C_alpha = 0.0;
    double C_alpha = 0.0;             // may be +inf when log_C_alpha > 709
    double log_C_alpha_formula = 0.0;  // 1 + e^{8 pi^2 alpha / (D^2 y)} / sqrt(y) with D = D_inf
    double log_C_alpha_printed = 0.0;  // same with D = D(x_alpha)
    std::optional<double> x_lambda, y_lambda, log_C_lambda, C_lambda, min_lambda_H;
    double infimum_estimate = 0.0;    // min over the grid of F_{C_alpha}
    bool D_monotone = true;           // D nonincreasing along the grid
};

namespace detail {

// log(1 + e^k) without overflow.
inline double log_one_plus_exp(double k) { return k > 30.0 ? k + std::log1p(std::exp(-k)) : std::log1p(std::exp(k)); }

} // namespace detail

/// Grid scan certifying F_{C_alpha} >= 8 pi^2 alpha and, with lambda,
/// lambda H(x, C_lambda) >= 1. C_alpha is the larger of the trial constant
/// used to locate x_alpha and the closed-form constant built from y_alpha;
/// every grid value is then checked directly.
inline ScanResult scan_constants(double alpha, std::optional<double> lambda, const GridSpec& spec = GridSpec()) {
    detail::require_alpha(alpha);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double target = 8.0 * pi2 * alpha;
    if (lambda && !(*lambda > 1.0 / target))
        throw DomainError("scan_constants: lambda must exceed 1/(8 pi^2 alpha)");
    std::vector<double> xs = spec.points();
    std::erase_if(xs, [](double x) { return !(x > 0.0 && x < 1.0); });
    if (xs.size() < 2 || xs.front() > 1e-3)
        throw ScanFailure("scan_constants: grid must contain at least two points in (0,1) and reach x <= 1e-3");

    const EnergyCurves curves(alpha);
    std::vector<double> Dv(xs.size()), gv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Dv[i] = curves.D(xs[i]);
        gv[i] = curves.g(xs[i]);
    }
    ScanResult out;
    out.alpha = alpha;
    out.lambda = lambda;
    out.target = target;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (Dv[i] > Dv[i - 1] * (1.0 + 1e-14)) out.D_monotone = false;

    const double margin = 1.0 + tol::scan_margin;
    // Smallest trial constant e^k whose curve clears the level with margin on
    // every grid point up to x_alpha >= 1e-3 (the end of the small-x regime).
    const double regime_end = std::min(1e-3, xs[xs.size() - 2]);
    auto locate = [&](auto&& curve, double level, double& log_c) -> std::size_t {
        for (log_c = 0.0; log_c <= 700.0; log_c += 1.0) {
            if (curve(xs.front(), log_c) < level * margin) continue;
            std::size_t k = 0;
            while (k + 1 < xs.size() && curve(xs[k + 1], log_c) >= level * margin) ++k;
            if (xs[k] >= regime_end) return k;
        }
        throw ScanFailure("scan_constants: margin never achieved on [" + std::to_string(xs.front()) + ", " +
                          std::to_string(regime_end) + "]");
    };
    auto lower_bounds = [&](std::size_t k, double& y, double& dinf) {
        y = HUGE_VAL;
        dinf = HUGE_VAL;
        for (std::size_t i = k; i < xs.size(); ++i) {
            y = std::min(y, gv[i]);
            dinf = std::min(dinf, Dv[i]);
        }
        y *= 1.0 - tol::scan_margin;
    };

    {
        double log_c = 0.0;
        const std::size_t k = locate([&](double x, double lc) { return curves.F_log(x, lc); }, target, log_c);
        out.log_C_trial = log_c;
        out.x_alpha = xs[k];
        out.D_at_x_alpha = Dv[k];
        lower_bounds(k, out.y_alpha, out.D_inf_alpha);
        const double y = out.y_alpha;
        out.log_C_alpha_formula =
            detail::log_one_plus_exp(target / (out.D_inf_alpha * out.D_inf_alpha * y) - 0.5 * std::log(y));
        out.log_C_alpha_printed =
            detail::log_one_plus_exp(target / (out.D_at_x_alpha * out.D_at_x_alpha * y) - 0.5 * std::log(y));
        out.log_C_alpha = std::max(out.log_C_alpha_formula, out.log_C_trial);
        out.C_alpha = std::exp(out.log_C_alpha);
    }
    if (lambda) {
        const double level = 1.0 / *lambda;
        double log_c = 0.0;
        const std::size_t k = locate([&](double x, double lc) { return curves.H_log(x, lc); }, level, log_c);
        out.x_lambda = xs[k];
        double y = 0.0, dinf = 0.0;
        lower_bounds(k, y, dinf);
        out.y_lambda = y;
        const double lf = detail::log_one_plus_exp(1.0 / (*lambda * dinf * dinf * y));
        out.log_C_lambda = std::max(lf, log_c);
        out.C_lambda = std::exp(*out.log_C_lambda);
    }

    out.infimum_estimate = HUGE_VAL;
    double min_lh = HUGE_VAL;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ScanRow row{xs[i], Dv[i], gv[i], curves.F_log(xs[i], out.log_C_alpha),
                    curves.H_log(xs[i], out.log_C_lambda.value_or(0.0))};
        out.infimum_estimate = std::min(out.infimum_estimate, row.F);
        if (lambda) min_lh = std::min(min_lh, *lambda * row.H);
        out.grid.push_back(row);
    }
    if (lambda) out.min_lambda_H = min_lh;
    if (out.infimum_estimate < target)
        throw ScanFailure("scan_constants: F_{C_alpha} below 8 pi^2 alpha on the grid (min " +
                          std::to_string(out.infimum_estimate) + ")");
    if (lambda && min_lh < 1.0)
        throw ScanFailure("scan_constants: lambda H(x, C_lambda) below 1 on the grid (min " + std::to_string(min_lh) + ")");
    return out;
}

struct ContactRoot {
    double x = 0.0;
    bool multiple_roots = false;
    int sign_changes = 0;
};

/// Inverts D(x) = D_target for D_target > 1: log-spaced bracketing scan over
/// (0, 1), then bisection on the bracket with the largest x.
inline ContactRoot contact_from_gap(double alpha, double D_target) {
    detail::require_alpha(alpha);
    if (!(D_target > 1.0)) throw DomainError("contact_from_gap: D_target must exceed 1");
    std::vector<double> xs;
    for (double e = -300.0; e < -2.0; e += 0.05) xs.push_back(std::pow(10.0, e));
    for (int i = 1; i < 1000; ++i) xs.push_back(0.01 + 0.98 * i / 1000.0);
    for (int k = 1; k <= 40; ++k) xs.push_back(1.0 - 0.01 * std::pow(2.0, -0.5 * k));
    std::sort(xs.begin(), xs.end());
    auto f = [&](double x) { return D_of_x(alpha, x) - D_target; };
    ContactRoot out;
    double lo = 0.0, hi = 0.0;
    double prev = f(xs.front());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double cur = f(xs[i]);
        if ((prev > 0.0) != (cur > 0.0) || cur == 0.0) {
            ++out.sign_changes;
            lo = xs[i - 1];
            hi = xs[i];
        }
        prev = cur;
    }
    if (out.sign_changes == 0) throw BracketError("contact_from_gap: no sign change of D(x) - D_target found");
    out.multiple_roots = out.sign_changes > 1;
    double flo = f(lo);
    for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
        const double mid = lo < 1e-3 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    out.x = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
    return out;
}

} // namespace sharplog
