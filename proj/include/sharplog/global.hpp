#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sharplog/closed_form.hpp"
#include "sharplog/dyadic.hpp"
#include "sharplog/errors.hpp"
#include "sharplog/norms.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/quadrature.hpp"

namespace sharplog {

// ---------------------------------------------------------------------------
// Whole-space cutoff. Delta phi is prescribed as a negative flat top on
// [plateau, split] followed by a positive flat top on [split, 4], each with
// cubic smoothstep ramps. The positive amplitude cancels the flux, so phi' = 0
// at 4, and the overall scale makes phi drop from 1 to 0. Integrating
// r^3 phi' = int Delta phi s^3 twice gives phi as exact Laurent polynomials.

struct CutoffShape {
    double plateau = 1.0;         // phi = 1 on [0, plateau]
    double ramp = 0.2;            // ramp length as a fraction of each flat top
    std::optional<double> split;  // sign change of Delta phi; optimized when absent
    int check_points = 10000;
};

struct GlobalCutoff {
    double mu = 1.0;
    CutoffShape shape;
    double split = 0.0;
    double amplitude_in = 0.0;   // |Delta phi| on the inner flat top
    double amplitude_out = 0.0;  // Delta phi on the outer flat top
    RadialProfile phi;           // on [0, 4]
    RadialProfile phi_mu;        // phi(mu r / 2) on [0, 8 / mu]
    double max_gradient = 0.0;   // grid maxima over (0, 4]
    double max_laplacian = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;

    [[nodiscard]] double plateau_radius() const { return 2.0 * shape.plateau / mu; }
    [[nodiscard]] double support_radius() const { return 8.0 / mu; }
    [[nodiscard]] Jet jet_mu(double r) const { return r > support_radius() ? Jet{} : phi_mu.jet(r); }
};

namespace detail {

using Poly = std::vector<double>;  // ascending powers of r

inline double poly_eval(const Poly& p, double r) {
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * r + *it;
    return v;
}

// p(a0 + a1 r)
inline Poly poly_compose_linear(const Poly& p, double a0, double a1) {
    Poly out{0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        Poly next(out.size() + 1, 0.0);
        for (std::size_t k = 0; k < out.size(); ++k) {
            next[k] += a0 * out[k];
            next[k + 1] += a1 * out[k];
        }
        next[0] += *it;
        out = std::move(next);
    }
    return out;
}

// 3 t^2 - 2 t^3. Higher-order steps expand into Laurent terms whose
// cancellation near r = 4 costs more than 1e-9 in phi.
inline const Poly& smoothstep_poly() {
    static const Poly s{0.0, 0.0, 3.0, -2.0};
    return s;
}

struct LapPiece {
    double lo = 0.0;
    double hi = 0.0;
    Poly p;  // Delta phi on [lo, hi]
};

// Flat top of height `sign` on [lo, hi] with ramps of length frac (hi - lo).
inline void flat_top(std::vector<LapPiece>& out, double lo, double hi, double frac, double sign) {
    const double L = frac * (hi - lo);
    Poly up = poly_compose_linear(smoothstep_poly(), -lo / L, 1.0 / L);
    Poly down = poly_compose_linear(smoothstep_poly(), hi / L, -1.0 / L);
    for (auto& c : up) c *= sign;
    for (auto& c : down) c *= sign;
    out.push_back({lo, lo + L, std::move(up)});
    if (frac < 0.5) out.push_back({lo + L, hi - L, Poly{sign}});
    out.push_back({frac < 0.5 ? hi - L : lo + L, hi, std::move(down)});
}

// int_lo^hi p(s) s^3 ds
inline double flux(const LapPiece& q) {
    double v = 0.0;
    for (std::size_t k = 0; k < q.p.size(); ++k)
        v += q.p[k] * (std::pow(q.hi, k + 4.0) - std::pow(q.lo, k + 4.0)) / (k + 4.0);
    return v;
}

// phi from Delta phi, with phi = 1 and phi' = 0 on [0, plateau].
inline RadialProfile integrate_cutoff(double plateau, const std::vector<LapPiece>& pieces, double scale) {
    std::vector<Segment> segs{{0.0, plateau, PolynomialForm{{{0, 1.0}}}}};
    double flux_lo = 0.0, value_lo = 1.0;
    for (const auto& q : pieces) {
        // r^3 phi' = flux_lo + int_lo^r p s^3 = sum_k c_k r^k
        Poly c(q.p.size() + 4, 0.0);
        for (std::size_t k = 0; k < q.p.size(); ++k) c[k + 4] = scale * q.p[k] / (k + 4.0);
        c[0] = flux_lo - poly_eval(c, q.lo);
        // phi = D + sum_k c_k r^{k-2} / (k-2), no k = 1..3 terms
        PolynomialForm form;
        for (std::size_t k = 0; k < c.size(); ++k)
            if (k != 1 && k != 2 && k != 3 && c[k] != 0.0) form.terms.emplace_back(static_cast<int>(k) - 2, c[k] / (k - 2.0));
        Segment s{q.lo, q.hi, form};
        const double D = value_lo - s.value(q.lo);
        std::get<PolynomialForm>(s.form).terms.emplace_back(0, D);
        value_lo = s.value(q.hi);
        flux_lo = poly_eval(c, q.hi);
        segs.push_back(std::move(s));
    }
    return RadialProfile(std::move(segs));
}

struct CutoffBuild {
    RadialProfile phi;
    double amp_in = 0.0;
    double amp_out = 0.0;
};

inline CutoffBuild cutoff_for_split(double plateau, double split, double ramp) {
    std::vector<LapPiece> inner, outer;
    flat_top(inner, plateau, split, ramp, -1.0);
    flat_top(outer, split, 4.0, ramp, 1.0);
    double fin = 0.0, fout = 0.0;
    for (const auto& q : inner) fin += flux(q);
    for (const auto& q : outer) fout += flux(q);
    const double B = -fin / fout;
    for (auto& q : outer)
        for (auto& c : q.p) c *= B;
    std::vector<LapPiece> all = inner;
    all.insert(all.end(), outer.begin(), outer.end());
    const double drop = 1.0 - integrate_cutoff(plateau, all, 1.0).segments().back().value(4.0);
    CutoffBuild b;
    b.phi = integrate_cutoff(plateau, all, 1.0 / drop);
    b.amp_in = 1.0 / drop;
    b.amp_out = B / drop;
    return b;
}

struct CutoffBounds {
    double grad = 0.0;
    double lap = 0.0;
    double min = 1.0;
    double max = 0.0;
};

inline CutoffBounds cutoff_bounds(const RadialProfile& phi, int n) {
    CutoffBounds b;
    for (int i = 1; i <= n; ++i) {
        const double r = 4.0 * i / n;
        const Jet j = phi.jet(r);
        b.grad = std::max(b.grad, std::abs(j.df));
        b.lap = std::max(b.lap, std::abs(j.laplacian(r)));
        b.min = std::min(b.min, j.f);
        b.max = std::max(b.max, j.f);
    }
    return b;
}

} // namespace detail

/// The cutoff phi with phi = 1 near 0, supp phi in B_4, |phi'| <= 1 and
/// |Delta phi| <= 1, rescaled to phi_mu = phi(mu . / 2). When no split is given
/// it is chosen to minimize max(|phi'|, |Delta phi|).
inline GlobalCutoff build_phi_mu(double mu, const CutoffShape& shape = {}) {
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("build_phi_mu: mu must lie in (0, 1]");
    if (!(shape.plateau > 0.0 && shape.plateau < 4.0)) throw DomainError("build_phi_mu: plateau must lie in (0, 4)");
    if (!(shape.ramp > 0.0 && shape.ramp <= 0.5)) throw DomainError("build_phi_mu: ramp fraction must lie in (0, 1/2]");
    if (shape.check_points < 100) throw DomainError("build_phi_mu: too few check points");
    const double a = shape.plateau;
    double split = 0.0;
    if (shape.split) {
        split = *shape.split;
        if (!(split > a && split < 4.0)) throw DomainError("build_phi_mu: split must lie in (plateau, 4)");
    } else {
        auto cost = [&](double b) {
            const auto c = detail::cutoff_for_split(a, b, shape.ramp);
            const auto bd = detail::cutoff_bounds(c.phi, 2000);
            return std::max(bd.grad, bd.lap);
        };
        const double lo = a + 0.05 * (4.0 - a), hi = 4.0 - 0.05 * (4.0 - a);
        constexpr int coarse = 48;
        int best = 0;
        double best_cost = HUGE_VAL;
        for (int k = 0; k <= coarse; ++k) {
            const double c = cost(lo + (hi - lo) * k / coarse);
            if (c < best_cost) {
                best_cost = c;
                best = k;
            }
        }
        const double step = (hi - lo) / coarse;
        const auto [x, fx] =
            detail::golden_max([&](double b) { return -cost(b); }, std::max(lo, lo + (best - 1) * step),
                               std::min(hi, lo + (best + 1) * step), 40);
        split = -fx <= best_cost ? x : lo + best * step;
    }
    const auto c = detail::cutoff_for_split(a, split, shape.ramp);
    GlobalCutoff g;
    g.mu = mu;
    g.shape = shape;
    g.split = split;
    g.amplitude_in = c.amp_in;
    g.amplitude_out = c.amp_out;
    g.phi = c.phi;
    const auto bd = detail::cutoff_bounds(g.phi, shape.check_points);
    g.max_gradient = bd.grad;
    g.max_laplacian = bd.lap;
    g.min_value = bd.min;
    g.max_value = bd.max;
    constexpr double slack = 1e-9;  // rounding of the Laurent form near r = 4
    if (g.max_gradient > 1.0 + slack || g.max_laplacian > 1.0 + slack || g.min_value < -slack ||
        g.max_value > 1.0 + slack)
        throw ConstructionError("build_phi_mu: constraint check failed (max |phi'| = " +
                                std::to_string(g.max_gradient) + ", max |Delta phi| = " +
                                std::to_string(g.max_laplacian) + ")");
    g.phi_mu = g.phi.dilated(mu / 2.0);
    return g;
}

// ---------------------------------------------------------------------------

struct MuNorm {
    double mu = 0.0;
    double lap_sq = 0.0;   // ||Delta u||^2
    double l2_sq = 0.0;    // ||u||^2
    double grad_sq = 0.0;  // ||grad u||^2

    [[nodiscard]] double h1_sq() const { return l2_sq + grad_sq; }
    [[nodiscard]] double value_sq() const { return (1.0 + 3.0 * mu) * lap_sq + 3.0 * mu * h1_sq(); }
    [[nodiscard]] double value() const { return std::sqrt(value_sq()); }
};

inline MuNorm mu_norm(double mu, double lap_sq, double l2_sq, double grad_sq) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu_norm: mu must lie in [0, 1]");
    return {mu, lap_sq, l2_sq, grad_sq};
}

inline MuNorm mu_norm(const RadialProfile& u, double mu) {
    return mu_norm(mu, laplacian_l2_sq(u), weighted_l2_norm_sq(u), gradient_l2_sq(u));
}

/// ||u||_{C^alpha} = ||u||_inf + [u]_alpha.
inline double full_holder_norm(const RadialProfile& u, double alpha) {
    return sup_norm(u).value + holder_seminorm(u, alpha);
}

// ---------------------------------------------------------------------------
// Ball rescaling.

struct RescaleReport {
    double R = 1.0;
    double alpha = 0.0;
    double lambda = 0.0;
    double log_C_lambda = 0.0;
    double log_C_alpha = 0.0;
    double sup = 0.0, sup_R = 0.0;
    double lap = 0.0, lap_R = 0.0;
    double holder = 0.0, holder_R = 0.0;
    double n_alpha = 0.0, n_alpha_R = 0.0;
    double lap_ratio = 0.0;     // ||Delta u_R|| / ||Delta u||
    double holder_ratio = 0.0;  // R^alpha [u_R]_alpha / [u]_alpha
    double n_ratio = 0.0;       // R^alpha N(u_R) / N(u)
    // ||u||^2 <= lambda ||Delta u||^2 log(C_lambda + R^alpha N(u_R)), on B_1 and on B_R
    double lhs = 0.0, rhs = 0.0, lhs_unit = 0.0, rhs_unit = 0.0;
    double log_margin = 0.0, log_margin_unit = 0.0;  // log(rhs / lhs)
    // sharp double-log form: lambda = 1/(8 pi^2 alpha), log[e^3 + C_alpha X sqrt(log(2e + X))]
    double loglog_rhs = 0.0, loglog_log_margin = 0.0;
    bool holds = false;
    bool loglog_holds = false;
};

/// u on B_1 is compared with u_R(x) = u(x / R) on B_R.
inline RescaleReport rescale_check(const RadialProfile& u, double R, double alpha, std::optional<double> lambda = {}) {
    detail::require_alpha(alpha);
    if (!(R > 0.0)) throw DomainError("rescale_check: R must be positive");
    if (std::abs(u.radius() - 1.0) > 1e-15) throw DomainError("rescale_check: u must live on the unit ball");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double lam = lambda.value_or(1.5 / (8.0 * pi2 * alpha));
    const ScanResult scan = scan_constants(alpha, lam);
    RescaleReport r;
    r.R = R;
    r.alpha = alpha;
    r.lambda = lam;
    r.log_C_lambda = *scan.log_C_lambda;
    r.log_C_alpha = scan.log_C_alpha;
    const RadialProfile uR = u.dilated(1.0 / R);
    r.sup = sup_norm(u).value;
    r.sup_R = sup_norm(uR).value;
    r.lap = std::sqrt(laplacian_l2_sq(u));
    r.lap_R = std::sqrt(laplacian_l2_sq(uR, QuadratureScheme(R)));
    r.holder = holder_seminorm(u, alpha);
    r.holder_R = holder_seminorm(uR, alpha);
    if (!(r.lap > 0.0 && r.holder > 0.0)) throw DomainError("rescale_check: degenerate profile");
    r.n_alpha = r.holder / r.lap;
    r.n_alpha_R = r.holder_R / r.lap_R;
    const double Ra = std::pow(R, alpha);
    r.lap_ratio = r.lap_R / r.lap;
    r.holder_ratio = Ra * r.holder_R / r.holder;
    r.n_ratio = Ra * r.n_alpha_R / r.n_alpha;

    auto side = [&](double sup, double lap, double x, double& lhs, double& rhs) {
        lhs = sup * sup;
        rhs = lam * lap * lap * detail::logaddexp(r.log_C_lambda, std::log(x));
        return std::log(rhs) - std::log(lhs);
    };
    r.log_margin_unit = side(r.sup, r.lap, r.n_alpha, r.lhs_unit, r.rhs_unit);
    r.log_margin = side(r.sup_R, r.lap_R, Ra * r.n_alpha_R, r.lhs, r.rhs);
    r.holds = r.log_margin >= 0.0;

    const double X = Ra * r.n_alpha_R;
    const double inner = detail::logaddexp(
        3.0, r.log_C_alpha + std::log(X) + 0.5 * std::log(std::log(2.0 * std::numbers::e + X)));
    r.loglog_rhs = r.lap_R * r.lap_R * inner / (8.0 * pi2 * alpha);
    r.loglog_log_margin = std::log(r.loglog_rhs) - std::log(r.lhs);
    r.loglog_holds = r.loglog_log_margin >= 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Whole-space log estimate through u_mu = phi_mu u.

/// The six pieces of ||Delta(phi u)||^2 = ||u Delta phi||^2 + ||phi Delta u||^2
/// + 4 ||phi' u'||^2 + 2 (I) + 4 (II) + 4 (III).
struct CrossTerms {
    double t1 = 0.0;   // ||Delta phi_mu u||^2
    double t2 = 0.0;   // ||phi_mu Delta u||^2
    double t3 = 0.0;   // 4 ||grad phi_mu grad u||^2
    double i = 0.0;    // int Delta phi_mu u phi_mu Delta u
    double ii = 0.0;   // int Delta phi_mu u grad phi_mu grad u
    double iii = 0.0;  // int phi_mu Delta u grad phi_mu grad u

    [[nodiscard]] double sum() const { return t1 + t2 + t3 + 2.0 * i + 4.0 * ii + 4.0 * iii; }
    [[nodiscard]] std::array<double, 6> values() const { return {t1, t2, t3, i, ii, iii}; }
};

/// Printed bounds for the pieces: mu^4/16 ||u||^2, ||Delta u||^2, mu^2 ||grad u||^2,
/// mu^2/8 (||u||^2 + ||Delta u||^2), mu^3/16 (||u||^2 + ||grad u||^2),
/// mu/4 (||Delta u||^2 + ||grad u||^2).
inline CrossTerms cross_term_bounds(double mu, double l2_sq, double grad_sq, double lap_sq) {
    CrossTerms b;
    b.t1 = std::pow(mu, 4) / 16.0 * l2_sq;
    b.t2 = lap_sq;
    b.t3 = mu * mu * grad_sq;
    b.i = mu * mu / 8.0 * (l2_sq + lap_sq);
    b.ii = std::pow(mu, 3) / 16.0 * (l2_sq + grad_sq);
    b.iii = mu / 4.0 * (lap_sq + grad_sq);
    return b;
}

/// Coefficients (in powers of mu) with which each squared norm enters the
/// summed printed bounds and ||u||_mu^2; `slack` is their difference.
struct CoefficientCheck {
    static constexpr std::size_t degree = 5;
    using Coeffs = std::array<double, degree>;
    std::array<Coeffs, 3> bound{};  // for ||u||^2, ||grad u||^2, ||Delta u||^2
    std::array<Coeffs, 3> norm{};
    std::array<Coeffs, 3> slack{};
    std::array<double, 3> certified_min{};  // lower bound of slack / mu on (0, 1]
    bool holds = false;
};

/// Exact bookkeeping of 2(I) + 4(II) + 4(III) plus the leading terms against
/// (1 + 3 mu) ||Delta u||^2 + 3 mu ||u||_{H^1}^2. A polynomial q with q(0) = 0
/// is certified nonnegative on (0, 1] through q(mu)/mu >= c_1 - sum of the
/// negative higher coefficients.
inline CoefficientCheck cross_term_coefficients() {
    CoefficientCheck c;
    auto& [bu, bg, bl] = c.bound;
    bu[4] += 1.0 / 16.0;                     // ||u Delta phi||^2
    bl[0] += 1.0;                            // ||phi Delta u||^2
    bg[2] += 1.0;                            // 4 ||phi' u'||^2
    bu[2] += 2.0 / 8.0, bl[2] += 2.0 / 8.0;  // 2 (I)
    bu[3] += 4.0 / 16.0, bg[3] += 4.0 / 16.0;  // 4 (II)
    bl[1] += 4.0 / 4.0, bg[1] += 4.0 / 4.0;    // 4 (III)
    auto& [nu, ng, nl] = c.norm;
    nl[0] = 1.0, nl[1] = 3.0;
    nu[1] = 3.0;
    ng[1] = 3.0;
    c.holds = true;
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t p = 0; p < CoefficientCheck::degree; ++p) c.slack[k][p] = c.norm[k][p] - c.bound[k][p];
        if (c.slack[k][0] != 0.0) c.holds = false;
        double m = c.slack[k][1];
        for (std::size_t p = 2; p < CoefficientCheck::degree; ++p) m -= std::max(0.0, -c.slack[k][p]);
        c.certified_min[k] = m;
        if (!(m >= 0.0)) c.holds = false;
    }
    return c;
}

struct GlobalLogReport {
    double alpha = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double log_C_lambda = 0.0;
    double plateau_radius = 0.0;
    double support_radius = 0.0;
    double sup = 0.0;
    double sup_mu = 0.0;
    double holder = 0.0;       // [u]_alpha
    double c_alpha = 0.0;      // ||u||_{C^alpha} = sup + holder
    double holder_mu = 0.0;    // [u_mu]_alpha
    MuNorm norm;
    double lap_mu_sq = 0.0;    // ||Delta u_mu||^2 by direct quadrature
    CrossTerms terms;
    CrossTerms bounds;
    std::array<bool, 6> term_holds{};
    double expansion_residual = 0.0;  // |terms.sum() - lap_mu_sq| / lap_mu_sq
    bool cross_bounds_hold = false;
    bool absorbed = false;         // ||Delta u_mu||^2 <= ||u||_mu^2
    bool sup_preserved = false;    // ||u_mu||_inf = ||u||_inf
    bool holder_preserved = false; // [u_mu]_alpha <= ||u||_{C^alpha}
    bool coefficients_hold = false;
    bool monotone = false;
    double intermediate_rhs = 0.0;  // lambda ||Delta u_mu||^2 log(C_lambda + 8^a mu^-a ||u||_Ca / ||Delta u_mu||)
    double lhs = 0.0;               // ||u||_inf^2
    double rhs = 0.0;               // lambda ||u||_mu^2 log(C_lambda + 8^a mu^-a ||u||_Ca / ||u||_mu)
    double margin = 0.0;            // rhs / lhs
    bool holds = false;
};

namespace detail {

// Breakpoints of u (including sampled nodes) and of phi_mu on [0, top].
inline std::vector<double> product_breaks(const RadialProfile& u, const GlobalCutoff& g, double top) {
    std::vector<double> b{0.0, top};
    for (const auto& s : u.segments()) {
        if (s.lo < top) b.push_back(s.lo);
        if (const auto* sm = std::get_if<SampledForm>(&s.form))
            for (double x : sm->r)
                if (x < top) b.push_back(x);
    }
    for (double x : g.phi_mu.breakpoints())
        if (x < top) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// Jet of phi_mu u.
inline Jet product_jet(const Jet& p, const Jet& u) {
    return {p.f * u.f, p.df * u.f + p.f * u.df, p.d2f * u.f + 2.0 * p.df * u.df + p.f * u.d2f};
}

// Exponent of (Delta u)^2 r^3 at the origin.
inline double product_lead(const RadialProfile& u) {
    const Segment& s = u.segments().front();
    if (std::holds_alternative<SampledForm>(s.form)) return 3.0;
    const auto l = laplacian_segment(s).leading_at_zero();
    return std::min(3.0, 2.0 * l.exponent + 3.0);
}

// u_mu as a profile: exact segments of u inside the plateau, Hermite samples beyond.
inline RadialProfile product_profile(const RadialProfile& u, const GlobalCutoff& g, int samples) {
    const double top = std::min(u.radius(), g.support_radius());
    const double P = g.plateau_radius();
    std::vector<Segment> segs;
    for (const auto& s : u.segments()) {
        if (s.lo >= std::min(P, top)) break;
        segs.push_back({s.lo, std::min(s.hi, std::min(P, top)), s.form});
    }
    if (top > P) {
        std::vector<double> r;
        for (int k = 0; k <= samples; ++k) r.push_back(P + (top - P) * k / samples);
        for (double x : product_breaks(u, g, top))
            if (x > P) r.push_back(x);
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        std::vector<double> v(r.size()), d(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Jet j = product_jet(g.jet_mu(r[i]), u.jet(r[i]));
            v[i] = j.f;
            d[i] = j.df;
        }
        segs.push_back({P, top, SampledForm{std::move(r), std::move(v), std::move(d)}});
    }
    return RadialProfile(std::move(segs));
}

} // namespace detail

/// Chain for the whole-space log estimate: direct ||Delta u_mu||^2,
/// its expansion, every printed cross-term bound, the absorption into ||u||_mu
/// and both sides of the final inequality with C_lambda from the scan.
inline GlobalLogReport verify_global_log(const RadialProfile& u, double alpha, double lambda, double mu,
                                         const CutoffShape& shape = {}) {
    detail::require_alpha(alpha);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    if (!(lambda > 1.0 / (8.0 * pi2 * alpha))) throw DomainError("verify_global_log: lambda must exceed 1/(8 pi^2 alpha)");
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("verify_global_log: mu must lie in (0, 1]");
    const GlobalCutoff g = build_phi_mu(mu, shape);
    GlobalLogReport r;
    r.alpha = alpha;
    r.lambda = lambda;
    r.mu = mu;
    r.log_C_lambda = *scan_constants(alpha, lambda).log_C_lambda;
    r.plateau_radius = g.plateau_radius();
    r.support_radius = g.support_radius();
    r.norm = mu_norm(u, mu);
    r.sup = sup_norm(u).value;
    r.holder = holder_seminorm(u, alpha);
    r.c_alpha = r.sup + r.holder;

    // Products on the union of breakpoints.
    const double top = std::min(u.radius(), g.support_radius());
    const auto br = detail::product_breaks(u, g, top);
    const QuadratureScheme q(top);
    const double lead = detail::product_lead(u);
    std::array<CompensatedSum, 7> acc;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double a = br[k], b = br[k + 1];
        const double mid = 0.5 * (a + b);
        const Segment& su = u.segments()[u.locate(mid)];
        const bool inside = mid <= g.support_radius();
        auto field = [&](int which) {
            return [&, which](double x) {
                const Jet uj = su.jet(x);
                const Jet pj = inside ? g.phi_mu.segments()[g.phi_mu.locate(mid)].jet(x) : Jet{};
                const double lu = uj.laplacian(x), lp = x > 0.0 ? pj.laplacian(x) : 0.0;
                const double w = x * x * x;
                switch (which) {
                    case 0: {
                        const Jet pu = detail::product_jet(pj, uj);
                        const double l = pu.laplacian(x);
                        return l * l * w;
                    }
                    case 1: return lp * uj.f * lp * uj.f * w;
                    case 2: return pj.f * lu * pj.f * lu * w;
                    case 3: return 4.0 * pj.df * uj.df * pj.df * uj.df * w;
                    case 4: return lp * uj.f * pj.f * lu * w;
                    case 5: return lp * uj.f * pj.df * uj.df * w;
                    default: return pj.f * lu * pj.df * uj.df * w;
                }
            };
        };
        for (int m = 0; m < 7; ++m) acc[m] += q.integrate(field(m), a, b, a == 0.0 ? lead : 0.0);
    }
    r.lap_mu_sq = sphere_area * acc[0].value();
    r.terms = {sphere_area * acc[1].value(), sphere_area * acc[2].value(), sphere_area * acc[3].value(),
               sphere_area * acc[4].value(), sphere_area * acc[5].value(), sphere_area * acc[6].value()};
    r.expansion_residual = std::abs(r.terms.sum() - r.lap_mu_sq) / r.lap_mu_sq;
    r.bounds = cross_term_bounds(mu, r.norm.l2_sq, r.norm.grad_sq, r.norm.lap_sq);
    const auto tv = r.terms.values(), bv = r.bounds.values();
    r.cross_bounds_hold = true;
    for (std::size_t k = 0; k < 6; ++k) {
        r.term_holds[k] = tv[k] <= bv[k] * (1.0 + 1e-12);
        r.cross_bounds_hold = r.cross_bounds_hold && r.term_holds[k];
    }
    r.absorbed = r.lap_mu_sq <= r.norm.value_sq();
    r.coefficients_hold = cross_term_coefficients().holds;

    const RadialProfile um = detail::product_profile(u, g, 4000);
    r.sup_mu = sup_norm(um).value;
    r.sup_preserved = std::abs(r.sup_mu - r.sup) <= 1e-12 * r.sup;
    r.holder_mu = holder_seminorm(um, alpha);
    r.holder_preserved = r.holder_mu <= r.c_alpha;

    // Both sides, in the log domain for the constant.
    const double k8 = alpha * std::log(8.0 / mu) + std::log(r.c_alpha);
    const double lap_mu = std::sqrt(r.lap_mu_sq);
    r.intermediate_rhs = lambda * r.lap_mu_sq * detail::logaddexp(r.log_C_lambda, k8 - std::log(lap_mu));
    r.lhs = r.sup * r.sup;
    r.rhs = lambda * r.norm.value_sq() * detail::logaddexp(r.log_C_lambda, k8 - std::log(r.norm.value()));
    r.margin = r.rhs / r.lhs;
    r.holds = r.rhs >= r.lhs;

    // x -> x^2 log(C_lambda + C / x) increasing between ||Delta u_mu|| and ||u||_mu.
    r.monotone = true;
    const double x0 = std::min(lap_mu, r.norm.value()), x1 = std::max(lap_mu, r.norm.value());
    double prev = -HUGE_VAL;
    for (int k = 0; k <= 256; ++k) {
        const double x = x0 * std::pow(x1 / x0, k / 256.0);
        const double v = 2.0 * std::log(x) + std::log(detail::logaddexp(r.log_C_lambda, k8 - std::log(x)));
        if (v < prev) r.monotone = false;
        prev = v;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Low/high split u = Delta_{-1} u + v.

struct SplitConstants {
    double low = 0.0;    // ||Delta_{-1} u||_inf <= C ||u||_2
    double h1 = 0.0;     // ||v||_{H^1} <= C ||Delta v||_2
    double final = 0.0;  // C_lambda of the final inequality
};

struct LowHighReport {
    double alpha = 0.0;
    double lambda = 0.0;
    double mu1 = 0.0;
    double lambda1 = 0.0;
    double log_C_lambda1 = 0.0;
    double sup = 0.0, l2 = 0.0, lap = 0.0, holder = 0.0, c_alpha = 0.0;
    double low_sup = 0.0;  // ||Delta_{-1} u||_inf
    double v_sup = 0.0;    // ||v||_inf
    MuNorm v_norm;         // norms of v at mu1
    double low_ratio = 0.0;  // low_sup / ||u||_2
    double h1_ratio = 0.0;   // ||v||_{H^1} / ||Delta v||
    bool triangle_holds = false;  // sup <= low_sup + v_sup
    double v_rhs = 0.0;           // ||v||_mu1 sqrt(lambda1 log(C_lambda1 + 8^a mu1^-a ||u||_Ca / ||v||_mu1))
    bool v_holds = false;
    double absorbed_bound_sq = 0.0;  // (1 + 3 mu1 (1 + C^2)) ||Delta v||^2
    bool absorbed_holds = false;
    double final_rhs_zero = 0.0;  // ||u||_2 + ||Delta u|| sqrt(lambda)
    double fitted_final = 0.0;    // smallest C for which the final inequality holds
    double final_rhs = 0.0;       // with the supplied constant
    bool low_holds = true;
    bool h1_holds = true;
    bool final_holds = true;
};

/// Smallest C >= 0 with sup <= l2 + lap sqrt(lambda log(e + C c / lap)).
inline double fit_final_constant(double sup, double l2, double lap, double c_alpha, double lambda) {
    if (sup <= l2 + lap * std::sqrt(lambda)) return 0.0;
    const double t = (sup - l2) / lap;
    return std::expm1(t * t / lambda - 1.0) * std::numbers::e * lap / c_alpha;
}

/// Chain of the final split inequality on a decomposition of u. mu1 enters through
/// lambda1 = lambda / (1 + 3 mu1 (1 + C^2)) with C the measured H^1 ratio of v.
inline LowHighReport verify_low_high_split(const RadialProfile& u, double alpha, double lambda,
                                           const DyadicDecomposition& d, const SplitConstants* constants = nullptr,
                                           double mu1 = 0.01) {
    detail::require_alpha(alpha);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    if (!(lambda > 1.0 / (8.0 * pi2 * alpha)))
        throw DomainError("verify_low_high_split: lambda must exceed 1/(8 pi^2 alpha)");
    if (!(mu1 > 0.0 && mu1 < 1.0)) throw DomainError("verify_low_high_split: mu1 must lie in (0, 1)");
    LowHighReport r;
    r.alpha = alpha;
    r.lambda = lambda;
    r.mu1 = mu1;
    r.sup = sup_norm(u).value;
    const double l2_sq = weighted_l2_norm_sq(u), grad_sq = gradient_l2_sq(u), lap_sq = laplacian_l2_sq(u);
    r.l2 = std::sqrt(l2_sq);
    r.lap = std::sqrt(lap_sq);
    r.holder = holder_seminorm(u, alpha);
    r.c_alpha = r.sup + r.holder;

    // Low block and v = u - Delta_{-1} u, pointwise.
    const CutoffPair& cp = d.cutoffs;
    const auto low = detail::block_kernel(d.spectrum, [&](double x) { return cp.chi(x); });
    r.low_sup = d.low.sup;
    const auto pts = detail::reconstruction_points(u, 400);
    std::size_t best = 0;
    std::vector<double> vv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        vv[i] = std::abs(u(pts[i]) - low.value(pts[i]));
        if (vv[i] > vv[best]) best = i;
    }
    r.v_sup = vv[best];
    {
        const double a = pts[best == 0 ? 0 : best - 1], b = pts[std::min(best + 1, pts.size() - 1)];
        const auto [x, fx] = detail::golden_max([&](double t) { return std::abs(u(t) - low.value(t)); }, a, b, 60);
        r.v_sup = std::max(r.v_sup, fx);
    }
    r.triangle_holds = r.sup <= (r.low_sup + r.v_sup) * (1.0 + 1e-12);

    // Norms of v by complement: |1 - chi|^2 = 1 - (2 chi - chi^2).
    const FrequencyProfile& f = d.spectrum;
    std::array<CompensatedSum, 3> low_part;
    for (std::size_t i = 0; i < f.value.size(); ++i) {
        const double rho = f.grid.rho[i];
        const double c = cp.chi(rho);
        if (c == 0.0) continue;
        const double e = f.grid.weight[i] * (2.0 * c - c * c) * f.value[i] * f.value[i] * rho * rho * rho;
        low_part[0] += e;
        low_part[1] += e * rho * rho;
        low_part[2] += e * rho * rho * rho * rho;
    }
    const double norm = sphere_area / (two_pi_sq * two_pi_sq);
    r.v_norm = mu_norm(mu1, std::max(0.0, lap_sq - norm * low_part[2].value()),
                       std::max(0.0, l2_sq - norm * low_part[0].value()),
                       std::max(0.0, grad_sq - norm * low_part[1].value()));
    r.low_ratio = r.low_sup / r.l2;
    const double lap_v = std::sqrt(r.v_norm.lap_sq);
    r.h1_ratio = lap_v > 0.0 ? std::sqrt(r.v_norm.h1_sq()) / lap_v : 0.0;

    // Whole-space estimate for v at (lambda1, mu1).
    const double C = constants ? constants->h1 : r.h1_ratio;
    r.absorbed_bound_sq = (1.0 + 3.0 * mu1 * (1.0 + C * C)) * r.v_norm.lap_sq;
    r.absorbed_holds = r.v_norm.value_sq() <= r.absorbed_bound_sq * (1.0 + 1e-12);
    r.lambda1 = lambda / (1.0 + 3.0 * mu1 * (1.0 + C * C));
    if (!(r.lambda1 > 1.0 / (8.0 * pi2 * alpha)))
        throw DomainError("verify_low_high_split: lambda too close to 1/(8 pi^2 alpha) for this mu1");
    r.log_C_lambda1 = *scan_constants(alpha, r.lambda1).log_C_lambda;
    const double vm = r.v_norm.value();
    if (vm > 0.0) {
        const double k8 = alpha * std::log(8.0 / mu1) + std::log(r.c_alpha) - std::log(vm);
        r.v_rhs = vm * std::sqrt(r.lambda1 * detail::logaddexp(r.log_C_lambda1, k8));
    }
    r.v_holds = r.v_sup <= r.v_rhs;

    // Final inequality.
    r.final_rhs_zero = r.l2 + r.lap * std::sqrt(lambda);
    r.fitted_final = fit_final_constant(r.sup, r.l2, r.lap, r.c_alpha, lambda);
    if (constants) {
        r.low_holds = r.low_ratio <= constants->low;
        r.h1_holds = r.h1_ratio <= constants->h1;
        r.final_rhs = r.l2 + r.lap * std::sqrt(lambda * std::log(std::numbers::e + constants->final * r.c_alpha / r.lap));
        r.final_holds = r.sup <= r.final_rhs;
    }
    return r;
}

} // namespace sharplog
