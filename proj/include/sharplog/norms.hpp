#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "sharplog/errors.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/quadrature.hpp"

namespace sharplog {

/// |S^3| = 2 pi^2: the radial measure of R^4 is 2 pi^2 r^3 dr.
inline constexpr double sphere_area = 2.0 * std::numbers::pi * std::numbers::pi;

namespace detail {

// int_lo^hi r^m dr
inline double power_integral(double m, double lo, double hi) {
    if (m == -1.0) {
        if (lo == 0.0) throw DivergenceError("weighted_l2_norm_sq: r^-1 is not integrable at 0");
        return std::log(hi / lo);
    }
    if (lo == 0.0 && m + 1.0 <= 0.0)
        throw DivergenceError("weighted_l2_norm_sq: non-integrable singularity at r = 0");
    return (std::pow(hi, m + 1.0) - (lo == 0.0 ? 0.0 : std::pow(lo, m + 1.0))) / (m + 1.0);
}

// int_lo^hi (a + k r^b)^2 r^3 dr, arranged so that huge k with tiny r does not overflow.
inline double power_segment_l2(const PowerForm& p, double lo, double hi) {
    const double a = p.offset, k = p.coef, b = p.exponent;
    if (k == 0.0 || b == 0.0) {
        const double c = a + (b == 0.0 ? k : 0.0);
        return c * c * (std::pow(hi, 4) - std::pow(lo, 4)) / 4.0;
    }
    double out = a * a * (std::pow(hi, 4) - std::pow(lo, 4)) / 4.0;
    if (a != 0.0) out += 2.0 * a * k * power_integral(b + 3.0, lo, hi);
    const double m = 2.0 * b + 3.0;
    if (m == -1.0) {
        if (lo == 0.0) throw DivergenceError("weighted_l2_norm_sq: r^-1 is not integrable at 0");
        out += k * k * std::log(hi / lo);
    } else {
        if (lo == 0.0 && m + 1.0 <= 0.0)
            throw DivergenceError("weighted_l2_norm_sq: non-integrable singularity at r = 0");
        const double top = k * std::pow(hi, b + 2.0);
        const double bot = lo == 0.0 ? 0.0 : k * std::pow(lo, b + 2.0);
        out += (top * top - bot * bot) / (m + 1.0);
    }
    return out;
}

/// Integrates g(jet, r) over one segment. Sampled segments are integrated
/// element by element; closed forms use the graded scheme with the supplied
/// leading exponent of the integrand at r = 0.
template <class G>
double integrate_segment(const Segment& s, const QuadratureScheme& q, G&& g, double lead_exponent) {
    if (const auto* sm = std::get_if<SampledForm>(&s.form)) {
        const GaussRule& rule = gauss_legendre(std::max(8, q.panel_order()));
        CompensatedSum acc;
        for (std::size_t e = 0; e + 1 < sm->r.size(); ++e) {
            const double a = std::max(sm->r[e], s.lo), b = std::min(sm->r[e + 1], s.hi);
            if (!(b > a)) continue;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double r = a + (b - a) * rule.nodes[i];
                acc += rule.weights[i] * (b - a) * g(s.jet(r), r);
            }
        }
        return acc.value();
    }
    return q.integrate([&](double r) { return g(s.jet(r), r); }, s.lo, s.hi, lead_exponent);
}

} // namespace detail

/// int_lo^hi f(r)^2 r^3 dr over one segment (without the 2 pi^2 factor).
inline double segment_l2_sq(const Segment& s, const QuadratureScheme& q) {
    if (const auto* pw = std::get_if<PowerForm>(&s.form)) return detail::power_segment_l2(*pw, s.lo, s.hi);
    double lead = 3.0;
    if (s.lo == 0.0) {
        const auto l = s.leading_at_zero();
        lead = 2.0 * l.exponent + 3.0;
        if (lead <= -1.0) throw DivergenceError("weighted_l2_norm_sq: non-integrable singularity at r = 0");
    }
    return detail::integrate_segment(
        s, q, [](const Jet& j, double r) { return j.f * j.f * r * r * r; }, lead);
}

/// 2 pi^2 int_0^R p(r)^2 r^3 dr. Pure-power segments are integrated exactly;
/// every other kind by graded panel quadrature.
inline double weighted_l2_norm_sq(const RadialProfile& p, const QuadratureScheme& q = QuadratureScheme()) {
    CompensatedSum acc;
    for (const auto& s : p.segments()) acc += segment_l2_sq(s, q);
    return sphere_area * acc.value();
}

/// 2 pi^2 int (Delta p)^2 r^3 dr; closed forms go through laplacian_radial,
/// sampled segments are integrated element-wise from the Hermite jets.
inline double laplacian_l2_sq(const RadialProfile& p, const QuadratureScheme& q = QuadratureScheme()) {
    CompensatedSum acc;
    for (const auto& s : p.segments()) {
        if (std::holds_alternative<SampledForm>(s.form)) {
            acc += sphere_area * detail::integrate_segment(
                                     s, q,
                                     [](const Jet& j, double r) {
                                         const double L = j.d2f * r + 3.0 * j.df;  // r * Delta p
                                         return L * L * r;
                                     },
                                     1.0);
        } else {
            acc += sphere_area * segment_l2_sq(laplacian_segment(s), q);
        }
    }
    return acc.value();
}

/// 2 pi^2 int p'(r)^2 r^3 dr.
inline double gradient_l2_sq(const RadialProfile& p, const QuadratureScheme& q = QuadratureScheme()) {
    CompensatedSum acc;
    for (const auto& s : p.segments()) {
        double lead = 3.0;
        if (s.lo == 0.0) {
            const auto l = s.leading_at_zero();
            lead = l.exponent == 0.0 ? 3.0 : 2.0 * (l.exponent - 1.0) + 3.0;
            if (l.log_singular) lead = 1.0;
            if (lead <= -1.0) throw DivergenceError("gradient_l2_sq: non-integrable singularity at r = 0");
        }
        acc += detail::integrate_segment(
            s, q, [](const Jet& j, double r) { return j.df * j.df * r * r * r; }, lead);
    }
    return sphere_area * acc.value();
}

namespace detail {

inline void require_bounded(const RadialProfile& p) {
    const auto l = p.segments().front().leading_at_zero();
    if (l.exponent < 0.0 || l.log_singular) throw DivergenceError("profile is unbounded at r = 0");
}

// Sample radii used to seed every supremum search: the origin, all
// breakpoints, geometric sequences toward 0 and toward each breakpoint from
// both sides, and a uniform grid on every segment.
inline std::vector<double> probe_points(const RadialProfile& p, int uniform = 200) {
    std::vector<double> pts;
    const auto& segs = p.segments();
    const double R = p.radius();
    double smallest = R;
    for (const auto& s : segs)
        if (s.lo > 0.0) smallest = std::min(smallest, s.lo);
    pts.push_back(0.0);
    for (double r = R; r > smallest * 1e-12; r *= 0.8409) pts.push_back(r);
    for (const auto& s : segs) {
        const double w = s.hi - s.lo;
        pts.push_back(s.lo);
        pts.push_back(s.hi);
        for (int k = 1; k < uniform; ++k) pts.push_back(s.lo + w * k / uniform);
        for (int k = 1; k <= 48; ++k) {
            const double d = w * std::pow(0.5, 0.5 * k);
            pts.push_back(s.lo + d);
            pts.push_back(s.hi - d);
        }
        if (const auto* sm = std::get_if<SampledForm>(&s.form))
            for (double r : sm->r) pts.push_back(r);
    }
    std::erase_if(pts, [R](double r) { return r < 0.0 || r > R; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Golden-section maximisation of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iterations = 80) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

// p(r) - p(s) without the cancellation of a large offset when both radii lie
// in the same power segment.
inline double profile_difference(const RadialProfile& p, double r, double s) {
    if (r <= p.radius() && s <= p.radius()) {
        const std::size_t i = p.locate(r);
        if (i == p.locate(s))
            if (const auto* pw = std::get_if<PowerForm>(&p.segments()[i].form); pw && pw->exponent != 0.0)
                return pw->coef * (std::pow(r, pw->exponent) - std::pow(s, pw->exponent));
    }
    return p(r) - p(s);
}

} // namespace detail

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
};

/// sup_r |p(r)| with its location.
inline SupResult sup_norm(const RadialProfile& p) {
    detail::require_bounded(p);
    const auto pts = detail::probe_points(p);
    std::size_t best = 0;
    double bv = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = std::abs(p(pts[i]));
        if (v > bv) {
            bv = v;
            best = i;
        }
    }
    SupResult out{bv, pts[best]};
    const double a = pts[best == 0 ? 0 : best - 1], b = pts[std::min(best + 1, pts.size() - 1)];
    if (b > a) {
        auto [x, v] = detail::golden_max([&](double r) { return std::abs(p(r)); }, a, b);
        if (v > out.value) out = {v, x};
    }
    return out;
}

/// sup_r |p'(r)|; +infinity when the derivative blows up at the origin.
inline double lipschitz_seminorm(const RadialProfile& p) {
    detail::require_bounded(p);
    if (p.segments().front().slope_unbounded_at_zero()) return std::numeric_limits<double>::infinity();
    const auto pts = detail::probe_points(p);
    double best = 0.0;
    std::size_t bi = 0;
    // Evaluate slightly inside each segment so one-sided derivatives at
    // breakpoints are both seen.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = pts[i];
        const std::size_t k = p.locate(r);
        double v = std::abs(p.segments()[k].jet(r).df);
        if (k > 0 && r == p.segments()[k].lo) v = std::max(v, std::abs(p.segments()[k - 1].jet(r).df));
        if (v > best) {
            best = v;
            bi = i;
        }
    }
    const double a = pts[bi == 0 ? 0 : bi - 1], b = pts[std::min(bi + 1, pts.size() - 1)];
    if (b > a) {
        auto [x, v] = detail::golden_max([&](double r) { return std::abs(p.jet(r).df); }, a, b);
        best = std::max(best, v);
    }
    return best;
}

/// Homogeneous Hoelder seminorm sup |p(r) - p(s)| / |r - s|^alpha. For radial
/// functions the supremum over x != y in R^4 equals the supremum over radius
/// pairs, since |x - y| >= ||x| - |y|| with equality on collinear points.
/// Coarse pair enumeration, then coordinate-wise golden refinement around the
/// best pairs. alpha = 1 returns the Lipschitz seminorm.
inline double holder_seminorm(const RadialProfile& p, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_seminorm: alpha must lie in (0, 1]");
    detail::require_bounded(p);
    if (alpha == 1.0) return lipschitz_seminorm(p);

    const auto pts = detail::probe_points(p);
    const std::size_t n = pts.size();
    std::vector<double> v(n);
    std::vector<std::size_t> seg(n);
    std::vector<char> power(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = p(pts[i]);
        seg[i] = p.locate(pts[i]);
        power[i] = std::holds_alternative<PowerForm>(p.segments()[seg[i]].form);
    }

    struct Cand {
        double ratio;
        std::size_t i, j;
    };
    std::vector<Cand> top;
    constexpr std::size_t keep = 6;
    auto consider = [&](double ratio, std::size_t i, std::size_t j) {
        if (top.size() < keep) {
            top.push_back({ratio, i, j});
            std::sort(top.begin(), top.end(), [](const Cand& a, const Cand& b) { return a.ratio > b.ratio; });
        } else if (ratio > top.back().ratio) {
            top.back() = {ratio, i, j};
            std::sort(top.begin(), top.end(), [](const Cand& a, const Cand& b) { return a.ratio > b.ratio; });
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        double local = 0.0;
        std::size_t lj = i;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = pts[j] - pts[i];
            const double dv = seg[i] == seg[j] && power[i] ? detail::profile_difference(p, pts[i], pts[j]) : v[j] - v[i];
            const double ratio = std::abs(dv) * std::exp(-alpha * std::log(d));
            if (ratio > local) {
                local = ratio;
                lj = j;
            }
        }
        if (lj != i) consider(local, i, lj);
    }
    // Beyond R the profile vanishes; pairs (r, s > R) are dominated by (r, R).
    double best = top.empty() ? 0.0 : top.front().ratio;
    auto ratio_at = [&](double r, double s) {
        if (r == s) return 0.0;
        return std::abs(detail::profile_difference(p, r, s)) / std::pow(std::abs(r - s), alpha);
    };
    for (const auto& c : top) {
        double r = pts[c.i], s = pts[c.j];
        const double ra = pts[c.i == 0 ? 0 : c.i - 1], rb = pts[std::min(c.i + 1, n - 1)];
        const double sa = pts[c.j == 0 ? 0 : c.j - 1], sb = pts[std::min(c.j + 1, n - 1)];
        double cur = c.ratio;
        for (int sweep = 0; sweep < 4; ++sweep) {
            if (rb > ra) {
                auto [x, val] = detail::golden_max([&](double t) { return ratio_at(t, s); }, ra, std::min(rb, s));
                if (val > cur) {
                    cur = val;
                    r = x;
                }
            }
            if (sb > sa) {
                auto [x, val] = detail::golden_max([&](double t) { return ratio_at(r, t); }, std::max(sa, r), sb);
                if (val > cur) {
                    cur = val;
                    s = x;
                }
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

struct NormReport {
    double alpha = 0.0;
    double sup_norm = 0.0;
    double sup_argmax = 0.0;
    double l2_ball = 0.0;       // (2 pi^2 int p^2 r^3 dr)^{1/2}
    double grad_l2 = 0.0;
    double lap_l2 = 0.0;
    double lip_seminorm = 0.0;  // may be +inf
    double holder_seminorm = 0.0;
    std::optional<double> n_alpha;  // empty when lap_l2 == 0
};

inline NormReport norms(const RadialProfile& p, double alpha, const QuadratureScheme& q = QuadratureScheme()) {
    NormReport r;
    r.alpha = alpha;
    const auto s = sup_norm(p);
    r.sup_norm = s.value;
    r.sup_argmax = s.argmax;
    r.l2_ball = std::sqrt(weighted_l2_norm_sq(p, q));
    r.grad_l2 = std::sqrt(gradient_l2_sq(p, q));
    r.lap_l2 = std::sqrt(laplacian_l2_sq(p, q));
    r.lip_seminorm = lipschitz_seminorm(p);
    r.holder_seminorm = holder_seminorm(p, alpha);
    if (r.lap_l2 > 0.0) r.n_alpha = r.holder_seminorm / r.lap_l2;
    return r;
}

} // namespace sharplog
