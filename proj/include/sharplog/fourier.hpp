#pragma once

#include <math.h>  // POSIX j0, j1

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "sharplog/errors.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/quadrature.hpp"

namespace sharplog {

// Radial Fourier transform on R^4 with the convention
//   u_hat(rho) = (2 pi)^2 rho^{-1} int_0^inf u(r) J1(r rho) r^2 dr
//   u(r)       = (2 pi)^{-2} r^{-1} int_0^inf u_hat(rho) J1(r rho) rho^2 drho
// so that ||u_hat||^2 = (2 pi)^4 ||u||^2. Both directions are written with the
// kernel K(x) = J1(x)/x, which stays finite at the origin.

inline constexpr double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

namespace detail {

/// J1(x)/x.
inline double bessel_k(double x) {
    if (x < 0.1) {
        const double x2 = x * x;
        return 0.5 + x2 * (-1.0 / 16.0 + x2 * (1.0 / 384.0 + x2 * (-1.0 / 18432.0 + x2 / 1474560.0)));
    }
    return ::j1(x) / x;
}

/// d/dx [J1(x)/x] = -J2(x)/x.
inline double bessel_k_prime(double x) {
    if (x < 0.1) {
        const double x2 = x * x;
        return x * (-1.0 / 8.0 + x2 * (1.0 / 96.0 + x2 * (-1.0 / 3072.0 + x2 / 184320.0)));
    }
    return (::j0(x) - 2.0 * ::j1(x) / x) / x;
}

} // namespace detail

struct TransformOptions {
    int order = 10;           // Gauss-Legendre points per panel
    double max_phase = std::numbers::pi;  // largest r * rho spread per panel (half a period of J1)
    int origin_levels = 8;    // geometric sub-panels (ratio 1/4) toward r = 0

    void validate() const {
        if (order < 4 || order > max_gauss_order) throw DomainError("TransformOptions: order must lie in [4, 64]");
        if (!(max_phase > 0.0)) throw DomainError("TransformOptions: max_phase must be positive");
        if (max_phase > std::numbers::pi * (1.0 + 1e-12))
            throw ResolutionError("TransformOptions: panels wider than half a period of J1 do not resolve the kernel");
        if (origin_levels < 0) throw DomainError("TransformOptions: origin_levels must be >= 0");
    }
};

/// Composite Gauss nodes in the frequency variable. `reach` is the largest
/// r + R_source that each node's panel resolves (max_phase / panel width).
struct FrequencyGrid {
    std::vector<double> rho;
    std::vector<double> weight;
    std::vector<double> reach;

    [[nodiscard]] std::size_t size() const noexcept { return rho.size(); }
    [[nodiscard]] double rho_max() const noexcept { return hi_; }

    /// Appends [lo, hi] split into panels no wider than max_phase / phase_radius.
    void append(double lo, double hi, double phase_radius, const TransformOptions& opt) {
        if (!(hi > lo)) return;
        if (!rho.empty() && lo < hi_ * (1.0 - 1e-15)) throw DomainError("FrequencyGrid: intervals must increase");
        const GaussRule& g = gauss_legendre(opt.order);
        const double width = opt.max_phase / phase_radius;
        const auto panels = static_cast<long>(std::ceil((hi - lo) / width * (1.0 - 1e-12)));
        const long n = std::max(1L, panels);
        const double h = (hi - lo) / static_cast<double>(n);
        const double r = opt.max_phase / h;
        for (long k = 0; k < n; ++k) {
            const double a = lo + h * static_cast<double>(k);
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                rho.push_back(a + h * g.nodes[i]);
                weight.push_back(h * g.weights[i]);
                reach.push_back(r);
            }
        }
        hi_ = hi;
    }

private:
    double hi_ = 0.0;
};

/// Uniform panels on [0, rho_max] resolving the inverse up to r = extent for a
/// source supported in [0, source_radius].
inline FrequencyGrid frequency_grid(double rho_max, double extent, double source_radius,
                                    const TransformOptions& opt = {}) {
    opt.validate();
    if (!(rho_max > 0.0 && extent >= 0.0 && source_radius > 0.0))
        throw DomainError("frequency_grid: rho_max and source_radius must be positive");
    FrequencyGrid g;
    g.append(0.0, rho_max, extent + source_radius, opt);
    return g;
}

/// Samples of u_hat on the nodes of a frequency grid.
struct FrequencyProfile {
    FrequencyGrid grid;
    std::vector<double> value;
    double source_radius = 0.0;

    /// ||u_hat||^2_{L^2(R^4)} over the sampled range.
    [[nodiscard]] double l2_sq() const {
        CompensatedSum s;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double r = grid.rho[i];
            s += grid.weight[i] * value[i] * value[i] * r * r * r;
        }
        return 2.0 * std::numbers::pi * std::numbers::pi * s.value();
    }
};

/// Forward transform of one profile. Spatial nodes are cached per piece and per
/// refinement level, so repeated evaluation only pays for the kernel.
class ForwardTransform {
public:
    ForwardTransform(const RadialProfile& p, double rho_max, const TransformOptions& opt = {})
        : opt_(opt), rho_max_(rho_max), radius_(p.radius()) {
        opt.validate();
        if (!(rho_max > 0.0)) throw DomainError("ForwardTransform: rho_max must be positive");
        const auto lead = p.segments().front().leading_at_zero();
        if (lead.exponent <= -4.0) throw DivergenceError("ForwardTransform: profile is not integrable at 0");
        for (std::size_t s = 0; s < p.segments().size(); ++s) {
            const auto& seg = p.segments()[s];
            if (const auto* sm = std::get_if<SampledForm>(&seg.form)) {
                for (std::size_t i = 0; i + 1 < sm->r.size(); ++i)
                    pieces_.push_back({std::max(seg.lo, sm->r[i]), std::min(seg.hi, sm->r[i + 1]), s, 0, {}});
            } else {
                // at least four panels per piece, and half a width per panel for Gaussians
                double panels = 4.0;
                if (const auto* gs = std::get_if<GaussianForm>(&seg.form))
                    panels = std::max(panels, 2.0 * (seg.hi - seg.lo) / gs->width);
                int base = 0;
                while (std::ldexp(1.0, base) < panels) ++base;
                pieces_.push_back({seg.lo, seg.hi, s, base, {}});
            }
        }
        std::erase_if(pieces_, [](const Piece& q) { return !(q.hi > q.lo); });
        for (auto& q : pieces_) {
            const int top = level_for(q, rho_max);
            q.levels.resize(static_cast<std::size_t>(top) + 1);
            for (int l = q.base; l <= top; ++l) q.levels[static_cast<std::size_t>(l)] = build(p, q, l);
        }
    }

    [[nodiscard]] double rho_max() const noexcept { return rho_max_; }

    [[nodiscard]] double operator()(double rho) const {
        if (rho < 0.0 || rho > rho_max_ * (1.0 + 1e-12))
            throw ResolutionError("ForwardTransform: frequency outside the resolved range");
        CompensatedSum acc;
        for (const auto& q : pieces_) {
            const auto& lv = q.levels[static_cast<std::size_t>(level_for(q, rho))];
            double s = 0.0;
            for (std::size_t i = 0; i < lv.r.size(); ++i) s += lv.wu[i] * detail::bessel_k(rho * lv.r[i]);
            acc += s;
        }
        return two_pi_sq * acc.value();
    }

    [[nodiscard]] FrequencyProfile on(const FrequencyGrid& g) const {
        FrequencyProfile f;
        f.grid = g;
        f.source_radius = radius_;
        f.value.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f.value[i] = (*this)(g.rho[i]);
        return f;
    }

private:
    struct Level {
        std::vector<double> r;
        std::vector<double> wu;  // w * u(r) * r^3
    };
    struct Piece {
        double lo, hi;
        std::size_t segment;
        int base;
        std::vector<Level> levels;
    };

    [[nodiscard]] int level_for(const Piece& q, double rho) const {
        const double need = (q.hi - q.lo) * rho / opt_.max_phase;
        int l = q.base;
        while (std::ldexp(1.0, l) < need) ++l;
        return l;
    }

    [[nodiscard]] Level build(const RadialProfile& p, const Piece& q, int level) const {
        const GaussRule& g = gauss_legendre(opt_.order);
        const Segment& seg = p.segments()[q.segment];
        Level out;
        auto panel = [&](double a, double b) {
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                const double r = a + (b - a) * g.nodes[i];
                out.r.push_back(r);
                out.wu.push_back((b - a) * g.weights[i] * seg.value(r) * r * r * r);
            }
        };
        const long n = 1L << level;
        const double h = (q.hi - q.lo) / static_cast<double>(n);
        for (long k = 0; k < n; ++k) {
            const double a = q.lo + h * static_cast<double>(k);
            if (k == 0 && q.lo == 0.0 && opt_.origin_levels > 0) {
                double lo = 0.0;
                for (int m = opt_.origin_levels; m >= 0; --m) {
                    const double hi = h * std::pow(0.25, m);
                    panel(lo, hi);
                    lo = hi;
                }
            } else {
                panel(a, a + h);
            }
        }
        return out;
    }

    TransformOptions opt_;
    double rho_max_;
    double radius_;
    std::vector<Piece> pieces_;
};

/// Forward transform sampled on a frequency grid.
inline FrequencyProfile radial_fourier(const RadialProfile& p, const FrequencyGrid& g,
                                       const TransformOptions& opt = {}) {
    if (g.size() == 0) throw DomainError("radial_fourier: empty frequency grid");
    return ForwardTransform(p, g.rho_max(), opt).on(g);
}

namespace detail {

inline void require_resolved(const FrequencyProfile& f, std::size_t i, double r) {
    if (r + f.source_radius > f.grid.reach[i] * (1.0 + 1e-9))
        throw ResolutionError("inverse transform: frequency panels too wide for r = " + std::to_string(r));
}

} // namespace detail

/// Value and slope at r of F^{-1}[m(rho) u_hat], with m given per node.
inline Jet inverse_jet(const FrequencyProfile& f, double r, const std::vector<double>* multiplier = nullptr) {
    CompensatedSum v, d;
    for (std::size_t i = 0; i < f.value.size(); ++i) {
        const double m = multiplier ? (*multiplier)[i] : 1.0;
        if (m == 0.0) continue;
        detail::require_resolved(f, i, r);
        const double rho = f.grid.rho[i];
        const double c = f.grid.weight[i] * m * f.value[i] * rho * rho * rho;
        v += c * detail::bessel_k(r * rho);
        d += c * rho * detail::bessel_k_prime(r * rho);
    }
    return {v.value() / two_pi_sq, d.value() / two_pi_sq, 0.0};
}

/// Riesz-mean weights min(1, (rho_max - rho) / W) with W = 2 pi periods / R_source.
/// A hard cut at rho_max leaves an O(rho_max^{-3/2}) oscillating error at the
/// origin; averaging the partial integrals over the last periods removes it.
inline std::vector<double> riesz_taper(const FrequencyProfile& f, double periods) {
    std::vector<double> m(f.value.size(), 1.0);
    if (periods <= 0.0) return m;
    const double W = 2.0 * std::numbers::pi * periods / f.source_radius;
    const double top = f.grid.rho_max();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::clamp((top - f.grid.rho[i]) / W, 0.0, 1.0);
    return m;
}

struct InverseOptions {
    double taper_periods = 2.0;  // 0 gives the plain truncated integral
};

/// Inverse transform at a single radius.
inline Jet inverse_radial_fourier_at(const FrequencyProfile& f, double r, const InverseOptions& opt = {}) {
    const auto m = riesz_taper(f, opt.taper_periods);
    return inverse_jet(f, r, &m);
}

/// Inverse transform sampled on `intervals` equal cells of [0, r_max] and
/// returned as a C^1 Hermite profile.
inline RadialProfile inverse_radial_fourier(const FrequencyProfile& f, double r_max, std::size_t intervals,
                                            const InverseOptions& opt = {}) {
    if (!(r_max > 0.0) || intervals < 1) throw DomainError("inverse_radial_fourier: bad sampling range");
    const auto m = riesz_taper(f, opt.taper_periods);
    std::vector<double> r(intervals + 1), v(intervals + 1), s(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        r[k] = r_max * static_cast<double>(k) / static_cast<double>(intervals);
        const Jet j = inverse_jet(f, r[k], &m);
        v[k] = j.f;
        s[k] = j.df;
    }
    return sampled_profile(std::move(r), std::move(v), std::move(s));
}

} // namespace sharplog
