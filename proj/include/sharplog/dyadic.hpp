#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sharplog/errors.hpp"
#include "sharplog/fourier.hpp"
#include "sharplog/norms.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/tolerances.hpp"

namespace sharplog {

namespace detail {

/// C^infinity step: 0 for t <= 0, 1 for t >= 1, and s(t) + s(1 - t) = 1.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 1.0 / (1.0 + std::exp(1.0 / t - 1.0 / (1.0 - t)));
}

} // namespace detail

struct CutoffSpec {
    double inner = 0.8;   // chi = 1 below
    double outer = 1.25;  // chi = 0 above
    int samples_per_octave = 64;
    int octave_lo = -14;  // sample grid covers 2^octave_lo .. 2^octave_hi
    int octave_hi = 18;
};

/// Radial Littlewood-Paley pair. chi(xi) = s((outer - xi) / (outer - inner)) and
/// phi(xi) = chi(xi / 2) - chi(xi), so chi is supported in [0, outer] and phi in
/// [inner, 2 outer]. Both partition identities telescope exactly.
struct CutoffPair {
    double inner = 0.8;
    double outer = 1.25;
    std::vector<double> log2_grid;

    [[nodiscard]] double chi(double xi) const { return detail::smooth_step((outer - xi) / (outer - inner)); }
    [[nodiscard]] double phi(double xi) const { return chi(0.5 * xi) - chi(xi); }
    [[nodiscard]] double phi_j(int j, double xi) const { return phi(std::ldexp(xi, -j)); }

    /// sum_{j = j_lo}^{j_hi} phi_j(xi) by direct summation.
    [[nodiscard]] double window_sum(int j_lo, int j_hi, double xi) const {
        double s = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) s += phi_j(j, xi);
        return s;
    }

    /// max |chi + sum_{j >= 0} phi_j - 1| over the samples with xi <= 2^j_max
    /// (terms beyond j_max + 1 vanish there).
    [[nodiscard]] double inhomogeneous_residual(int j_max) const {
        double worst = std::abs(chi(0.0) + window_sum(0, j_max + 1, 0.0) - 1.0);
        for (double l : log2_grid) {
            if (l > j_max) break;
            const double xi = std::exp2(l);
            worst = std::max(worst, std::abs(chi(xi) + window_sum(0, j_max + 1, xi) - 1.0));
        }
        return worst;
    }

    /// max |sum_{j = j_lo}^{j_hi} phi_j - 1| over samples in [2^{j_lo + 1}, 2^j_hi],
    /// where the omitted terms vanish.
    [[nodiscard]] double homogeneous_residual(int j_lo, int j_hi) const {
        double worst = 0.0;
        for (double l : log2_grid) {
            if (l < j_lo + 1 || l > j_hi) continue;
            worst = std::max(worst, std::abs(window_sum(j_lo, j_hi, std::exp2(l)) - 1.0));
        }
        return worst;
    }

    /// Equivalence constant of sum_j 2^{4j} phi_j(xi)^2 against xi^4: the
    /// largest of max and 1/min of the ratio over one octave.
    [[nodiscard]] double square_function_constant(double weight_power = 4.0) const {
        double lo = HUGE_VAL, hi = 0.0;
        for (int k = 0; k <= 4096; ++k) {
            const double xi = std::exp2(static_cast<double>(k) / 4096.0);
            double s = 0.0;
            for (int j = -3; j <= 3; ++j) {
                const double p = phi_j(j, xi);
                s += std::exp2(weight_power * j) * p * p;
            }
            const double ratio = s / std::pow(xi, weight_power);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        return std::max(hi, 1.0 / lo);
    }
};

inline CutoffPair build_cutoffs(const CutoffSpec& spec = {}) {
    if (!(spec.inner > 0.75 && spec.inner < spec.outer && spec.outer < 4.0 / 3.0))
        throw DomainError("build_cutoffs: need 3/4 < inner < outer < 4/3");
    if (spec.samples_per_octave < 1 || spec.octave_hi <= spec.octave_lo)
        throw DomainError("build_cutoffs: bad sample grid");
    CutoffPair c;
    c.inner = spec.inner;
    c.outer = spec.outer;
    const int n = (spec.octave_hi - spec.octave_lo) * spec.samples_per_octave;
    c.log2_grid.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        c.log2_grid.push_back(spec.octave_lo + static_cast<double>(k) / spec.samples_per_octave);
    return c;
}

struct DecomposeOptions {
    int j_min = -10;
    int j_max = 8;
    double tail_threshold = tol::tail_energy;
    double spatial_reach = 12.0;  // block j is sampled on [0, R + reach 2^{-j}]
    int samples_per_scale = 4;    // samples per length 2^{-j}
    int reconstruction_samples = 400;
    TransformOptions transform;
    CutoffSpec cutoffs;

    void validate() const {
        if (!(j_min < 0 && j_max >= 0)) throw DomainError("decompose: window must satisfy j_min < 0 <= j_max");
        if (j_min < -30 || j_max > 20) throw DomainError("decompose: window outside [-30, 20]");
        if (!(tail_threshold > 0.0)) throw DomainError("decompose: tail threshold must be positive");
        if (!(spatial_reach > 0.0) || samples_per_scale < 2 || reconstruction_samples < 2)
            throw DomainError("decompose: bad sampling parameters");
        transform.validate();
    }
};

/// One Littlewood-Paley block. `profile` samples the block on [0, R + reach 2^{-j}].
struct DyadicBlock {
    int j = 0;
    double l2 = 0.0;         // ||block||_{L^2(R^4)}, from the frequency side
    double sup = 0.0;
    double sup_argmax = 0.0;
    double bernstein = 0.0;  // sup / (2^{2j} l2); sup / l2 for the low block
    RadialProfile profile;
};

struct DyadicDecomposition {
    int j_min = 0;
    int j_max = 0;
    double radius = 0.0;
    CutoffPair cutoffs;
    FrequencyProfile spectrum;
    DyadicBlock low;                   // Delta_{-1}, multiplier chi
    std::vector<DyadicBlock> blocks;   // homogeneous blocks j_min .. j_max
    double l2_sq = 0.0;                // spatial ||u||^2
    double plancherel_error = 0.0;     // | ||u_hat||^2 / ((2pi)^4 ||u||^2) - 1 |
    double tail_energy_fraction = 0.0; // energy outside the window / ||u||^2
    double reconstruction_error = 0.0; // sup_[0,R] |Delta_{-1}u + sum_{0..j_max} Delta_j u - u|
    double reconstruction_argmax = 0.0;
    double homogeneous_reconstruction_error = 0.0;  // same with sum_{j_min..j_max} of homogeneous blocks

    /// Homogeneous block j (j_min <= j <= j_max).
    [[nodiscard]] const DyadicBlock& homogeneous(int j) const {
        if (j < j_min || j > j_max) throw DomainError("DyadicDecomposition: block index outside the window");
        return blocks[static_cast<std::size_t>(j - j_min)];
    }
    /// Inhomogeneous block: zero for j <= -2, chi block at -1, homogeneous for j >= 0.
    [[nodiscard]] const DyadicBlock* inhomogeneous(int j) const {
        if (j <= -2) return nullptr;
        if (j == -1) return &low;
        return &homogeneous(j);
    }

    /// Homogeneous block j at r by direct quadrature over the spectrum.
    [[nodiscard]] double block_value(int j, double r) const {
        std::vector<double> m(spectrum.value.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = cutoffs.phi_j(j, spectrum.grid.rho[i]);
        return inverse_jet(spectrum, r, &m).f;
    }
    /// Low block at r by direct quadrature over the spectrum.
    [[nodiscard]] double low_value(double r) const {
        std::vector<double> m(spectrum.value.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = cutoffs.chi(spectrum.grid.rho[i]);
        return inverse_jet(spectrum, r, &m).f;
    }
};

namespace detail {

// K and K' sharing one pair of Bessel evaluations.
inline void bessel_k_pair(double x, double& k, double& kp) {
    if (x < 0.1) {
        k = bessel_k(x);
        kp = bessel_k_prime(x);
        return;
    }
    const double a = ::j1(x), b = ::j0(x);
    k = a / x;
    kp = (b - 2.0 * k) / x;
}

struct BlockKernel {
    std::vector<double> rho, coef;  // coef = w m u_hat rho^3 / (2 pi)^2
    double l2_sq = 0.0;

    [[nodiscard]] double value(double r) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) s += coef[i] * bessel_k(r * rho[i]);
        return s;
    }
    void jet(double r, double& v, double& d) const {
        double s = 0.0, t = 0.0, k, kp;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            bessel_k_pair(r * rho[i], k, kp);
            s += coef[i] * k;
            t += coef[i] * rho[i] * kp;
        }
        v = s;
        d = t;
    }
};

template <class M>
BlockKernel block_kernel(const FrequencyProfile& f, M&& multiplier) {
    BlockKernel b;
    CompensatedSum e;
    for (std::size_t i = 0; i < f.value.size(); ++i) {
        const double rho = f.grid.rho[i];
        const double m = multiplier(rho);
        if (m == 0.0) continue;
        const double r3 = rho * rho * rho;
        b.rho.push_back(rho);
        b.coef.push_back(f.grid.weight[i] * m * f.value[i] * r3 / two_pi_sq);
        e += f.grid.weight[i] * m * m * f.value[i] * f.value[i] * r3;
    }
    b.l2_sq = 2.0 * std::numbers::pi * std::numbers::pi * e.value() / (two_pi_sq * two_pi_sq);
    return b;
}

inline DyadicBlock make_block(int j, double scale, const BlockKernel& k, double R, const DecomposeOptions& opt,
                              bool low = false) {
    DyadicBlock b;
    b.j = j;
    b.l2 = std::sqrt(std::max(0.0, k.l2_sq));
    const double h = scale / opt.samples_per_scale;
    const double extent = R + opt.spatial_reach * scale;
    const auto n = static_cast<std::size_t>(std::ceil(extent / h));
    std::vector<double> r(n + 1), v(n + 1), s(n + 1);
    std::size_t best = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        r[i] = std::min(extent, h * static_cast<double>(i));
        k.jet(r[i], v[i], s[i]);
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    b.sup = std::abs(v[best]);
    b.sup_argmax = r[best];
    const double a = r[best == 0 ? 0 : best - 1], c = r[std::min(best + 1, n)];
    const auto [x, fx] = golden_max([&](double t) { return std::abs(k.value(t)); }, a, c, 60);
    if (fx > b.sup) {
        b.sup = fx;
        b.sup_argmax = x;
    }
    const double weight = low ? 1.0 : std::exp2(2.0 * j);
    b.bernstein = b.l2 > 0.0 ? b.sup / (weight * b.l2) : 0.0;
    b.profile = sampled_profile(std::move(r), std::move(v), std::move(s));
    return b;
}

// Radii where reconstruction is measured: a uniform grid, the breakpoints and a
// geometric sequence toward the origin.
inline std::vector<double> reconstruction_points(const RadialProfile& u, int samples) {
    const double R = u.radius();
    std::vector<double> pts;
    for (int k = 0; k <= samples; ++k) pts.push_back(R * k / samples);
    for (double b : u.breakpoints()) pts.push_back(b);
    for (int k = 1; k <= 30; ++k) pts.push_back(R * std::exp2(-k));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace detail

/// Littlewood-Paley decomposition of a compactly supported radial profile
/// (extended by zero beyond its radius). Raises WindowError when more than
/// tail_threshold of the L^2 energy falls outside the window.
inline DyadicDecomposition decompose(const RadialProfile& u, const DecomposeOptions& opt = {}) {
    opt.validate();
    DyadicDecomposition d;
    d.j_min = opt.j_min;
    d.j_max = opt.j_max;
    d.radius = u.radius();
    d.cutoffs = build_cutoffs(opt.cutoffs);
    const CutoffPair& cp = d.cutoffs;
    const double R = d.radius;
    const double rho_max = 2.0 * cp.outer * std::exp2(opt.j_max);

    // Frequency grid split at the cutoff edges; panels resolve every block
    // that overlaps them out to its sampling extent.
    std::vector<double> breaks{0.0, rho_max};
    for (int k = opt.j_min; k <= opt.j_max + 1; ++k)
        for (double c : {cp.inner, cp.outer})
            if (const double b = c * std::exp2(k); b < rho_max) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    FrequencyGrid grid;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        double extent = R;
        if (a < cp.outer) extent = std::max(extent, R + opt.spatial_reach * 2.0);
        for (int j = opt.j_min; j <= opt.j_max; ++j)
            if (cp.inner * std::exp2(j) < b && 2.0 * cp.outer * std::exp2(j) > a) {
                extent = std::max(extent, R + opt.spatial_reach * std::exp2(-j));
                break;
            }
        grid.append(a, b, extent + R, opt.transform);
    }
    d.spectrum = radial_fourier(u, grid, opt.transform);
    const FrequencyProfile& f = d.spectrum;

    // Energies and the window test.
    d.l2_sq = weighted_l2_norm_sq(u);
    if (!(d.l2_sq > 0.0)) throw DomainError("decompose: profile has zero L^2 norm");
    const double spec = f.l2_sq() / (two_pi_sq * two_pi_sq);
    d.plancherel_error = std::abs(spec / d.l2_sq - 1.0);
    CompensatedSum outside;
    for (std::size_t i = 0; i < f.value.size(); ++i) {
        const double rho = f.grid.rho[i];
        const double rest = 1.0 - cp.window_sum(opt.j_min, opt.j_max, rho);
        outside += f.grid.weight[i] * rest * rest * f.value[i] * f.value[i] * rho * rho * rho;
    }
    const double out = 2.0 * std::numbers::pi * std::numbers::pi * outside.value() / (two_pi_sq * two_pi_sq);
    d.tail_energy_fraction = (out + std::max(0.0, d.l2_sq - spec)) / d.l2_sq;
    if (d.tail_energy_fraction > opt.tail_threshold)
        throw WindowError("decompose: energy outside the window [" + std::to_string(opt.j_min) + ", " +
                          std::to_string(opt.j_max) + "] is " + std::to_string(d.tail_energy_fraction) +
                          " of the total");

    // Blocks.
    d.low = detail::make_block(-1, 2.0, detail::block_kernel(f, [&](double r) { return cp.chi(r); }), R, opt, true);
    for (int j = opt.j_min; j <= opt.j_max; ++j)
        d.blocks.push_back(detail::make_block(
            j, std::exp2(-j), detail::block_kernel(f, [&](double r) { return cp.phi_j(j, r); }), R, opt));

    // Reconstruction: sum of the block quadratures, node by node.
    const auto inh = detail::block_kernel(f, [&](double r) { return cp.chi(r) + cp.window_sum(0, opt.j_max, r); });
    const auto hom = detail::block_kernel(f, [&](double r) { return cp.window_sum(opt.j_min, opt.j_max, r); });
    for (double r : detail::reconstruction_points(u, opt.reconstruction_samples)) {
        const double ur = u(r);
        const double e = std::abs(inh.value(r) - ur);
        if (e > d.reconstruction_error) {
            d.reconstruction_error = e;
            d.reconstruction_argmax = r;
        }
        d.homogeneous_reconstruction_error = std::max(d.homogeneous_reconstruction_error, std::abs(hom.value(r) - ur));
    }
    return d;
}

struct BesovFunctionals {
    double alpha = 0.0;
    double lap_equiv = 0.0;      // sum_j 2^{4j} ||Delta_j u||^2 over the window
    double holder_equiv = 0.0;   // max_j 2^{j alpha} ||Delta_j u||_inf over the window
    int holder_argmax = 0;
    std::vector<int> j;
    std::vector<double> bernstein;  // ||Delta_j u||_inf / (2^{2j} ||Delta_j u||_2)
};

inline BesovFunctionals besov_functionals(const DyadicDecomposition& d, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("besov_functionals: alpha must lie in (0, 1)");
    BesovFunctionals b;
    b.alpha = alpha;
    CompensatedSum lap;
    for (const auto& blk : d.blocks) {
        lap += std::exp2(4.0 * blk.j) * blk.l2 * blk.l2;
        const double h = std::exp2(alpha * blk.j) * blk.sup;
        if (h > b.holder_equiv) {
            b.holder_equiv = h;
            b.holder_argmax = blk.j;
        }
        b.j.push_back(blk.j);
        b.bernstein.push_back(blk.bernstein);
    }
    b.lap_equiv = lap.value();
    return b;
}

// ---------------------------------------------------------------------------
// The L^infinity bound through the dyadic split.

enum class CutRule { printed, balanced };

/// max(1, 1 + floor(2 log2(N^2))).
inline int cut_index_printed(double n_alpha) {
    if (!(n_alpha > 0.0)) return 1;
    const double e = std::floor(2.0 * std::log2(n_alpha * n_alpha));
    return static_cast<int>(std::max(1.0, 1.0 + e));
}

/// max(1, 1 + ceil(log2(e + N) / alpha)); balances the Hoelder tail for every alpha.
inline int cut_index_balanced(double n_alpha, double alpha) {
    const double e = std::ceil(std::log2(std::numbers::e + n_alpha) / alpha);
    return static_cast<int>(std::max(1.0, 1.0 + e));
}

/// sum_{j >= m} 2^{-j alpha}.
inline double geometric_tail(int m, double alpha) { return std::exp2(-m * alpha) / (1.0 - std::exp2(-alpha)); }

struct SplitTerms {
    int m = 0;
    double linear_rhs = 0.0;  // ||u||_2 + sqrt(m) ||Delta u|| + tail ||u||_Ca
    double linear_ratio = 0.0;
    double squared_rhs = 0.0;  // ||u||_2^2 + m ||Delta u||^2 + tail^2 ||u||_Ca^2
    double squared_ratio = 0.0;
    double holder_tail_share = 0.0;  // tail^2 ||u||_Ca^2 / squared_rhs
};

/// Measured pieces of the split when a decomposition is supplied.
struct SplitChain {
    int m = 0;
    double low_sup = 0.0;   // ||Delta_{-1} u||_inf
    double mid_sum = 0.0;   // sum_{0 <= j < m} ||Delta_j u||_inf
    double tail_sum = 0.0;  // sum_{m <= j <= j_max} ||Delta_j u||_inf
    double low_ratio = 0.0;   // low_sup / ||u||_2
    double mid_ratio = 0.0;   // mid_sum / (sqrt(m) (sum 2^{4j} ||Delta_j u||^2)^{1/2})
    double tail_ratio = 0.0;  // tail_sum / (sum_{m..j_max} 2^{-j alpha} ||u||_Ca)
};

struct LLConstants {
    double split = 0.0;    // linear three-term bound
    double squared = 0.0;  // squared three-term bound
    double prop = 0.0;     // ||u||^2_inf <= C (||u||^2 + ||Delta u||^2 log(e + N))
    double ball = 0.0;     // ||u||^2_inf <= C ||Delta u||^2 log(C0 + N) for u supported in a ball
    double ball_c0 = std::numbers::e;
};

struct LLReport {
    double alpha = 0.0;
    double sup = 0.0;
    double l2 = 0.0;
    double lap = 0.0;
    double holder = 0.0;
    double n_alpha = 0.0;
    SplitTerms printed;
    SplitTerms balanced;
    double prop_rhs = 0.0;
    double prop_ratio = 0.0;
    bool ball_applicable = false;
    double ball_rhs = 0.0;
    double ball_ratio = 0.0;
    bool has_chain = false;
    SplitChain chain;
    // verdicts against supplied constants (true when no constant was given)
    bool split_holds = true;
    bool squared_holds = true;
    bool prop_holds = true;
    bool ball_holds = true;
};

namespace detail {

inline SplitTerms split_terms(int m, double l2, double lap, double holder, double sup, double alpha) {
    SplitTerms s;
    s.m = m;
    const double t = geometric_tail(m, alpha);
    s.linear_rhs = l2 + std::sqrt(static_cast<double>(m)) * lap + t * holder;
    s.linear_ratio = sup / s.linear_rhs;
    s.squared_rhs = l2 * l2 + m * lap * lap + t * t * holder * holder;
    s.squared_ratio = sup * sup / s.squared_rhs;
    s.holder_tail_share = t * t * holder * holder / s.squared_rhs;
    return s;
}

} // namespace detail

/// Evaluates the three-term split at both cut indices, the squared form, the
/// whole-space bound and (for H^2_0 profiles) the ball form. Ratios are
/// lhs / rhs, i.e. the smallest constant that makes each inequality hold.
inline LLReport verify_ll_estimate(const RadialProfile& u, double alpha, const LLConstants* constants = nullptr,
                                   const DyadicDecomposition* d = nullptr, CutRule chain_rule = CutRule::printed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("verify_ll_estimate: alpha must lie in (0, 1)");
    LLReport r;
    r.alpha = alpha;
    r.sup = sup_norm(u).value;
    r.l2 = std::sqrt(weighted_l2_norm_sq(u));
    r.lap = std::sqrt(laplacian_l2_sq(u));
    r.holder = holder_seminorm(u, alpha);
    if (!(r.lap > 0.0)) throw DomainError("verify_ll_estimate: Delta u vanishes");
    r.n_alpha = r.holder / r.lap;
    r.printed = detail::split_terms(cut_index_printed(r.n_alpha), r.l2, r.lap, r.holder, r.sup, alpha);
    r.balanced = detail::split_terms(cut_index_balanced(r.n_alpha, alpha), r.l2, r.lap, r.holder, r.sup, alpha);
    r.prop_rhs = r.l2 * r.l2 + r.lap * r.lap * std::log(std::numbers::e + r.n_alpha);
    r.prop_ratio = r.sup * r.sup / r.prop_rhs;
    r.ball_applicable = u.h2_zero();
    const double c0 = constants ? constants->ball_c0 : std::numbers::e;
    if (r.ball_applicable) {
        r.ball_rhs = r.lap * r.lap * std::log(c0 + r.n_alpha);
        r.ball_ratio = r.sup * r.sup / r.ball_rhs;
    }
    if (constants) {
        const SplitTerms& s = chain_rule == CutRule::printed ? r.printed : r.balanced;
        r.split_holds = s.linear_ratio <= constants->split;
        r.squared_holds = s.squared_ratio <= constants->squared;
        r.prop_holds = r.prop_ratio <= constants->prop;
        r.ball_holds = !r.ball_applicable || r.ball_ratio <= constants->ball;
    }
    if (d) {
        r.has_chain = true;
        SplitChain& c = r.chain;
        c.m = chain_rule == CutRule::printed ? r.printed.m : r.balanced.m;
        c.low_sup = d->low.sup;
        CompensatedSum mid, mid_sq, tail, tail_w;
        for (const auto& b : d->blocks) {
            if (b.j < 0) continue;
            if (b.j < c.m) {
                mid += b.sup;
                mid_sq += std::exp2(4.0 * b.j) * b.l2 * b.l2;
            } else {
                tail += b.sup;
                tail_w += std::exp2(-b.j * alpha);
            }
        }
        c.mid_sum = mid.value();
        c.tail_sum = tail.value();
        c.low_ratio = c.low_sup / r.l2;
        const double md = std::sqrt(static_cast<double>(c.m) * mid_sq.value());
        c.mid_ratio = md > 0.0 ? c.mid_sum / md : 0.0;
        const double td = tail_w.value() * r.holder;
        c.tail_ratio = td > 0.0 ? c.tail_sum / td : 0.0;
    }
    return r;
}

} // namespace sharplog
