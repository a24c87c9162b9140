#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "sharplog/errors.hpp"

namespace sharplog {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) noexcept {
        add(v);
        return *this;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Gauss-Legendre rule on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                double q0 = 1.0, q1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double qk = ((2.0 * k - 1.0) * z * q1 - (k - 1.0) * q0) / k;
                    q0 = q1;
                    q1 = qk;
                }
                const double dq = n * (z * q1 - q0) / (z * z - 1.0);
                rule.nodes[i] = 0.5 * (1.0 - z);
                rule.weights[i] = 1.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    return rule;
}

} // namespace detail

inline constexpr int max_gauss_order = 64;

/// Gauss-Legendre rule of the given order on [0, 1] (order in [1, 64]).
inline const GaussRule& gauss_legendre(int order) {
    static const auto table = [] {
        std::array<GaussRule, max_gauss_order + 1> t{};
        for (int n = 1; n <= max_gauss_order; ++n) t[n] = detail::make_gauss_legendre(n);
        return t;
    }();
    if (order < 1 || order > max_gauss_order)
        throw DomainError("gauss_legendre: order must lie in [1, 64]");
    return table[order];
}

/// Composite rule on [0, R]: geometric panels toward r = 0 (ratio `grading`)
/// followed by a Gauss-Legendre rule of order `panel_order` on each panel. The
/// innermost panel [0, R*grading^levels] is integrated after the substitution
/// r = h s^{1/(beta+1)}, which makes pure powers r^beta exact there.
class QuadratureScheme {
public:
    QuadratureScheme() : QuadratureScheme(1.0) {}

    explicit QuadratureScheme(double R, int panel_order = 16, double grading = 0.5,
                              int levels = 60, int subdivisions = 1)
        : R_(R), order_(panel_order), grading_(grading), levels_(levels), subdiv_(subdivisions) {
        if (!(R > 0.0)) throw DomainError("QuadratureScheme: R must be positive");
        if (!(grading > 0.0 && grading < 1.0))
            throw DomainError("QuadratureScheme: grading ratio must lie in (0, 1)");
        if (levels < 1 || subdivisions < 1)
            throw DomainError("QuadratureScheme: levels and subdivisions must be >= 1");
        (void)gauss_legendre(panel_order);
        nodes_.push_back(0.0);
        for (int k = levels; k >= 1; --k) nodes_.push_back(R * std::pow(grading, k));
        nodes_.push_back(R);
    }

    [[nodiscard]] double radius() const noexcept { return R_; }
    [[nodiscard]] int panel_order() const noexcept { return order_; }
    [[nodiscard]] double grading() const noexcept { return grading_; }
    [[nodiscard]] int levels() const noexcept { return levels_; }
    [[nodiscard]] int subdivisions() const noexcept { return subdiv_; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }

    /// Same scheme with every panel split in two.
    [[nodiscard]] QuadratureScheme refined() const {
        return QuadratureScheme(R_, order_, grading_, levels_, 2 * subdiv_);
    }

    /// Integrates f over [lo, hi]. When lo == 0 the integrand is assumed to
    /// behave like r^lead_exponent near the origin (lead_exponent > -1). For
    /// lo > 0 panels are graded geometrically away from lo so that integrands
    /// with r^{-k} growth toward a small lo stay resolved.
    template <class F>
    [[nodiscard]] double integrate(F&& f, double lo, double hi, double lead_exponent = 0.0) const {
        if (!(hi > lo)) return 0.0;
        const GaussRule& g = gauss_legendre(order_);
        CompensatedSum acc;
        auto panel = [&](double a, double b) {
            const double h = (b - a) / subdiv_;
            for (int s = 0; s < subdiv_; ++s) {
                const double a0 = a + s * h;
                for (std::size_t i = 0; i < g.nodes.size(); ++i)
                    acc += g.weights[i] * h * f(a0 + h * g.nodes[i]);
            }
        };
        if (lo == 0.0) {
            if (!(lead_exponent > -1.0))
                throw DivergenceError("integrate: r^" + std::to_string(lead_exponent) +
                                      " is not integrable at 0");
            const double h0 = hi * std::pow(grading_, levels_);
            const double p = lead_exponent + 1.0;
            // int_0^h0 f = h0^p / p * int_0^1 f(r) / r^beta ds with r = h0 s^{1/p}
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                const double s = g.nodes[i];
                const double r = h0 * std::pow(s, 1.0 / p);
                const double fr = f(r);
                if (fr != 0.0) acc += g.weights[i] * std::pow(h0, p) / p * fr / std::pow(r, lead_exponent);
            }
            double a = h0;
            for (int k = levels_ - 1; k >= 0; --k) {
                const double b = hi * std::pow(grading_, k);
                panel(a, b);
                a = b;
            }
            return acc.value();
        }
        const double ratio = 1.0 / grading_;
        if (hi / lo > ratio) {
            double a = lo;
            double width = lo * (ratio - 1.0);
            while (a + width < hi) {
                panel(a, a + width);
                a += width;
                width *= ratio;
            }
            panel(a, hi);
        } else {
            panel(lo, hi);
        }
        return acc.value();
    }

private:
    double R_;
    int order_;
    double grading_;
    int levels_;
    int subdiv_;
    std::vector<double> nodes_;
};

} // namespace sharplog
