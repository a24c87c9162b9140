#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sharplog/errors.hpp"
#include "sharplog/tolerances.hpp"

namespace sharplog {

/// offset + coef * r^exponent
struct PowerForm {
    double offset = 0.0;
    double coef = 0.0;
    double exponent = 0.0;
};

/// constant + r2 * r^2 + rm2 * r^-2 + log * log(r): the radial biharmonic
/// functions of R^4 plus constants. b(r^2-1) + c(r^-2-1) + 2(c-b) log r is the
/// member {-b-c, b, c, 2(c-b)}.
struct BiharmonicLogForm {
    double constant = 0.0;
    double r2 = 0.0;
    double rm2 = 0.0;
    double log = 0.0;
};

/// Laurent polynomial sum_k c_k r^k; negative powers allowed.
struct PolynomialForm {
    std::vector<std::pair<int, double>> terms;  // (power, coefficient)
};

/// (sum_m q_m r^{2m}) * exp(-r^2 / (2 width^2))
struct GaussianForm {
    double width = 1.0;
    std::vector<double> q;
};

/// C^1 cubic Hermite interpolant through (r_i, value_i, slope_i).
struct SampledForm {
    std::vector<double> r;
    std::vector<double> value;
    std::vector<double> slope;
};

using SegmentForm = std::variant<PowerForm, BiharmonicLogForm, PolynomialForm, GaussianForm, SampledForm>;

/// Value and first two radial derivatives at a point.
struct Jet {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;

    /// Radial Laplacian in R^4.
    [[nodiscard]] double laplacian(double r) const { return d2f + 3.0 * df / r; }
};

inline std::string kind_name(const SegmentForm& form) {
    struct V {
        std::string operator()(const PowerForm&) const { return "power"; }
        std::string operator()(const BiharmonicLogForm&) const { return "biharmonic_log"; }
        std::string operator()(const PolynomialForm&) const { return "polynomial"; }
        std::string operator()(const GaussianForm&) const { return "gaussian"; }
        std::string operator()(const SampledForm&) const { return "sampled"; }
    };
    return std::visit(V{}, form);
}

namespace detail {

inline Jet jet_of(const PowerForm& p, double r) {
    const double b = p.exponent;
    if (p.coef == 0.0 || b == 0.0) return {p.offset + (b == 0.0 ? p.coef : 0.0), 0.0, 0.0};
    if (r == 0.0) {
        // one-sided limits; infinities are genuine for b < 1 or b < 2
        const double d1 = b > 1.0 ? 0.0 : (b == 1.0 ? p.coef : p.coef * b * HUGE_VAL);
        const double d2 = b > 2.0 ? 0.0 : (b == 2.0 ? 2.0 * p.coef : p.coef * b * (b - 1.0) * HUGE_VAL);
        return {p.offset + (b > 0.0 ? 0.0 : p.coef * HUGE_VAL), d1, d2};
    }
    const double rb = std::pow(r, b - 2.0);
    return {p.offset + p.coef * rb * r * r, p.coef * b * rb * r, p.coef * b * (b - 1.0) * rb};
}

inline Jet jet_of(const BiharmonicLogForm& p, double r) {
    const double ir = 1.0 / r;
    const double ir2 = ir * ir;
    Jet j;
    j.f = p.constant + p.r2 * r * r + p.rm2 * ir2 + (p.log != 0.0 ? p.log * std::log(r) : 0.0);
    j.df = 2.0 * p.r2 * r - 2.0 * p.rm2 * ir2 * ir + p.log * ir;
    j.d2f = 2.0 * p.r2 + 6.0 * p.rm2 * ir2 * ir2 - p.log * ir2;
    return j;
}

inline Jet jet_of(const PolynomialForm& p, double r) {
    Jet j;
    for (const auto& [k, c] : p.terms) {
        if (c == 0.0) continue;
        if (k == 0) {
            j.f += c;
            continue;
        }
        j.f += c * std::pow(r, k);
        j.df += c * k * std::pow(r, k - 1);
        if (k != 1) j.d2f += c * k * (k - 1.0) * std::pow(r, k - 2);
    }
    return j;
}

inline Jet jet_of(const GaussianForm& p, double r) {
    // f = P(t) E(t) with t = r^2; f' = 2 r f_t, f'' = 2 f_t + 4 t f_tt
    const double t = r * r;
    const double s2 = p.width * p.width;
    const double E = std::exp(-t / (2.0 * s2));
    double P = 0.0, dP = 0.0, d2P = 0.0;
    for (std::size_t m = p.q.size(); m-- > 0;) {
        d2P = d2P * t + 2.0 * dP;
        dP = dP * t + P;
        P = P * t + p.q[m];
    }
    const double ft = (dP - P / (2.0 * s2)) * E;
    const double ftt = (d2P - dP / s2 + P / (4.0 * s2 * s2)) * E;
    return {P * E, 2.0 * r * ft, 2.0 * ft + 4.0 * t * ftt};
}

inline Jet jet_of(const SampledForm& p, double r) {
    const auto& xs = p.r;
    auto it = std::upper_bound(xs.begin(), xs.end(), r);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    const double h = xs[i + 1] - xs[i];
    const double t = (r - xs[i]) / h;
    const double v0 = p.value[i], v1 = p.value[i + 1];
    const double m0 = p.slope[i] * h, m1 = p.slope[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    const double f = (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * m1;
    const double ft = (6 * t2 - 6 * t) * v0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * v1 + (3 * t2 - 2 * t) * m1;
    const double ftt = (12 * t - 6) * v0 + (6 * t - 4) * m0 + (-12 * t + 6) * v1 + (6 * t - 2) * m1;
    return {f, ft / h, ftt / (h * h)};
}

} // namespace detail

/// One analytic or sampled piece of a profile on [lo, hi].
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    SegmentForm form;

    [[nodiscard]] Jet jet(double r) const {
        return std::visit([r](const auto& f) { return detail::jet_of(f, r); }, form);
    }
    [[nodiscard]] double value(double r) const { return jet(r).f; }

    /// Exponent beta with |f(r)| ~ r^beta as r -> 0+ (0 for bounded kinds). A
    /// logarithmic term counts as an infinitesimally negative exponent and is
    /// reported through `log_singular`.
    struct Leading {
        double exponent = 0.0;
        bool log_singular = false;
    };
    [[nodiscard]] Leading leading_at_zero() const {
        struct V {
            Leading operator()(const PowerForm& p) const {
                if (p.coef == 0.0) return {0.0, false};
                if (p.offset != 0.0) return {std::min(0.0, p.exponent), false};
                return {p.exponent, false};
            }
            Leading operator()(const BiharmonicLogForm& p) const {
                if (p.rm2 != 0.0) return {-2.0, false};
                return {0.0, p.log != 0.0};
            }
            Leading operator()(const PolynomialForm& p) const {
                int k = std::numeric_limits<int>::max();
                for (const auto& [e, c] : p.terms)
                    if (c != 0.0) k = std::min(k, e);
                return {k == std::numeric_limits<int>::max() ? 0.0 : static_cast<double>(k), false};
            }
            Leading operator()(const GaussianForm&) const { return {0.0, false}; }
            Leading operator()(const SampledForm&) const { return {0.0, false}; }
        };
        return std::visit(V{}, form);
    }

    /// True when |f'(r)| is unbounded as r -> 0+.
    [[nodiscard]] bool slope_unbounded_at_zero() const {
        struct V {
            bool operator()(const PowerForm& p) const {
                return p.coef != 0.0 && p.exponent != 0.0 && p.exponent < 1.0;
            }
            bool operator()(const BiharmonicLogForm& p) const { return p.rm2 != 0.0 || p.log != 0.0; }
            bool operator()(const PolynomialForm& p) const {
                for (const auto& [e, c] : p.terms)
                    if (c != 0.0 && e < 0) return true;
                return false;
            }
            bool operator()(const GaussianForm&) const { return false; }
            bool operator()(const SampledForm&) const { return false; }
        };
        return std::visit(V{}, form);
    }
};

/// Closed-form Laplacian of one segment (R^4 radial: f'' + 3 f'/r).
inline Segment laplacian_segment(const Segment& s) {
    struct V {
        SegmentForm operator()(const PowerForm& p) const {
            const double b = p.exponent;
            return PowerForm{0.0, p.coef * b * (b + 2.0), b - 2.0};
        }
        SegmentForm operator()(const BiharmonicLogForm& p) const {
            return BiharmonicLogForm{8.0 * p.r2, 0.0, 2.0 * p.log, 0.0};
        }
        SegmentForm operator()(const PolynomialForm& p) const {
            PolynomialForm out;
            for (const auto& [k, c] : p.terms) {
                const double m = static_cast<double>(k) * (k + 2.0);
                if (c != 0.0 && m != 0.0) out.terms.emplace_back(k - 2, c * m);
            }
            return out;
        }
        SegmentForm operator()(const GaussianForm& p) const {
            // Delta (P E) = E [8P' + 4tP'' - 4P/s^2 - 4tP'/s^2 + tP/s^4]
            const double s2 = p.width * p.width;
            const std::size_t n = p.q.size();
            std::vector<double> out(n + 1, 0.0);
            for (std::size_t m = 0; m < n; ++m) {
                const double qm = p.q[m];
                const double dm = static_cast<double>(m);
                if (m >= 1) out[m - 1] += 8.0 * dm * qm + 4.0 * dm * (dm - 1.0) * qm;
                out[m] += -4.0 * qm / s2 - 4.0 * dm * qm / s2;
                out[m + 1] += qm / (s2 * s2);
            }
            return GaussianForm{p.width, std::move(out)};
        }
        SegmentForm operator()(const SampledForm&) const {
            throw UnsupportedOperation("laplacian_radial: sampled segments are only C^1 across nodes");
        }
    };
    return {s.lo, s.hi, std::visit(V{}, s.form)};
}

/// Segment of p(lambda r), defined on [lo/lambda, hi/lambda].
inline Segment dilate_segment(const Segment& s, double lambda) {
    struct V {
        double l;
        SegmentForm operator()(const PowerForm& p) const {
            return PowerForm{p.offset, p.coef * std::pow(l, p.exponent), p.exponent};
        }
        SegmentForm operator()(const BiharmonicLogForm& p) const {
            return BiharmonicLogForm{p.constant + p.log * std::log(l), p.r2 * l * l, p.rm2 / (l * l), p.log};
        }
        SegmentForm operator()(const PolynomialForm& p) const {
            PolynomialForm out = p;
            for (auto& [k, c] : out.terms) c *= std::pow(l, k);
            return out;
        }
        SegmentForm operator()(const GaussianForm& p) const {
            GaussianForm out{p.width / l, p.q};
            double f = 1.0;
            for (auto& qm : out.q) {
                qm *= f;
                f *= l * l;
            }
            return out;
        }
        SegmentForm operator()(const SampledForm& p) const {
            SampledForm out = p;
            for (auto& x : out.r) x /= l;
            for (auto& m : out.slope) m *= l;
            return out;
        }
    };
    return {s.lo / lambda, s.hi / lambda, std::visit(V{lambda}, s.form)};
}

inline Segment scale_segment(const Segment& s, double a) {
    struct V {
        double a;
        SegmentForm operator()(PowerForm p) const {
            p.offset *= a;
            p.coef *= a;
            return p;
        }
        SegmentForm operator()(BiharmonicLogForm p) const {
            p.constant *= a;
            p.r2 *= a;
            p.rm2 *= a;
            p.log *= a;
            return p;
        }
        SegmentForm operator()(PolynomialForm p) const {
            for (auto& t : p.terms) t.second *= a;
            return p;
        }
        SegmentForm operator()(GaussianForm p) const {
            for (auto& qm : p.q) qm *= a;
            return p;
        }
        SegmentForm operator()(SampledForm p) const {
            for (auto& v : p.value) v *= a;
            for (auto& m : p.slope) m *= a;
            return p;
        }
    };
    return {s.lo, s.hi, std::visit(V{a}, s.form)};
}

/// A radial function on [0, R] made of ordered segments tiling [0, R]. The
/// profile is extended by zero for r > R. Breakpoint values are stored per
/// segment (one-sided limits); `continuous` records a claim that is checked by
/// `check_continuity`, never assumed.
class RadialProfile {
public:
    RadialProfile() = default;

    RadialProfile(std::vector<Segment> segments, bool h2_zero = false, bool continuous = true)
        : segments_(std::move(segments)), h2_zero_(h2_zero), continuous_(continuous) {
        validate();
    }

    [[nodiscard]] double radius() const noexcept { return segments_.empty() ? 0.0 : segments_.back().hi; }
    [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }
    [[nodiscard]] bool h2_zero() const noexcept { return h2_zero_; }
    [[nodiscard]] bool continuous() const noexcept { return continuous_; }

    [[nodiscard]] std::vector<double> breakpoints() const {
        std::vector<double> b;
        b.reserve(segments_.size() + 1);
        for (const auto& s : segments_) b.push_back(s.lo);
        if (!segments_.empty()) b.push_back(segments_.back().hi);
        return b;
    }

    /// Index of the segment owning r (lo <= r < hi; the last segment owns R).
    [[nodiscard]] std::size_t locate(double r) const {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                                   [](double v, const Segment& s) { return v < s.hi; });
        if (it == segments_.end()) return segments_.size() - 1;
        return static_cast<std::size_t>(it - segments_.begin());
    }

    [[nodiscard]] Jet jet(double r) const {
        if (segments_.empty() || r > radius() || r < 0.0) return {};
        return segments_[locate(r)].jet(r);
    }
    [[nodiscard]] double operator()(double r) const { return jet(r).f; }

    /// One-sided evaluation at a breakpoint r = segments()[i].lo.
    [[nodiscard]] Jet jet_left(std::size_t i) const { return segments_[i - 1].jet(segments_[i].lo); }
    [[nodiscard]] Jet jet_right(std::size_t i) const { return segments_[i].jet(segments_[i].lo); }

    /// Largest one-sided mismatch of value and first derivative across the
    /// interior breakpoints (relative to max(1, |value|)).
    [[nodiscard]] double continuity_residual() const {
        double worst = 0.0;
        for (std::size_t i = 1; i < segments_.size(); ++i) {
            const Jet l = jet_left(i), r = jet_right(i);
            worst = std::max(worst, std::abs(l.f - r.f) / std::max(1.0, std::abs(l.f)));
            worst = std::max(worst, std::abs(l.df - r.df) / std::max(1.0, std::abs(l.df)));
        }
        return worst;
    }

    /// Value and derivative at R (both must vanish for H^2_0 admissibility).
    [[nodiscard]] Jet boundary_jet() const { return segments_.back().jet(radius()); }

    [[nodiscard]] bool boundary_ok(double tolerance = tol::boundary) const {
        const Jet j = boundary_jet();
        return std::abs(j.f) <= tolerance && std::abs(j.df) <= tolerance;
    }

    [[nodiscard]] RadialProfile scaled(double a) const {
        std::vector<Segment> s;
        for (const auto& seg : segments_) s.push_back(scale_segment(seg, a));
        return RadialProfile(std::move(s), h2_zero_, continuous_);
    }

    /// The profile r -> p(lambda r), on [0, R / lambda].
    [[nodiscard]] RadialProfile dilated(double lambda) const {
        if (!(lambda > 0.0)) throw DomainError("dilated: lambda must be positive");
        std::vector<Segment> s;
        for (const auto& seg : segments_) s.push_back(dilate_segment(seg, lambda));
        return RadialProfile(std::move(s), h2_zero_, continuous_);
    }

private:
    void validate() const {
        if (segments_.empty()) throw DomainError("RadialProfile: no segments");
        if (segments_.front().lo != 0.0) throw DomainError("RadialProfile: first segment must start at 0");
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const auto& s = segments_[i];
            if (!(s.hi > s.lo)) throw DomainError("RadialProfile: empty segment");
            if (i > 0 && segments_[i - 1].hi != s.lo)
                throw DomainError("RadialProfile: segments must tile [0, R] without gaps");
            if (const auto* sm = std::get_if<SampledForm>(&s.form)) {
                if (sm->r.size() < 2 || sm->r.size() != sm->value.size() || sm->r.size() != sm->slope.size())
                    throw DomainError("RadialProfile: malformed sampled segment");
                if (!std::is_sorted(sm->r.begin(), sm->r.end()) ||
                    std::adjacent_find(sm->r.begin(), sm->r.end()) != sm->r.end())
                    throw DomainError("RadialProfile: sampled nodes must increase strictly");
            }
        }
    }

    std::vector<Segment> segments_;
    bool h2_zero_ = false;
    bool continuous_ = true;
};

/// Segment-by-segment Laplacian. Closed forms map to closed forms; sampled
/// segments raise UnsupportedOperation.
inline RadialProfile laplacian_radial(const RadialProfile& p) {
    std::vector<Segment> out;
    out.reserve(p.segments().size());
    for (const auto& s : p.segments()) out.push_back(laplacian_segment(s));
    return RadialProfile(std::move(out), false, false);
}

// Convenience constructors for single-segment profiles.

inline RadialProfile power_profile(double offset, double coef, double exponent, double R = 1.0) {
    return RadialProfile({Segment{0.0, R, PowerForm{offset, coef, exponent}}});
}

inline RadialProfile polynomial_profile(std::vector<std::pair<int, double>> terms, double R = 1.0) {
    return RadialProfile({Segment{0.0, R, PolynomialForm{std::move(terms)}}});
}

inline RadialProfile gaussian_profile(double width, std::vector<double> q, double R) {
    return RadialProfile({Segment{0.0, R, GaussianForm{width, std::move(q)}}});
}

/// b(r^2-1) + c(1/r^2-1) + 2(c-b) log r.
inline BiharmonicLogForm biharmonic_log(double b, double c) {
    return BiharmonicLogForm{-b - c, b, c, 2.0 * (c - b)};
}

/// Hermite-sampled profile on [0, r.back()].
inline RadialProfile sampled_profile(std::vector<double> r, std::vector<double> value, std::vector<double> slope,
                                     bool h2_zero = false) {
    const double R = r.back();
    return RadialProfile({Segment{0.0, R, SampledForm{std::move(r), std::move(value), std::move(slope)}}}, h2_zero);
}

} // namespace sharplog
