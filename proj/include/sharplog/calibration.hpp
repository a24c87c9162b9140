#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sharplog/closed_form.hpp"
#include "sharplog/dyadic.hpp"
#include "sharplog/extremal.hpp"
#include "sharplog/global.hpp"
#include "sharplog/profile.hpp"

// Corpus-calibrated constants. The fit runs on the calibration corpus only; the
// resulting constants are frozen below and the validation corpus is checked
// against the frozen values.

namespace sharplog::calibration {

struct Entry {
    std::string id;
    RadialProfile u;
    double alpha = 0.5;
};

/// lambda used by the final split inequality: 1.5 / (8 pi^2 alpha).
inline double lambda_for(double alpha) {
    return 1.5 / (8.0 * std::numbers::pi * std::numbers::pi * alpha);
}

inline constexpr double fit_margin = 2.0;

namespace detail {

inline Entry minimizer_entry(double alpha, double x) {
    return {"minimizer(alpha=" + std::to_string(alpha).substr(0, 4) + ",x=" + std::to_string(x).substr(0, 5) + ")",
            minimizer_profile(coefficients_from_contact(alpha, x)), alpha};
}

// (1 - (r/R)^2)^k on [0, R], H^2_0 for k >= 2.
inline RadialProfile bump(int k, double R = 1.0, double scale = 1.0) {
    std::vector<std::pair<int, double>> terms;
    double binom = 1.0;
    for (int m = 0; m <= k; ++m) {
        terms.emplace_back(2 * m, scale * binom * (m % 2 == 0 ? 1.0 : -1.0));
        binom = binom * (k - m) / (m + 1);
    }
    RadialProfile p({Segment{0.0, 1.0, PolynomialForm{std::move(terms)}}}, true);
    return R == 1.0 ? p : p.dilated(1.0 / R);
}

inline Entry gaussian_entry(double width, std::vector<double> q, double alpha) {
    std::string id = "gaussian(w=" + std::to_string(width).substr(0, 4) + ",q=" + std::to_string(q.size()) + ")";
    return {id, gaussian_profile(width, std::move(q), 9.0 * width), alpha};
}

inline Entry extremal_entry(double eps, double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u_eps(%.0e)", eps);
    return {buf, build_loglog_extremal(eps).u_profile, alpha};
}

} // namespace detail

inline std::vector<Entry> calibration_corpus() {
    std::vector<Entry> c;
    for (double a : {0.3, 0.5, 0.7})
        for (double x : {0.1, 0.4}) c.push_back(detail::minimizer_entry(a, x));
    c.push_back(detail::gaussian_entry(0.2, {1.0}, 0.5));
    c.push_back({"bump(k=2)", detail::bump(2), 0.5});
    c.push_back({"bump(k=3)", detail::bump(3), 0.3});
    c.push_back(detail::extremal_entry(1e-2, 0.5));
    return c;
}

inline std::vector<Entry> validation_corpus() {
    std::vector<Entry> c;
    for (double a : {0.4, 0.6})
        for (double x : {0.05, 0.25, 0.7}) c.push_back(detail::minimizer_entry(a, x));
    c.push_back(detail::gaussian_entry(0.15, {1.0}, 0.5));
    c.push_back(detail::gaussian_entry(0.25, {1.0, 2.0}, 0.6));
    c.push_back({"bump(k=4,R=0.5)", detail::bump(4, 0.5), 0.5});
    c.push_back({"bump(k=2,x3)", detail::bump(2, 1.0, 3.0), 0.4});
    c.push_back(detail::extremal_entry(1e-4, 0.5));
    c.push_back(detail::extremal_entry(1e-6, 0.5));
    return c;
}

/// Everything the calibrated inequalities need from one profile.
struct Measurement {
    std::string id;
    double alpha = 0.0;
    double lap_ratio = 0.0;     // lap_equiv / ||Delta u||^2
    double holder_ratio = 0.0;  // holder_equiv / [u]_alpha
    double max_bernstein = 0.0;
    double reconstruction_error = 0.0;
    double plancherel_error = 0.0;
    double tail_energy_fraction = 0.0;
    LLReport ll;
    LowHighReport split;
};

inline Measurement measure(const Entry& e, const DecomposeOptions& opt = {}) {
    const DyadicDecomposition d = decompose(e.u, opt);
    Measurement m;
    m.id = e.id;
    m.alpha = e.alpha;
    m.reconstruction_error = d.reconstruction_error;
    m.plancherel_error = d.plancherel_error;
    m.tail_energy_fraction = d.tail_energy_fraction;
    const BesovFunctionals b = besov_functionals(d, e.alpha);
    m.ll = verify_ll_estimate(e.u, e.alpha, nullptr, &d);
    m.lap_ratio = b.lap_equiv / (m.ll.lap * m.ll.lap);
    m.holder_ratio = b.holder_equiv / m.ll.holder;
    for (double x : b.bernstein) m.max_bernstein = std::max(m.max_bernstein, x);
    m.split = verify_low_high_split(e.u, e.alpha, lambda_for(e.alpha), d);
    return m;
}

struct Constants {
    double K = 0.0;         // lap_equiv / ||Delta u||^2 in [1/K, K]
    double K_holder = 0.0;  // holder_equiv / [u]_alpha in [1/K', K']
    LLConstants ll;
    SplitConstants split;
};

/// margin * the worst calibration value of each ratio; the final constant is
/// fitted with margin * ||u||_inf on the left.
inline Constants fit(const std::vector<Measurement>& ms, double margin = fit_margin) {
    Constants c;
    auto two_sided = [](double r) { return std::max(r, 1.0 / r); };
    for (const auto& m : ms) {
        c.K = std::max(c.K, two_sided(m.lap_ratio));
        c.K_holder = std::max(c.K_holder, two_sided(m.holder_ratio));
        c.ll.split = std::max(c.ll.split, m.ll.printed.linear_ratio);
        c.ll.squared = std::max(c.ll.squared, m.ll.printed.squared_ratio);
        c.ll.prop = std::max(c.ll.prop, m.ll.prop_ratio);
        if (m.ll.ball_applicable) c.ll.ball = std::max(c.ll.ball, m.ll.ball_ratio);
        c.split.low = std::max(c.split.low, m.split.low_ratio);
        c.split.h1 = std::max(c.split.h1, m.split.h1_ratio);
        // C sits inside a log and fits to 0 when the plain bound already holds,
        // so the margin is applied to ||u||_inf instead.
        const auto& sp = m.split;
        c.split.final = std::max(c.split.final, fit_final_constant(margin * sp.sup, sp.l2, sp.lap, sp.c_alpha, sp.lambda));
    }
    c.K *= margin;
    c.K_holder *= margin;
    c.ll.split *= margin;
    c.ll.squared *= margin;
    c.ll.prop *= margin;
    c.ll.ball *= margin;
    c.split.low *= margin;
    c.split.h1 *= margin;
    return c;
}

/// Values of fit(calibration corpus) at the default decomposition options.
inline Constants frozen() {
    Constants c;
    c.K = 8.439656387656628;
    c.K_holder = 6.4790494505296445;
    c.ll.split = 0.25695467356366786;
    c.ll.squared = 0.065483408661475895;
    c.ll.prop = 0.14033949317935882;
    c.ll.ball = 0.14046255035295244;
    c.split.low = 0.0099636820939351459;
    c.split.h1 = 0.38759137503745872;
    c.split.final = 131.05773192625426;
    return c;
}

/// Verdicts of one measurement against a set of constants.
struct Verdict {
    bool lap = false;
    bool holder = false;
    bool split = false;
    bool squared = false;
    bool prop = false;
    bool ball = false;
    bool low = false;
    bool h1 = false;
    bool final = false;
    [[nodiscard]] bool all() const { return lap && holder && split && squared && prop && ball && low && h1 && final; }
};

inline Verdict check(const Measurement& m, const Constants& c) {
    Verdict v;
    v.lap = m.lap_ratio <= c.K && m.lap_ratio >= 1.0 / c.K;
    v.holder = m.holder_ratio <= c.K_holder && m.holder_ratio >= 1.0 / c.K_holder;
    v.split = m.ll.printed.linear_ratio <= c.ll.split;
    v.squared = m.ll.printed.squared_ratio <= c.ll.squared;
    v.prop = m.ll.prop_ratio <= c.ll.prop;
    v.ball = !m.ll.ball_applicable || m.ll.ball_ratio <= c.ll.ball;
    v.low = m.split.low_ratio <= c.split.low;
    v.h1 = m.split.h1_ratio <= c.split.h1;
    const double rhs = m.split.l2 + m.split.lap * std::sqrt(m.split.lambda * std::log(std::numbers::e +
                                                                                      c.split.final * m.split.c_alpha /
                                                                                          m.split.lap));
    v.final = m.split.sup <= rhs;
    return v;
}

} // namespace sharplog::calibration
