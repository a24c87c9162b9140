#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sharplog/closed_form.hpp"
#include "sharplog/errors.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/quadrature.hpp"
#include "sharplog/tolerances.hpp"

namespace sharplog {

/// Nodes on [0, 1] for the C^1 Hermite discretization. `levels` > 0 replaces
/// the first uniform cell by geometric cells of ratio `ratio` toward r = 0.
struct RadialGrid {
    std::vector<double> nodes;
    int cells = 0;
    int levels = 0;
    double ratio = 0.5;

    static RadialGrid uniform(int n) { return graded(n, 0, 0.5); }

    static RadialGrid graded(int n, int levels, double ratio = 0.5) {
        if (n < 2) throw DomainError("RadialGrid: need at least 2 cells");
        if (levels < 0 || !(ratio > 0.0 && ratio < 1.0)) throw DomainError("RadialGrid: bad grading");
        RadialGrid g;
        g.cells = n;
        g.levels = levels;
        g.ratio = ratio;
        const double h = 1.0 / n;
        g.nodes.push_back(0.0);
        for (int k = levels; k >= 1; --k) g.nodes.push_back(h * std::pow(ratio, k));
        for (int i = 1; i <= n; ++i) g.nodes.push_back(i == n ? 1.0 : i * h);
        return g;
    }

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
    [[nodiscard]] std::size_t dofs() const noexcept { return 2 * nodes.size(); }
    /// Width of the uniform cells.
    [[nodiscard]] double cell_width() const noexcept { return 1.0 / cells; }

    void validate() const {
        if (nodes.size() < 3 || nodes.front() != 0.0 || nodes.back() != 1.0)
            throw DomainError("RadialGrid: nodes must run from 0 to 1");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1])) throw AssemblyError("RadialGrid: degenerate element");
    }
};

/// Symmetric band matrix with half-bandwidth 3 (two dofs per node), lower storage.
class BandMatrix {
public:
    static constexpr int bw = 3;

    explicit BandMatrix(std::size_t n = 0) : n_(n), a_(n * (bw + 1), 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double& at(std::size_t i, std::size_t j) {  // i >= j, i - j <= bw
        return a_[j * (bw + 1) + (i - j)];
    }
    [[nodiscard]] double get(std::size_t i, std::size_t j) const {
        if (i < j) std::swap(i, j);
        if (i - j > bw) return 0.0;
        return a_[j * (bw + 1) + (i - j)];
    }
    void add(std::size_t i, std::size_t j, double v) {
        if (i < j) return;  // upper triangle implied
        at(i, j) += v;
    }

    [[nodiscard]] std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            y[j] += a_[j * (bw + 1)] * x[j];
            for (int k = 1; k <= bw && j + k < n_; ++k) {
                const double v = a_[j * (bw + 1) + k];
                y[j + k] += v * x[j];
                y[j] += v * x[j + k];
            }
        }
        return y;
    }

    /// |A| |x|, the scale for componentwise backward errors.
    [[nodiscard]] std::vector<double> multiply_abs(const std::vector<double>& x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            y[j] += std::abs(a_[j * (bw + 1)] * x[j]);
            for (int k = 1; k <= bw && j + k < n_; ++k) {
                const double v = std::abs(a_[j * (bw + 1) + k]);
                y[j + k] += v * std::abs(x[j]);
                y[j] += v * std::abs(x[j + k]);
            }
        }
        return y;
    }

    /// In-place banded Cholesky; throws on a nonpositive pivot.
    void factorize() {
        for (std::size_t j = 0; j < n_; ++j) {
            double d = at(j, j);
            for (std::size_t k = (j > bw ? j - bw : 0); k < j; ++k) d -= at(j, k) * at(j, k);
            if (!(d > 0.0)) throw NonConvergence("BandMatrix: matrix is not positive definite");
            const double l = std::sqrt(d);
            at(j, j) = l;
            for (std::size_t i = j + 1; i <= std::min(n_ - 1, j + bw); ++i) {
                double s = at(i, j);
                for (std::size_t k = (i > bw ? i - bw : 0); k < j; ++k) s -= at(i, k) * at(j, k);
                at(i, j) = s / l;
            }
        }
    }

    [[nodiscard]] std::vector<double> solve_factored(std::vector<double> b) const {
        for (std::size_t i = 0; i < n_; ++i) {
            double s = b[i];
            for (std::size_t k = (i > bw ? i - bw : 0); k < i; ++k) s -= get(i, k) * b[k];
            b[i] = s / get(i, i);
        }
        for (std::size_t i = n_; i-- > 0;) {
            double s = b[i];
            for (std::size_t k = i + 1; k <= std::min(n_ - 1, i + bw); ++k) s -= get(k, i) * b[k];
            b[i] = s / get(i, i);
        }
        return b;
    }

private:
    std::size_t n_;
    std::vector<double> a_;
};

namespace detail {

// Cubic Hermite shape functions on [a, a + h] at local t, with derivatives in r.
struct Shape {
    std::array<double, 4> v, d1, d2;
};

inline Shape hermite_shape(double t, double h) {
    const double t2 = t * t, t3 = t2 * t;
    Shape s;
    s.v = {1 - 3 * t2 + 2 * t3, h * (t - 2 * t2 + t3), 3 * t2 - 2 * t3, h * (-t2 + t3)};
    s.d1 = {(-6 * t + 6 * t2) / h, 1 - 4 * t + 3 * t2, (6 * t - 6 * t2) / h, -2 * t + 3 * t2};
    s.d2 = {(-6 + 12 * t) / (h * h), (-4 + 6 * t) / h, (6 - 12 * t) / (h * h), (-2 + 6 * t) / h};
    return s;
}

} // namespace detail

/// Galerkin form of u -> 2 pi^2 int (Delta u)^2 r^3 dr on the Hermite space,
/// before boundary pinning. Dof 2i is u(r_i), dof 2i + 1 is u'(r_i).
struct DiscreteEnergy {
    RadialGrid grid;
    BandMatrix A;  // full (unpinned) matrix

    /// u^T A u, evaluated elementwise as a sum of squares 2 pi^2 w (r u'' + 3 u')^2 r
    /// so that no cancellation occurs on strongly graded meshes.
    [[nodiscard]] double energy(const std::vector<double>& u) const;
};

/// Element integrals u''^2 r^3 + 6 u' u'' r^2 + 9 u'^2 r are polynomials of
/// degree 5, so 4-point Gauss-Legendre is exact.
inline DiscreteEnergy assemble(const RadialGrid& grid) {
    grid.validate();
    DiscreteEnergy E;
    E.grid = grid;
    E.A = BandMatrix(grid.dofs());
    const GaussRule& rule = gauss_legendre(4);
    const double w2 = 2.0 * std::numbers::pi * std::numbers::pi;
    for (std::size_t e = 0; e + 1 < grid.size(); ++e) {
        const double a = grid.nodes[e], h = grid.nodes[e + 1] - a;
        double K[4][4] = {};
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q], r = a + h * t, w = rule.weights[q] * h * w2;
            const auto s = detail::hermite_shape(t, h);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    // (L_i)(L_j) r^3 with L = u'' + 3u'/r, written without 1/r
                    const double li = s.d2[i] * r + 3.0 * s.d1[i];
                    const double lj = s.d2[j] * r + 3.0 * s.d1[j];
                    K[i][j] += w * li * lj * r;
                }
        }
        const std::size_t base = 2 * e;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j <= i; ++j) E.A.add(base + i, base + j, K[i][j]);
    }
    for (std::size_t i = 0; i < grid.dofs(); ++i)
        if (!(E.A.get(i, i) > 0.0) && i + 2 < grid.dofs()) throw AssemblyError("assemble: zero diagonal entry");
    return E;
}

inline double DiscreteEnergy::energy(const std::vector<double>& u) const {
    if (u.size() != grid.dofs()) throw DomainError("DiscreteEnergy: dof vector has the wrong size");
    const GaussRule& rule = gauss_legendre(4);
    const double w2 = 2.0 * std::numbers::pi * std::numbers::pi;
    CompensatedSum s;
    for (std::size_t e = 0; e + 1 < grid.size(); ++e) {
        const double a = grid.nodes[e], h = grid.nodes[e + 1] - a;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q], r = a + h * t;
            const auto sh = detail::hermite_shape(t, h);
            double l = 0.0;
            for (int k = 0; k < 4; ++k) l += (sh.d2[k] * r + 3.0 * sh.d1[k]) * u[2 * e + k];
            s += rule.weights[q] * h * w2 * l * l * r;
        }
    }
    return s.value();
}

/// Hermite interpolation data of a profile at the grid nodes.
inline std::vector<double> interpolate(const RadialGrid& grid, const RadialProfile& p) {
    std::vector<double> u(grid.dofs());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto j = p.jet(grid.nodes[i]);
        u[2 * i] = j.f;
        u[2 * i + 1] = j.df;
    }
    return u;
}

/// The penalization switch: 1 for t <= 0, 1 - t/eps on [0, eps], 0 beyond.
inline double theta(double t, double eps) {
    if (t <= 0.0) return 1.0;
    if (t >= eps) return 0.0;
    return 1.0 - t / eps;
}

/// Antiderivative of theta with Theta(0) = 0.
inline double theta_primitive(double t, double eps) {
    if (t <= 0.0) return t;
    if (t >= eps) return 0.5 * eps;
    return t - 0.5 * t * t / eps;
}

struct PenalizationConfig {
    std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    double inner_tolerance = 1e-10;
    int max_inner_iterations = 200;
    double damping = 1.0;  // initial step fraction

    /// `require_floor` demands the schedule reach 1e-6 (full solves).
    void validate(bool require_floor = true) const {
        if (eps_schedule.empty()) throw DomainError("PenalizationConfig: empty schedule");
        for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
            if (!(eps_schedule[i] > 0.0)) throw DomainError("PenalizationConfig: eps must be positive");
            if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
                throw DomainError("PenalizationConfig: schedule must decrease strictly");
        }
        if (require_floor && !(eps_schedule.back() <= 1e-6)) throw DomainError("PenalizationConfig: schedule must reach 1e-6");
        if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("PenalizationConfig: damping must lie in (0, 1]");
    }
};

struct TraceEntry {
    int iteration = 0;
    double eps = 0.0;
    double residual = 0.0;
    double energy = 0.0;
    double step = 0.0;
    int active = 0;
};

struct SolveResult {
    std::string method;
    RadialProfile profile;
    std::vector<double> dofs;
    double energy = 0.0;
    double contact_radius = 0.0;
    double support_radius = 0.0;  // QP only: outermost node carrying a positive multiplier
    double feasibility_gap = 0.0;
    double kkt_residual = 0.0;
    std::vector<TraceEntry> trace;
    std::vector<double> stage_eps, stage_gap, stage_energy;  // penalization only
};

namespace detail {

inline double obstacle(double alpha, double D, double r) { return 1.0 - D * std::pow(r, alpha); }

inline std::vector<double> obstacle_nodal(const RadialGrid& g, double alpha, double D) {
    std::vector<double> psi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) psi[i] = obstacle(alpha, D, g.nodes[i]);
    return psi;
}

inline RadialProfile sampled_from_dofs(const RadialGrid& g, const std::vector<double>& u) {
    std::vector<double> r(g.nodes), v(g.size()), m(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        v[i] = u[2 * i];
        m[i] = u[2 * i + 1];
    }
    return sampled_profile(std::move(r), std::move(v), std::move(m), true);
}

inline void finish(SolveResult& out, const DiscreteEnergy& E, const std::vector<double>& u, double alpha, double D) {
    const auto& g = E.grid;
    out.dofs = u;
    out.energy = E.energy(u);
    out.profile = sampled_from_dofs(g, u);
    const auto psi = obstacle_nodal(g, alpha, D);
    double sup = 0.0, gap = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sup = std::max(sup, std::abs(u[2 * i]));
        gap = std::max(gap, psi[i] - u[2 * i]);
    }
    out.feasibility_gap = gap;
    const double ctol = tol::contact_relative * std::max(sup, 1e-300);
    double rc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (u[2 * i] - psi[i] > ctol) break;
        rc = g.nodes[i];
    }
    out.contact_radius = rc;
}

// Replace the rows/columns of fixed dofs by identity and move their values to the
// right-hand side; returns the solution of the reduced system.
inline std::vector<double> solve_with_fixed(const BandMatrix& A, std::vector<double> rhs,
                                            const std::vector<char>& fixed, const std::vector<double>& values) {
    const std::size_t n = A.size();
    BandMatrix M(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j; i <= std::min(n - 1, j + BandMatrix::bw); ++i) {
            const double v = A.get(i, j);
            if (fixed[i] || fixed[j]) {
                if (fixed[j] && !fixed[i]) rhs[i] -= v * values[j];
                if (fixed[i] && !fixed[j]) rhs[j] -= v * values[i];
                if (i == j) M.at(i, i) = 1.0;
            } else {
                M.at(i, j) = v;
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i]) rhs[i] = values[i];
    M.factorize();
    return M.solve_factored(std::move(rhs));
}

} // namespace detail

/// Reference solver: min u^T A u subject to nodal u(r_i) >= psi(r_i) and the
/// clamped conditions at r = 1, by a primal active-set method on the value dofs.
/// It starts from full contact, which is feasible, and releases one node per
/// step (the most negative multiplier) or blocks on the first violated node.
inline SolveResult qp_oracle(double alpha, double D, const RadialGrid& grid, int max_iterations = 0) {
    detail::require_alpha(alpha);
    if (!(D > 1.0)) throw DomainError("qp_oracle: D must exceed 1");
    const auto E = assemble(grid);
    const std::size_t n = grid.dofs(), m = grid.size();
    if (max_iterations <= 0) max_iterations = static_cast<int>(20 * m);
    const auto psi = detail::obstacle_nodal(grid, alpha, D);
    std::vector<char> working(m, 1);
    working[m - 1] = 0;  // pinned by the boundary condition instead

    auto equality_solution = [&] {
        std::vector<char> f(n, 0);
        std::vector<double> vals(n, 0.0);
        f[n - 2] = f[n - 1] = 1;
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (working[i]) {
                f[2 * i] = 1;
                vals[2 * i] = psi[i];
            }
        return detail::solve_with_fixed(E.A, std::vector<double>(n, 0.0), f, vals);
    };

    SolveResult out;
    out.method = "qp_active_set";
    std::vector<double> u = equality_solution();
    for (int it = 0; it < max_iterations; ++it) {
        const auto Au = E.A.multiply(u);
        const auto scale = E.A.multiply_abs(u);
        double lscale = 1e-300, most_negative = 0.0;
        std::size_t drop = m;
        int count = 0;
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (working[i]) {
                ++count;
                lscale = std::max(lscale, std::abs(Au[2 * i]));
                if (Au[2 * i] < most_negative) {
                    most_negative = Au[2 * i];
                    drop = i;
                }
            }
        // Componentwise relative residuals: stationarity against |A||u|, the
        // multiplier sign and complementarity against the largest multiplier.
        double stat = 0.0, dual = 0.0, comp = 0.0, feas = 0.0;
        for (std::size_t k = 0; k + 2 < n; ++k)
            if (k % 2 == 1 || !working[k / 2]) stat = std::max(stat, std::abs(Au[k]) / std::max(scale[k], 1e-300));
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double lam = working[i] ? Au[2 * i] : 0.0;
            dual = std::max(dual, -lam / lscale);
            comp = std::max(comp, std::abs(lam * (u[2 * i] - psi[i])) / lscale);
            feas = std::max(feas, psi[i] - u[2 * i]);
        }
        out.kkt_residual = std::max({stat, dual, comp, feas});
        out.trace.push_back({it, 0.0, out.kkt_residual, E.energy(u), 1.0, count});
        if (drop == m || -most_negative <= 1e-12 * lscale) {
            if (out.kkt_residual >= tol::kkt)
                throw NonConvergence("qp_oracle: KKT residual " + std::to_string(out.kkt_residual) +
                                     " above tolerance at termination");
            detail::finish(out, E, u, alpha, D);
            for (std::size_t i = 0; i + 1 < m; ++i)
                if (working[i] && Au[2 * i] > 1e-6 * lscale) out.support_radius = grid.nodes[i];
            return out;
        }
        working[drop] = 0;
        // move toward the new equality-constrained minimizer, stopping at the
        // first node that would cross the obstacle
        for (;; ++it) {
            const auto target = equality_solution();
            double step = 1.0;
            std::size_t block = m;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                // in exact arithmetic the released node moves up; never re-block it
                if (working[i] || i == drop) continue;
                const double p = target[2 * i] - u[2 * i];
                if (p < 0.0) {
                    const double s = std::max(0.0, u[2 * i] - psi[i]) / -p;
                    if (s < step) {
                        step = s;
                        block = i;
                    }
                }
            }
            for (std::size_t k = 0; k < n; ++k) u[k] += step * (target[k] - u[k]);
            if (block == m) break;
            u[2 * block] = psi[block];
            working[block] = 1;
            if (it + 1 >= max_iterations) break;
        }
    }
    throw NonConvergence("qp_oracle: no optimal working set after " + std::to_string(max_iterations) +
                         " iterations");
}

namespace detail {

// Quadrature of the penalization load on each element: the weight
// Delta^2 psi r^3 = D alpha^2 (4 - alpha^2) r^{alpha-1} is integrated exactly in
// its singular factor on the first element via r = h s^{1/alpha}.
struct LoadQuadrature {
    std::vector<std::size_t> element;
    std::vector<double> t, w;  // local coordinate, weight including the density

    LoadQuadrature(const RadialGrid& g, double alpha, double D, int order = 12) {
        const GaussRule& rule = gauss_legendre(order);
        const double c = 2.0 * std::numbers::pi * std::numbers::pi * D * alpha * alpha * (4.0 - alpha * alpha);
        for (std::size_t e = 0; e + 1 < g.size(); ++e) {
            const double a = g.nodes[e], h = g.nodes[e + 1] - a;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                double r, wt;
                if (a == 0.0) {
                    r = h * std::pow(rule.nodes[q], 1.0 / alpha);
                    wt = rule.weights[q] * std::pow(h, alpha) / alpha * c;
                } else {
                    r = a + h * rule.nodes[q];
                    wt = rule.weights[q] * h * c * std::pow(r, alpha - 1.0);
                }
                element.push_back(e);
                t.push_back((r - a) / h);
                w.push_back(wt);
            }
        }
    }
};

} // namespace detail

namespace detail {

inline SolveResult penalized(double alpha, double D, const RadialGrid& grid, const PenalizationConfig& cfg) {
    require_alpha(alpha);
    if (!(D > 1.0)) throw DomainError("solve_penalized: D must exceed 1");
    const auto E = assemble(grid);
    const std::size_t n = grid.dofs();
    const detail::LoadQuadrature lq(grid, alpha, D);
    std::vector<char> fixed(n, 0);
    fixed[n - 2] = fixed[n - 1] = 1;
    const std::vector<double> zeros(n, 0.0);

    auto eval_u = [&](const std::vector<double>& u, std::size_t q, detail::Shape& s) {
        const std::size_t e = lq.element[q];
        const double a = grid.nodes[e], h = grid.nodes[e + 1] - a;
        s = detail::hermite_shape(lq.t[q], h);
        double v = 0.0;
        for (int k = 0; k < 4; ++k) v += s.v[k] * u[2 * e + k];
        const double r = a + h * lq.t[q];
        return v - detail::obstacle(alpha, D, r);
    };
    auto functional = [&](const std::vector<double>& u, double eps) {
        CompensatedSum s;
        s += 0.5 * E.energy(u);
        detail::Shape sh;
        for (std::size_t q = 0; q < lq.w.size(); ++q) s += -lq.w[q] * theta_primitive(eval_u(u, q, sh), eps);
        return s.value();
    };

    SolveResult out;
    out.method = "penalization";
    std::vector<double> u(n, 0.0);
    int global_it = 0;
    for (double eps : cfg.eps_schedule) {
        bool converged = false;
        for (int it = 0; it < cfg.max_inner_iterations; ++it, ++global_it) {
            // gradient and Hessian
            std::vector<double> grad = E.A.multiply(u);
            std::vector<double> scale = E.A.multiply_abs(u);
            BandMatrix H = E.A;
            detail::Shape sh;
            int active = 0;
            for (std::size_t q = 0; q < lq.w.size(); ++q) {
                const double d = eval_u(u, q, sh);
                const double th = theta(d, eps);
                const std::size_t base = 2 * lq.element[q];
                for (int k = 0; k < 4; ++k) {
                    grad[base + k] -= lq.w[q] * th * sh.v[k];
                    scale[base + k] += std::abs(lq.w[q] * th * sh.v[k]);
                }
                if (d > 0.0 && d < eps) {
                    ++active;
                    const double c = lq.w[q] / eps;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j <= i; ++j) H.add(base + i, base + j, c * sh.v[i] * sh.v[j]);
                }
            }
            grad[n - 2] = grad[n - 1] = 0.0;
            // componentwise backward error of the discrete equation
            double residual = 0.0;
            for (std::size_t i = 0; i + 2 < n; ++i)
                residual = std::max(residual, std::abs(grad[i]) / std::max(scale[i], 1e-300));
            if (residual < cfg.inner_tolerance) {
                out.trace.push_back({global_it, eps, residual, E.energy(u), 0.0, active});
                converged = true;
                break;
            }
            std::vector<double> neg(n);
            for (std::size_t i = 0; i < n; ++i) neg[i] = -grad[i];
            const auto dir = detail::solve_with_fixed(H, neg, fixed, zeros);
            double slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
            if (!(slope < 0.0)) throw NonConvergence("solve_penalized: Newton direction is not a descent direction");
            const double J0 = functional(u, eps);
            double step = cfg.damping;
            std::vector<double> trial(n);
            for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir[i];
                if (functional(trial, eps) <= J0 + 1e-4 * step * slope) break;
            }
            if (step < 1e-12)
                throw NonConvergence("solve_penalized: line search stalled at eps = " + std::to_string(eps) +
                                     " with residual " + std::to_string(residual));
            u.swap(trial);
            out.trace.push_back({global_it, eps, residual, E.energy(u), step, active});
        }
        if (!converged)
            throw NonConvergence("solve_penalized: no convergence at eps = " + std::to_string(eps) + " after " +
                                 std::to_string(cfg.max_inner_iterations) + " Newton steps");
        SolveResult stage;
        detail::finish(stage, E, u, alpha, D);
        out.stage_eps.push_back(eps);
        out.stage_gap.push_back(stage.feasibility_gap);
        out.stage_energy.push_back(stage.energy);
    }
    detail::finish(out, E, u, alpha, D);
    return out;
}

} // namespace detail

/// Penalized problem a(u, v) = int Delta^2 psi theta_eps(u - psi) v, solved as
/// the minimizer of the strictly convex functional
/// J(u) = u^T A u / 2 - int Delta^2 psi Theta_eps(u - psi) by damped Newton with
/// Armijo backtracking, continued along the eps schedule with warm starts.
inline SolveResult solve_penalized(double alpha, double D, const RadialGrid& grid,
                                   const PenalizationConfig& cfg = PenalizationConfig()) {
    cfg.validate();
    return detail::penalized(alpha, D, grid, cfg);
}

/// Runs the configured schedule down to `eps`: entries above `eps`, then `eps`.
inline SolveResult solve_penalized(double alpha, double D, double eps, const RadialGrid& grid,
                                   PenalizationConfig cfg = PenalizationConfig()) {
    if (!(eps > 0.0)) throw DomainError("solve_penalized: eps must be positive");
    std::vector<double> schedule;
    for (double e : cfg.eps_schedule)
        if (e > eps) schedule.push_back(e);
    schedule.push_back(eps);
    cfg.eps_schedule = std::move(schedule);
    cfg.validate(false);
    return detail::penalized(alpha, D, grid, cfg);
}

struct CrossValidation {
    double alpha = 0.0, x = 0.0, D = 0.0;
    double closed_energy = 0.0;
    SolveResult qp, penalized;
    double qp_energy_error = 0.0;   // relative to D^2 g
    double pen_energy_error = 0.0;  // relative to D^2 g
    double qp_vs_pen = 0.0;         // relative energy difference
    double qp_sup_error = 0.0, pen_sup_error = 0.0;
    double qp_contact_cells = 0.0, pen_contact_cells = 0.0;  // |r_c - sqrt x| / cell width
};

inline CrossValidation cross_validate(double alpha, double x, const RadialGrid& grid,
                                      const PenalizationConfig& cfg = PenalizationConfig()) {
    const auto m = coefficients_from_contact(alpha, x);
    const auto exact = minimizer_profile(m);
    CrossValidation cv;
    cv.alpha = alpha;
    cv.x = x;
    cv.D = m.D;
    cv.closed_energy = m.energy();
    cv.qp = qp_oracle(alpha, m.D, grid);
    cv.penalized = solve_penalized(alpha, m.D, grid, cfg);
    auto sup_err = [&](const SolveResult& s) {
        double e = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) e = std::max(e, std::abs(s.dofs[2 * i] - exact(grid.nodes[i])));
        return e;
    };
    cv.qp_energy_error = std::abs(cv.qp.energy / cv.closed_energy - 1.0);
    cv.pen_energy_error = std::abs(cv.penalized.energy / cv.closed_energy - 1.0);
    cv.qp_vs_pen = std::abs(cv.penalized.energy / cv.qp.energy - 1.0);
    cv.qp_sup_error = sup_err(cv.qp);
    cv.pen_sup_error = sup_err(cv.penalized);
    cv.qp_contact_cells = std::abs(cv.qp.contact_radius - m.r0) / grid.cell_width();
    cv.pen_contact_cells = std::abs(cv.penalized.contact_radius - m.r0) / grid.cell_width();
    return cv;
}

} // namespace sharplog
