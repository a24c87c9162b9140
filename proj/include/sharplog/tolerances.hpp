#pragma once

// Every numerical threshold used by the library lives here so that the
// acceptance suite and the CLI agree on them.

namespace sharplog::tol {

inline constexpr double continuity = 1e-10;       // one-sided values at a breakpoint
inline constexpr double boundary = 1e-8;          // H^2_0 trace at r = R
inline constexpr double matching = 1e-9;          // C^2 matching residuals (relative)
inline constexpr double boundary_closed = 1e-10;  // u*(1), u*'(1) of the closed form
inline constexpr double det_relative = 1e-12;
inline constexpr double energy_identity = 1e-6;
inline constexpr double feasibility_check = 1e-12;  // u* >= psi on the check grid
inline constexpr double contact_gap = 1e-10;        // |D(x) - D_target|
inline constexpr double degenerate_denominator = 1e-30;

// Closed-form evaluation switches to series in y = x - 1 below this |y|.
inline constexpr double near_one_series = 1e-3;

// Scan: relative margin demanded when locating x_alpha / x_lambda.
inline constexpr double scan_margin = 1e-3;

// Extremal family: smallest admissible eps.
inline constexpr double eps_floor = 1e-12;

// Obstacle solver.
inline constexpr double kkt = 1e-8;
inline constexpr double contact_relative = 1e-6;  // contact tolerance * ||u||_inf

// Littlewood-Paley.
inline constexpr double partition = 1e-10;
inline constexpr double tail_energy = 1e-8;
inline constexpr double reconstruction = 1e-4;
inline constexpr double plancherel = 1e-6;

// Solver cross-validation.
inline constexpr double solver_energy = 1e-2;     // each solver against D^2 g
inline constexpr double solver_agreement = 5e-3;  // penalization against the QP oracle
inline constexpr double contact_cells = 2.0;

// Sharp-constant pinch: quotient <= target * (1 + slack).
inline constexpr double quotient_slack = 0.05;

// Scaling invariance of the scale-invariant quantities.
inline constexpr double scaling = 1e-8;

} // namespace sharplog::tol
