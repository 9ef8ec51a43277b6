#pragma once

// Every numerical threshold used by the library, the experiments and the
// acceptance gates lives here.  Tests include this header instead of
// restating magic numbers.

namespace adlab::tol {

// --- linear algebra -------------------------------------------------------

// Hermiticity defect accepted on construction, relative to the largest entry.
// Anything above this is a caller bug, not roundoff (dim <= 16 keeps
// accumulation far below 1e-12).
inline constexpr double hermitian_rel = 1e-12;

// Gate on ||M v - lambda v|| relative to ||M||.  Dense solvers on dim <= 16
// deliver ~1e-14; an order 1e-10 miss means the decomposition went wrong.
inline constexpr double eig_residual_rel = 1e-10;

// Pairwise orthonormality defect of eigenvector sets.
inline constexpr double orthonormal_abs = 1e-12;

// Unitarity defect of a single exact propagator step exp(-i M dt).
inline constexpr double unitary_abs = 1e-12;

// Adjacent eigenvalues closer than gap_rel*||M|| are reported degenerate;
// gauge continuation across the grid is meaningless below this separation.
inline constexpr double gap_rel = 1e-9;

// --- frames and connections ------------------------------------------------

// Unitarity defect allowed for the frame-change map built from an
// orthonormal eigenframe (n_grid accumulation on top of orthonormal_abs).
inline constexpr double frame_unitary_abs = 1e-10;

// Normalization forces a purely imaginary diagonal connection; the real
// part of the raw finite-difference value is discretization noise and is
// projected out.  Reported samples must satisfy |Re A| below this.
inline constexpr double connection_real_abs = 1e-8;

// A cyclic family must close: ||H(1) - H(0)|| relative to scale.
inline constexpr double cyclic_closure_rel = 1e-12;

// Consecutive frame vectors with |<n(s_k)|n(s_{k+1})>| below this mean the
// grid lost track of the level ordering.
inline constexpr double tracking_min_overlap = 0.1;

// Finite differencing is meaningless once neighbouring vectors rotate by
// more than pi/2; for unit vectors that is a distance of sqrt(2).
inline constexpr double coarse_step_vec_jump = 1.4142135623730951;

// --- propagation -----------------------------------------------------------

// Norm drift allowed along any trajectory.
inline constexpr double norm_drift_abs = 1e-8;

// Lab propagation vs frame-mapped rotating solutions (both routes), and the
// two rotating routes against each other, up to T = 50.
inline constexpr double propagator_agree_abs = 1e-6;

// Numerical lab propagation against the closed-form co-rotating solution.
inline constexpr double oracle_agree_abs = 1e-8;

// Expected error-reduction factor per step halving for the 4th-order
// integrator (2^3 with a margin attainable well above roundoff).
inline constexpr double rk4_halving_factor = 8.0;

// Kernel diagonal must equal the raw diagonal connection (unit phase factor).
inline constexpr double kernel_diag_abs = 1e-8;

// --- phases ------------------------------------------------------------

// Loop phase of the closed-form two-level frame against -pi*(1-cos theta).
inline constexpr double berry_closed_form_abs = 1e-8;

// Numeric vs analytic frame loop phase, as angles mod 2*pi (the two gauges
// differ by an exact winding for theta >= pi/2).
inline constexpr double berry_numeric_vs_analytic_abs = 2e-6;

// Gauge-invariance of the loop phase under smooth closed rephasings.
inline constexpr double berry_gauge_invariance_abs = 1e-8;

// Default cyclicity budget: geometric-phase extraction refuses runs that
// leak more than this out of the tracked level or
// return with |<Psi(0)|Psi(1)>| below 1 - eps_cyclic.
inline constexpr double eps_cyclic = 0.05;

// Extracted geometric phase against the loop phase at T = 400 (the O(1/T)
// constant is ~pi^2/2, giving ~0.012 rad; 0.05 leaves margin).
inline constexpr double geom_phase_err_abs = 0.05;

// Angular distance of the transported-overlap phase from the loop phase at
// T = 400 (constant ~3*pi^2/2 gives 0.037 rad at T = 400).
inline constexpr double aa_err_abs = 0.05;

// --- line-integral phase factors -------------------------------------------

// Winding-loop factors against exp(i e Phi) (segment quadrature is far
// more accurate; this bounds pathological paths too).
inline constexpr double ab_abs = 1e-6;

// Closed loops in curl-free regions and pure-gauge potentials must give
// exactly 1 up to quadrature roundoff.
inline constexpr double ab_closed_abs = 1e-10;

// Factor composition over concatenated paths.
inline constexpr double ab_compose_abs = 1e-10;

// Two-patch sphere flux against 4*pi*g, relative.
inline constexpr double monopole_flux_rel = 1e-6;

// |2 e g - nearest integer| below this counts as quantized.
inline constexpr double quantization_abs = 1e-9;

// Paths must keep this distance from a potential's singular set.
inline constexpr double min_singular_dist = 1e-6;

// --- verification experiments ------------------------------------------------

// Residuals below this count as "zero" when classifying frames
// (restriction residual, projection residual).
inline constexpr double residual_gate_abs = 1e-8;

// Overlap-vs-connection gap implied for frames whose projection residual
// vanishes (forward implication on generic numeric members).
inline constexpr double eq_gap_forward_abs = 1e-6;

// Same gap for the analytically-constructed phase-only member: pure
// cumulative-trapezoid error, a few 1e-9 on the 2^15-point grids the
// checks run at.
inline constexpr double phase_only_gap_abs = 1e-8;

// The two-level overlap at theta = pi/2, s = 1/2 vanishes identically...
inline constexpr double ms_zero_lhs_abs = 1e-10;
// ...while the connection-integral side keeps unit modulus...
inline constexpr double ms_unit_modulus_abs = 1e-10;
// ...so the gap between the two sides must be order one.
inline constexpr double ms_gap_min = 0.99;

// Probe gaps at theta = 0 (exactly diagonal kernel).
inline constexpr double probe_zero_abs = 1e-8;

// Derivative gap on members whose restriction residual is zero.
inline constexpr double probe_clean_abs = 1e-6;

// Lower bound on the derivative gap, as a fraction of the largest
// off-diagonal coupling, on members where the restriction visibly fails.
inline constexpr double dichotomy_factor = 0.4;

// Restriction residual above which a member counts as "visibly failing".
inline constexpr double dichotomy_residual_min = 0.1;

// Derivative-gap band at theta = pi/2 in units of pi (asymptote is
// pi*sin(theta) = pi; finite-T wobble stays within a few percent).
inline constexpr double deriv_band_lo_pi = 0.5;
inline constexpr double deriv_band_hi_pi = 1.5;

// State-gap sequences must decrease along a doubling T ladder up to a 10%
// oscillation allowance.
inline constexpr double envelope_allow = 1.10;

// Log-log slope gate for the cycle-maximum leakage over T = 25..200
// (exact law pi^2/(T^2+pi^2) gives -1.993).
inline constexpr double slope_gate = -1.5;

// Exact amplitude law |C|*|h| = pi*sin(theta)*|sin|h|| for the two-level
// closed form.
inline constexpr double transition_law_abs = 1e-8;

// Loop phases of the trivial and antipodal frames ({0, -2pi}) and their
// unit factors.
inline constexpr double theorem3_abs = 1e-10;

}  // namespace adlab::tol
