//! Numerical tolerances used across the crate.
//!
//! These are fixed once and shared so that every module classifies the
//! same borderline value the same way.

/// Slack for normalization checks (distribution mass, stochastic rows,
/// transport marginals). Sized for double-precision accumulation over up
/// to ~10^4 points.
pub const SUM_TOL: f64 = 1e-9;

/// Slack for classifying a probability or predicate value as exactly 0
/// or 1 (support membership, sharpness of fuzzy predicates).
pub const SHARP_TOL: f64 = 1e-12;

/// Slack for metric-space axioms (symmetry, triangle inequality) and for
/// non-expansiveness checks.
pub const MET_TOL: f64 = 1e-9;

/// Slack for primal/dual agreement of the transportation solver. Looser
/// than the direct-sum tolerances because simplex pivoting accumulates
/// more rounding error.
pub const DUAL_TOL: f64 = 1e-7;

/// Max-norm slack for `A = A†` checks.
pub const HERM_TOL: f64 = 1e-9;

/// Eigenvalues above `-PSD_TOL` count as nonnegative; used for positive
/// semidefiniteness and effect bounds.
pub const PSD_TOL: f64 = 1e-9;

/// Residual bound for eigendecompositions, `‖VΛV† − H‖_max`, and for
/// witness gaps derived from them.
pub const EIG_TOL: f64 = 1e-8;

/// Bound on the imaginary part of traces that must be real.
pub const IM_TOL: f64 = 1e-9;

/// Operator-norm slack for classifying a matrix effect as sharp,
/// `‖e² − e‖ ≤ SHARP_TOL_Q`.
pub const SHARP_TOL_Q: f64 = 1e-8;

/// Slack for sampled homomorphism / affineness checks on black boxes and
/// for the round-trip residuals built from them.
pub const HOM_TOL: f64 = 1e-7;

/// Iterations of the generic Archimedean-distance bisection. Resolution
/// 2^-60 ≈ 9e-19; the order-test tolerance dominates the error.
pub const BISECT_ITERS: u32 = 60;

/// Cauchy-gap threshold for accepting the tail of an ascending sequence
/// as its join proxy.
pub const CAUCHY_TOL: f64 = 1e-8;
