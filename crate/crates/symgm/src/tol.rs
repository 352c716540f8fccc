//! Central tolerance configuration.
//!
//! Two scales cover the crate: `algebraic` for quantities that are exact up
//! to rounding (inner products, permanents, closed-form constants) and
//! `optimization` for values produced by iterative solvers (ML fixed points,
//! GM multistart optimization). Specific thresholds derived from these are
//! named below so tests and library code agree on the numbers.

/// Tolerance configuration shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Exact-arithmetic scale: Hermiticity, normalization, closed forms.
    pub algebraic: f64,
    /// Iterative-solver scale: optimizer and fixed-point residuals.
    pub optimization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-10,
            optimization: 1e-8,
        }
    }
}

/// Normalization slack for `PureState` and `DensityMatrix` invariants.
pub const NORM_TOL: f64 = 1e-12;

/// Eigendecomposition residual: `A v = lambda v` within this bound.
pub const EIG_TOL: f64 = 1e-10;

/// Purity threshold certifying a likelihood maximum as pure.
pub const PURE_MAX_TOL: f64 = 1e-7;

/// Residual below which the ML fixed point counts as converged. The
/// contract only needs 1e-9; the tighter default costs a handful of extra
/// iterations and leaves boundary maximizers with purity deficits below 1e-9.
pub const ML_RESIDUAL_TOL: f64 = 1e-11;

/// Squared-residual threshold for frequency compatibility.
pub const COMPAT_TOL: f64 = 1e-12;

/// Gap |G - bound| below which the likelihood bound counts as saturated.
pub const SATURATION_TOL: f64 = 1e-7;

/// Successive-overlap change that stops the GM fixed-point iteration.
pub const GM_STEP_TOL: f64 = 1e-12;

/// Guard against division by a vanishing overlap in multiplicative updates.
pub const OVERLAP_GUARD: f64 = 1e-14;

/// Margin for the closed-half-sphere test: true iff min_j n.r_j >= -this.
pub const HALF_SPHERE_TOL: f64 = 1e-9;

/// Root acceptance for the Majorana polynomial, relative to the coefficient norm.
pub const ROOT_TOL: f64 = 1e-10;

/// Pairwise-overlap slack for SIC and fiducial verification.
pub const SIC_TOL: f64 = 1e-9;

/// Pairwise-overlap slack for MUB verification.
pub const MUB_TOL: f64 = 1e-10;
