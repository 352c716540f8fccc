//! Geometric measure of entanglement (GM) of permutation-symmetric states
//! assembled from rank-one POVM kets.
//!
//! The central objects are ket multisets: a list of (possibly subnormalized)
//! single-particle kets together with multiplicities. Symmetrizing their
//! tensor product gives a pure symmetric state whose normalization and
//! product-state overlaps are controlled by the permanent of the Gram matrix
//! of the kets. On top of that closed form this crate provides
//!
//! - exact permanents (Ryser with Gray-code updates) and a polynomial-time
//!   permanent for two-basis qubit multisets,
//! - GM lower bounds from likelihood maximization, an iterative
//!   maximum-likelihood solver, and compatibility tests that decide when the
//!   bound is tight,
//! - direct GM optimization over product states with multistart fixed-point
//!   iteration,
//! - additivity certificates via the Majorana representation (half-sphere
//!   test) and pure-point likelihood maxima,
//! - constructions for mutually unbiased bases in prime dimension and
//!   Heisenberg–Weyl covariant SIC-POVMs in d = 2, 3, with the associated
//!   symmetric-state GM values.
//!
//! All logarithms are base 2 unless a function name says otherwise.
//!
//! With the default `parallel` feature the permanent kernel, optimizer
//! restarts, and grid scans distribute over a rayon pool (capped by the
//! `SYMGM_THREADS` environment variable); without it the same code runs
//! sequentially. Results are deterministic for a fixed seed in either build.

pub mod error;
pub mod exec;
pub mod gm;
pub mod io;
pub mod linalg;
pub mod majorana;
pub mod permanent;
pub mod povm;
pub mod roots;
pub mod symmetric;
pub mod tol;

pub use error::{Error, Result};
pub use gm::{
    additivity_certificate, additivity_certify, closest_product_candidates, compatibility_general,
    compatibility_general_with, compatibility_qubit, compatibility_targets, gm_lower_bound,
    gm_optimize, gm_optimize_with, gm_tensor_product, gm_tensor_product_with, ml_maximize,
    ml_maximize_with, AdditivityRoute, CompatOutcome, GmOptions, GmResult, MlOptions, MlResult,
    RankOnePovm,
};
pub use linalg::{BlochVector, CMat, CVec, DensityMatrix, PureState};
pub use majorana::{half_sphere_check, majorana_extract, HalfSphereOutcome, MajoranaPoints};
pub use permanent::{gram, permanent_dicke, permanent_ryser, DickeCounts, GramMatrix};
pub use povm::{
    build_mubs, hw_orbit, mub_state_gm, sic_d3_perm_closed_form, sic_scan_d3, sic_scan_grid,
    sic_state_gm, two_design_check, verify_fiducial, verify_sic, HwOperators, MubSet, ScanRow,
    SicPovm,
};
pub use symmetric::{
    build_symmetric, dense_expand, product_overlap, symmetric_overlap, KetMultiset,
    SymmetricState,
};
pub use tol::Tolerances;
