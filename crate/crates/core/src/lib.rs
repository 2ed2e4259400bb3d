//! Numerical laboratory for weighted composition operators
//! `C_{ψ,φ} f = ψ · (f ∘ φ)` on the Hardy space `H²`, the weighted Bergman
//! spaces `A²_α` and general weighted Hardy spaces `H²(β)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`moebius`]: exact algebra, classification and dynamics of
//!   linear-fractional self-maps of the disk.
//! * [`series`]: truncated power series, weight sequences, inner products and
//!   reproducing kernels.
//! * [`wco`]: weight symbols, the operator model and its finite sections.
//! * [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian eigensolver
//!   and power-iteration norms.
//! * [`diagnostics`]: normality / hyponormality / normaloid verdicts and the
//!   closed-form criteria.
//!
//! Finite sections never prove anything about the infinite operator; every
//! numerical verdict is reported as evidence, except the rule-outs that rest on
//! closed-form inequalities.

// `!(x < 1.0)` deliberately also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod linalg;
pub mod moebius;
pub mod par;
pub mod sampling;
pub mod series;
pub mod wco;

pub use num_complex::Complex64;

pub use diagnostics::DiagnosticsError;
pub use linalg::{CMatrix, LinalgError};
pub use moebius::{FixedPoint, LftMap, MapClassification, MapKind, MoebiusError, Orbit};
pub use par::Exec;
pub use series::{PowerSeries, RationalPower, SeriesError, Space};
pub use wco::{SelfMap, SymbolSpec, TruncatedOperator, WcoError, WcoSpec};

/// Shorthand for a complex number from real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Any error produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Wco(#[from] WcoError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
}
