//! Spectra and numerical ranges of tridiagonal random and pseudo-ergodic operators.
//!
//! The random hopping operator has superdiagonal 1, zero diagonal and
//! subdiagonal entries drawn from `{±σ}`. Its numerical range, the numerical
//! range of its square and the associated support functions are available in
//! closed form in [`fz`]; [`schur`] certifies the closed-form bounds on finite
//! windows and [`sections`] compares them against sampled finite sections.

// negated comparisons reject NaN inputs along with out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fz;
pub mod geometry;
pub mod linalg;
pub mod numrange;
pub mod operator;
pub mod schur;
pub mod sections;
pub mod symbol;

pub use error::{Result, SpecError};
pub use fz::{BoundaryKind, FzParams};
pub use geometry::{ConvexRegion, PointCloud};
pub use linalg::ComplexMatrix;
pub use numrange::SymTridiag;
pub use operator::{BandMatrix, PeriodicBandOperator, SignSequence, TridiagSpec};
pub use sections::SectionModel;
