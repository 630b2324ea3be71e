//! Finite truncations of scale Hilbert spaces.
//!
//! A scale Hilbert space is a nested family `H_0 ⊃ H_1 ⊃ …` of Hilbert spaces
//! with compact inclusions. At truncation every grade lives on the same
//! `n`-dimensional coordinate space and differs only by its inner product,
//! which is either diagonal (a weight `f^k`) or a dense SPD Gram matrix.
//!
//! The [`hessian`] module takes a symmetric operator and reconstructs the
//! weighted sequence model `ℓ^{2,f_A}` it induces, together with residual
//! certificates for every step of the construction.

pub mod ddouble;
pub mod error;
pub mod hessian;
pub mod linalg;
pub mod random;
pub mod schema;
pub mod sobolev;
pub mod spaces;
pub mod suite;
pub mod weights;

pub use error::{Error, Result};
pub use hessian::{FractalWeight, ResolventData, ScaleOperator, SpectralData};
pub use spaces::{Grade, GradedVector, TruncatedScaleSpace};
pub use weights::Weight;

/// Default relative tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-8;
