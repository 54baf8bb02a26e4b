//! Exact integer linear algebra: dense matrices, column-style Hermite normal
//! form, integer kernels and lattice membership.
//!
//! The algorithms are generic over [`IntScalar`]; the rest of the workspace
//! uses the arbitrary-precision aliases [`Matrix`] and [`Vector`].

pub mod hnf;
pub mod matrix;
pub mod scalar;

pub use hnf::{hnf, integer_kernel, is_hermite_form, lattice_member, min_positive_multiplier, reduce_against_hnf, HnfResult};
pub use matrix::{determinant, IntMatrix};
pub use scalar::IntScalar;

pub use num_bigint::BigInt;

/// Arbitrary-precision integer matrix.
pub type Matrix = IntMatrix<BigInt>;
/// Arbitrary-precision integer vector.
pub type Vector = Vec<BigInt>;
/// Hermite form result over arbitrary-precision integers.
pub type Hnf = HnfResult<BigInt>;
