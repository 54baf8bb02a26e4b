//! Divisibility systems over linear integer polynomials.
//!
//! A system is a conjunction of constraints `f | g`. This crate provides the
//! polynomial and system types together with the structural machinery used
//! by the local-to-global solver: divisibility-module spans, the elimination
//! closure, S-terms, increasing-form checks and the sets of difficult primes.

pub mod error;
pub mod module;
pub mod poly;
pub mod primes;
pub mod sterms;
pub mod system;

pub use error::DivError;
pub use module::{close_elimination, is_increasing, module_basis, module_span, module_span_from, span_scalar_bound, ModuleSpan};
pub use poly::{default_name, Assignment, LinearPoly, Var};
pub use primes::{pdiff, pzero, pzero_parts, PzeroParts};
pub use sterms::{delta, s_closure, s_polynomial, sterms};
pub use system::{DivConstraint, DivSystem, VarOrder, VarPartition};

/// Builds an assignment from `(variable, value)` pairs.
pub fn assignment(pairs: &[(Var, i64)]) -> Assignment {
    pairs.iter().map(|&(v, x)| (v, num_bigint::BigInt::from(x))).collect()
}
