//! Integer programming with GCD constraints.
//!
//! Pipeline: [`normalize`] → [`sign_split`] → [`vzgs_decompose`] →
//! [`to_triples`] → [`force_increasing`] → per-triple local-to-global
//! solving, with every witness re-checked on the original instance.

pub mod error;
pub mod instance;
pub mod normalize;
pub mod solve;
pub mod modp;
pub mod triples;
pub mod vzgs;

pub use error::IpError;
pub use instance::{GcdConstraint, Inequality, IpGcdInstance, Objective, Rel, Sense};
pub use normalize::{as_var, normalize, sign_split};
pub use vzgs::{cone_norm_bound, points_in_box, positive_functional, rows_of, vzgs_decompose, DecomposeConfig, ShiftedCone};
pub use modp::{solve_triple_mod_p, triple_mod_p_bound};
pub use triples::{
    force_increasing, is_three_increasing, non_increasing_witness, substitute_triple, substitution_norm_bound, to_triples,
    unconstrained_vars, GcdToDivTriple, Role,
};
pub use solve::{feasible, optimize, IpConfig, SolveOutcome, SolveStats, Solved};
