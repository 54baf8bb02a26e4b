//! Local-to-global solving of increasing divisibility systems.
//!
//! Given solutions modulo each difficult prime, [`solve_increasing`] builds a
//! positive integer solution block by block.

pub mod error;
pub mod increasing;
pub mod modp;

pub use error::LgError;
pub use increasing::{ih3_violations, solve_increasing, solve_increasing_auto, LgConfig, LgSolution, LgStats, ModSolutions};
pub use modp::{find_mod_p_solution, solve_mod_easy_prime, solve_mod_easy_prime_with_order, ModPSolution};
