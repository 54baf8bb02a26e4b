//! Number theory for the solver: primality, factorization with an effort
//! budget, p-adic valuations, classic CRT and CRT with non-congruences.

pub mod crt;
pub mod error;
pub mod primes;
pub mod valuation;

pub use crt::{crt_combine, ecrtf, solve_mixed_crt, solve_mixed_crt_counted, CongruenceSystem, PrimePower};
pub use error::NumError;
pub use primes::{factorize, factorize_with, is_prime, is_prime_u64, next_prime, prime_divisors, primes_up_to, product, FactorBudget};
pub use valuation::{valuation, vp, Valuation};
