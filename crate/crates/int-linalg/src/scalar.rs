//! The integer scalar abstraction shared by the matrix routines.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integers usable as matrix entries.
///
/// Fixed-width implementors overflow silently on large inputs; `BigInt`
/// is the type used by the solver pipeline.
pub trait IntScalar:
    Clone + Debug + Display + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossless conversion to an arbitrary-precision integer.
    fn to_bigint(&self) -> BigInt;
}

macro_rules! impl_int_scalar {
    ($($t:ty),*) => {
        $(impl IntScalar for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
        })*
    };
}

impl_int_scalar!(i32, i64, i128);

impl IntScalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}
