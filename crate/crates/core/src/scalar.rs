//! The integer scalar abstraction the linear algebra is written against.
//!
//! Everything in [`crate::abelian`] is generic over [`IntScalar`]. Machine
//! integers (`i64`, `i128`) are fine for small inputs and for tests; the
//! crate-level aliases use [`num_bigint::BigInt`] because elimination on
//! chain complexes can grow entries well past 64 bits.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssignRef, NumRef, Signed, ToPrimitive};

pub trait IntScalar:
    Integer + Signed + NumRef + NumAssignRef + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn of(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("scalar cannot represent i64 value")
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + NumRef + NumAssignRef + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}
