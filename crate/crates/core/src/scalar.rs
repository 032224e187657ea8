//! The field abstraction the algebraic layers are written against.
//!
//! Stirling numbers and `Q(k, m)` are always computed exactly; everything
//! built on top of them (Bell polynomials, Faà di Bruno composition, series
//! algebra, factorial-family products) only needs field operations and is
//! generic over [`Scalar`]. [`crate::Rational`] is the exact instance; `f64`
//! and `f32` give fast approximate evaluation of the same formulas.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar: Clone + Debug + Display + PartialEq + Signed + FromPrimitive + Send + Sync {
    fn from_integer(n: &BigInt) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn of(n: i64) -> Self {
        Self::from_i64(n).expect("every i64 is representable")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_integer(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_integer(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}
