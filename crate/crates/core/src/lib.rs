//! Exact combinatorics behind power series of inverse (hyperbolic) cosine
//! and sine expressions: Stirling numbers of the first kind, the quantity
//! `Q(k, m)`, partial Bell polynomials, product-of-squares expansions, the
//! Taylor coefficient generators built on them, and π series with a
//! fixed-point numeric oracle to check everything against.
//!
//! Exact values are [`Rational`]s. Operations whose algebra only needs field
//! arithmetic are generic over [`Scalar`], so the same code also runs on
//! `f64` and `f32`.

pub mod bell;
pub mod error;
pub mod exact;
pub mod fps;
pub mod numeric;
pub mod pi;
pub mod prodexpand;
pub mod qfunc;
pub mod report;
pub mod scalar;
pub mod series;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;
/// Exact Bell polynomial arguments.
pub type Args = bell::BellArgs<Rational>;
/// Floating-point Bell polynomial arguments.
pub type ArgsF64 = bell::BellArgs<f64>;
/// Exact truncated series.
pub type Series = series::CoeffSeries<Rational>;
/// Floating-point truncated series.
pub type SeriesF64 = series::CoeffSeries<f64>;

pub use numeric::FixNum;
pub use stirling::StirlingTable;
