//! Factorial-family primitives and the canonical text form of rationals.
//!
//! Integer-valued functions return [`BigInt`]; the products that take an
//! arbitrary base (`rising`, `falling`, `binom`, `pow`) are generic over
//! [`Scalar`] so they serve both the exact and the floating-point paths.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::Rational;

/// `n!`.
pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return domain(format!("double factorial undefined for n = {n}"));
    }
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// Double factorial of a natural number; never fails.
pub fn dfact(n: usize) -> BigInt {
    double_factorial(n as i64).expect("natural argument")
}

/// Rising factorial `(beta)_n = beta (beta + 1) ... (beta + n - 1)`.
pub fn rising<T: Scalar>(beta: &T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (beta.clone() + T::of(i as i64)))
}

/// Falling factorial `<beta>_n = beta (beta - 1) ... (beta - n + 1)`.
pub fn falling<T: Scalar>(beta: &T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (beta.clone() - T::of(i as i64)))
}

/// `binom(z, n) = <z>_n / n!` for natural `n`; zero when `z` is a natural
/// number below `n`.
pub fn binom<T: Scalar>(z: &T, n: usize) -> T {
    falling(z, n) / T::from_integer(&factorial(n))
}

/// Ordinary binomial coefficient of naturals, zero when `k > n`.
pub fn binom_nat(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `q^n` with `0^0 = 1`.
pub fn pow<T: Scalar>(q: &T, n: usize) -> T {
    num_traits::pow::pow(q.clone(), n)
}

/// `(-1)^n` as a sign factor.
pub fn sign<T: Scalar>(n: usize) -> T {
    if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Canonical text form: `p/q` in lowest terms, `p` when `q = 1`.
pub fn to_text(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, a plain integer, or a terminating decimal such as `-0.7`
/// or `2.5e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let e: i32 = exp.parse().or_else(|_| domain(format!("cannot parse rational `{s}`")))?;
        if mantissa.contains('/') || e.unsigned_abs() > 100_000 {
            return domain(format!("cannot parse rational `{s}`"));
        }
        let scale = Rational::from_integer(num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize));
        let m = parse_rational(mantissa)?;
        return Ok(if e >= 0 { m * scale } else { m / scale });
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim());
        let den = BigInt::from_str(den.trim());
        return match (num, den) {
            (Ok(_), Ok(d)) if d.is_zero() => domain(format!("zero denominator in `{s}`")),
            (Ok(n), Ok(d)) => Ok(Rational::new(n, d)),
            _ => domain(format!("cannot parse rational `{s}`")),
        };
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return domain(format!("cannot parse rational `{s}`"));
        }
        let mut num = BigInt::from_str(&digits).expect("checked digits");
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .or_else(|_| domain(format!("cannot parse rational `{s}`")))
}

/// Converts an exact rational to an integer, failing if it is fractional.
pub fn to_integer(q: &Rational) -> Option<BigInt> {
    q.denom().is_one().then(|| q.numer().clone())
}

/// `true` when `q` is a natural number.
pub fn is_natural(q: &Rational) -> bool {
    q.denom().is_one() && !q.numer().is_negative_int()
}

trait NegativeInt {
    fn is_negative_int(&self) -> bool;
}

impl NegativeInt for BigInt {
    fn is_negative_int(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
}

/// `gcd(|numer|, denom) == 1` and `denom >= 1`.
pub fn is_normalized(q: &Rational) -> bool {
    q.denom() >= &BigInt::one() && q.numer().gcd(q.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(1), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(0).unwrap(), BigInt::one());
        assert_eq!(double_factorial(7).unwrap(), BigInt::from(105));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn rising_and_falling() {
        assert_eq!(rising(&int(3), 0), int(1));
        assert_eq!(rising(&int(2), 3), int(24));
        assert_eq!(rising(&rat(-1, 2), 2), rat(-1, 4));
        assert_eq!(falling(&int(5), 0), int(1));
        assert_eq!(falling(&int(5), 2), int(20));
        assert_eq!(falling(&rat(1, 2), 2), rat(-1, 4));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(&int(4), 2), int(6));
        assert_eq!(binom(&int(2), 3), int(0));
        assert_eq!(binom(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binom(&int(-1), 0), int(1));
        assert_eq!(binom_nat(5, 4), BigInt::from(5));
        assert_eq!(binom_nat(1, 2), BigInt::zero());
    }

    #[test]
    fn powers_with_zero_to_the_zero() {
        assert_eq!(pow(&int(0), 0), int(1));
        assert_eq!(pow(&rat(-1, 2), 2), rat(1, 4));
        assert_eq!(pow(&int(3), 1), int(3));
    }

    #[test]
    fn generic_over_floats() {
        assert!((rising(&-0.5f64, 2) + 0.25).abs() < 1e-15);
        assert!((binom(&0.5f32, 2) + 0.125).abs() < 1e-6);
    }

    #[test]
    fn text_form() {
        assert_eq!(to_text(&rat(6, -4)), "-3/2");
        assert_eq!(to_text(&int(7)), "7");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("10/4").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-0.7").unwrap(), rat(-7, 10));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational("1E2").unwrap(), int(100));
        assert!(parse_rational("1e").is_err());
    }

    #[test]
    fn double_factorial_splits_factorial() {
        for n in 1..=50usize {
            let even = double_factorial(2 * n as i64).unwrap();
            let odd = double_factorial(2 * n as i64 - 1).unwrap();
            assert_eq!(even * odd, factorial(2 * n));
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn falling_of_shifted_base_is_rising(beta in small_rational(), n in 0usize..20) {
            let shifted = beta.clone() + int(n as i64) - int(1);
            prop_assert_eq!(falling(&shifted, n), rising(&beta, n));
        }

        #[test]
        fn binom_times_factorial_is_falling(z in small_rational(), n in 0usize..=50) {
            prop_assert_eq!(binom(&z, n) * int(factorial(n)), falling(&z, n));
        }

        #[test]
        fn arithmetic_stays_normalized(a in small_rational(), b in small_rational()) {
            prop_assert!(is_normalized(&(a.clone() + b.clone())));
            prop_assert!(is_normalized(&(a.clone() * b.clone())));
            prop_assert!(is_normalized(&(a.clone() - b.clone())));
            if !b.is_zero() {
                prop_assert!(is_normalized(&(a / b)));
            }
        }

        #[test]
        fn text_form_round_trips(q in small_rational()) {
            prop_assert_eq!(parse_rational(&to_text(&q)).unwrap(), q);
        }
    }
}
