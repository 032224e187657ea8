//! Products `prod (l^2 + b)` and `prod ((2l-1)^2 + b)` as polynomials in
//! `b = alpha^2`, their Stirling-number forms, and the series coefficients
//! of `cosh`, `sinh`, `cos`, `sin` composed with `alpha arcsin x` and
//! `alpha arccos x`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{binom_nat, factorial, int, pow, rat, sign, to_integer, to_text};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::stirling::table;
use crate::Rational;

/// Dense integer polynomial, lowest degree first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPolynomial::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + T::from_integer(c))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductVariant {
    /// `prod_{l=1}^{k} (l^2 + b)`
    Consecutive,
    /// `prod_{l=1}^{k} ((2l-1)^2 + b)`
    Odd,
}

impl FromStr for ProductVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consecutive" => Ok(ProductVariant::Consecutive),
            "odd" => Ok(ProductVariant::Odd),
            _ => domain(format!("unknown product variant `{s}`")),
        }
    }
}

/// Direct expansion by repeated multiplication.
pub fn prod_squares(k: usize, variant: ProductVariant) -> IntPolynomial {
    let mut acc = IntPolynomial::new(vec![BigInt::one()]);
    for l in 1..=k {
        let root = match variant {
            ProductVariant::Consecutive => l,
            ProductVariant::Odd => 2 * l - 1,
        };
        acc = acc.mul(&IntPolynomial::new(vec![BigInt::from(root * root), BigInt::one()]));
    }
    acc
}

/// The same polynomial from the Stirling-number coefficient formulas.
pub fn prod_squares_stirling(k: usize, variant: ProductVariant) -> Result<IntPolynomial> {
    if k == 0 {
        return Ok(IntPolynomial::new(vec![BigInt::one()]));
    }
    let coeffs: Vec<Rational> = match variant {
        ProductVariant::Consecutive => {
            let t = table(2 * k + 1);
            let kk = int(k);
            (0..=k)
                .map(|j| {
                    let inner: Rational = (2 * j + 1..=2 * k + 1)
                        .map(|l| int(binom_nat(l, 2 * j + 1) * t.get(2 * k + 1, l)) * pow(&kk, l - 2 * j - 1))
                        .sum();
                    sign::<Rational>(k + j) * inner
                })
                .collect()
        }
        ProductVariant::Odd => {
            let t = table(2 * k);
            let base = int(2 * k - 1);
            let four_k = pow(&int(4), k);
            (0..=2 * k)
                .map(|j| {
                    let inner: Rational = (2 * j..=2 * k)
                        .map(|l| {
                            int(t.get(2 * k, l).clone() * binom_nat(l, 2 * j)) / pow(&int(2), l)
                                * pow(&base, l - 2 * j)
                        })
                        .sum();
                    sign::<Rational>(k + j) * &four_k * inner
                })
                .collect()
        }
    };
    let ints = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            to_integer(c).ok_or_else(|| {
                Error::NonIntegral(format!("coefficient of b^{j} for k = {k} is {}", to_text(c)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(ints))
}

/// Identity (i): `sum_{l=0}^{2k} (l+1) s(2k+1, l+1) k^l`, equal to `(-1)^k (k!)^2`.
pub fn lemma_identity_i(k: usize) -> BigInt {
    let t = table(2 * k + 1);
    let kk = BigInt::from(k);
    (0..=2 * k).map(|l| BigInt::from(l + 1) * t.get(2 * k + 1, l + 1) * num_traits::pow(kk.clone(), l)).sum()
}

/// Identity (ii) left side:
/// `sum_{l=2j+1}^{2k-1} binom(l, 2j) s(2k-1, l) (k-1)^(l-2j)`, equal to `-s(2k-1, 2j)`.
pub fn lemma_identity_ii(k: usize, j: usize) -> BigInt {
    let t = table(2 * k - 1);
    let base = BigInt::from(k - 1);
    (2 * j + 1..=2 * k - 1)
        .map(|l| binom_nat(l, 2 * j) * t.get(2 * k - 1, l) * num_traits::pow(base.clone(), l - 2 * j))
        .sum()
}

/// Identity (iii) left side:
/// `sum_{l=2j+1}^{2k} binom(l, 2j+1) s(2k, l) (k - 1/2)^l`, equal to zero.
pub fn lemma_identity_iii(k: usize, j: usize) -> Rational {
    let t = table(2 * k);
    let base = rat(2 * k as i64 - 1, 2);
    (2 * j + 1..=2 * k).map(|l| int(binom_nat(l, 2 * j + 1) * t.get(2 * k, l)) * pow(&base, l)).sum()
}

/// Identities (i)-(iii) for every `k <= k_max` and admissible `j`.
pub fn check_lemma_identities(k_max: usize) -> CheckReport {
    let mut report = CheckReport::new("lemma-identities");
    for k in 1..=k_max {
        let got = lemma_identity_i(k);
        let fk = factorial(k);
        let want = if k % 2 == 0 { &fk * &fk } else { -(&fk * &fk) };
        report.check(got == want, || format!("i:k={k:02}"), || format!("{got} != {want}"));

        let t = table(2 * k - 1);
        for j in 0..k {
            let got = lemma_identity_ii(k, j);
            let want = -t.get(2 * k - 1, 2 * j).clone();
            report.check(got == want, || format!("ii:k={k:02},j={j:02}"), || format!("{got} != {want}"));

            let got = lemma_identity_iii(k, j);
            report.check(
                got.is_zero(),
                || format!("iii:k={k:02},j={j:02}"),
                || format!("expected 0, got {}", to_text(&got)),
            );
        }
    }
    report
}

/// `prod_squares == prod_squares_stirling` for both variants and `k <= k_max`.
pub fn check_lemma_equivalence(k_max: usize) -> CheckReport {
    let mut report = CheckReport::new("lemma-equivalence");
    for variant in [ProductVariant::Consecutive, ProductVariant::Odd] {
        for k in 1..=k_max {
            let direct = prod_squares(k, variant);
            let via = prod_squares_stirling(k, variant);
            report.check(
                via.as_ref() == Ok(&direct),
                || format!("{variant:?}:k={k:02}"),
                || format!("direct {direct}, stirling {via:?}"),
            );
        }
    }
    report
}

/// Composition whose series coefficients [`trig_coeff`] produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TrigTag {
    CoshArcsin,
    SinhArcsin,
    CoshArccosAt1,
    CoshArccosAt0,
    SinhArccosAt0,
    CosArcsin,
    SinArcsin,
    CosArccosAt1,
    CosArccosAt0,
    SinArccosAt0,
}

impl TrigTag {
    pub const ALL: [TrigTag; 10] = [
        TrigTag::CoshArcsin,
        TrigTag::SinhArcsin,
        TrigTag::CoshArccosAt1,
        TrigTag::CoshArccosAt0,
        TrigTag::SinhArccosAt0,
        TrigTag::CosArcsin,
        TrigTag::SinArcsin,
        TrigTag::CosArccosAt1,
        TrigTag::CosArccosAt0,
        TrigTag::SinArccosAt0,
    ];

    /// Expansion point: the series is in `x` for 0 and in `x - 1` for 1.
    pub fn center(self) -> u8 {
        match self {
            TrigTag::CoshArccosAt1 | TrigTag::CosArccosAt1 => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TrigTag::CoshArcsin => "cosh-arcsin",
            TrigTag::SinhArcsin => "sinh-arcsin",
            TrigTag::CoshArccosAt1 => "cosh-arccos@1",
            TrigTag::CoshArccosAt0 => "cosh-arccos@0",
            TrigTag::SinhArccosAt0 => "sinh-arccos@0",
            TrigTag::CosArcsin => "cos-arcsin",
            TrigTag::SinArcsin => "sin-arcsin",
            TrigTag::CosArccosAt1 => "cos-arccos@1",
            TrigTag::CosArccosAt0 => "cos-arccos@0",
            TrigTag::SinArccosAt0 => "sin-arccos@0",
        }
    }
}

impl FromStr for TrigTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TrigTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown trig tag `{s}`")))
    }
}

/// Symbolic factor multiplying a coefficient; only `One` is rational in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Prefactor {
    One,
    /// `cosh(alpha pi / 2)`
    CoshHalfPi,
    /// `sinh(alpha pi / 2)`
    SinhHalfPi,
    /// `cos(alpha pi / 2)`
    CosHalfPi,
    /// `sin(alpha pi / 2)`
    SinHalfPi,
}

impl Prefactor {
    /// The exact value where it is rational: any `alpha` for `One`, integer
    /// `alpha` for the circular factors, `alpha = 0` for the hyperbolic ones.
    pub fn exact_value(self, alpha: &Rational) -> Option<Rational> {
        let quarter_turn = || -> Option<i64> {
            let n = to_integer(alpha)?;
            let r: BigInt = ((n % 4) + 4) % 4;
            Some(i64::try_from(r).expect("small"))
        };
        match self {
            Prefactor::One => Some(Rational::one()),
            Prefactor::CoshHalfPi => alpha.is_zero().then(Rational::one),
            Prefactor::SinhHalfPi => alpha.is_zero().then(Rational::zero),
            Prefactor::CosHalfPi => quarter_turn().map(|r| int([1, 0, -1, 0][r as usize])),
            Prefactor::SinHalfPi => quarter_turn().map(|r| int([0, 1, 0, -1][r as usize])),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm<T> {
    pub prefactor: Prefactor,
    pub coeff: T,
}

/// The coefficient is `sum prefactor * coeff` over `terms`. Pure
/// expansions have one term with prefactor `One`; the mixed expansions of
/// `arccos` at 0 have an even-part and an odd-part term, at most one of
/// which is nonzero for a given index.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigCoeff<T> {
    pub terms: Vec<TrigTerm<T>>,
}

impl TrigCoeff<Rational> {
    /// Collapses to one rational when every prefactor has an exact value.
    pub fn exact_value(&self, alpha: &Rational) -> Option<Rational> {
        self.terms.iter().try_fold(Rational::zero(), |acc, t| Some(acc + t.prefactor.exact_value(alpha)? * &t.coeff))
    }
}

/// `prod_{l=1}^{k} [(step (l-1) + shift)^2 + s b]` with `s = +-1`.
fn shifted_squares<T: Scalar>(k: usize, step: i64, shift: i64, b: &T, s: i64) -> T {
    (1..=k as i64).fold(T::one(), |acc, l| {
        let r = step * (l - 1) + shift;
        acc * (T::of(r * r) + T::of(s) * b.clone())
    })
}

/// Coefficient of `x^n` (center 0) or `(x-1)^n` (center 1) for `tag`.
pub fn trig_coeff<T: Scalar>(tag: TrigTag, alpha: &T, n: usize) -> TrigCoeff<T> {
    let b = alpha.clone() * alpha.clone();
    let fact = |m: usize| T::from_integer(&factorial(m));
    // cosh/cos of alpha arcsin: x^(2k) with prod [4(l-1)^2 +- b] / (2k)!
    let even = |s: i64| {
        if n % 2 == 1 {
            T::zero()
        } else {
            shifted_squares(n / 2, 2, 0, &b, s) / fact(n)
        }
    };
    // sinh/sin of alpha arcsin: x^(2k+1) with alpha prod [(2l-1)^2 +- b] / (2k+1)!
    let odd = |s: i64| {
        if n.is_multiple_of(2) {
            T::zero()
        } else {
            alpha.clone() * shifted_squares(n / 2, 2, 1, &b, s) / fact(n)
        }
    };
    // cosh/cos of alpha arccos at 1: (-1)^n prod [(l-1)^2 +- b] / ((2n-1)!! n!)
    let at_one = |s: i64| {
        let odd_fact = crate::exact::double_factorial(2 * n as i64 - 1).expect("n >= 0");
        sign::<T>(n) * shifted_squares(n, 1, 0, &b, s) / (T::from_integer(&odd_fact) * fact(n))
    };
    let pure = |coeff: T| TrigCoeff { terms: vec![TrigTerm { prefactor: Prefactor::One, coeff }] };
    let mixed = |ep: Prefactor, e: T, op: Prefactor, o: T| TrigCoeff {
        terms: vec![TrigTerm { prefactor: ep, coeff: e }, TrigTerm { prefactor: op, coeff: o }],
    };
    match tag {
        TrigTag::CoshArcsin => pure(even(1)),
        TrigTag::SinhArcsin => pure(odd(1)),
        TrigTag::CosArcsin => pure(even(-1)),
        TrigTag::SinArcsin => pure(odd(-1)),
        TrigTag::CoshArccosAt1 => pure(at_one(1)),
        TrigTag::CosArccosAt1 => pure(at_one(-1)),
        TrigTag::CoshArccosAt0 => mixed(Prefactor::CoshHalfPi, even(1), Prefactor::SinhHalfPi, -odd(1)),
        TrigTag::SinhArccosAt0 => mixed(Prefactor::SinhHalfPi, even(1), Prefactor::CoshHalfPi, -odd(1)),
        TrigTag::CosArccosAt0 => mixed(Prefactor::CosHalfPi, even(-1), Prefactor::SinHalfPi, odd(-1)),
        TrigTag::SinArccosAt0 => mixed(Prefactor::SinHalfPi, even(-1), Prefactor::CosHalfPi, -odd(-1)),
    }
}

/// Chebyshev `T_m` coefficients, lowest degree first.
fn chebyshev(m: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `cos(m arccos x)` at 0 and 1 against Chebyshev polynomials for
/// `m <= m_max`.
pub fn check_trig_chebyshev(m_max: usize) -> CheckReport {
    let mut report = CheckReport::new("trig-chebyshev");
    for m in 0..=m_max {
        let t = chebyshev(m);
        let alpha = int(m);
        for n in 0..=m + 2 {
            let got = trig_coeff(TrigTag::CosArccosAt0, &alpha, n).exact_value(&alpha);
            let want = int(t.get(n).cloned().unwrap_or_default());
            report.check(got.as_ref() == Some(&want), || format!("at0:m={m:02},n={n:02}"), || format!("{got:?} != {want}"));
            let shifted: BigInt = (n..t.len()).map(|i| &t[i] * binom_nat(i, n)).sum();
            let got = trig_coeff(TrigTag::CosArccosAt1, &alpha, n).terms[0].coeff.clone();
            report.check(got == int(shifted.clone()), || format!("at1:m={m:02},n={n:02}"), || format!("{got} != {shifted}"));
        }
    }
    report
}
