//! Truncated Taylor and Maclaurin expansions built from `Q(k, m)`.
//!
//! Series around 1 are stored in the signed variable `x - 1`, series around
//! -1 in `x + 1`; the `[2(x-1)]^n` and `(1-x)` forms are folded into the
//! coefficients.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bell::bell_arccos_table;
use crate::error::{domain, Error, Result};
use crate::exact::{binom_nat, dfact, factorial, falling, int, pow, sign, to_text};
use crate::numeric::FixNum;
use crate::qfunc::q_unchecked;
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Center {
    Zero,
    One,
    MinusOne,
}

impl Center {
    pub fn point(self) -> Rational {
        match self {
            Center::Zero => int(0),
            Center::One => int(1),
            Center::MinusOne => int(-1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variable {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "x-1")]
    XMinusOne,
    #[serde(rename = "1-x")]
    OneMinusX,
    #[serde(rename = "x+1")]
    XPlusOne,
}

impl Variable {
    pub fn at<T: Scalar>(self, x: &T) -> T {
        match self {
            Variable::X => x.clone(),
            Variable::XMinusOne => x.clone() - T::one(),
            Variable::OneMinusX => T::one() - x.clone(),
            Variable::XPlusOne => x.clone() + T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::X => "x",
            Variable::XMinusOne => "x-1",
            Variable::OneMinusX => "1-x",
            Variable::XPlusOne => "x+1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    EvenOnly,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesMeta {
    pub label: String,
    /// False when coefficients were produced in floating point.
    pub exact: bool,
    /// The series expands `lhs_sign * f(x)` rather than `f(x)`.
    pub lhs_sign: i8,
    /// Radius of convergence in the series variable, if finite.
    #[serde(skip)]
    pub radius: Option<Rational>,
}

/// `coeffs[n]` is the coefficient of `variable^n`; the truncation order is
/// `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries<T> {
    pub center: Center,
    pub variable: Variable,
    pub parity: Parity,
    pub coeffs: Vec<T>,
    pub meta: SeriesMeta,
}

impl<T: Scalar> CoeffSeries<T> {
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Partial sum at `x` by Horner's rule.
    pub fn eval(&self, x: &T) -> T {
        let v = self.variable.at(x);
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * v.clone() + c.clone())
    }

    /// Product truncated to the shorter of the two orders.
    pub fn mul_truncated(&self, other: &CoeffSeries<T>) -> Result<CoeffSeries<T>> {
        if self.center != other.center || self.variable != other.variable {
            return domain("series with different expansion points cannot be multiplied");
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        let parity = if self.parity == Parity::EvenOnly && other.parity == Parity::EvenOnly {
            Parity::EvenOnly
        } else {
            Parity::All
        };
        Ok(CoeffSeries {
            center: self.center,
            variable: self.variable,
            parity,
            coeffs: crate::fps::mul_truncated(&self.coeffs, &other.coeffs, len),
            meta: SeriesMeta {
                label: format!("({})*({})", self.meta.label, other.meta.label),
                exact: self.meta.exact && other.meta.exact,
                lhs_sign: self.meta.lhs_sign * other.meta.lhs_sign,
                radius: match (&self.meta.radius, &other.meta.radius) {
                    (Some(a), Some(b)) => Some(a.min(b).clone()),
                    (a, b) => a.clone().or(b.clone()),
                },
            },
        })
    }
}

impl CoeffSeries<Rational> {
    pub fn to_scalar<T: Scalar>(&self) -> CoeffSeries<T> {
        CoeffSeries {
            center: self.center,
            variable: self.variable,
            parity: self.parity,
            coeffs: self.coeffs.iter().map(T::from_rational).collect(),
            meta: SeriesMeta { exact: T::EXACT && self.meta.exact, ..self.meta.clone() },
        }
    }

    /// Whether `x` lies strictly inside the disc of convergence.
    pub fn converges_at(&self, x: &Rational) -> bool {
        match &self.meta.radius {
            Some(r) => &self.variable.at(x).abs() < r,
            None => true,
        }
    }

    /// Geometric estimate of the neglected tail at `x`: the last included
    /// term times `rho / (1 - rho)`, where `rho` is the larger of the last
    /// observed term ratio and the limiting ratio `(|v| / radius)^step`.
    /// `None` when `rho >= 1`.
    pub fn tail_bound(&self, x: &Rational) -> Option<Rational> {
        let v = self.variable.at(x).abs();
        if v.is_zero() {
            return Some(Rational::zero());
        }
        let step = if self.parity == Parity::EvenOnly { 2 } else { 1 };
        let n = self.truncation_order();
        if n < step {
            return None;
        }
        let last = (self.coeff(n) * pow(&v, n)).abs();
        let prev = (self.coeff(n - step) * pow(&v, n - step)).abs();
        let limit = self.meta.radius.as_ref().map(|r| pow(&(v.clone() / r), step)).unwrap_or_else(Rational::zero);
        let rho = if prev.is_zero() { limit } else { (last.clone() / prev).max(limit) };
        if rho >= Rational::one() {
            return None;
        }
        Some(last * &rho / (Rational::one() - &rho))
    }
}

impl fmt::Display for CoeffSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.variable.name();
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", to_text(c))?,
                1 => write!(f, "{}*({v})", to_text(c))?,
                _ => write!(f, "{}*({v})^{n}", to_text(c))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(({v})^{})", self.truncation_order() + 1)
    }
}

fn need_k(k: usize) -> Result<()> {
    if k == 0 {
        return domain("power k must be at least 1");
    }
    Ok(())
}

/// `(arcsin x / x)^k` (or `arcsinh`) through `x^(2M)`.
pub fn arcsin_pow(k: usize, m_max: usize, hyperbolic: bool) -> Result<CoeffSeries<Rational>> {
    need_k(k)?;
    let mut coeffs = vec![Rational::zero(); 2 * m_max + 1];
    for m in 0..=m_max {
        let s = if hyperbolic { Rational::one() } else { sign::<Rational>(m) };
        coeffs[2 * m] = s * q_unchecked(k, 2 * m) * pow(&int(4), m)
            / int(binom_nat(k + 2 * m, k) * factorial(2 * m));
    }
    let f = if hyperbolic { "arcsinh" } else { "arcsin" };
    Ok(CoeffSeries {
        center: Center::Zero,
        variable: Variable::X,
        parity: Parity::EvenOnly,
        coeffs,
        meta: SeriesMeta {
            label: format!("({f}(x)/x)^{k}"),
            exact: true,
            lhs_sign: 1,
            radius: (!hyperbolic).then(|| int(1)),
        },
    })
}

/// `(2k)! Q(2k, 2n) 2^n / (2k+2n)!`, the `(x-1)^n` coefficient of the ratio power.
pub fn arccos_ratio_coeff(k: usize, n: usize) -> Rational {
    int(factorial(2 * k)) * q_unchecked(2 * k, 2 * n) * pow(&int(2), n) / int(factorial(2 * k + 2 * n))
}

/// `[(arccos x)^2 / (2(1-x))]^k` (or the `arccosh` form with `2(x-1)`) in
/// powers of `x - 1` through order `M`. Both forms share coefficients.
pub fn arccos_ratio_pow(k: usize, m_max: usize, hyperbolic: bool) -> Result<CoeffSeries<Rational>> {
    need_k(k)?;
    let label = if hyperbolic {
        format!("[arccosh(x)^2/(2(x-1))]^{k}")
    } else {
        format!("[arccos(x)^2/(2(1-x))]^{k}")
    };
    Ok(CoeffSeries {
        center: Center::One,
        variable: Variable::XMinusOne,
        parity: Parity::All,
        coeffs: (0..=m_max).map(|n| arccos_ratio_coeff(k, n)).collect(),
        meta: SeriesMeta { label, exact: true, lhs_sign: 1, radius: Some(int(2)) },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftedVariant {
    /// `[(pi - arccos x)^2 / (2(1+x))]^k`
    PiMinusArccos,
    /// `(-1)^k [(pi + i arccosh x)^2 / (2(1+x))]^k`
    PiPlusIArccosh,
}

/// Expansions around -1 in powers of `x + 1`.
pub fn shifted_forms(k: usize, m_max: usize, variant: ShiftedVariant) -> Result<CoeffSeries<Rational>> {
    need_k(k)?;
    let (label, lhs_sign) = match variant {
        ShiftedVariant::PiMinusArccos => (format!("[(pi-arccos(x))^2/(2(1+x))]^{k}"), 1),
        ShiftedVariant::PiPlusIArccosh => {
            (format!("[(pi+i*arccosh(x))^2/(2(1+x))]^{k}"), if k.is_multiple_of(2) { 1 } else { -1 })
        }
    };
    Ok(CoeffSeries {
        center: Center::MinusOne,
        variable: Variable::XPlusOne,
        parity: Parity::All,
        coeffs: (0..=m_max).map(|m| sign::<Rational>(m) * arccos_ratio_coeff(k, m)).collect(),
        meta: SeriesMeta { label, exact: true, lhs_sign, radius: Some(int(2)) },
    })
}

/// `(-1)^l (2l)! Q(2l, 2n) / (2l+2n)!` for `l = 1..=n`, index 0 unused.
fn alpha_weights(n: usize) -> Vec<Rational> {
    let mut w = vec![Rational::zero()];
    w.extend((1..=n).map(|l| {
        sign::<Rational>(l) * int(factorial(2 * l)) * q_unchecked(2 * l, 2 * n) / int(factorial(2 * l + 2 * n))
    }));
    w
}

/// `S(j, n) = sum_{l=1}^{j} (-1)^l (2l)! binom(j, l) Q(2l, 2n) / (2l+2n)!`
/// for `j = 0..=n`.
fn alpha_inner(n: usize) -> Vec<Rational> {
    let w = alpha_weights(n);
    (0..=n).map(|j| (1..=j).map(|l| int(binom_nat(j, l)) * &w[l]).sum()).collect()
}

/// `[(arccos x)^2 / (2(1-x))]^alpha` in powers of `x - 1` through order `M`.
///
/// The coefficient of `[2(x-1)]^n` is
/// `sum_{j=1}^{n} (-1)^j <alpha>_j / j! S(j, n)`. For exact scalars the
/// coefficients are also computed by Faà di Bruno over the Bell values of
/// [`crate::bell::bell_arccos`]; disagreement is an error.
pub fn ratio_pow_alpha<T: Scalar>(alpha: &T, m_max: usize) -> Result<CoeffSeries<T>> {
    let mut coeffs = vec![T::one()];
    let mut falling_over_fact: Vec<T> = vec![T::one()];
    for j in 1..=m_max {
        let prev = falling_over_fact[j - 1].clone();
        falling_over_fact.push(prev * (alpha.clone() - T::of(j as i64 - 1)) / T::of(j as i64));
    }
    for n in 1..=m_max {
        let s = alpha_inner(n);
        let bracket = (1..=n).fold(T::zero(), |acc, j| {
            acc + sign::<T>(j) * falling_over_fact[j].clone() * T::from_rational(&s[j])
        });
        coeffs.push(bracket * T::from_integer(&num_traits::pow(num_bigint::BigInt::from(2), n)));
    }
    if T::EXACT && m_max > 0 {
        let b = bell_arccos_table(m_max);
        for n in 1..=m_max {
            let via_bell = (1..=n).fold(T::zero(), |acc, j| {
                acc + falling(alpha, j) * T::from_rational(&b[n][j])
            }) / T::from_integer(&factorial(n));
            if via_bell != coeffs[n] {
                return Err(Error::Inconsistent(format!(
                    "ratio_pow_alpha: coefficient {n} differs between the double sum and Faa di Bruno"
                )));
            }
        }
    }
    Ok(CoeffSeries {
        center: Center::One,
        variable: Variable::XMinusOne,
        parity: Parity::All,
        coeffs,
        meta: SeriesMeta {
            label: format!("[arccos(x)^2/(2(1-x))]^({alpha})"),
            exact: T::EXACT,
            lhs_sign: 1,
            radius: Some(int(2)),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivForm {
    /// `[(arccos x)^2 / (2(1-x))]^k` at `1-`
    Ratio,
    /// `[(arccosh x)^2 / (2(1-x))]^k` at `1-`
    RatioHyp,
    /// `[(pi - arccos x)^2 / (2(1+x))]^k` at `-1+`
    Shifted,
    /// `[(pi + i arccosh x)^2 / (2(1+x))]^k` at `-1+`
    ShiftedHyp,
}

/// `m`-th one-sided derivative: `+- (2k)! (2m)!! Q(2k, 2m) / (2k+2m)!`.
pub fn deriv_at_one(k: usize, m: usize, form: DerivForm) -> Result<Rational> {
    need_k(k)?;
    let s = match form {
        DerivForm::Ratio => 0,
        DerivForm::RatioHyp => k,
        DerivForm::Shifted => m,
        DerivForm::ShiftedHyp => k + m,
    };
    Ok(sign::<Rational>(s) * int(factorial(2 * k) * dfact(2 * m)) * q_unchecked(2 * k, 2 * m)
        / int(factorial(2 * k + 2 * m)))
}

/// `n`-th derivative of `(arccos x)^(2k)` (or `arccosh`) at `1-`.
pub fn even_pow_deriv_at1(k: usize, n: usize, hyperbolic: bool) -> Result<Rational> {
    need_k(k)?;
    let s = if hyperbolic { Rational::one() } else { sign::<Rational>(k) };
    Ok(if n < k {
        Rational::zero()
    } else if n == k {
        s * int(dfact(2 * k))
    } else {
        s * int(factorial(2 * k)) * q_unchecked(2 * k, 2 * n - 2 * k) / int(dfact(2 * n - 1))
    })
}

/// Truncated inner sum of a Maclaurin coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct MaclaurinPartial {
    pub value: Rational,
    pub last_term: Rational,
    /// `|last / previous|` of the inner terms.
    pub ratio: Option<Rational>,
    /// `|last| r / (1 - r)`, absent when `r >= 1`.
    pub tail: Option<Rational>,
}

/// Coefficient of `x^j` in `(arccos x)^(2k)`, with the inner infinite sum
/// cut after `M` terms.
pub fn maclaurin_even_pow(k: usize, j: usize, m_terms: usize) -> Result<MaclaurinPartial> {
    need_k(k)?;
    if m_terms == 0 {
        return domain("at least one inner term is required");
    }
    let f2k = int(factorial(2 * k));
    let mut terms = Vec::with_capacity(m_terms);
    let mut value;
    if j <= k {
        for m in 1..=m_terms {
            terms.push(
                sign::<Rational>(m) * &f2k * q_unchecked(2 * k, 2 * m) * int(binom_nat(k + m, j))
                    / int(factorial(k + m) * dfact(2 * k + 2 * m - 1)),
            );
        }
        value = int(num_traits::pow(num_bigint::BigInt::from(2), k) * binom_nat(k, j));
        value += terms.iter().sum::<Rational>();
        value *= sign::<Rational>(j);
    } else {
        for m in 0..m_terms {
            terms.push(
                sign::<Rational>(j + m) * q_unchecked(2 * k, 2 * j + 2 * m - 2 * k) * int(binom_nat(j + m, j))
                    / int(factorial(j + m) * dfact(2 * j + 2 * m - 1)),
            );
        }
        let scale = sign::<Rational>(k + j) * &f2k;
        for t in terms.iter_mut() {
            *t *= &scale;
        }
        value = terms.iter().sum();
    }
    let last = terms.last().cloned().expect("m_terms >= 1");
    let ratio = (terms.len() >= 2 && !terms[terms.len() - 2].is_zero())
        .then(|| (last.clone() / &terms[terms.len() - 2]).abs());
    let tail = ratio
        .as_ref()
        .filter(|r| *r < &Rational::one())
        .map(|r| last.abs() * r / (Rational::one() - r));
    Ok(MaclaurinPartial { value, last_term: last, ratio, tail })
}

/// `(arccos x)^(2k-1)` has no Taylor expansion at `1-`.
pub fn odd_pow_at_one(k: usize) -> Result<CoeffSeries<Rational>> {
    need_k(k)?;
    Err(Error::NotExpandable(format!(
        "(arccos x)^{} and (arccosh x)^{} cannot be expanded into Taylor series at x = 1-: \
         their m-th derivatives there are 0 for m < {k} and divergent for m >= {k}",
        2 * k - 1,
        2 * k - 1
    )))
}

/// Partial sum of `series` at `x` rounded to `digits`.
pub fn eval_truncated(series: &CoeffSeries<Rational>, x: &Rational, digits: u32) -> Result<FixNum> {
    if !series.converges_at(x) {
        return domain(format!(
            "x = {} lies outside the convergence region of {}",
            to_text(x),
            series.meta.label
        ));
    }
    FixNum::from_rational(&series.eval(x), digits)
}

/// Named expansion, buildable at any truncation order.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesExpr {
    ArcsinPow(usize),
    ArcsinhPow(usize),
    ArccosRatio(usize),
    ArccoshRatio(usize),
    Shifted(usize, ShiftedVariant),
    AlphaRatio(Rational),
}

impl SeriesExpr {
    pub fn build(&self, m: usize) -> Result<CoeffSeries<Rational>> {
        match self {
            SeriesExpr::ArcsinPow(k) => arcsin_pow(*k, m, false),
            SeriesExpr::ArcsinhPow(k) => arcsin_pow(*k, m, true),
            SeriesExpr::ArccosRatio(k) => arccos_ratio_pow(*k, m, false),
            SeriesExpr::ArccoshRatio(k) => arccos_ratio_pow(*k, m, true),
            SeriesExpr::Shifted(k, v) => shifted_forms(*k, m, *v),
            SeriesExpr::AlphaRatio(a) => ratio_pow_alpha(a, m),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SeriesExpr::ArcsinPow(k) => format!("arcsin-pow(k={k})"),
            SeriesExpr::ArcsinhPow(k) => format!("arcsinh-pow(k={k})"),
            SeriesExpr::ArccosRatio(k) => format!("arccos-ratio(k={k})"),
            SeriesExpr::ArccoshRatio(k) => format!("arccosh-ratio(k={k})"),
            SeriesExpr::Shifted(k, ShiftedVariant::PiMinusArccos) => format!("shifted(k={k})"),
            SeriesExpr::Shifted(k, ShiftedVariant::PiPlusIArccosh) => format!("shifted-hyp(k={k})"),
            SeriesExpr::AlphaRatio(a) => format!("alpha-ratio(alpha={})", to_text(a)),
        }
    }
}

/// `arcsin_pow(k1) * arcsin_pow(k2) == arcsin_pow(k1 + k2)` through `x^(2M)`.
pub fn check_product_consistency(k_sum_max: usize, m_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("series-product-consistency");
    for hyperbolic in [false, true] {
        let all: Vec<_> = (1..=k_sum_max).map(|k| arcsin_pow(k, m_max, hyperbolic)).collect::<Result<_>>()?;
        for k1 in 1..k_sum_max {
            for k2 in k1..=k_sum_max - k1 {
                let prod = all[k1 - 1].mul_truncated(&all[k2 - 1])?;
                report.check(
                    prod.coeffs == all[k1 + k2 - 1].coeffs,
                    || format!("h={hyperbolic},k1={k1},k2={k2}"),
                    || "coefficients differ".into(),
                );
            }
        }
    }
    Ok(report)
}

/// Integer `alpha = k` reproduces [`arccos_ratio_pow`] for `k <= k_max`,
/// `n <= n_max`.
pub fn check_alpha_integer(k_max: usize, n_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("alpha-integer");
    for k in 1..=k_max {
        let a = ratio_pow_alpha(&int(k), n_max)?;
        let b = arccos_ratio_pow(k, n_max, false)?;
        for n in 0..=n_max {
            report.check(
                a.coeffs[n] == b.coeffs[n],
                || format!("k={k:02},n={n:02}"),
                || format!("{} != {}", to_text(&a.coeffs[n]), to_text(&b.coeffs[n])),
            );
        }
    }
    Ok(report)
}

/// `arcsin_pow(2)` coefficient of `x^(2m)` equals `(2m)!! / ((2m+1)!! (m+1))`.
pub fn check_arcsin2_recovery(m_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("arcsin-square-recovery");
    let s = arcsin_pow(2, m_max, false)?;
    for m in 0..=m_max {
        let want = int(dfact(2 * m)) / int(dfact(2 * m + 1) * (m + 1));
        let got = &s.coeffs[2 * m];
        report.check(got == &want, || format!("m={m:02}"), || format!("{} != {}", to_text(got), to_text(&want)));
    }
    Ok(report)
}

/// `deriv_at_one(k, m) == m! [(x-1)^m] arccos_ratio_pow(k)`, the parity of
/// the arcsin families, and the sign relation of the shifted forms.
pub fn check_series_structure(k_max: usize, m_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("series-structure");
    for k in 1..=k_max {
        let ratio = arccos_ratio_pow(k, m_max, false)?;
        let shifted = shifted_forms(k, m_max, ShiftedVariant::PiMinusArccos)?;
        for m in 1..=m_max {
            let d = deriv_at_one(k, m, DerivForm::Ratio)?;
            let c = int(factorial(m)) * &ratio.coeffs[m];
            report.check(d == c, || format!("deriv:k={k:02},m={m:02}"), || format!("{} != {}", to_text(&d), to_text(&c)));
            let ds = deriv_at_one(k, m, DerivForm::Shifted)?;
            let cs = int(factorial(m)) * &shifted.coeffs[m];
            report.check(ds == cs, || format!("shifted:k={k:02},m={m:02}"), || format!("{} != {}", to_text(&ds), to_text(&cs)));
        }
        for hyperbolic in [false, true] {
            let s = arcsin_pow(k, m_max, hyperbolic)?;
            let odd_zero = s.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero);
            report.check(odd_zero, || format!("parity:h={hyperbolic},k={k:02}"), || "odd coefficient".into());
        }
    }
    Ok(report)
}
