//! Decimal fixed-point oracle with explicit error bounds.
//!
//! Kernels run on scaled integers at `digits + 10` places, track a bound on
//! the accumulated truncation error in units of the last place, and round
//! once at the end. A [`FixNum`] stands for the interval
//! `(mantissa ± err_ulp) · 10^-scale`, which always contains the true value.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{int, pow, rat, to_text};
use crate::series::{Center, SeriesExpr, ShiftedVariant};
use crate::Rational;

const GUARD: u32 = 10;
const DEFAULT_MAX_DIGITS: u32 = 1000;
pub const MAX_DIGITS_ENV: &str = "ARCSERIES_MAX_DIGITS";

static MAX_DIGITS: AtomicU32 = AtomicU32::new(0);

/// Largest precision the oracle accepts; `ARCSERIES_MAX_DIGITS` overrides
/// the default of 1000 on first use.
pub fn max_digits() -> u32 {
    match MAX_DIGITS.load(AtomicOrdering::Relaxed) {
        0 => {
            let v = std::env::var(MAX_DIGITS_ENV)
                .ok()
                .and_then(|s| s.trim().parse::<u32>().ok())
                .filter(|&d| d > 0)
                .unwrap_or(DEFAULT_MAX_DIGITS);
            let _ = MAX_DIGITS.compare_exchange(0, v, AtomicOrdering::Relaxed, AtomicOrdering::Relaxed);
            MAX_DIGITS.load(AtomicOrdering::Relaxed)
        }
        v => v,
    }
}

pub fn set_max_digits(limit: u32) {
    MAX_DIGITS.store(limit.max(1), AtomicOrdering::Relaxed);
}

fn check_digits(digits: u32) -> Result<()> {
    let limit = max_digits();
    if digits > limit {
        return Err(Error::PrecisionInfeasible { requested: digits, limit });
    }
    Ok(())
}

fn ten_pow(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

fn scaled_floor(q: &Rational, scale: u32) -> BigInt {
    (q * Rational::from_integer(ten_pow(scale))).floor().to_integer()
}

fn scaled_ceil(q: &Rational, scale: u32) -> BigInt {
    (q * Rational::from_integer(ten_pow(scale))).ceil().to_integer()
}

fn decimal_len(n: &BigUint) -> u32 {
    if n.is_zero() {
        0
    } else {
        n.to_string().len() as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixNum {
    mantissa: BigInt,
    scale: u32,
    err_ulp: BigUint,
}

impl FixNum {
    pub fn new(mantissa: BigInt, scale: u32, err_ulp: BigUint) -> Self {
        FixNum { mantissa, scale, err_ulp }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn err_ulp(&self) -> &BigUint {
        &self.err_ulp
    }

    /// `q` rounded down to `digits` places.
    pub fn from_rational(q: &Rational, digits: u32) -> Result<FixNum> {
        check_digits(digits)?;
        Ok(Self::from_rational_at(q, digits))
    }

    fn from_rational_at(q: &Rational, scale: u32) -> FixNum {
        let m = scaled_floor(q, scale);
        let exact = Rational::new(m.clone(), ten_pow(scale)) == *q;
        FixNum { mantissa: m, scale, err_ulp: if exact { BigUint::zero() } else { BigUint::one() } }
    }

    /// Smallest representable interval at `scale` containing `[lo, hi]`.
    pub fn from_interval(lo: &Rational, hi: &Rational, scale: u32) -> FixNum {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mid = (lo + hi) / int(2);
        let m = scaled_floor(&mid, scale);
        let down = m.clone() - scaled_floor(lo, scale);
        let up = scaled_ceil(hi, scale) - &m;
        let err = down.max(up).to_biguint().unwrap_or_default();
        FixNum { mantissa: m, scale, err_ulp: err }
    }

    fn ulp(&self) -> Rational {
        Rational::new(BigInt::one(), ten_pow(self.scale))
    }

    pub fn center(&self) -> Rational {
        Rational::new(self.mantissa.clone(), ten_pow(self.scale))
    }

    /// Half-width of the enclosing interval.
    pub fn radius(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.err_ulp.clone())) * self.ulp()
    }

    pub fn lower(&self) -> Rational {
        self.center() - self.radius()
    }

    pub fn upper(&self) -> Rational {
        self.center() + self.radius()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    pub fn overlaps(&self, other: &FixNum) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn to_f64(&self) -> f64 {
        self.center().to_f64().unwrap_or(f64::NAN)
    }

    /// Rounds down to `digits` places, widening the bound by one unit.
    pub fn round_to(&self, digits: u32) -> FixNum {
        match digits.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => FixNum {
                mantissa: &self.mantissa * ten_pow(digits - self.scale),
                scale: digits,
                err_ulp: &self.err_ulp * ten_pow(digits - self.scale).to_biguint().unwrap(),
            },
            Ordering::Less => {
                let d = ten_pow(self.scale - digits).to_biguint().unwrap();
                let m = self.mantissa.div_floor(&BigInt::from(d.clone()));
                let e = self.err_ulp.div_ceil(&d) + 1u32;
                FixNum { mantissa: m, scale: digits, err_ulp: e }
            }
        }
    }

    fn hull(values: [Rational; 4], scale: u32) -> FixNum {
        let lo = values.iter().min().unwrap();
        let hi = values.iter().max().unwrap();
        Self::from_interval(lo, hi, scale)
    }

    pub fn add(&self, other: &FixNum) -> FixNum {
        let s = self.scale.max(other.scale);
        Self::from_interval(&(self.lower() + other.lower()), &(self.upper() + other.upper()), s)
    }

    pub fn sub(&self, other: &FixNum) -> FixNum {
        let s = self.scale.max(other.scale);
        Self::from_interval(&(self.lower() - other.upper()), &(self.upper() - other.lower()), s)
    }

    pub fn neg(&self) -> FixNum {
        FixNum { mantissa: -self.mantissa.clone(), ..self.clone() }
    }

    pub fn mul(&self, other: &FixNum) -> FixNum {
        let s = self.scale.max(other.scale);
        let (a, b, c, d) = (self.lower(), self.upper(), other.lower(), other.upper());
        Self::hull([&a * &c, &a * &d, &b * &c, &b * &d], s)
    }

    pub fn div(&self, other: &FixNum) -> Result<FixNum> {
        let (c, d) = (other.lower(), other.upper());
        if !c.is_positive() && !d.is_negative() {
            return domain("division by an interval containing zero");
        }
        let s = self.scale.max(other.scale);
        let (a, b) = (self.lower(), self.upper());
        Ok(Self::hull([&a / &c, &a / &d, &b / &c, &b / &d], s))
    }

    pub fn mul_rational(&self, q: &Rational) -> FixNum {
        let (a, b) = (self.lower() * q, self.upper() * q);
        Self::from_interval(&a, &b, self.scale)
    }

    pub fn powi(&self, k: usize) -> FixNum {
        let mut acc = FixNum { mantissa: ten_pow(self.scale), scale: self.scale, err_ulp: BigUint::zero() };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates a monotone function at both interval ends and keeps the hull.
    pub fn map_monotone(&self, digits: u32, f: impl Fn(&Rational, u32) -> Result<FixNum>) -> Result<FixNum> {
        let lo = f(&self.lower(), digits)?;
        let hi = f(&self.upper(), digits)?;
        let ends = [lo.lower(), lo.upper(), hi.lower(), hi.upper()];
        Ok(Self::hull(ends, digits))
    }

    /// Places after the point that are correct to within one unit.
    pub fn certified_digits(&self) -> u32 {
        self.scale.saturating_sub(decimal_len(&self.err_ulp))
    }

    /// The value printed with certified digits only.
    pub fn certified_string(&self) -> String {
        let c = self.certified_digits();
        let r = self.round_to(c);
        render(&r.mantissa, c)
    }
}

fn render(m: &BigInt, scale: u32) -> String {
    let neg = m.sign() == Sign::Minus;
    let digits = m.abs().to_string();
    let s = scale as usize;
    let padded = if digits.len() <= s { format!("{}{}", "0".repeat(s + 1 - digits.len()), digits) } else { digits };
    let (ip, fp) = padded.split_at(padded.len() - s);
    let sign = if neg { "-" } else { "" };
    if s == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Certified digits, then the uncertain ones in parentheses:
/// `3.141592653(5)`.
impl fmt::Display for FixNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = render(&self.mantissa, self.scale);
        let unsure = decimal_len(&self.err_ulp) as usize;
        if unsure == 0 {
            return write!(f, "{full}");
        }
        if unsure > self.scale as usize {
            return write!(f, "{}(±{})", render(&self.mantissa, self.scale), self.err_ulp);
        }
        let (sure, rest) = full.split_at(full.len() - unsure);
        write!(f, "{sure}({rest})")
    }
}

impl Serialize for FixNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.certified_string())
    }
}

/// Working value `v · 10^-w` with error at most `e` units.
#[derive(Debug, Clone)]
struct Fx {
    v: BigInt,
    e: BigInt,
    w: u32,
}

impl Fx {
    fn exact(v: BigInt, w: u32) -> Fx {
        Fx { v, e: BigInt::zero(), w }
    }

    fn rat(q: &Rational, w: u32) -> Fx {
        let f = FixNum::from_rational_at(q, w);
        Fx { v: f.mantissa, e: BigInt::from(f.err_ulp), w }
    }

    fn value(&self) -> Rational {
        Rational::new(self.v.clone(), ten_pow(self.w))
    }

    fn add(self, o: Fx) -> Fx {
        Fx { v: self.v + o.v, e: self.e + o.e, w: self.w }
    }

    fn sub(self, o: Fx) -> Fx {
        Fx { v: self.v - o.v, e: self.e + o.e, w: self.w }
    }

    fn scale_int(self, n: i64) -> Fx {
        Fx { v: self.v * n, e: self.e * n.abs(), w: self.w }
    }

    fn half(self) -> Fx {
        Fx { v: self.v.div_floor(&BigInt::from(2)), e: self.e.div_ceil(&BigInt::from(2)) + 1, w: self.w }
    }

    fn finish(self, digits: u32) -> FixNum {
        FixNum { mantissa: self.v, scale: self.w, err_ulp: self.e.to_biguint().unwrap_or_default() }.round_to(digits)
    }
}

/// Truncating series `sum t_i / d_i` where `t_{i+1} = t_i * num_i / den_i`
/// shrinks by at least 1/4 per step; each term then carries at most three
/// units of error and the neglected tail at most four.
fn sum_series(first: BigInt, w: u32, mut step: impl FnMut(usize, &BigInt) -> (BigInt, BigInt)) -> Fx {
    let mut t = first;
    let mut acc = BigInt::zero();
    let mut i = 0usize;
    while !t.is_zero() {
        let (term, next) = step(i, &t);
        acc += term;
        t = next;
        i += 1;
    }
    Fx { v: acc, e: BigInt::from(3 * i + 4), w }
}

/// `atanh(a/b)` for `|a/b| <= 1/3`.
fn fx_atanh(a: &BigInt, b: &BigInt, w: u32) -> Fx {
    let a2 = a * a;
    let b2 = b * b;
    sum_series(ten_pow(w) * a / b, w, |i, t| {
        (t / BigInt::from(2 * i + 1), t * &a2 / &b2)
    })
}

fn ln2_cache() -> &'static Mutex<Option<Fx>> {
    static C: OnceLock<Mutex<Option<Fx>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(None))
}

fn pi_cache() -> &'static Mutex<Option<Fx>> {
    static C: OnceLock<Mutex<Option<Fx>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(None))
}

fn cached(cache: &Mutex<Option<Fx>>, w: u32, compute: impl FnOnce(u32) -> Fx) -> Fx {
    let mut guard = cache.lock().expect("oracle cache poisoned");
    if let Some(c) = guard.as_ref() {
        if c.w >= w {
            let d = ten_pow(c.w - w);
            return Fx { v: c.v.div_floor(&d), e: c.e.div_ceil(&d) + 1, w };
        }
    }
    let fresh = compute(w);
    *guard = Some(fresh.clone());
    fresh
}

fn fx_ln2(w: u32) -> Fx {
    cached(ln2_cache(), w, |w| fx_atanh(&BigInt::one(), &BigInt::from(3), w).scale_int(2))
}

/// `atan(1/n)` for `n >= 2`.
fn fx_arctan_inv(n: u32, w: u32) -> Fx {
    let n2 = BigInt::from(n) * n;
    sum_series(ten_pow(w) / n, w, |i, t| {
        let term = t / BigInt::from(2 * i + 1);
        (if i % 2 == 0 { term } else { -term }, t / &n2)
    })
}

fn fx_pi(w: u32) -> Fx {
    cached(pi_cache(), w, |w| {
        let a = fx_arctan_inv(5, w).scale_int(16);
        let b = fx_arctan_inv(239, w).scale_int(4);
        a.sub(b)
    })
}

fn fx_sqrt(q: &Rational, w: u32) -> Fx {
    let n = (q * Rational::from_integer(ten_pow(2 * w))).floor().to_integer();
    Fx { v: n.sqrt(), e: BigInt::from(2), w }
}

fn fx_ln(q: &Rational, w: u32) -> Fx {
    let mut e = q.numer().bits() as i64 - q.denom().bits() as i64;
    let two = int(2);
    let scaled = |e: i64| if e >= 0 { q / pow(&two, e as usize) } else { q * pow(&two, (-e) as usize) };
    let mut z = scaled(e);
    while z > rat(4, 3) {
        e += 1;
        z = scaled(e);
    }
    while z < rat(2, 3) {
        e -= 1;
        z = scaled(e);
    }
    let y = (&z - int(1)) / (&z + int(1));
    let lnz = fx_atanh(y.numer(), y.denom(), w).scale_int(2);
    lnz.add(fx_ln2(w).scale_int(e))
}

/// `arcsin(a/b)` for `|a/b| <= 1/2`.
fn fx_asin_small(a: &BigInt, b: &BigInt, w: u32) -> Fx {
    let a2 = a * a;
    let b2 = b * b;
    sum_series(ten_pow(w) * a / b, w, |i, t| {
        let j = BigInt::from(2 * i + 1);
        (t / &j, t * &a2 * &j / (&b2 * BigInt::from(2 * i + 2)))
    })
}

fn fx_asin(q: &Rational, w: u32) -> Fx {
    let half = rat(1, 2);
    let aq = q.abs();
    let neg = q.is_negative();
    let r = if aq <= half {
        return fx_asin_small(q.numer(), q.denom(), w);
    } else if aq == int(1) {
        fx_pi(w).half()
    } else {
        // arcsin|q| = pi/2 - 2 arcsin(sqrt((1-|q|)/2))
        let s = fx_sqrt(&((int(1) - &aq) / int(2)), w);
        let inner = fx_asin_small(&s.v, &ten_pow(w), w);
        let inner = Fx { e: inner.e + s.e * 2, ..inner };
        fx_pi(w).half().sub(inner.scale_int(2))
    };
    if neg {
        Fx { v: -r.v, ..r }
    } else {
        r
    }
}

fn fx_exp(q: &Rational, w: u32) -> Fx {
    let mut r = 0usize;
    let mut y = q.clone();
    while y.abs() > rat(1, 2) {
        y /= int(2);
        r += 1;
    }
    let (a, b) = (y.numer().clone(), y.denom().clone());
    let mut x = sum_series(ten_pow(w), w, |i, t| (t.clone(), t * &a / (&b * BigInt::from(i + 1))));
    let one = ten_pow(w);
    for _ in 0..r {
        let e = (BigInt::from(2) * x.v.abs() * &x.e + &x.e * &x.e).div_ceil(&one) + 1;
        x = Fx { v: (&x.v * &x.v).div_floor(&one), e, w };
    }
    x
}

fn working(digits: u32) -> Result<u32> {
    check_digits(digits)?;
    Ok(digits + GUARD)
}

/// π by Machin's arctangent formula.
pub fn pi_ref(digits: u32) -> Result<FixNum> {
    if digits < 10 {
        return domain("pi_ref needs at least 10 digits");
    }
    Ok(fx_pi(working(digits)?).finish(digits))
}

pub fn sqrt_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    if x.is_negative() {
        return domain(format!("sqrt of negative {}", to_text(x)));
    }
    Ok(fx_sqrt(x, working(digits)?).finish(digits))
}

pub fn ln_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    if !x.is_positive() {
        return domain(format!("ln needs x > 0, got {}", to_text(x)));
    }
    Ok(fx_ln(x, working(digits)?).finish(digits))
}

pub fn exp_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    Ok(fx_exp(x, working(digits)?).finish(digits))
}

pub fn arcsin_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    if x.abs() > int(1) {
        return domain(format!("arcsin needs |x| <= 1, got {}", to_text(x)));
    }
    Ok(fx_asin(x, working(digits)?).finish(digits))
}

pub fn arccos_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    if x.abs() > int(1) {
        return domain(format!("arccos needs |x| <= 1, got {}", to_text(x)));
    }
    let w = working(digits)?;
    Ok(fx_pi(w).half().sub(fx_asin(x, w)).finish(digits))
}

/// `ln(x + sqrt(x^2 - 1))`, exactly zero at 1.
pub fn arccosh_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    if x < &int(1) {
        return domain(format!("arccosh needs x >= 1, got {}", to_text(x)));
    }
    let w = working(digits)?;
    if x.is_one() {
        return Ok(Fx::exact(BigInt::zero(), w).finish(digits));
    }
    let arg = Fx::rat(x, w).add(fx_sqrt(&(x * x - int(1)), w));
    // ln is 1-Lipschitz on [1, inf)
    let l = fx_ln(&arg.value(), w);
    Ok(Fx { e: l.e + arg.e, ..l }.finish(digits))
}

pub fn arcsinh_fp(x: &Rational, digits: u32) -> Result<FixNum> {
    let w = working(digits)?;
    if x.is_zero() {
        return Ok(Fx::exact(BigInt::zero(), w).finish(digits));
    }
    let ax = x.abs();
    let arg = Fx::rat(&ax, w).add(fx_sqrt(&(&ax * &ax + int(1)), w));
    let l = fx_ln(&arg.value(), w);
    let l = Fx { e: l.e + arg.e, ..l };
    let l = if x.is_negative() { Fx { v: -l.v, ..l } } else { l };
    Ok(l.finish(digits))
}

/// `x^alpha` for `x > 0` (or `x = 0`, `alpha > 0`) by an integer root.
pub fn pow_fp(x: &Rational, alpha: &Rational, digits: u32) -> Result<FixNum> {
    if x.is_negative() || (x.is_zero() && !alpha.is_positive()) {
        return domain(format!("{}^{} is not real", to_text(x), to_text(alpha)));
    }
    let w = working(digits)?;
    if x.is_zero() {
        return Ok(Fx::exact(BigInt::zero(), w).finish(digits));
    }
    let p = alpha.numer().abs().to_usize().ok_or_else(|| Error::Domain("exponent too large".into()))?;
    let q = alpha.denom().to_u32().ok_or_else(|| Error::Domain("exponent denominator too large".into()))?;
    let base = if alpha.is_negative() { x.recip() } else { x.clone() };
    let n = (pow(&base, p) * Rational::from_integer(ten_pow(w * q))).floor().to_integer();
    Ok(Fx { v: n.nth_root(q), e: BigInt::from(2), w }.finish(digits))
}

/// [`arcsin_fp`] on an interval argument, clamped to `[-1, 1]`.
pub fn arcsin_fix(x: &FixNum, digits: u32) -> Result<FixNum> {
    x.map_monotone(digits, |t, d| arcsin_fp(&t.clone().clamp(int(-1), int(1)), d))
}

/// `cosh` of an interval argument.
pub fn cosh_fix(x: &FixNum, digits: u32) -> Result<FixNum> {
    let cosh = |t: &Rational, d: u32| -> Result<FixNum> {
        let sum = exp_fp(t, d + 2)?.add(&exp_fp(&-t.clone(), d + 2)?);
        Ok(sum.mul_rational(&rat(1, 2)).round_to(d))
    };
    let (lo, hi) = (x.lower(), x.upper());
    if lo.is_negative() && hi.is_positive() {
        let a = cosh(&lo, digits)?;
        let b = cosh(&hi, digits)?;
        return Ok(FixNum::from_interval(&int(1), &a.upper().max(b.upper()), digits));
    }
    let a = cosh(&lo, digits)?;
    let b = cosh(&hi, digits)?;
    Ok(FixNum::hull([a.lower(), a.upper(), b.lower(), b.upper()], digits))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareStatus {
    Pass,
    Fail,
    /// The series could not supply a tail bound at this order.
    NoTailBound,
    OutsideTestRegion,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub expr: String,
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    pub terms: usize,
    pub digits: u32,
    pub status: CompareStatus,
    pub series_value: Option<FixNum>,
    pub direct_value: Option<FixNum>,
    pub residual: Option<FixNum>,
    #[serde(serialize_with = "ser_opt_rational_decimal")]
    pub tail_bound: Option<Rational>,
    pub note: Option<String>,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_text(q))
}

fn ser_opt_rational_decimal<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&sci(q)),
        None => s.serialize_none(),
    }
}

/// Short scientific rendering of a nonnegative rational, rounded up.
pub fn sci(q: &Rational) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let at = |e: i64| if e >= 0 { &a / int(ten_pow(e as u32)) } else { &a * int(ten_pow((-e) as u32)) };
    while at(e) >= int(10) {
        e += 1;
    }
    while at(e) < int(1) {
        e -= 1;
    }
    let m = (at(e) * int(1000)).ceil().to_integer();
    let ms = m.to_string();
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, &ms[..1], &ms[1..], e)
}

/// The closed-form value the expansion is supposed to equal at `x`, for `x`
/// in `(-1, 1)`.
fn direct_value(expr: &SeriesExpr, x: &Rational, w: u32) -> Result<(FixNum, Option<String>)> {
    let one = FixNum::from_rational_at(&int(1), w);
    let arccos_ratio = |x: &Rational| -> Result<FixNum> {
        if x.is_one() {
            return Ok(one.clone());
        }
        let a = arccos_fp(x, w)?;
        Ok(a.mul(&a).mul_rational(&(int(1) / (int(2) * (int(1) - x)))))
    };
    let mut note = None;
    let v = match expr {
        SeriesExpr::ArcsinPow(k) | SeriesExpr::ArcsinhPow(k) => {
            if x.is_zero() {
                one
            } else {
                let a = if matches!(expr, SeriesExpr::ArcsinPow(_)) { arcsin_fp(x, w)? } else { arcsinh_fp(x, w)? };
                a.mul_rational(&x.recip()).powi(*k)
            }
        }
        SeriesExpr::ArccosRatio(k) => arccos_ratio(x)?.powi(*k),
        SeriesExpr::ArccoshRatio(k) => {
            note = Some("direct value via arccosh x = i arccos x on (-1, 1)".into());
            arccos_ratio(x)?.powi(*k)
        }
        SeriesExpr::Shifted(k, variant) => {
            if *variant == ShiftedVariant::PiPlusIArccosh {
                note = Some(
                    "pi + i arccosh x = pi - arccos x on (-1, 1); the (-1)^k factor is carried as lhs_sign only".into(),
                );
            }
            if (x + int(1)).is_zero() {
                one.powi(*k)
            } else {
                let pi = fx_pi(w).finish(w);
                let d = pi.sub(&arccos_fp(x, w)?);
                d.mul(&d).mul_rational(&(int(1) / (int(2) * (int(1) + x)))).powi(*k)
            }
        }
        SeriesExpr::AlphaRatio(alpha) => {
            let base = arccos_ratio(x)?;
            base.map_monotone(w, |t, d| pow_fp(t, alpha, d))?
        }
    };
    Ok((v, note))
}

/// Compares the exact order-`M` partial sum of `expr` at `x` against the
/// oracle's direct evaluation.
pub fn compare(expr: &SeriesExpr, x: &Rational, m: usize, digits: u32) -> Result<CompareReport> {
    check_digits(digits)?;
    let series = expr.build(m)?;
    let mut report = CompareReport {
        expr: expr.name(),
        x: x.clone(),
        terms: m,
        digits,
        status: CompareStatus::OutsideTestRegion,
        series_value: None,
        direct_value: None,
        residual: None,
        tail_bound: None,
        note: None,
    };
    let at_center = *x == series.center.point();
    let in_region = at_center || (x.abs() < int(1) && series.converges_at(x));
    if !in_region {
        report.note = Some(format!(
            "x = {} is outside the test region |x| < 1 for {}",
            to_text(x),
            series.meta.label
        ));
        return Ok(report);
    }
    let w = digits + GUARD;
    let sum = series.eval(x);
    let (direct, note) = direct_value(expr, x, w)?;
    let direct = direct.round_to(digits);
    let residual = (&sum - direct.center()).abs();
    let tail = series.tail_bound(x);
    let slack = direct.radius() + Rational::new(BigInt::one(), ten_pow(digits));
    report.status = match &tail {
        None => CompareStatus::NoTailBound,
        Some(t) if residual <= t + &slack => CompareStatus::Pass,
        Some(_) => CompareStatus::Fail,
    };
    report.series_value = Some(FixNum::from_rational_at(&sum, digits));
    report.residual = Some(FixNum::from_rational_at(&residual, digits));
    report.direct_value = Some(direct);
    report.tail_bound = tail;
    report.note = note;
    if series.center != Center::Zero && x.is_negative() && (x + int(1)).abs() < rat(1, 10) {
        report.note = Some("behaviour near x = -1 is not covered by the stated convergence region".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI50: &str = "3.14159265358979323846264338327950288419716939937510";

    fn pi_rational() -> Rational {
        crate::exact::parse_rational(PI50).unwrap()
    }

    #[test]
    fn pi_digits() {
        let p = pi_ref(10).unwrap();
        assert_eq!(p.to_string(), "3.141592653(5)");
        assert!(p.err_ulp() <= &BigUint::from(2u32));
        let p30 = pi_ref(30).unwrap();
        assert!(p30.contains(&pi_rational()));
        assert!(p30.certified_digits() >= 29);
        assert_eq!(&p30.certified_string()[..30], &PI50[..30]);
        let twenty = pi_ref(20).unwrap().round_to(10);
        let diff = (twenty.mantissa() - p.mantissa()).abs();
        assert!(diff <= BigInt::one());
        assert!(pi_ref(9).is_err());
    }

    #[test]
    fn precision_limit() {
        let limit = max_digits();
        assert!(matches!(pi_ref(limit + 1), Err(Error::PrecisionInfeasible { .. })));
        assert!(matches!(arcsin_fp(&rat(1, 3), limit + 5), Err(Error::PrecisionInfeasible { .. })));
    }

    #[test]
    fn identities() {
        let d = 40;
        let pi = pi_rational();
        let third = arccos_fp(&rat(1, 2), d).unwrap();
        assert!((third.center() - pi / int(3)).abs() <= third.radius());
        assert!(pi_ref(d).unwrap().mul_rational(&rat(1, 3)).overlaps(&third));
        assert_eq!(arccosh_fp(&int(1), d).unwrap().center(), int(0));
        let r = sqrt_fp(&rat(1, 2), d + 5).unwrap();
        let quarter = arcsin_fix(&r, d).unwrap();
        assert!(quarter.overlaps(&pi_ref(d).unwrap().mul_rational(&rat(1, 4))));
        assert!(arcsin_fp(&int(1), d).unwrap().overlaps(&pi_ref(d).unwrap().mul_rational(&rat(1, 2))));
        let ln2 = ln_fp(&int(2), 30).unwrap();
        assert!(ln2.contains(&crate::exact::parse_rational("0.693147180559945309417232121458176568").unwrap()));
        let e = exp_fp(&int(1), 30).unwrap();
        assert!(e.contains(&crate::exact::parse_rational("2.718281828459045235360287471352662497757").unwrap()));
        let root = pow_fp(&int(2), &rat(1, 2), 30).unwrap();
        assert!(root.overlaps(&sqrt_fp(&int(2), 30).unwrap()));
        let ash = arcsinh_fp(&rat(3, 4), 30).unwrap();
        assert!(ash.overlaps(&ln_fp(&int(2), 30).unwrap()));
    }

    #[test]
    fn reflections() {
        for x in [rat(1, 3), rat(1, 2), rat(7, 10), rat(9, 10), rat(99, 100), rat(1, 7)] {
            let a = arcsin_fp(&x, 30).unwrap();
            let b = arcsin_fp(&-x.clone(), 30).unwrap();
            let s = a.add(&b);
            assert!(s.mantissa().abs() <= BigInt::from(2) + BigInt::from(s.err_ulp().clone()), "{x}");
            let c = arccos_fp(&x, 30).unwrap().add(&arccos_fp(&-x.clone(), 30).unwrap());
            assert!(c.overlaps(&pi_ref(30).unwrap()), "{x}");
        }
    }

    #[test]
    fn monotone_refinement() {
        for x in [rat(1, 3), rat(-7, 10), rat(3, 5)] {
            let coarse = arcsin_fp(&x, 20).unwrap();
            let fine = arcsin_fp(&x, 40).unwrap();
            assert!(fine.overlaps(&coarse));
            let c = coarse.certified_digits() as usize;
            let (a, b) = (coarse.certified_string(), fine.certified_string());
            assert_eq!(a[..a.len() - 1], b[..a.len() - 1], "{x}: {a} vs {b} ({c} digits)");
        }
    }

    #[test]
    fn cosh_round_trip() {
        for x in [rat(5, 4), rat(3, 2), int(2)] {
            let a = arccosh_fp(&x, 40).unwrap();
            let back = cosh_fix(&a, 30).unwrap();
            assert!(back.contains(&x), "{x}: {back}");
        }
    }

    #[test]
    fn interval_arithmetic_contains_truth() {
        let a = FixNum::from_rational(&rat(1, 3), 12).unwrap();
        let b = FixNum::from_rational(&rat(-2, 7), 12).unwrap();
        assert!(a.add(&b).contains(&(rat(1, 3) + rat(-2, 7))));
        assert!(a.sub(&b).contains(&(rat(1, 3) - rat(-2, 7))));
        assert!(a.mul(&b).contains(&(rat(1, 3) * rat(-2, 7))));
        assert!(a.div(&b).unwrap().contains(&(rat(1, 3) / rat(-2, 7))));
        assert!(a.neg().contains(&rat(-1, 3)));
        assert!(a.powi(3).contains(&rat(1, 27)));
        let zero = FixNum::new(BigInt::zero(), 3, BigUint::one());
        assert!(a.div(&zero).is_err());
        assert_eq!(FixNum::from_rational(&rat(1, 4), 2).unwrap().to_string(), "0.25");
        assert_eq!(FixNum::from_rational(&rat(-1, 4), 3).unwrap().certified_string(), "-0.250");
    }

    #[test]
    fn domain_errors() {
        assert!(arcsin_fp(&rat(3, 2), 20).is_err());
        assert!(arccosh_fp(&rat(1, 2), 20).is_err());
        assert!(ln_fp(&int(0), 20).is_err());
        assert!(sqrt_fp(&int(-1), 20).is_err());
        assert!(pow_fp(&int(-1), &rat(1, 2), 20).is_err());
    }

    #[test]
    fn compare_examples() {
        let r = compare(&SeriesExpr::ArccosRatio(1), &rat(1, 2), 40, 30).unwrap();
        assert_eq!(r.status, CompareStatus::Pass);
        let pi3 = pi_rational() / int(3);
        assert!((r.direct_value.as_ref().unwrap().center() - &pi3 * &pi3).abs() < Rational::new(BigInt::one(), ten_pow(28)));
        let r = compare(&SeriesExpr::ArcsinPow(3), &rat(7, 10), 40, 30).unwrap();
        assert_eq!(r.status, CompareStatus::Pass);
        let r = compare(&SeriesExpr::ArccoshRatio(1), &rat(3, 2), 40, 30).unwrap();
        assert_eq!(r.status, CompareStatus::OutsideTestRegion);
        assert!(r.note.is_some());
    }

    #[test]
    fn residual_exceeds_tail_for_the_wrong_function() {
        let x = rat(1, 2);
        let series = SeriesExpr::ArcsinPow(1).build(40).unwrap();
        let (direct, _) = direct_value(&SeriesExpr::ArcsinhPow(1), &x, 40).unwrap();
        let residual = (series.eval(&x) - direct.center()).abs();
        assert!(residual > series.tail_bound(&x).unwrap());
        let own = compare(&SeriesExpr::ArcsinhPow(1), &x, 40, 30).unwrap();
        assert_eq!(own.status, CompareStatus::Pass);
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(sci(&rat(1, 8)), "1.250e-1");
        assert_eq!(sci(&int(12345)), "1.235e4");
        assert_eq!(sci(&int(0)), "0");
    }
}
