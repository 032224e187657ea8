//! π and its powers as exact rational partial sums.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{binom_nat, factorial, int, parse_rational, pow, rat, sign, to_text};
use crate::numeric::{pi_ref, pow_fp, sqrt_fp, FixNum};
use crate::qfunc::q_unchecked;
use crate::series::ratio_pow_alpha;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiSeriesTag {
    /// `1 + (2k)! sum (-1)^m 2^m Q(2k,2m) / (2k+2m)!  ->  (pi^2/8)^k`
    Pow8(usize),
    /// `sum 2^m / (m^2 binom(2m,m))  ->  pi^2/8`
    Sq8,
    /// `1 + k! sum (-1)^m 2^m Q(k,2m) / (k+2m)!  ->  (pi/(2 sqrt 2))^k`
    Sqrt2Pow(usize),
    /// `1 + sum (-1)^n [2(x-1)]^n-coefficient  ->  (pi^2/9)^alpha`
    Alpha9(Rational),
    /// `sum 1/(m+1)^2  ->  pi^2/6`
    ClassicBasel,
    /// `sum 1/(2m+1)^2  ->  pi^2/8`
    ClassicOdd,
    /// `sum (-1)^m/(m+1)^2  ->  pi^2/12`
    ClassicAlt,
    /// `sum 1/(m^2 binom(2m,m))  ->  pi^2/18`
    ClassicCentral,
}

impl PiSeriesTag {
    pub const CLASSIC: [PiSeriesTag; 4] =
        [PiSeriesTag::ClassicBasel, PiSeriesTag::ClassicOdd, PiSeriesTag::ClassicAlt, PiSeriesTag::ClassicCentral];

    /// Parses `sq8`, `pow8`, `sqrt2`, `alpha9` and `classic-<name>`; `k` and
    /// `alpha` fill in the parametrised families.
    pub fn parse(name: &str, k: Option<usize>, alpha: Option<&str>) -> Result<PiSeriesTag> {
        let need_k = || match k {
            Some(k) if k >= 1 => Ok(k),
            Some(_) => domain("k must be at least 1"),
            None => Err(Error::Domain(format!("{name} needs --k"))),
        };
        Ok(match name {
            "sq8" => PiSeriesTag::Sq8,
            "pow8" => PiSeriesTag::Pow8(need_k()?),
            "sqrt2" | "sqrt2pow" => PiSeriesTag::Sqrt2Pow(need_k()?),
            "alpha9" => match alpha {
                Some(a) => PiSeriesTag::Alpha9(parse_rational(a)?),
                None => return domain("alpha9 needs --alpha"),
            },
            "classic-basel" => PiSeriesTag::ClassicBasel,
            "classic-odd" => PiSeriesTag::ClassicOdd,
            "classic-alt" => PiSeriesTag::ClassicAlt,
            "classic-central" => PiSeriesTag::ClassicCentral,
            other => return domain(format!("unknown pi representation {other:?}")),
        })
    }

    fn base(&self) -> Rational {
        match self {
            PiSeriesTag::Pow8(_) | PiSeriesTag::Sqrt2Pow(_) | PiSeriesTag::Alpha9(_) => Rational::one(),
            _ => Rational::zero(),
        }
    }

    /// Target constant as a decimal interval.
    pub fn target(&self, digits: u32) -> Result<FixNum> {
        let w = digits + 10;
        let pi = pi_ref(w)?;
        let pi2 = pi.mul(&pi);
        let v = match self {
            PiSeriesTag::Pow8(k) => pi2.mul_rational(&rat(1, 8)).powi(*k),
            PiSeriesTag::Sq8 | PiSeriesTag::ClassicOdd => pi2.mul_rational(&rat(1, 8)),
            PiSeriesTag::ClassicBasel => pi2.mul_rational(&rat(1, 6)),
            PiSeriesTag::ClassicAlt => pi2.mul_rational(&rat(1, 12)),
            PiSeriesTag::ClassicCentral => pi2.mul_rational(&rat(1, 18)),
            PiSeriesTag::Sqrt2Pow(k) => {
                // pi / (2 sqrt 2) = pi sqrt(2) / 4
                pi.mul(&sqrt_fp(&int(2), w)?).mul_rational(&rat(1, 4)).powi(*k)
            }
            PiSeriesTag::Alpha9(alpha) => {
                let base = pi2.mul_rational(&rat(1, 9));
                if alpha.is_zero() {
                    FixNum::from_rational(&int(1), w)?
                } else {
                    base.map_monotone(w, |t, d| pow_fp(t, alpha, d))?
                }
            }
        };
        Ok(v.round_to(digits))
    }
}

impl fmt::Display for PiSeriesTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiSeriesTag::Pow8(k) => write!(f, "pow8(k={k})"),
            PiSeriesTag::Sq8 => write!(f, "sq8"),
            PiSeriesTag::Sqrt2Pow(k) => write!(f, "sqrt2(k={k})"),
            PiSeriesTag::Alpha9(a) => write!(f, "alpha9(alpha={})", to_text(a)),
            PiSeriesTag::ClassicBasel => write!(f, "classic-basel"),
            PiSeriesTag::ClassicOdd => write!(f, "classic-odd"),
            PiSeriesTag::ClassicAlt => write!(f, "classic-alt"),
            PiSeriesTag::ClassicCentral => write!(f, "classic-central"),
        }
    }
}

impl FromStr for PiSeriesTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PiSeriesTag::parse(s, None, None)
    }
}

/// The first `m_terms` summands after the constant term.
pub fn terms(tag: &PiSeriesTag, m_terms: usize) -> Result<Vec<Rational>> {
    let t = |m: usize| -> Rational {
        match tag {
            PiSeriesTag::Pow8(k) => {
                sign::<Rational>(m) * pow(&int(2), m) * int(factorial(2 * k)) * q_unchecked(2 * k, 2 * m)
                    / int(factorial(2 * k + 2 * m))
            }
            PiSeriesTag::Sqrt2Pow(k) => {
                sign::<Rational>(m) * pow(&int(2), m) * int(factorial(*k)) * q_unchecked(*k, 2 * m)
                    / int(factorial(k + 2 * m))
            }
            PiSeriesTag::Sq8 => pow(&int(2), m) / int(binom_nat(2 * m, m) * (m * m)),
            PiSeriesTag::ClassicCentral => Rational::one() / int(binom_nat(2 * m, m) * (m * m)),
            PiSeriesTag::ClassicBasel => rat(1, (m * m) as i64),
            PiSeriesTag::ClassicOdd => rat(1, ((2 * m - 1) * (2 * m - 1)) as i64),
            PiSeriesTag::ClassicAlt => sign::<Rational>(m - 1) * rat(1, (m * m) as i64),
            PiSeriesTag::Alpha9(_) => unreachable!(),
        }
    };
    if let PiSeriesTag::Alpha9(alpha) = tag {
        let s = ratio_pow_alpha(alpha, m_terms)?;
        // x = 1/2 makes (x-1)^n = (-1/2)^n
        return Ok((1..=m_terms).map(|n| &s.coeffs[n] * pow(&rat(-1, 2), n)).collect());
    }
    Ok((1..=m_terms).map(t).collect())
}

pub fn partial_sum(tag: &PiSeriesTag, m_terms: usize) -> Result<Rational> {
    if m_terms == 0 {
        return domain("at least one term is required");
    }
    Ok(tag.base() + terms(tag, m_terms)?.into_iter().sum::<Rational>())
}

/// Every partial sum for `M = 1..=m_terms`.
pub fn partial_sums(tag: &PiSeriesTag, m_terms: usize) -> Result<Vec<Rational>> {
    let mut acc = tag.base();
    Ok(terms(tag, m_terms)?
        .into_iter()
        .map(|t| {
            acc += t;
            acc.clone()
        })
        .collect())
}

fn residual_of(sum: &Rational, target: &FixNum, digits: u32) -> FixNum {
    let (a, b) = ((sum - target.lower()).abs(), (sum - target.upper()).abs());
    let lo = if target.contains(sum) { Rational::zero() } else { a.clone().min(b.clone()) };
    FixNum::from_interval(&lo, &a.max(b), digits)
}

/// `|partial_sum - target|`.
pub fn residual(tag: &PiSeriesTag, m_terms: usize, digits: u32) -> Result<FixNum> {
    if digits < 10 {
        return domain("residual needs at least 10 digits");
    }
    let sum = partial_sum(tag, m_terms)?;
    let target = tag.target(digits + 10)?;
    Ok(residual_of(&sum, &target, digits))
}

/// Residuals for every `M` in `ms`, sharing one target evaluation.
pub fn residuals(tag: &PiSeriesTag, ms: &[usize], digits: u32) -> Result<Vec<FixNum>> {
    if digits < 10 {
        return domain("residual needs at least 10 digits");
    }
    let top = ms.iter().copied().max().unwrap_or(0);
    if top == 0 || ms.contains(&0) {
        return domain("at least one term is required");
    }
    let sums = partial_sums(tag, top)?;
    let target = tag.target(digits + 10)?;
    Ok(ms.iter().map(|&m| residual_of(&sums[m - 1], &target, digits)).collect())
}

/// Root and ratio estimates of the geometric rate of a term sequence.
#[derive(Debug, Clone, Serialize)]
pub struct RateEstimate {
    pub name: String,
    pub terms: usize,
    /// `|t_M|^(1/M)`
    pub root: FixNum,
    /// `|t_M / t_(M-1)|`
    pub ratio: FixNum,
}

fn rate(name: String, ts: &[Rational], digits: u32) -> Result<RateEstimate> {
    let m = ts.len();
    if m < 2 {
        return domain("rate estimates need at least two terms");
    }
    let last = ts[m - 1].abs();
    let root = if last.is_zero() {
        FixNum::from_rational(&Rational::zero(), digits)?
    } else {
        pow_fp(&last, &rat(1, m as i64), digits)?
    };
    let prev = ts[m - 2].abs();
    if prev.is_zero() {
        return domain("zero term in rate estimate");
    }
    Ok(RateEstimate { name, terms: m, root, ratio: FixNum::from_rational(&(last / prev), digits)? })
}

/// Convergence rate of the `(pi^2/8)^k` series. Estimates only: the
/// limit is known for `k = 1` alone.
#[derive(Debug, Clone, Serialize)]
pub struct LEstimate {
    pub k: usize,
    pub estimate: RateEstimate,
    /// `|t_m / t_(m-1)|` for `m = 2..=M`.
    pub ratios: Vec<FixNum>,
    pub authoritative: bool,
}

#[allow(non_snake_case)]
pub fn empirical_L(k: usize, m_terms: usize, digits: u32) -> Result<LEstimate> {
    if k == 0 || m_terms < 10 {
        return domain("empirical L needs k >= 1 and M >= 10");
    }
    let ts = terms(&PiSeriesTag::Pow8(k), m_terms)?;
    let estimate = rate(format!("L({k})"), &ts, digits)?;
    let ratios = ts
        .windows(2)
        .map(|w| FixNum::from_rational(&(&w[1] / &w[0]).abs(), digits))
        .collect::<Result<_>>()?;
    Ok(LEstimate { k, estimate, ratios, authoritative: false })
}

/// Rate estimates for `sq8` and the four classical series at `M` terms,
/// ordered as listed. The limits are 1/2, 1, 1, 1, 1/4.
pub fn five_limits(m_terms: usize, digits: u32) -> Result<Vec<RateEstimate>> {
    let mut tags = vec![PiSeriesTag::Sq8];
    tags.extend(PiSeriesTag::CLASSIC);
    tags.iter().map(|t| rate(t.to_string(), &terms(t, m_terms)?, digits)).collect()
}

/// Everything the CLI reports for one representation.
#[derive(Debug, Clone, Serialize)]
pub struct PiReport {
    pub repr: String,
    pub terms: usize,
    pub partial_sum: String,
    pub partial_sum_decimal: FixNum,
    pub target: FixNum,
    pub residual: FixNum,
    pub rate: RateEstimate,
}

pub fn report(tag: &PiSeriesTag, m_terms: usize, digits: u32) -> Result<PiReport> {
    if m_terms < 2 {
        return domain("the report needs at least two terms");
    }
    let ts = terms(tag, m_terms)?;
    let sum = tag.base() + ts.iter().sum::<Rational>();
    let target = tag.target(digits.max(10))?;
    Ok(PiReport {
        repr: tag.to_string(),
        terms: m_terms,
        partial_sum: to_text(&sum),
        partial_sum_decimal: FixNum::from_rational(&sum, digits)?,
        residual: residual_of(&sum, &target, digits.max(10)),
        target: target.round_to(digits),
        rate: rate(tag.to_string(), &ts, digits.min(30))?,
    })
}
