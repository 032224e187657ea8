//! Identity suites run by `arcseries verify`.

use std::str::FromStr;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bell::{self, BellArgs};
use crate::error::{domain, Error, Result};
use crate::exact::{int, rat, to_text};
use crate::numeric::{compare, CompareStatus};
use crate::pi::{self, PiSeriesTag};
use crate::report::CheckReport;
use crate::series::{self, SeriesExpr, ShiftedVariant};
use crate::stirling;
use crate::{prodexpand, qfunc, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Stirling,
    Q,
    Bell,
    Products,
    Series,
    Pi,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Stirling, Suite::Q, Suite::Bell, Suite::Products, Suite::Series, Suite::Pi];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "stirling" => Suite::Stirling,
            "q" => Suite::Q,
            "bell" => Suite::Bell,
            "products" => Suite::Products,
            "series" => Suite::Series,
            "pi" => Suite::Pi,
            "all" => Suite::All,
            other => return domain(format!("unknown suite {other:?}")),
        })
    }
}

/// Runs `suite` up to `max_n`; reports come back sorted by name with
/// violations in canonical order.
pub fn run(suite: Suite, max_n: usize, seed: u64) -> Result<Vec<CheckReport>> {
    if max_n == 0 {
        return domain("max_n must be at least 1");
    }
    let mut reports = match suite {
        Suite::All => {
            let parts: Vec<Result<Vec<CheckReport>>> =
                Suite::EACH.par_iter().map(|&s| run_one(s, max_n, seed)).collect();
            let mut all = Vec::new();
            for p in parts {
                all.extend(p?);
            }
            all
        }
        s => run_one(s, max_n, seed)?,
    };
    for r in reports.iter_mut() {
        r.sort();
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

fn run_one(suite: Suite, n: usize, seed: u64) -> Result<Vec<CheckReport>> {
    Ok(match suite {
        Suite::Stirling => vec![check_stirling_oracle(n), check_stirling_binom(n, seed)],
        Suite::Q => vec![qfunc::check_q_closed_forms(n), qfunc::check_q_alternating(n)],
        Suite::Bell => vec![
            check_bell_oracles(200, n.min(18), seed)?,
            check_bell_special(n.min(14), seed)?,
            bell::check_bell_arccos(n),
            bell::check_envelope(n),
        ],
        Suite::Products => vec![
            prodexpand::check_lemma_equivalence(n),
            prodexpand::check_lemma_identities(n),
            prodexpand::check_trig_chebyshev(n),
        ],
        Suite::Series => vec![
            series::check_product_consistency(n.clamp(2, 8), n.min(20))?,
            series::check_alpha_integer(n.min(8), n.min(15))?,
            series::check_arcsin2_recovery(n)?,
            series::check_series_structure(n.min(6), n)?,
            check_numeric_residuals(40, 30)?,
        ],
        Suite::Pi => vec![check_pi(n)?],
        Suite::All => unreachable!("expanded by run"),
    })
}

/// Recurrence table against the `ln(1+x)` power oracle for `n <= n_max`.
pub fn check_stirling_oracle(n_max: usize) -> CheckReport {
    let mut report = CheckReport::new("stirling-oracle");
    let oracle = stirling::stirling_oracle_triangle(n_max);
    let t = stirling::table(n_max);
    for (n, row) in oracle.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            report.check(t.get(n, k) == v, || format!("s({n:02},{k:02})"), || format!("{} != {v}", t.get(n, k)));
        }
    }
    report
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=9))
}

/// `n! binom(z, n) = sum s(n,k) z^k` at fixed and seeded points.
pub fn check_stirling_binom(n_max: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zs: Vec<Rational> = vec![int(0), int(1), int(-1), int(5), rat(1, 2), rat(-3, 2)];
    zs.extend((0..10).map(|_| random_rational(&mut rng)));
    let mut report = CheckReport::new("stirling-binomial");
    for n in 0..=n_max {
        for z in &zs {
            report.check(stirling::check_binom_identity(n, z), || format!("n={n:02},z={}", to_text(z)), || "identity fails".into());
        }
    }
    report
}

/// Seeded random Bell instances: `(n, k, args)` with `1 <= k <= n <= n_max`
/// and rational arguments.
pub fn random_bell_instances(count: usize, n_max: usize, seed: u64) -> Vec<(usize, usize, BellArgs<Rational>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=n_max.max(1));
            let k = rng.random_range(1..=n);
            let values = (0..=n - k).map(|_| random_rational(&mut rng)).collect();
            (n, k, BellArgs::new(values).expect("non-empty"))
        })
        .collect()
}

/// `(index, n, k, partition, recurrence, genfun)`
type BellTriple = (usize, usize, usize, Rational, Rational, Rational);

/// Partition sum, recurrence and generating function agree.
pub fn check_bell_oracles(count: usize, n_max: usize, seed: u64) -> Result<CheckReport> {
    let cases = random_bell_instances(count, n_max, seed);
    let results: Vec<Result<BellTriple>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (n, k, a))| Ok((i, *n, *k, bell::bell(*n, *k, a)?, bell::bell_rec(*n, *k, a)?, bell::bell_genfun(*n, *k, a)?)))
        .collect();
    let mut report = CheckReport::new("bell-three-way");
    for r in results {
        let (i, n, k, a, b, c) = r?;
        report.check(
            a == b && b == c,
            || format!("#{i:03}:n={n:02},k={k:02}"),
            || format!("partition {}, recurrence {}, genfun {}", to_text(&a), to_text(&b), to_text(&c)),
        );
    }
    Ok(report)
}

/// Scaling law, quadratic and double-factorial cases for every
/// `1 <= k <= n <= n_max` at seeded `alpha`, `beta`.
pub fn check_bell_special(n_max: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bd1_e995);
    let alpha = random_rational(&mut rng);
    let beta = random_rational(&mut rng);
    let mut report = CheckReport::new("bell-special-values");
    for n in 1..=n_max {
        for k in 1..=n {
            report.merge(bell::check_special_values(n, k, &alpha, &beta)?);
        }
    }
    Ok(report)
}

/// The families compared against the oracle, with the `alpha` values used
/// for the non-integer power.
pub fn numeric_families() -> Vec<SeriesExpr> {
    let mut v = Vec::new();
    for k in [1, 2, 3] {
        v.push(SeriesExpr::ArcsinPow(k));
        v.push(SeriesExpr::ArcsinhPow(k));
        v.push(SeriesExpr::ArccosRatio(k));
        v.push(SeriesExpr::ArccoshRatio(k));
        v.push(SeriesExpr::Shifted(k, ShiftedVariant::PiMinusArccos));
        v.push(SeriesExpr::Shifted(k, ShiftedVariant::PiPlusIArccosh));
    }
    v.push(SeriesExpr::AlphaRatio(rat(1, 2)));
    v.push(SeriesExpr::AlphaRatio(rat(-1, 3)));
    v
}

pub fn numeric_points() -> Vec<Rational> {
    vec![int(0), rat(1, 2), rat(-1, 2), rat(7, 10), rat(-7, 10)]
}

/// Every family at every test point against the oracle.
pub fn check_numeric_residuals(m: usize, digits: u32) -> Result<CheckReport> {
    let cases: Vec<(SeriesExpr, Rational)> = numeric_families()
        .into_iter()
        .flat_map(|e| numeric_points().into_iter().map(move |x| (e.clone(), x)))
        .collect();
    let results: Vec<Result<_>> = cases.par_iter().map(|(e, x)| compare(e, x, m, digits)).collect();
    let mut report = CheckReport::new("numeric-residuals");
    for r in results {
        let r = r?;
        report.check(
            r.status == CompareStatus::Pass,
            || format!("{}@{}", r.expr, to_text(&r.x)),
            || format!("{:?}: residual {:?}, tail {:?}", r.status, r.residual.as_ref().map(|f| f.to_string()), r.tail_bound.as_ref().map(crate::numeric::sci)),
        );
    }
    Ok(report)
}

/// Monotone `sq8`, the `pow8(1)` shift, convergence of the classical
/// series, and the rate of the `k = 1` series.
pub fn check_pi(n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("pi-series");
    let m = 5 * n.max(2);
    let sums = pi::partial_sums(&PiSeriesTag::Sq8, m)?;
    let cap = PiSeriesTag::Sq8.target(30)?.lower();
    for (i, w) in sums.windows(2).enumerate() {
        report.check(w[0] < w[1] && w[1] < cap, || format!("sq8:M={:03}", i + 2), || "not increasing below pi^2/8".into());
    }
    let pow8 = pi::partial_sums(&PiSeriesTag::Pow8(1), m - 1)?;
    for (i, p) in pow8.iter().enumerate() {
        report.check(p == &sums[i + 1], || format!("pow8-shift:M={:03}", i + 1), || "pow8(1) differs from sq8".into());
    }
    let ms: Vec<usize> = (10..=100).step_by(10).collect();
    for tag in PiSeriesTag::CLASSIC {
        let rs = pi::residuals(&tag, &ms, 80)?;
        report.check(
            rs.windows(2).all(|w| w[1].upper() < w[0].lower()),
            || format!("{tag}:monotone"),
            || rs.iter().map(|r| r.certified_string()).collect::<Vec<_>>().join(", "),
        );
    }
    let l = pi::empirical_L(1, 200, 20)?;
    let dist = (l.estimate.root.center() - rat(1, 2)).abs();
    report.check(dist < rat(1, 20), || "L(1):M=200".into(), || format!("root estimate {}", l.estimate.root));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        for s in Suite::EACH {
            let reports = run(s, 6, 7).unwrap();
            for r in &reports {
                assert!(r.passed(), "{}: {:?}", r.name, r.violations);
                assert!(r.checked > 0, "{}", r.name);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = run(Suite::Bell, 8, 42).unwrap();
        let b = run(Suite::Bell, 8, 42).unwrap();
        assert_eq!(a, b);
        let x = random_bell_instances(5, 10, 1);
        let y = random_bell_instances(5, 10, 1);
        assert_eq!(x.iter().map(|c| (c.0, c.1)).collect::<Vec<_>>(), y.iter().map(|c| (c.0, c.1)).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_zero_and_unknown() {
        assert!(run(Suite::Q, 0, 0).is_err());
        assert!("everything".parse::<Suite>().is_err());
        assert_eq!("products".parse::<Suite>().unwrap(), Suite::Products);
    }
}
