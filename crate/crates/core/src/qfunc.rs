//! `Q(k, m) = sum_{l=0}^{m} binom(k+l-1, k-1) s(k+m-1, k+l-1) ((k+m-2)/2)^l`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exact::{binom_nat, dfact, factorial, int, pow, sign, to_text};
use crate::report::CheckReport;
use crate::stirling::{table, StirlingTable};
use crate::Rational;

/// Exact `Q(k, m)` for `k >= 1`, `m >= 0`.
pub fn q(k: usize, m: usize) -> Result<Rational> {
    if k == 0 {
        return domain("Q(k, m) needs k >= 1");
    }
    Ok(q_with(&table(k + m - 1), k, m))
}

pub(crate) fn q_unchecked(k: usize, m: usize) -> Rational {
    q_with(&table(k + m - 1), k, m)
}

fn q_with(t: &StirlingTable, k: usize, m: usize) -> Rational {
    let n = k + m - 1;
    // Base (k+m-2)/2: sum num^l 2^(m-l) and divide by 2^m once at the end.
    let num = BigInt::from(k as i64 + m as i64 - 2);
    let mut acc = BigInt::zero();
    let mut p = BigInt::one();
    let mut two = num_traits::pow(BigInt::from(2), m);
    for l in 0..=m {
        acc += binom_nat(k + l - 1, k - 1) * t.get(n, k + l - 1) * &p * &two;
        p *= &num;
        two /= 2;
    }
    Rational::new(acc, num_traits::pow(BigInt::from(2), m))
}

/// Row `k - 1` holds `Q(k, 0..=m_max)`.
pub fn q_table(k_max: usize, m_max: usize) -> Result<Vec<Vec<Rational>>> {
    if k_max == 0 {
        return domain("q_table needs k_max >= 1");
    }
    let t = table(k_max + m_max);
    Ok((1..=k_max)
        .into_par_iter()
        .map(|k| (0..=m_max).map(|m| q_with(&t, k, m)).collect())
        .collect())
}

/// `sum_{j=1}^{k} (-1)^j (2j)! binom(k, j) Q(2j, 2m) / (2j+2m)!`, zero for
/// `1 <= m < k`.
pub fn q_alternating_sum(k: usize, m: usize) -> Rational {
    (1..=k)
        .map(|j| {
            sign::<Rational>(j) * int(factorial(2 * j) * binom_nat(k, j)) * q_unchecked(2 * j, 2 * m)
                / int(factorial(2 * j + 2 * m))
        })
        .sum()
}

/// The two closed forms for `1 <= k <= k_max` and the vanishing
/// `Q(2j+1, 2m-1) = 0` for `2j + 2m - 1 <= 2 k_max + 1`.
pub fn check_q_closed_forms(k_max: usize) -> CheckReport {
    let mut report = CheckReport::new("q-closed-forms");
    for k in 1..=k_max {
        let fk = int(factorial(k));
        let want = sign::<Rational>(k) * &fk * &fk;
        let got = q_unchecked(2, 2 * k);
        report.check(got == want, || format!("Q(2,{})", 2 * k), || mismatch(&got, &want));

        let half = int(dfact(2 * k - 1)) / pow(&int(2), k);
        let want = sign::<Rational>(k) * &half * &half;
        let got = q_unchecked(1, 2 * k);
        report.check(got == want, || format!("Q(1,{})", 2 * k), || mismatch(&got, &want));
    }
    report.merge(check_q_zeros(k_max + 1));
    report
}

/// `Q(2j+1, 2m-1) = 0` for `j >= 0`, `m >= 1`, `j + m <= s_max`.
pub fn check_q_zeros(s_max: usize) -> CheckReport {
    let mut report = CheckReport::new("q-odd-zeros");
    for j in 0..s_max {
        for m in 1..=s_max - j {
            let got = q_unchecked(2 * j + 1, 2 * m - 1);
            report.check(
                got.is_zero(),
                || format!("Q({},{})", 2 * j + 1, 2 * m - 1),
                || format!("expected 0, got {}", to_text(&got)),
            );
        }
    }
    report
}

/// The alternating sum vanishes for every `1 <= m < k <= k_max`.
pub fn check_q_alternating(k_max: usize) -> CheckReport {
    let mut report = CheckReport::new("q-alternating-sum");
    let cases: Vec<(usize, usize)> = (2..=k_max).flat_map(|k| (1..k).map(move |m| (k, m))).collect();
    let results: Vec<_> = cases.par_iter().map(|&(k, m)| (k, m, q_alternating_sum(k, m))).collect();
    for (k, m, v) in results {
        report.check(
            v.is_zero(),
            || format!("k={k:02},m={m:02}"),
            || format!("expected 0, got {}", to_text(&v)),
        );
    }
    report
}

fn mismatch(got: &Rational, want: &Rational) -> String {
    format!("got {}, expected {}", to_text(got), to_text(want))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::stirling::stirling1;

    /// Direct transcription of the definition with rational arithmetic only.
    fn q_naive(k: usize, m: usize) -> Rational {
        let base = rat(k as i64 + m as i64 - 2, 2);
        (0..=m)
            .map(|l| {
                int(binom_nat(k + l - 1, k - 1))
                    * int(stirling1(k + m - 1, k + l - 1).unwrap())
                    * pow(&base, l)
            })
            .sum()
    }

    #[test]
    fn values() {
        assert_eq!(q(2, 2).unwrap(), int(-1));
        assert_eq!(q(1, 2).unwrap(), rat(-1, 4));
        assert_eq!(q(3, 3).unwrap(), int(0));
        assert_eq!(q(4, 4).unwrap(), int(49));
        assert_eq!(q(2, 6).unwrap(), int(-36));
        assert_eq!(q(2, 4).unwrap(), int(4));
        assert!(q(0, 3).is_err());
    }

    #[test]
    fn q4_4_from_row_seven() {
        // Row 7 entries s(7,3..7) are 1624, -735, 175, -21, 1; base 3.
        let terms = [(1, 1624), (4, -735), (10, 175), (20, -21), (35, 1)];
        let sum: i64 = terms.iter().enumerate().map(|(l, (b, s))| b * s * 3i64.pow(l as u32)).sum();
        assert_eq!(q(4, 4).unwrap(), int(sum));
    }

    #[test]
    fn fast_path_matches_definition() {
        for k in 1..=12 {
            for m in 0..=12 {
                assert_eq!(q(k, m).unwrap(), q_naive(k, m), "Q({k},{m})");
            }
        }
    }

    #[test]
    fn q_of_zero_is_one() {
        for k in 1..=30 {
            assert_eq!(q(k, 0).unwrap(), int(1));
        }
    }

    #[test]
    fn table_shape_and_entries() {
        assert_eq!(q_table(1, 0).unwrap(), vec![vec![int(1)]]);
        let t = q_table(4, 4).unwrap();
        assert_eq!(t[3][4], int(49));
        assert_eq!(t[1], vec![int(1), q(2, 1).unwrap(), int(-1), q(2, 3).unwrap(), int(4)]);
        assert!(q_table(0, 3).is_err());
    }

    #[test]
    fn closed_forms() {
        assert!(check_q_closed_forms(1).passed());
        assert!(check_q_closed_forms(3).passed());
        let r = check_q_closed_forms(30);
        assert!(r.passed(), "{:?}", r.violations);
        let nine = int(dfact(9)) / int(32);
        assert_eq!(q(1, 10).unwrap(), -(nine.clone() * nine));
    }

    #[test]
    fn small_odd_zeros() {
        assert_eq!(q(1, 1).unwrap(), int(0));
        assert_eq!(q(1, 3).unwrap(), int(0));
        assert!(check_q_zeros(15).passed());
    }

    #[test]
    fn alternating_sum_vanishes_below_diagonal() {
        assert!(check_q_alternating(12).passed());
        assert!(!q_alternating_sum(2, 2).is_zero());
    }
}
