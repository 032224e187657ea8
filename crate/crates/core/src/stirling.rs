//! Signed Stirling numbers of the first kind.
//!
//! The triangle is built by the recurrence `s(n+1, k) = s(n, k-1) - n s(n, k)`
//! and cached process-wide. The generating function
//! `[ln(1+x)]^k / k! = sum s(n, k) x^n / n!` is kept as an independent oracle.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exact::{factorial, int, rat};
use crate::fps::mul_truncated;
use crate::Rational;

/// Rows `0..=max_n` of the signed Stirling triangle.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Arc<[BigInt]>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut t = StirlingTable { rows: vec![Arc::from(vec![BigInt::one()])] };
        t.extend_to(max_n);
        t
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.rows.len() <= n {
            let m = self.rows.len() - 1;
            let prev = &self.rows[m];
            let mut next = vec![BigInt::zero(); m + 2];
            for k in 1..=m + 1 {
                let left = &prev[k - 1];
                next[k] = if k <= m { left - &prev[k] * m } else { left.clone() };
            }
            self.rows.push(Arc::from(next));
        }
    }

    /// `s(n, k)`, zero when `k > n`. Panics if `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> &BigInt {
        static ZERO: OnceLock<BigInt> = OnceLock::new();
        self.rows[n].get(k).unwrap_or_else(|| ZERO.get_or_init(BigInt::zero))
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }
}

fn cache() -> &'static RwLock<Arc<StirlingTable>> {
    static CACHE: OnceLock<RwLock<Arc<StirlingTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Arc::new(StirlingTable::new(32))))
}

/// A snapshot of the shared table covering at least rows `0..=n`.
pub fn table(n: usize) -> Arc<StirlingTable> {
    {
        let t = cache().read().expect("stirling cache poisoned");
        if t.max_n() >= n {
            return Arc::clone(&t);
        }
    }
    let mut guard = cache().write().expect("stirling cache poisoned");
    if guard.max_n() < n {
        let mut grown = StirlingTable::clone(&guard);
        grown.extend_to(n.max(2 * guard.max_n()));
        *guard = Arc::new(grown);
    }
    Arc::clone(&guard)
}

pub fn stirling1(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return domain(format!("s(n, k) needs k <= n, got n = {n}, k = {k}"));
    }
    Ok(table(n).get(n, k).clone())
}

/// Row `n` of the triangle, `s(n, 0..=n)`.
pub fn stirling_row(n: usize) -> Vec<BigInt> {
    table(n).row(n).to_vec()
}

/// `s(n, k)` from the `k`-th power of the truncated series of `ln(1+x)`.
pub fn stirling_oracle(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return domain(format!("s(n, k) needs k <= n, got n = {n}, k = {k}"));
    }
    let len = n + 1;
    let log = log1p_series(len);
    let mut acc = vec![Rational::zero(); len];
    acc[0] = Rational::one();
    for _ in 0..k {
        acc = mul_truncated(&acc, &log, len);
    }
    Ok(oracle_value(&acc[n], n, k))
}

/// Every `s(n, k)` with `n <= n_max` by the oracle route, powering the
/// logarithm once per `k` instead of once per cell.
pub fn stirling_oracle_triangle(n_max: usize) -> Vec<Vec<BigInt>> {
    let len = n_max + 1;
    let log = log1p_series(len);
    let mut out: Vec<Vec<BigInt>> = (0..len).map(|n| vec![BigInt::zero(); n + 1]).collect();
    let mut acc = vec![Rational::zero(); len];
    acc[0] = Rational::one();
    for k in 0..len {
        for n in k..len {
            out[n][k] = oracle_value(&acc[n], n, k);
        }
        acc = mul_truncated(&acc, &log, len);
    }
    out
}

fn log1p_series(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| match i {
            0 => Rational::zero(),
            _ if i % 2 == 1 => rat(1, i as i64),
            _ => rat(-1, i as i64),
        })
        .collect()
}

fn oracle_value(coeff: &Rational, n: usize, k: usize) -> BigInt {
    let v = coeff * int(factorial(n)) / int(factorial(k));
    debug_assert!(v.is_integer());
    v.to_integer()
}

/// `n! binom(z, n) == sum_k s(n, k) z^k`.
pub fn check_binom_identity(n: usize, z: &Rational) -> bool {
    let lhs = int(factorial(n)) * crate::exact::binom(z, n);
    let t = table(n);
    let mut rhs = Rational::zero();
    let mut zk = Rational::one();
    for k in 0..=n {
        rhs += int(t.get(n, k).clone()) * &zk;
        zk *= z;
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(stirling1(0, 0).unwrap(), BigInt::one());
        assert_eq!(stirling1(7, 7).unwrap(), BigInt::one());
        assert_eq!(stirling1(3, 2).unwrap(), BigInt::from(-3));
        assert_eq!(stirling1(4, 2).unwrap(), BigInt::from(11));
        assert_eq!(stirling1(5, 0).unwrap(), BigInt::zero());
        assert!(stirling1(2, 3).is_err());
    }

    #[test]
    fn row_seven() {
        let row: Vec<i64> = [0, 720, -1764, 1624, -735, 175, -21, 1].to_vec();
        let expect: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
        assert_eq!(stirling_row(7), expect);
    }

    #[test]
    fn oracle_values() {
        assert_eq!(stirling_oracle(2, 1).unwrap(), BigInt::from(-1));
        assert_eq!(stirling_oracle(3, 1).unwrap(), BigInt::from(2));
        assert_eq!(stirling_oracle(5, 5).unwrap(), BigInt::one());
        assert!(stirling_oracle(1, 2).is_err());
    }

    #[test]
    fn recurrence_matches_oracle() {
        let oracle = stirling_oracle_triangle(60);
        for (n, row) in oracle.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&stirling1(n, k).unwrap(), v, "s({n},{k})");
            }
        }
    }

    #[test]
    fn single_oracle_matches_triangle() {
        let tri = stirling_oracle_triangle(12);
        assert_eq!(stirling_oracle(12, 5).unwrap(), tri[12][5]);
    }

    #[test]
    fn signs_alternate_and_rows_sum_to_zero() {
        for n in 1..=40usize {
            let row = stirling_row(n);
            for (k, v) in row.iter().enumerate().skip(1) {
                let positive = (n - k) % 2 == 0;
                assert_eq!(v > &BigInt::zero(), positive, "s({n},{k})");
            }
            if n >= 2 {
                assert!(row.iter().sum::<BigInt>().is_zero());
            }
        }
    }

    #[test]
    fn binom_identity() {
        assert!(check_binom_identity(3, &int(2)));
        assert!(check_binom_identity(2, &rat(1, 2)));
        assert!(check_binom_identity(0, &int(7)));
        let mut zs: Vec<Rational> = (-5..=5).map(int).collect();
        zs.extend([rat(1, 2), rat(-1, 2), rat(3, 2), rat(-3, 2), rat(7, 3)]);
        for n in 0..=40 {
            for z in &zs {
                assert!(check_binom_identity(n, z), "n={n}, z={z}");
            }
        }
    }

    #[test]
    fn private_table_matches_shared() {
        let t = StirlingTable::new(50);
        let shared = table(50);
        for n in 0..=50 {
            assert_eq!(t.row(n), shared.row(n));
        }
    }

    #[test]
    fn concurrent_extension_is_consistent() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || stirling1(100 + 20 * i, 50).unwrap()))
            .collect();
        let got: Vec<BigInt> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let t = StirlingTable::new(240);
        for (i, v) in got.iter().enumerate() {
            assert_eq!(v, t.get(100 + 20 * i, 50));
        }
    }
}
