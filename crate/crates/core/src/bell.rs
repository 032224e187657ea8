//! Partial Bell polynomials `B_{n,k}(x_1, ..., x_{n-k+1})` evaluated at
//! concrete sequences.
//!
//! Three independent routes compute the same value: the partition sum
//! ([`bell`]), the convolution recurrence ([`bell_rec`]) and powering the
//! exponential generating function ([`bell_genfun`]).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::{binom, binom_nat, dfact, double_factorial, factorial, falling, int, pow, sign, to_text};
use crate::fps::pow_truncated;
use crate::qfunc::q_unchecked;
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::Rational;

/// The sequence `x_1, x_2, ...` a Bell polynomial is evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct BellArgs<T> {
    values: Vec<T>,
}

impl<T: Scalar> BellArgs<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return domain("Bell arguments must be non-empty");
        }
        Ok(BellArgs { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `x_i` (1-based), zero past the end.
    pub fn x(&self, i: usize) -> T {
        self.values.get(i - 1).cloned().unwrap_or_else(T::zero)
    }
}

fn check_indices<T>(n: usize, k: usize, args: &BellArgs<T>) -> Result<()> {
    if k == 0 || k > n {
        return domain(format!("B_{{n,k}} needs 1 <= k <= n, got n = {n}, k = {k}"));
    }
    if args.values.len() < n - k + 1 {
        return Err(Error::Domain(format!(
            "B_{{{n},{k}}} needs {} arguments, got {}",
            n - k + 1,
            args.values.len()
        )));
    }
    Ok(())
}

/// Multiplicity vectors `l` (index `i - 1` holds `l_i`) with
/// `sum i l_i = n` and `sum l_i = k`.
pub fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let top = if k == 0 { 0 } else { n - k + 1 };
    let mut l = vec![0usize; top];
    fill(top, n, k, &mut l, &mut out);
    out
}

fn fill(i: usize, rem_n: usize, rem_k: usize, l: &mut [usize], out: &mut Vec<Vec<usize>>) {
    if i == 0 {
        if rem_n == 0 && rem_k == 0 {
            out.push(l.to_vec());
        }
        return;
    }
    if i == 1 {
        if rem_n == rem_k {
            l[0] = rem_k;
            out.push(l.to_vec());
            l[0] = 0;
        }
        return;
    }
    // Parts no larger than i - 1 remain below: need rem_k <= rem_n <= (i-1) rem_k.
    for c in (0..=rem_k.min(rem_n / i)).rev() {
        let (rn, rk) = (rem_n - c * i, rem_k - c);
        if rk <= rn && rn <= (i - 1) * rk {
            l[i - 1] = c;
            fill(i - 1, rn, rk, l, out);
        }
    }
    l[i - 1] = 0;
}

/// `n! / prod_i (l_i! (i!)^{l_i})`, always an integer.
pub fn partition_coefficient(n: usize, l: &[usize]) -> BigInt {
    let mut den = BigInt::one();
    for (idx, &c) in l.iter().enumerate() {
        if c > 0 {
            den *= factorial(c) * num_traits::pow(factorial(idx + 1), c);
        }
    }
    factorial(n) / den
}

/// Partition-sum definition.
pub fn bell<T: Scalar>(n: usize, k: usize, args: &BellArgs<T>) -> Result<T> {
    check_indices(n, k, args)?;
    let mut acc = T::zero();
    for l in partitions(n, k) {
        let mut term = T::from_integer(&partition_coefficient(n, &l));
        for (idx, &c) in l.iter().enumerate() {
            if c > 0 {
                term = term * pow(&args.x(idx + 1), c);
            }
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// `B[n][k]` for every `0 <= k <= n <= n_max`, by
/// `B_{n,k} = sum_i binom(n-1, i-1) x_i B_{n-i,k-1}` with `B_{0,0} = 1`.
pub fn bell_table<T: Scalar>(n_max: usize, args: &BellArgs<T>) -> Vec<Vec<T>> {
    let mut b: Vec<Vec<T>> = (0..=n_max).map(|n| vec![T::zero(); n + 1]).collect();
    b[0][0] = T::one();
    for n in 1..=n_max {
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=n - k + 1 {
                let prev = &b[n - i][k - 1];
                if prev.is_zero() {
                    continue;
                }
                acc = acc + T::from_integer(&binom_nat(n - 1, i - 1)) * args.x(i) * prev.clone();
            }
            b[n][k] = acc;
        }
    }
    b
}

/// Convolution-recurrence route.
pub fn bell_rec<T: Scalar>(n: usize, k: usize, args: &BellArgs<T>) -> Result<T> {
    check_indices(n, k, args)?;
    Ok(bell_table(n, args)[n][k].clone())
}

/// Generating-function route: `n!/k! [t^n] (sum_{m<=n} x_m t^m / m!)^k`.
pub fn bell_genfun<T: Scalar>(n: usize, k: usize, args: &BellArgs<T>) -> Result<T> {
    check_indices(n, k, args)?;
    let len = n + 1;
    let egf: Vec<T> = (0..len)
        .map(|m| if m == 0 { T::zero() } else { args.x(m) / T::from_integer(&factorial(m)) })
        .collect();
    let power = pow_truncated(&egf, k, len);
    Ok(power[n].clone() * T::from_integer(&factorial(n)) / T::from_integer(&factorial(k)))
}

pub fn bell_genfun_check(n: usize, k: usize, args: &BellArgs<Rational>) -> Result<bool> {
    Ok(bell_genfun(n, k, args)? == bell(n, k, args)?)
}

/// Checks the scaling law on `args`, the quadratic case at `alpha` and the
/// double-factorial case, all for the single index pair `(n, k)`.
pub fn check_special_values_with(
    n: usize,
    k: usize,
    alpha: &Rational,
    beta: &Rational,
    args: &BellArgs<Rational>,
) -> Result<CheckReport> {
    check_indices(n, k, args)?;
    let mut report = CheckReport::new("bell-special-values");
    let case = |what: &str| format!("{what}:n={n:02},k={k:02}");

    let scaled: Vec<Rational> = (1..=n - k + 1).map(|i| alpha * pow(beta, i) * args.x(i)).collect();
    let lhs = bell(n, k, &BellArgs { values: scaled })?;
    let rhs = pow(alpha, k) * pow(beta, n) * bell(n, k, args)?;
    report.check(lhs == rhs, || case("scaling"), || format!("{} != {}", to_text(&lhs), to_text(&rhs)));

    if !(2 * k < n && alpha.is_zero()) {
        let got = bell(n, k, &quadratic_args(alpha, n - k + 1))?;
        let want = bell_quadratic(n, k, alpha)?;
        report.check(got == want, || case("quadratic"), || format!("{} != {}", to_text(&got), to_text(&want)));
    }

    let got = bell(n, k, &double_factorial_args(n - k + 1))?;
    let want = int(bell_double_factorial(n, k));
    report.check(got == want, || case("double-factorial"), || format!("{} != {}", to_text(&got), to_text(&want)));
    Ok(report)
}

/// [`check_special_values_with`] on the fixed sequence `x_i = (-1)^i (i+1)/(2i-1)`.
pub fn check_special_values(n: usize, k: usize, alpha: &Rational, beta: &Rational) -> Result<CheckReport> {
    let values = (1..=n.max(1)).map(|i| sign::<Rational>(i) * Rational::new((i + 1).into(), (2 * i - 1).into()));
    check_special_values_with(n, k, alpha, beta, &BellArgs { values: values.collect() })
}

fn quadratic_args(alpha: &Rational, len: usize) -> BellArgs<Rational> {
    let mut values = vec![Rational::zero(); len.max(2)];
    values[0] = alpha.clone();
    values[1] = Rational::one();
    BellArgs { values }
}

/// `B_{n,k}(alpha, 1, 0, ...) = (n-k)!/2^{n-k} binom(n,k) binom(k,n-k) alpha^{2k-n}`.
pub fn bell_quadratic(n: usize, k: usize, alpha: &Rational) -> Result<Rational> {
    let e = 2 * k as i64 - n as i64;
    if e < 0 {
        if alpha.is_zero() {
            return domain("alpha = 0 with negative exponent 2k - n");
        }
        return Ok(Rational::zero());
    }
    let c = int(factorial(n - k) * binom_nat(n, k) * binom_nat(k, n - k)) / pow(&int(2), n - k);
    Ok(c * pow(alpha, e as usize))
}

/// `x_i = (2i-3)!!`, i.e. `(-1)!!, 1!!, 3!!, ...`.
pub fn double_factorial_args(len: usize) -> BellArgs<Rational> {
    BellArgs { values: (1..=len).map(|i| int(double_factorial(2 * i as i64 - 3).expect("i >= 1"))).collect() }
}

/// `B_{n,k}((-1)!!, 1!!, 3!!, ...) = [2(n-k)-1]!! binom(2n-k-1, 2(n-k))`.
pub fn bell_double_factorial(n: usize, k: usize) -> BigInt {
    let d = double_factorial(2 * (n as i64 - k as i64) - 1).expect("k <= n");
    d * binom_nat(2 * n - k - 1, 2 * (n - k))
}

/// Faà di Bruno: `sum_{k=0}^{n} f^(k) B_{n,k}(h', ..., h^(n-k+1))`.
///
/// `outer[k]` is `f^(k)(h(t0))` and needs `n + 1` entries; `inner[i-1]` is
/// `h^(i)(t0)` and needs `n` entries.
pub fn faa_di_bruno<T: Scalar>(n: usize, outer: &[T], inner: &[T]) -> Result<T> {
    if outer.len() < n + 1 {
        return Err(Error::InsufficientData(format!(
            "order {n} needs {} outer derivatives, got {}",
            n + 1,
            outer.len()
        )));
    }
    if n == 0 {
        return Ok(outer[0].clone());
    }
    if inner.len() < n {
        return Err(Error::InsufficientData(format!(
            "order {n} needs {n} inner derivatives, got {}",
            inner.len()
        )));
    }
    let b = bell_table(n, &BellArgs { values: inner[..n].to_vec() });
    Ok((1..=n).fold(T::zero(), |acc, k| acc + outer[k].clone() * b[n][k].clone()))
}

/// `t_i = (2i)!!/(2i+2)! Q(2, 2i)`: `-1/12, 2/45, -3/70, ...`.
pub fn arccos_sequence(len: usize) -> Vec<Rational> {
    (1..=len).map(|i| int(dfact(2 * i)) / int(factorial(2 * i + 2)) * q_unchecked(2, 2 * i)).collect()
}

/// Route (a): `2^k B_{m,k}(t_1, t_2, ...)`.
pub fn bell_arccos_scaled(m: usize, k: usize) -> Result<Rational> {
    let args = BellArgs { values: arccos_sequence(m.max(1)) };
    Ok(pow(&int(2), k) * bell(m, k, &args)?)
}

/// Route (b): `(-2)^k [2(m-k)]!! binom(m,k) sum_j (-1)^j (2j)! binom(k,j) Q(2j,2m)/(2j+2m)!`.
pub fn bell_arccos_closed(m: usize, k: usize) -> Result<Rational> {
    if k == 0 || k > m {
        return domain(format!("needs 1 <= k <= m, got m = {m}, k = {k}"));
    }
    let inner: Rational = (1..=k)
        .map(|j| {
            sign::<Rational>(j) * int(factorial(2 * j) * binom_nat(k, j)) * q_unchecked(2 * j, 2 * m)
                / int(factorial(2 * j + 2 * m))
        })
        .sum();
    Ok(pow(&int(-2), k) * int(dfact(2 * (m - k)) * binom_nat(m, k)) * inner)
}

/// `B_{m,k}` at the derivative sequence of `(arccos x)^2 / (2(1-x))` at `1-`,
/// computed both ways; disagreement is an error.
pub fn bell_arccos(m: usize, k: usize) -> Result<Rational> {
    let a = bell_arccos_scaled(m, k)?;
    let b = bell_arccos_closed(m, k)?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "bell_arccos({m},{k}): partition route {} vs closed form {}",
            to_text(&a),
            to_text(&b)
        )));
    }
    Ok(a)
}

/// Route (a) for every `0 <= k <= m <= m_max` at once, via [`bell_table`].
pub fn bell_arccos_table(m_max: usize) -> Vec<Vec<Rational>> {
    let args = BellArgs { values: arccos_sequence(m_max.max(1)) };
    let mut t = bell_table(m_max, &args);
    for row in t.iter_mut() {
        for (k, v) in row.iter_mut().enumerate() {
            *v *= pow(&int(2), k);
        }
    }
    t
}

/// `sum_{j=0}^{k} (-1)^j <2k>_j [2(k-j)-1]!! binom(2k-j-1, 2(k-j))`; equals
/// `(-1)^k (2k)!!`.
pub fn envelope_sum(k: usize) -> Rational {
    (0..=k)
        .map(|j| {
            let d = double_factorial(2 * (k as i64 - j as i64) - 1).expect("j <= k");
            sign::<Rational>(j)
                * falling(&int(2 * k), j)
                * int(d)
                * binom(&int(2 * k as i64 - j as i64 - 1), 2 * (k - j))
        })
        .sum()
}

/// `sum_{k=0}^{n} k! [2(n-k)-1]!! binom(2n-k-1, 2(n-k))`; equals `(2n-1)!!`.
pub fn envelope_companion_sum(n: usize) -> Rational {
    (0..=n)
        .map(|k| {
            let d = double_factorial(2 * (n as i64 - k as i64) - 1).expect("k <= n");
            int(factorial(k) * d) * binom(&int(2 * n as i64 - k as i64 - 1), 2 * (n - k))
        })
        .sum()
}

pub fn check_envelope(k_max: usize) -> CheckReport {
    let mut report = CheckReport::new("envelope-identity");
    for k in 0..=k_max {
        let got = envelope_sum(k);
        let want = sign::<Rational>(k) * int(dfact(2 * k));
        report.check(got == want, || format!("k={k:02}"), || format!("{} != {}", to_text(&got), to_text(&want)));
    }
    report
}

/// Routes (a) and (b) of [`bell_arccos`] agree for `1 <= k <= m <= m_max`.
pub fn check_bell_arccos(m_max: usize) -> CheckReport {
    use rayon::prelude::*;
    let mut report = CheckReport::new("bell-arccos-routes");
    let cells: Vec<(usize, usize)> = (1..=m_max).flat_map(|m| (1..=m).map(move |k| (m, k))).collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(m, k)| {
            let a = bell_arccos_scaled(m, k).expect("valid indices");
            let b = bell_arccos_closed(m, k).expect("valid indices");
            (m, k, a, b)
        })
        .collect();
    for (m, k, a, b) in results {
        report.check(a == b, || format!("m={m:02},k={k:02}"), || format!("{} != {}", to_text(&a), to_text(&b)));
    }
    report
}
