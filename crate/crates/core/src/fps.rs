//! Dense truncated power series helpers shared by the generating-function
//! oracles and the series engine.

use crate::scalar::Scalar;

/// Product of two coefficient vectors, keeping indices `< len`.
pub fn mul_truncated<T: Scalar>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// `a^k` truncated to `len` coefficients; `a^0` is the constant 1.
pub fn pow_truncated<T: Scalar>(a: &[T], k: usize, len: usize) -> Vec<T> {
    let mut acc = vec![T::zero(); len];
    if len > 0 {
        acc[0] = T::one();
    }
    for _ in 0..k {
        acc = mul_truncated(&acc, a, len);
    }
    acc
}
