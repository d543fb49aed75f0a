//! Integer kernels behind the rational l.t.T. product and forward substitution.
//!
//! Vectors are lifted to a common denominator, worked on as `BigInt`s, and every output
//! entry is reduced exactly once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalars::Rational;

/// `v = out / d` with integer `out` and `d = lcm` of the denominators.
fn lift(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints =
        v.iter().map(|x| if x.denom() == &d { x.numer().clone() } else { x.numer() * (&d / x.denom()) }).collect();
    (ints, d)
}

pub(crate) fn truncated_product(a: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let n = v.len();
    let (ai, da) = lift(&a[..a.len().min(n)]);
    let (vi, dv) = lift(v);
    let mut acc = vec![BigInt::zero(); n];
    for (j, vj) in vi.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        for (i, aik) in ai.iter().take(n - j).enumerate() {
            if !aik.is_zero() {
                acc[i + j] += aik * vj;
            }
        }
    }
    let d = da * dv;
    acc.into_iter().map(|w| Rational::new(w, d.clone())).collect()
}

/// Solves `L(a) x = f` for `a_0 != 0`.
///
/// With `a = A / d_a`, `f = F / d_f` and `c = A_0`, the scaled unknowns
/// `X_i = d_f c^{i+1} x_i` satisfy `X_i = d_a F_i c^i - sum_{k>=1} A_k c^{k-1} X_{i-k}`.
pub(crate) fn forward_substitution(a: &[Rational], f: &[Rational]) -> Vec<Rational> {
    let n = f.len();
    let (ai, da) = lift(&a[..n]);
    let (fi, df) = lift(f);
    let c = ai[0].clone();
    let mut cpow = Vec::with_capacity(n + 1);
    cpow.push(BigInt::one());
    for i in 0..n {
        let next = &cpow[i] * &c;
        cpow.push(next);
    }
    let weights: Vec<BigInt> =
        (0..n).map(|k| if k == 0 || ai[k].is_zero() { BigInt::zero() } else { &ai[k] * &cpow[k - 1] }).collect();
    let mut x: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = if fi[i].is_zero() { BigInt::zero() } else { &da * &fi[i] * &cpow[i] };
        for k in 1..=i {
            if !weights[k].is_zero() && !x[i - k].is_zero() {
                acc -= &weights[k] * &x[i - k];
            }
        }
        x.push(acc);
    }
    x.into_iter().enumerate().map(|(i, xi)| Rational::new(xi, &df * &cpow[i + 1])).collect()
}
