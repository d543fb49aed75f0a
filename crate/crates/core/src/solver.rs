//! Non-recursive diagonal-nullification solver for `n x n` l.t.T. systems, `n = b^k`.
//!
//! Each step multiplies the current column `a(z)` by
//! `â(z) = a(zt) a(zt^2) ... a(zt^{b-1})`, `t = exp(2 pi i / b)`, which leaves only
//! the coefficients of `z^{bk}` in the product. After `k` steps the matrix is reduced to
//! the identity, and the first column of `A^{-1}` is rebuilt as
//! `L(â^(0)) E L(â^(1)) E ... E L(â^(k-1)) e_1`, with each factor applied at its own
//! block size.
//!
//! Over rationals the radix must be 2 (sign flips) or 3 (an integer-coefficient closed
//! form for `â`); other radices need complex roots and run in floating point.

use std::fmt;

use crate::error::{Error, Result};
use crate::fft::exact_log;
use crate::scalars::Scalar;
use crate::series::{unspread, LttProduct, NaiveProduct, SeriesColumn, SpreadShape};

/// `â` together with the shorter column `a^(1)` satisfying `L(a) â = E a^(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsifyResult<T> {
    pub hat: SeriesColumn<T>,
    pub next: SeriesColumn<T>,
}

/// What the first part of the solver produced, plus its multiplication count.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveTrace<T> {
    pub base: usize,
    pub levels: u32,
    /// `â^(j)` has length `n / b^j`.
    pub hat_columns: Vec<SeriesColumn<T>>,
    pub mult_count: u64,
}

impl<T: Scalar> SolveTrace<T> {
    /// Plain-text `key=value` report.
    pub fn report(&self) -> String {
        format!("base={}\nlevels={}\nmult_count={}\n", self.base, self.levels, self.mult_count)
    }
}

impl<T: Scalar> fmt::Display for SolveTrace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

/// Where the l.t.T. products of the solver are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatvecBackend {
    Naive,
    Fft,
}

impl std::str::FromStr for MatvecBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(MatvecBackend::Naive),
            "fft" => Ok(MatvecBackend::Fft),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

fn backend_for<T: Scalar>(backend: MatvecBackend, base: usize) -> Result<Box<dyn LttProduct<T>>> {
    match backend {
        MatvecBackend::Naive => Ok(Box::new(NaiveProduct::new())),
        MatvecBackend::Fft => T::fft_product(base)
            .ok_or_else(|| Error::UnsupportedField(format!("the fft backend needs complex scalars, not {}", T::NAME))),
    }
}

fn check_normalized<T: Scalar>(a: &[T]) -> Result<()> {
    match a.first() {
        None => Err(Error::Shape("empty column".into())),
        Some(a0) if a0.is_one() => Ok(()),
        Some(a0) => Err(Error::Normalization(a0.format())),
    }
}

fn check_base(base: usize) -> Result<()> {
    if base < 2 {
        return Err(Error::Domain(format!("radix must be at least 2, got {base}")));
    }
    Ok(())
}

/// Radix-3 `â` from its integer-coefficient scalar expansion:
/// `â_i = -sum_{r <= (i-1)/2} a_r a_{i-r} + [i even] a_{i/2}^2 + 3 sum_{r < i/2, 3 | i-2r} a_r a_{i-r}`.
pub fn hat_closed_form_base3<T: Scalar>(a: &[T]) -> Vec<T> {
    hat_closed_form_counted(a, &mut 0)
}

fn hat_closed_form_counted<T: Scalar>(a: &[T], ops: &mut u64) -> Vec<T> {
    let three = T::from_i64(3);
    (0..a.len())
        .map(|i| {
            let mut plain = T::zero();
            let mut tripled = T::zero();
            // Pairs (r, i - r) with r < i - r.
            for r in 0..i.div_ceil(2) {
                let (x, y) = (&a[r], &a[i - r]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let p = x.mul_ref(y);
                *ops += 1;
                if (i - 2 * r) % 3 == 0 {
                    tripled += &p;
                }
                plain += p;
            }
            let mut out = tripled * three.clone() - plain;
            if i % 2 == 0 && !a[i / 2].is_zero() {
                *ops += 1;
                out += a[i / 2].mul_ref(&a[i / 2]);
            }
            out
        })
        .collect()
}

/// `â(z) = a(zt) ... a(zt^{b-1})` mod `z^m`, so that `a(z) â(z)` only has powers `z^{bk}`.
pub fn sparsify_hat<T: Scalar>(a: &SeriesColumn<T>, base: usize) -> Result<SeriesColumn<T>> {
    sparsify_hat_with(a.coeffs(), base, &mut NaiveProduct::new()).map(|h| SeriesColumn::new(h).expect("non-empty"))
}

pub(crate) fn sparsify_hat_with<T: Scalar>(a: &[T], base: usize, prod: &mut dyn LttProduct<T>) -> Result<Vec<T>> {
    check_base(base)?;
    check_normalized(a)?;
    if base == 2 {
        return Ok(a
            .iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 0 { x.clone() } else { T::zero() - x.clone() })
            .collect());
    }
    if base == 3 && T::EXACT {
        let mut ops = 0;
        let hat = hat_closed_form_counted(a, &mut ops);
        prod.charge(ops);
        return Ok(hat);
    }
    if T::root_of_unity(base, 1).is_none() {
        return Err(Error::UnsupportedField(format!(
            "radix {base} needs complex roots of unity, not {} arithmetic",
            T::NAME
        )));
    }
    let m = a.len();
    let rotated = |j: usize| -> Vec<T> {
        (0..m).map(|k| a[k].mul_ref(&T::root_of_unity(base, j * k).expect("checked above"))).collect()
    };
    let mut hat = rotated(1);
    prod.charge(m as u64);
    for j in 2..base {
        let next = rotated(j);
        prod.charge(m as u64);
        hat = prod.matvec(&hat, &next)?;
    }
    Ok(hat)
}

/// Splits `v` into its `b` polyphase components `v_r[i] = v[b i + r]`.
fn polyphase<T: Scalar>(v: &[T], base: usize) -> Vec<Vec<T>> {
    (0..base).map(|r| v.iter().skip(r).step_by(base).cloned().collect()).collect()
}

/// `a^(1)` from `a(z) â(z)` sampled at multiples of `b`, as `b` products of length `m / b`:
/// `a^(1)(y) = A_0 Â_0 + y sum_{r >= 1} A_r Â_{b-r}`.
fn next_column<T: Scalar>(a: &[T], hat: &[T], base: usize, prod: &mut dyn LttProduct<T>) -> Result<Vec<T>> {
    let short = a.len() / base;
    let pa = polyphase(a, base);
    let ph = polyphase(hat, base);
    let mut out = prod.matvec(&pa[0], &ph[0])?;
    let mut carry = vec![T::zero(); short];
    for r in 1..base {
        let term = prod.matvec(&pa[r], &ph[base - r])?;
        for (c, t) in carry.iter_mut().zip(term) {
            *c += t;
        }
    }
    for i in 1..short {
        out[i] += &carry[i - 1];
    }
    // a_0 â_0 = a_0^b = 1; pin it so rounding cannot drift the next level off normalization.
    out[0] = T::one();
    Ok(out)
}

fn sparsify_step_with<T: Scalar>(a: &[T], base: usize, prod: &mut dyn LttProduct<T>) -> Result<SparsifyResult<T>> {
    if !a.len().is_multiple_of(base) {
        return Err(Error::Shape(format!("column length {} is not divisible by {base}", a.len())));
    }
    let hat = sparsify_hat_with(a, base, prod)?;
    let next = next_column(a, &hat, base, prod)?;
    Ok(SparsifyResult {
        hat: SeriesColumn::new(hat).expect("non-empty"),
        next: SeriesColumn::new(next).expect("non-empty"),
    })
}

/// One elimination step: `â` and `a^(1)` with `L(a) â = E a^(1)` on length `m`.
pub fn sparsify_step<T: Scalar>(a: &SeriesColumn<T>, base: usize) -> Result<SparsifyResult<T>> {
    check_base(base)?;
    sparsify_step_with(a.coeffs(), base, &mut NaiveProduct::new())
}

/// True when every coefficient off the multiples of `base` is already zero.
fn already_sparse<T: Scalar>(a: &[T], base: usize) -> bool {
    a.iter().enumerate().all(|(i, x)| i % base == 0 || x.is_zero())
}

/// First column of `A^{-1}` for the `n x n` truncation `A` of `L(a)`, `n = base^k`, `a_0 = 1`.
///
/// A column that already has the radix sparsity pattern skips its step (`â = e_1`).
pub fn invert_first_column<T: Scalar>(
    a: &SeriesColumn<T>,
    base: usize,
    backend: MatvecBackend,
) -> Result<(Vec<T>, SolveTrace<T>)> {
    check_base(base)?;
    let mut prod = backend_for::<T>(backend, base)?;
    invert_with(a.coeffs(), base, prod.as_mut())
}

fn invert_with<T: Scalar>(a: &[T], base: usize, prod: &mut dyn LttProduct<T>) -> Result<(Vec<T>, SolveTrace<T>)> {
    check_normalized(a)?;
    let n = a.len();
    let levels = match exact_log(n, base) {
        Some(k) if k >= 1 => k,
        _ => return Err(Error::Shape(format!("system size {n} is not a positive power of {base}"))),
    };
    let shape = SpreadShape::new(base, 1)?;
    let start = prod.mult_count();

    let mut hats: Vec<Vec<T>> = Vec::with_capacity(levels as usize);
    let mut current = a.to_vec();
    for level in 0..levels {
        let last = level + 1 == levels;
        let hat = if already_sparse(&current, base) {
            let mut e1 = vec![T::zero(); current.len()];
            e1[0] = T::one();
            if !last {
                current = unspread(&current, shape);
            }
            e1
        } else {
            let hat = sparsify_hat_with(&current, base, prod)?;
            if !last {
                current = next_column(&current, &hat, base, prod)?;
            }
            hat
        };
        hats.push(hat);
    }

    // L(â^(k-1)) e_1 is â^(k-1) itself; each outer factor then sees a spread vector.
    let mut x = hats.last().expect("levels >= 1").clone();
    for hat in hats.iter().rev().skip(1) {
        x = apply_to_spread(hat, &x, base, prod)?;
    }

    let trace = SolveTrace {
        base,
        levels,
        hat_columns: hats.into_iter().map(|h| SeriesColumn::new(h).expect("non-empty")).collect(),
        mult_count: prod.mult_count() - start,
    };
    Ok((x, trace))
}

/// `L(h) E w` on length `|h| = b |w|`: output residue class `r` is `L(H_r) w`.
fn apply_to_spread<T: Scalar>(h: &[T], w: &[T], base: usize, prod: &mut dyn LttProduct<T>) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); h.len()];
    for (r, hr) in polyphase(h, base).iter().enumerate() {
        let part = prod.matvec(hr, w)?;
        for (i, y) in part.into_iter().enumerate() {
            out[base * i + r] = y;
        }
    }
    Ok(out)
}

/// `A^{-1} f`: invert the first column, then one l.t.T. product with the chosen backend.
///
/// A leading coefficient other than 1 is divided out first; zero is singular.
pub fn ltt_solve_fast<T: Scalar>(a: &[T], f: &[T], base: usize, backend: MatvecBackend) -> Result<Vec<T>> {
    ltt_solve_fast_traced(a, f, base, backend).map(|(x, _)| x)
}

/// As [`ltt_solve_fast`], also returning the trace; `mult_count` covers the final product too.
pub fn ltt_solve_fast_traced<T: Scalar>(
    a: &[T],
    f: &[T],
    base: usize,
    backend: MatvecBackend,
) -> Result<(Vec<T>, SolveTrace<T>)> {
    check_base(base)?;
    if a.len() != f.len() {
        return Err(Error::Shape(format!("coefficient length {} vs rhs length {}", a.len(), f.len())));
    }
    let a0 = a.first().ok_or_else(|| Error::Shape("empty system".into()))?;
    if a0.is_zero() {
        return Err(Error::Singular("leading coefficient a_0 is zero".into()));
    }
    let mut prod = backend_for::<T>(backend, base)?;
    let inv_a0 = T::one() / a0.clone();
    let normalized: Vec<T> = if a0.is_one() { a.to_vec() } else { a.iter().map(|x| x.mul_ref(&inv_a0)).collect() };
    if a.len() == 1 {
        let trace = SolveTrace { base, levels: 0, hat_columns: vec![], mult_count: 1 };
        return Ok((vec![f[0].mul_ref(&inv_a0)], trace));
    }
    let (column, mut trace) = invert_with(&normalized, base, prod.as_mut())?;
    let before = prod.mult_count();
    let mut x = prod.matvec(&column, f)?;
    if !a0.is_one() {
        x = x.iter().map(|v| v.mul_ref(&inv_a0)).collect();
    }
    trace.mult_count += prod.mult_count() - before;
    Ok((x, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{integer, rational, ComplexF, Rational};
    use crate::series::{ltt_compose, ltt_matvec_naive, ltt_solve_forward};
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    fn col(v: &[i64]) -> SeriesColumn<Rational> {
        SeriesColumn::new(ints(v)).unwrap()
    }

    fn random_column(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
        let mut a: Vec<Rational> = (0..n).map(|_| rational(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        a[0] = integer(1);
        a
    }

    #[test]
    fn base2_hat_is_sign_flip() {
        assert_eq!(sparsify_hat(&col(&[1, 1, 1, 1]), 2).unwrap(), col(&[1, -1, 1, -1]));
        let step = sparsify_step(&col(&[1, 1, 1, 1]), 2).unwrap();
        assert_eq!(step.hat, col(&[1, -1, 1, -1]));
        assert_eq!(step.next, col(&[1, 1]));
    }

    #[test]
    fn identity_column_is_fixed() {
        for b in [2, 3] {
            let step = sparsify_step(&SeriesColumn::<Rational>::identity(b * b), b).unwrap();
            assert!(step.hat.coeffs()[1..].iter().all(|x| x.is_zero()));
            assert!(step.next.coeffs()[1..].iter().all(|x| x.is_zero()));
            assert!(step.hat.coeffs()[0].is_one() && step.next.coeffs()[0].is_one());
        }
    }

    #[test]
    fn base3_closed_form_leading_terms() {
        // Coefficients 1, a1, a2, a3 = 1, 2, 5, 7.
        let hat = sparsify_hat(&col(&[1, 2, 5, 7, 0, 0]), 3).unwrap();
        let h = hat.coeffs();
        assert_eq!(h[1], integer(-2));
        assert_eq!(h[2], integer(-5 + 4));
        assert_eq!(h[3], integer(2 * 7 - 2 * 5));
        let step = sparsify_step(&col(&[1, 2, 5, 7, 0, 0]), 3).unwrap();
        assert_eq!(step.next.coeffs()[1], integer(3 * 7 - 3 * 2 * 5 + 8));
    }

    #[test]
    fn base3_hat_matches_complex_product() {
        let ones = vec![integer(1); 9];
        let exact = sparsify_hat(&SeriesColumn::new(ones).unwrap(), 3).unwrap();
        let c: Vec<ComplexF> = vec![ComplexF::new(1.0, 0.0); 9];
        let float = sparsify_hat(&SeriesColumn::new(c).unwrap(), 3).unwrap();
        for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
            assert!(y.im.abs() < 1e-12);
            assert!((y.re - crate::scalars::rational_to_f64(x)).abs() < 1e-12);
        }
        // (1+z+...)(1+tz+...)(1+t^2z+...) = 1 + z^3 + z^6 truncated.
        let product = ltt_compose(&SeriesColumn::new(vec![integer(1); 9]).unwrap(), &exact).unwrap();
        assert_eq!(product, col(&[1, 0, 0, 1, 0, 0, 1, 0, 0]));
    }

    #[test]
    fn sparsity_pattern_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, b) in [(8, 2), (16, 2), (27, 3), (81, 3)] {
            let a = SeriesColumn::new(random_column(&mut rng, n)).unwrap();
            let hat = sparsify_hat(&a, b).unwrap();
            let w = ltt_compose(&a, &hat).unwrap();
            for (i, x) in w.coeffs().iter().enumerate() {
                assert!(i % b == 0 || x.is_zero(), "n={n} b={b} i={i}");
            }
        }
    }

    #[test]
    fn hat_errors() {
        assert!(matches!(sparsify_hat(&col(&[2, 1]), 2), Err(Error::Normalization(_))));
        assert!(matches!(sparsify_hat(&col(&[1, 1, 1, 1]), 4), Err(Error::UnsupportedField(_))));
        assert!(matches!(sparsify_step(&col(&[1, 1, 1]), 2), Err(Error::Shape(_))));
        let c = SeriesColumn::new(vec![ComplexF::new(1.0, 0.0); 16]).unwrap();
        assert!(sparsify_hat(&c, 4).is_ok());
    }

    #[test]
    fn invert_examples() {
        let (x, trace) = invert_first_column(&col(&[1; 8]), 2, MatvecBackend::Naive).unwrap();
        assert_eq!(x, ints(&[1, -1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(trace.levels, 3);
        assert_eq!(trace.hat_columns.iter().map(|h| h.len()).collect::<Vec<_>>(), vec![8, 4, 2]);
        let (x, _) = invert_first_column(&col(&[1, 2, 3, 4]), 2, MatvecBackend::Naive).unwrap();
        assert_eq!(x, ints(&[1, -2, 1, 0]));
        assert!(matches!(invert_first_column(&col(&[1, 2, 3]), 2, MatvecBackend::Naive), Err(Error::Shape(_))));
        assert!(matches!(invert_first_column(&col(&[1]), 2, MatvecBackend::Naive), Err(Error::Shape(_))));
        assert!(matches!(invert_first_column(&col(&[3, 1]), 2, MatvecBackend::Naive), Err(Error::Normalization(_))));
        assert!(matches!(invert_first_column(&col(&[1, 1]), 2, MatvecBackend::Fft), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn invert_matches_forward_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, b) in [(4, 2), (32, 2), (9, 3), (27, 3)] {
            for _ in 0..10 {
                let a = random_column(&mut rng, n);
                let mut e1 = vec![integer(0); n];
                e1[0] = integer(1);
                let (x, _) =
                    invert_first_column(&SeriesColumn::new(a.clone()).unwrap(), b, MatvecBackend::Naive).unwrap();
                assert_eq!(x, ltt_solve_forward(&a, &e1).unwrap());
            }
        }
    }

    #[test]
    fn solve_examples() {
        let x = ltt_solve_fast(&ints(&[1, 1, 1, 1]), &ints(&[1, 2, 3, 4]), 2, MatvecBackend::Naive).unwrap();
        assert_eq!(x, ints(&[1, 1, 1, 1]));
        let a = ints(&[1, 2, 3, 4]);
        let e1 = ints(&[1, 0, 0, 0]);
        let (inv, _) = invert_first_column(&SeriesColumn::new(a.clone()).unwrap(), 2, MatvecBackend::Naive).unwrap();
        assert_eq!(ltt_solve_fast(&a, &e1, 2, MatvecBackend::Naive).unwrap(), inv);
        // Non-unit leading coefficient is scaled out.
        let a = ints(&[2, 4, 6, 8]);
        let f = ints(&[1, 5, -2, 3]);
        let x = ltt_solve_fast(&a, &f, 2, MatvecBackend::Naive).unwrap();
        assert_eq!(ltt_matvec_naive(&a, &x).unwrap(), f);
        assert!(matches!(
            ltt_solve_fast(&ints(&[0, 1]), &ints(&[1, 0]), 2, MatvecBackend::Naive),
            Err(Error::Singular(_))
        ));
        assert_eq!(ltt_solve_fast(&ints(&[4]), &ints(&[2]), 3, MatvecBackend::Naive).unwrap(), vec![rational(1, 2)]);
    }

    #[test]
    fn fft_backend_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, b) in [(16, 2), (27, 3), (16, 4), (25, 5)] {
            let mut a: Vec<ComplexF> = (0..n).map(|_| ComplexF::new(rng.gen_range(-0.5..0.5), 0.0)).collect();
            a[0] = ComplexF::new(1.0, 0.0);
            let f: Vec<ComplexF> = (0..n).map(|_| ComplexF::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
            let reference = ltt_solve_forward(&a, &f).unwrap();
            for backend in [MatvecBackend::Naive, MatvecBackend::Fft] {
                let x = ltt_solve_fast(&a, &f, b, backend).unwrap();
                let err = x.iter().zip(&reference).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
                let scale = reference.iter().map(|q| q.norm()).fold(1.0, f64::max);
                assert!(err / scale < 1e-9, "n={n} b={b} {backend:?} err={err}");
            }
        }
    }

    #[test]
    fn trace_report() {
        let (_, trace) = invert_first_column(&col(&[1; 9]), 3, MatvecBackend::Naive).unwrap();
        let report = trace.report();
        assert!(report.starts_with("base=3\nlevels=2\nmult_count="));
    }
}
