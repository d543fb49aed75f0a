//! Truncated lower triangular Toeplitz matrices `L(a)`, stored as their first column.
//!
//! Every product is taken modulo `z^n`, i.e. on the upper-left `n x n` block of the
//! semi-infinite matrix. The routines here are the schoolbook `O(n^2)` kernels; the
//! fast solver uses them as its exact backend and the tests use them as oracles.

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// First column `[a_0, ..., a_{n-1}]` of `L(a) = sum a_k Z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesColumn<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> SeriesColumn<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("a series column needs at least one coefficient".into()));
        }
        Ok(SeriesColumn { coeffs })
    }

    /// `e_1` of length `n`, the column of the identity.
    pub fn identity(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n.max(1)];
        coeffs[0] = T::one();
        SeriesColumn { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Dense `n x n` truncation of `L(a)`, row major.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| if j <= i { self.coeffs[i - j].clone() } else { T::zero() }).collect()).collect()
    }
}

impl<T> AsRef<[T]> for SeriesColumn<T> {
    fn as_ref(&self) -> &[T] {
        &self.coeffs
    }
}

/// Zero-insertion pattern `E^s` for radix `b`: consecutive components end up `b^s` apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpreadShape {
    base: usize,
    power: u32,
}

impl SpreadShape {
    pub fn new(base: usize, power: u32) -> Result<Self> {
        if base < 2 || power < 1 {
            return Err(Error::Domain(format!(
                "spread shape needs base >= 2 and power >= 1, got base {base}, power {power}"
            )));
        }
        Ok(SpreadShape { base, power })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Distance `b^s` between consecutive invariant slots.
    pub fn stride(&self) -> usize {
        self.base.pow(self.power)
    }
}

fn check_len(what: &str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::Shape(format!("{what}: lengths {left} and {right} differ")));
    }
    Ok(())
}

/// `w_i = sum_{j <= i} a_{i-j} v_j`.
pub fn ltt_matvec_naive<T: Scalar>(a: &[T], v: &[T]) -> Result<Vec<T>> {
    check_len("ltt matvec", a.len(), v.len())?;
    let mut ops = 0;
    Ok(matvec_counted(a, v, &mut ops))
}

/// Schoolbook truncated product; zero entries are skipped and every remaining multiply is counted.
pub(crate) fn matvec_counted<T: Scalar>(a: &[T], v: &[T], ops: &mut u64) -> Vec<T> {
    let n = v.len();
    // nonzero[k] = number of nonzero a_i with i < k
    let mut nonzero = Vec::with_capacity(n + 1);
    nonzero.push(0u64);
    for ai in a.iter().take(n) {
        let last = *nonzero.last().expect("non-empty");
        nonzero.push(last + u64::from(!ai.is_zero()));
    }
    *ops += v.iter().enumerate().filter(|(_, vj)| !vj.is_zero()).map(|(j, _)| nonzero[n - j]).sum::<u64>();
    T::truncated_product(a, v)
}

/// Something that can evaluate a truncated l.t.T. product `L(a) v` and count its multiplications.
pub trait LttProduct<T> {
    fn matvec(&mut self, a: &[T], v: &[T]) -> Result<Vec<T>>;

    fn mult_count(&self) -> u64;

    /// Records multiplications done outside `matvec` by the caller.
    fn charge(&mut self, ops: u64);
}

/// Schoolbook backend; exact over rationals.
#[derive(Debug, Default, Clone)]
pub struct NaiveProduct {
    ops: u64,
}

impl NaiveProduct {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<T: Scalar> LttProduct<T> for NaiveProduct {
    fn matvec(&mut self, a: &[T], v: &[T]) -> Result<Vec<T>> {
        check_len("ltt matvec", a.len(), v.len())?;
        Ok(matvec_counted(a, v, &mut self.ops))
    }

    fn mult_count(&self) -> u64 {
        self.ops
    }

    fn charge(&mut self, ops: u64) {
        self.ops += ops;
    }
}

/// First column of `L(a) L(u)`, i.e. the power-series product truncated at `z^n`.
pub fn ltt_compose<T: Scalar>(a: &SeriesColumn<T>, u: &SeriesColumn<T>) -> Result<SeriesColumn<T>> {
    let w = ltt_matvec_naive(a.coeffs(), u.coeffs())?;
    Ok(SeriesColumn { coeffs: w })
}

/// Forward substitution for `L(a) x = f`.
pub fn ltt_solve_forward<T: Scalar>(a: &[T], f: &[T]) -> Result<Vec<T>> {
    check_len("ltt solve", a.len(), f.len())?;
    if a.first().is_none_or(|lead| lead.is_zero()) {
        return Err(Error::Singular("leading coefficient a_0 is zero".into()));
    }
    Ok(T::forward_substitution(a, f))
}

/// `E^s v` cut to `out_len`: `v_j` moves to index `j * b^s`.
pub fn spread<T: Scalar>(v: &[T], shape: SpreadShape, out_len: usize) -> Vec<T> {
    let stride = shape.stride();
    let mut out = vec![T::zero(); out_len];
    for (j, x) in v.iter().enumerate() {
        match j.checked_mul(stride) {
            Some(idx) if idx < out_len => out[idx] = x.clone(),
            _ => break,
        }
    }
    out
}

/// Samples `[v_0, v_{b^s}, v_{2 b^s}, ...]`.
pub fn unspread<T: Scalar>(v: &[T], shape: SpreadShape) -> Vec<T> {
    v.iter().step_by(shape.stride()).cloned().collect()
}
