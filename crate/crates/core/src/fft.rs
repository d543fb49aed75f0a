//! Radix-`b` discrete Fourier transform and the FFT-based Toeplitz products.
//!
//! Transforms are unnormalized: `dft` computes `W_n z` with `W_n = (w^{ij})`,
//! `w = exp(2 pi i / n)`. Circulants are defined by their first row,
//! `C(a) = sum_k a_k P^k` with `P = Z^T + e_n e_1^T` the cyclic up-shift, and
//! the (-1)-circulant uses `P_- = Z^T - e_n e_1^T`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{ComplexF, Scalar};
use crate::series::LttProduct;

/// Returns `k` with `base^k == n`, if any.
pub fn exact_log(n: usize, base: usize) -> Option<u32> {
    if base < 2 || n == 0 {
        return None;
    }
    let mut k = 0;
    let mut m = n;
    while m.is_multiple_of(base) {
        m /= base;
        k += 1;
    }
    (m == 1).then_some(k)
}

/// Precomputed roots and digit-reversal order for a length `base^k` transform.
#[derive(Clone, Debug)]
pub struct DftPlan {
    n: usize,
    base: usize,
    levels: u32,
    roots: Vec<ComplexF>,
    permutation: Vec<usize>,
}

impl DftPlan {
    pub fn new(n: usize, base: usize) -> Result<Self> {
        let levels =
            exact_log(n, base).ok_or_else(|| Error::Shape(format!("transform length {n} is not a power of {base}")))?;
        let roots = (0..n).map(|j| ComplexF::root_of_unity(n, j).expect("complex roots exist")).collect();
        // Repeated stride-b decimation is base-b digit reversal of the index.
        let permutation = (0..n)
            .map(|i| {
                let (mut x, mut r) = (i, 0);
                for _ in 0..levels {
                    r = r * base + x % base;
                    x /= base;
                }
                r
            })
            .collect();
        Ok(DftPlan { n, base, levels, roots, permutation })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `omega_n^j` for `0 <= j < n`.
    pub fn root(&self, j: usize) -> ComplexF {
        self.roots[j % self.n]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    fn check(&self, z: &[ComplexF]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::Shape(format!("vector of length {} does not match a length {} plan", z.len(), self.n)));
        }
        Ok(())
    }

    /// `W_n z`, counting complex multiplications into `ops`.
    pub fn forward_counted(&self, z: &[ComplexF], ops: &mut u64) -> Result<Vec<ComplexF>> {
        self.check(z)?;
        let n = self.n;
        let b = self.base;
        let mut data: Vec<ComplexF> = self.permutation.iter().map(|&p| z[p]).collect();
        let mut scratch = vec![ComplexF::zero(); b];
        let small_step = n / b;
        let mut len = b;
        while len <= n {
            let sub = len / b;
            let tw_step = n / len;
            for block in (0..n).step_by(len) {
                for k in 0..sub {
                    for (r, slot) in scratch.iter_mut().enumerate() {
                        let x = data[block + r * sub + k];
                        *slot = if r * k == 0 {
                            x
                        } else {
                            *ops += 1;
                            x * self.roots[r * k * tw_step]
                        };
                    }
                    if b == 2 {
                        let (x0, x1) = (scratch[0], scratch[1]);
                        data[block + k] = x0 + x1;
                        data[block + sub + k] = x0 - x1;
                    } else {
                        for q in 0..b {
                            let mut acc = scratch[0];
                            for (r, x) in scratch.iter().enumerate().skip(1) {
                                let e = (r * q) % b;
                                if e == 0 {
                                    acc += x;
                                } else {
                                    *ops += 1;
                                    acc += x * self.roots[e * small_step];
                                }
                            }
                            data[block + q * sub + k] = acc;
                        }
                    }
                }
            }
            len *= b;
        }
        Ok(data)
    }

    /// `W_n^{-1} z = conj(W_n conj(z)) / n`.
    pub fn inverse_counted(&self, z: &[ComplexF], ops: &mut u64) -> Result<Vec<ComplexF>> {
        let conj: Vec<ComplexF> = z.iter().map(|x| x.conj()).collect();
        let scale = 1.0 / self.n as f64;
        let out = self.forward_counted(&conj, ops)?;
        Ok(out.into_iter().map(|x| x.conj() * scale).collect())
    }
}

pub fn dft(z: &[ComplexF], plan: &DftPlan) -> Result<Vec<ComplexF>> {
    plan.forward_counted(z, &mut 0)
}

pub fn idft(z: &[ComplexF], plan: &DftPlan) -> Result<Vec<ComplexF>> {
    plan.inverse_counted(z, &mut 0)
}

/// Diagonals `t_{-(n-1)}, ..., t_0, ..., t_{n-1}` of an `n x n` Toeplitz matrix `(t_{i-j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzSpec<T> {
    n: usize,
    diags: Vec<T>,
}

impl<T: Scalar> ToeplitzSpec<T> {
    pub fn new(n: usize, diags: Vec<T>) -> Result<Self> {
        if n == 0 || diags.len() != 2 * n - 1 {
            return Err(Error::Shape(format!(
                "a {n} x {n} Toeplitz matrix needs {} diagonals, got {}",
                (2 * n).saturating_sub(1),
                diags.len()
            )));
        }
        Ok(ToeplitzSpec { n, diags })
    }

    pub fn from_fn(n: usize, f: impl Fn(isize) -> T) -> Result<Self> {
        let m = n as isize;
        Self::new(n, (-(m - 1)..m).map(f).collect())
    }

    /// The lower triangular matrix `L(a)`.
    pub fn lower_triangular(column: &[T]) -> Result<Self> {
        Self::from_fn(column.len(), |k| if k >= 0 { column[k as usize].clone() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diags(&self) -> &[T] {
        &self.diags
    }

    /// Entry `t_k` for `|k| < n`; zero outside the band.
    pub fn t(&self, k: isize) -> T {
        let idx = k + self.n as isize - 1;
        if idx < 0 || idx as usize >= self.diags.len() {
            T::zero()
        } else {
            self.diags[idx as usize].clone()
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.t(i as isize - j as isize)).collect()).collect()
    }

    /// First row of the `bn x bn` circulant whose leading block is this matrix.
    pub fn embedding_row(&self, base: usize) -> Vec<T> {
        let n = self.n as isize;
        let mut row = Vec::with_capacity(base * self.n);
        row.extend((0..n).map(|k| self.t(-k)));
        row.extend(std::iter::repeat_with(T::zero).take((base - 2) * self.n + 1));
        row.extend((1..n).rev().map(|k| self.t(k)));
        row
    }

    /// The pair `(a, a')` with `T = C(a) + C_{-1}(a')`.
    pub fn split_rows(&self) -> (Vec<T>, Vec<T>) {
        let n = self.n as isize;
        let half = T::one() / T::from_i64(2);
        let mut a = Vec::with_capacity(self.n);
        let mut a_neg = Vec::with_capacity(self.n);
        for k in 0..n {
            let upper = self.t(-k);
            let wrapped = if k == 0 { T::zero() } else { self.t(n - k) };
            a.push((upper.clone() + wrapped.clone()) * half.clone());
            a_neg.push((upper - wrapped) * half.clone());
        }
        (a, a_neg)
    }
}

/// Plan cache plus a running multiplication counter for one radix.
#[derive(Debug)]
pub struct FftKernel {
    base: usize,
    plans: HashMap<usize, DftPlan>,
    ops: u64,
}

impl FftKernel {
    pub fn new(base: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain(format!("radix must be at least 2, got {base}")));
        }
        Ok(FftKernel { base, plans: HashMap::new(), ops: 0 })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Complex multiplications performed so far.
    pub fn mult_count(&self) -> u64 {
        self.ops
    }

    pub fn reset_count(&mut self) {
        self.ops = 0;
    }

    fn plan(&mut self, n: usize) -> Result<&DftPlan> {
        if !self.plans.contains_key(&n) {
            let plan = DftPlan::new(n, self.base)?;
            self.plans.insert(n, plan);
        }
        Ok(&self.plans[&n])
    }

    pub fn dft(&mut self, z: &[ComplexF]) -> Result<Vec<ComplexF>> {
        let mut ops = 0;
        let out = self.plan(z.len())?.forward_counted(z, &mut ops)?;
        self.ops += ops;
        Ok(out)
    }

    pub fn idft(&mut self, z: &[ComplexF]) -> Result<Vec<ComplexF>> {
        let mut ops = 0;
        let out = self.plan(z.len())?.inverse_counted(z, &mut ops)?;
        self.ops += ops;
        Ok(out)
    }

    /// `C(a) v = W (W a . W^{-1} v)`.
    pub fn circulant_matvec(&mut self, first_row: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        same_len(first_row, v)?;
        let eig = self.dft(first_row)?;
        let coords = self.idft(v)?;
        let prod: Vec<ComplexF> = eig.iter().zip(&coords).map(|(x, y)| x * y).collect();
        self.ops += prod.len() as u64;
        self.dft(&prod)
    }

    /// `C_{-1}(a) v`, through `P_- = rho D P D^{-1}` with `D = diag(rho^i)`, `rho^n = -1`.
    pub fn neg_circulant_matvec(&mut self, first_row: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        same_len(first_row, v)?;
        let n = v.len();
        let rho = |i: usize| ComplexF::root_of_unity(2 * n, i).expect("complex roots exist");
        let twisted: Vec<ComplexF> = first_row.iter().enumerate().map(|(k, a)| a * rho(k)).collect();
        let scaled: Vec<ComplexF> = v.iter().enumerate().map(|(i, x)| x * rho(2 * n - i)).collect();
        self.ops += 2 * n as u64;
        let w = self.circulant_matvec(&twisted, &scaled)?;
        self.ops += n as u64;
        Ok(w.iter().enumerate().map(|(i, x)| x * rho(i)).collect())
    }

    /// Procedure I: `T v` as the leading `n` entries of a `bn`-circulant product.
    pub fn toeplitz_matvec_embed(&mut self, t: &ToeplitzSpec<ComplexF>, v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        let n = t.n();
        check_vec(n, v)?;
        self.require_power(n)?;
        let row = t.embedding_row(self.base);
        let mut padded = v.to_vec();
        padded.resize(self.base * n, ComplexF::zero());
        let mut out = self.circulant_matvec(&row, &padded)?;
        out.truncate(n);
        Ok(out)
    }

    /// Procedure II: `T v = C(a) v + C_{-1}(a') v`.
    pub fn toeplitz_matvec_split(&mut self, t: &ToeplitzSpec<ComplexF>, v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        check_vec(t.n(), v)?;
        self.require_power(t.n())?;
        let (a, a_neg) = t.split_rows();
        let x = self.circulant_matvec(&a, v)?;
        let y = self.neg_circulant_matvec(&a_neg, v)?;
        Ok(x.iter().zip(&y).map(|(p, q)| p + q).collect())
    }

    /// `L(a) v` through Procedure I; lengths must be a power of the radix.
    pub fn ltt_matvec(&mut self, a: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        same_len(a, v)?;
        let n = v.len();
        if n == 1 {
            self.ops += 1;
            return Ok(vec![a[0] * v[0]]);
        }
        self.require_power(n)?;
        let mut row = vec![ComplexF::zero(); self.base * n];
        row[0] = a[0];
        for k in 1..n {
            row[self.base * n - k] = a[k];
        }
        let mut padded = v.to_vec();
        padded.resize(self.base * n, ComplexF::zero());
        let mut out = self.circulant_matvec(&row, &padded)?;
        out.truncate(n);
        Ok(out)
    }

    fn require_power(&self, n: usize) -> Result<()> {
        exact_log(n, self.base)
            .map(|_| ())
            .ok_or_else(|| Error::Shape(format!("dimension {n} is not a power of {}", self.base)))
    }
}

impl LttProduct<ComplexF> for FftKernel {
    fn matvec(&mut self, a: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
        self.ltt_matvec(a, v)
    }

    fn mult_count(&self) -> u64 {
        self.ops
    }

    fn charge(&mut self, ops: u64) {
        self.ops += ops;
    }
}

fn same_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", a.len(), b.len())));
    }
    Ok(())
}

fn check_vec<T>(n: usize, v: &[T]) -> Result<()> {
    if v.len() != n {
        return Err(Error::Shape(format!("vector of length {} for a {n} x {n} matrix", v.len())));
    }
    Ok(())
}

fn radix_for(n: usize) -> Result<usize> {
    (2..=n.max(2)).find(|&b| exact_log(n, b).is_some()).ok_or_else(|| Error::Shape(format!("length {n} has no radix")))
}

/// `C(a) v` using the smallest radix that divides the length exactly.
pub fn circulant_matvec(first_row: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
    FftKernel::new(radix_for(v.len())?)?.circulant_matvec(first_row, v)
}

pub fn neg_circulant_matvec(first_row: &[ComplexF], v: &[ComplexF]) -> Result<Vec<ComplexF>> {
    FftKernel::new(radix_for(v.len())?)?.neg_circulant_matvec(first_row, v)
}

pub fn toeplitz_matvec_embed(t: &ToeplitzSpec<ComplexF>, v: &[ComplexF], base: usize) -> Result<Vec<ComplexF>> {
    FftKernel::new(base)?.toeplitz_matvec_embed(t, v)
}

pub fn toeplitz_matvec_split(t: &ToeplitzSpec<ComplexF>, v: &[ComplexF], base: usize) -> Result<Vec<ComplexF>> {
    FftKernel::new(base)?.toeplitz_matvec_split(t, v)
}

/// Dense `O(n^2)` Toeplitz product, the reference for both procedures.
pub fn toeplitz_matvec_dense<T: Scalar>(t: &ToeplitzSpec<T>, v: &[T]) -> Result<Vec<T>> {
    check_vec(t.n(), v)?;
    Ok(t.to_dense().iter().map(|row| row.iter().zip(v).fold(T::zero(), |acc, (x, y)| acc + x.mul_ref(y))).collect())
}
