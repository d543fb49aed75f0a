//! Linear systems solved by the Bernoulli numbers `B_0, B_2, B_4, ...`.
//!
//! Two lower triangular binomial systems come straight from the coefficients of
//! `t / (e^t - 1)`. Rescaling with `D_x = diag(x^i / (2i)!)` turns them, and a sparse
//! system found by Ramanujan, into l.t.T. systems:
//!
//! * type I: `L(a) (D_x b) = D_x q`, solved by `[B_0, x B_2 / 2!, ...]`;
//! * type II: `L(a) (Z^T D_x b) = d(z) Z^T D_x q`, solved by `[x B_2 / 2!, ...]`.
//!
//! Every rational here is exact; the drivers return `[B_0, ..., B_{2(count-1)}]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{integer, rational, rational_to_f64, Rational};
use crate::series::{ltt_solve_forward, SeriesColumn};
use crate::solver::{ltt_solve_fast, MatvecBackend};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Even,
    Odd,
    Ramanujan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    TypeI,
    TypeII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Even, Family::Odd, Family::Ramanujan];

    fn tag(&self) -> &'static str {
        match self {
            Family::Even => "even",
            Family::Odd => "odd",
            Family::Ramanujan => "ram",
        }
    }
}

impl Kind {
    fn tag(&self) -> &'static str {
        match self {
            Kind::TypeI => "I",
            Kind::TypeII => "II",
        }
    }
}

/// How `bernoulli_numbers` obtains its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Binomial(Parity),
    Toeplitz(Family, Kind),
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Binomial(Parity::Even),
        Method::Binomial(Parity::Odd),
        Method::Toeplitz(Family::Even, Kind::TypeI),
        Method::Toeplitz(Family::Odd, Kind::TypeI),
        Method::Toeplitz(Family::Ramanujan, Kind::TypeI),
        Method::Toeplitz(Family::Even, Kind::TypeII),
        Method::Toeplitz(Family::Odd, Kind::TypeII),
        Method::Toeplitz(Family::Ramanujan, Kind::TypeII),
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Binomial(Parity::Even) => f.write_str("binom-even"),
            Method::Binomial(Parity::Odd) => f.write_str("binom-odd"),
            Method::Toeplitz(family, kind) => write!(f, "ltt-{}-{}", family.tag(), kind.tag()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" | "typeI" => Ok(Kind::TypeI),
            "II" | "2" | "typeII" => Ok(Kind::TypeII),
            other => Err(Error::Parse(format!("unknown system type `{other}`"))),
        }
    }
}

/// Which triangular solver a driver uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Forward,
    /// The diagonal-nullification solver over rationals; `base` must be 2 or 3.
    Fast {
        base: usize,
    },
}

/// Exact factorials `0!, 1!, ..., m!`.
fn factorials(m: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for k in 1..=m {
        acc *= k;
        out.push(acc.clone());
    }
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut acc = Rational::one();
    for _ in 0..n {
        out.push(acc.clone());
        acc *= x;
    }
    out
}

fn fact_ratio(num: Rational, f: &BigInt) -> Rational {
    num / Rational::from_integer(f.clone())
}

/// `a_i` of the family at parameter `x`, given `x^i` and a factorial table reaching `(2i+2)!`.
fn coeff_with(family: Family, i: usize, xi: &Rational, fact: &[BigInt]) -> Rational {
    match family {
        Family::Even => fact_ratio(xi * integer(2), &fact[2 * i + 2]),
        Family::Odd => fact_ratio(xi.clone(), &fact[2 * i + 1]),
        Family::Ramanujan if i.is_multiple_of(3) => {
            // 2 / (2i/3 + 1) = 6 / (2i + 3)
            fact_ratio(xi * rational(6, 2 * i as i64 + 3), &fact[2 * i + 2])
        }
        Family::Ramanujan => Rational::zero(),
    }
}

pub fn coefficient(family: Family, i: usize, x: &Rational) -> Rational {
    let xi = powers(x, i + 1).pop().expect("non-empty");
    coeff_with(family, i, &xi, &factorials(2 * i + 2))
}

/// `q_i` of the family.
pub fn rhs_weight(family: Family, i: usize) -> Rational {
    let i = i as i64;
    match family {
        Family::Even => rational(1, 2 * i + 1),
        Family::Odd if i == 0 => integer(1),
        Family::Odd => rational(1, 2),
        Family::Ramanujan => {
            let base = rational(1, (2 * i + 1) * (i + 1));
            if i % 3 == 2 {
                base * rational(-1, 2)
            } else {
                base
            }
        }
    }
}

/// `z_i` of the family, `i >= 1`.
pub fn z_weight(family: Family, i: usize) -> Rational {
    let i = i as i64;
    match family {
        Family::Even => rational(i, i + 1),
        Family::Odd => rational(2 * i - 1, 2 * i + 1),
        Family::Ramanujan if i % 3 == 0 => integer(1) - rational(3, 2 * i + 3),
        Family::Ramanujan => integer(1),
    }
}

/// `D_x = [x^i / (2i)!]`, `i = 0..n`.
pub fn scaling_diag(n: usize, x: &Rational) -> Vec<Rational> {
    let fact = factorials(2 * n);
    powers(x, n).into_iter().enumerate().map(|(i, xi)| fact_ratio(xi, &fact[2 * i])).collect()
}

/// One of the six l.t.T. systems, truncated to `n` unknowns.
///
/// Type I unknowns are `D_x b` (`B_0 .. B_{2(n-1)}`) and `q` holds `q_0..q_{n-1}`.
/// Type II unknowns are `Z^T D_x b` (`B_2 .. B_{2n}`), `q` holds `q_0..q_n` and
/// `zscale` holds `z_1..z_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliSystem {
    pub family: Family,
    pub kind: Kind,
    pub n: usize,
    pub x: Rational,
    pub a: SeriesColumn<Rational>,
    pub q: Vec<Rational>,
    pub zscale: Option<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl BernoulliSystem {
    /// Maps a solution of this system back to Bernoulli numbers (`B_0..` or `B_2..`).
    pub fn unscale(&self, solution: &[Rational]) -> Vec<Rational> {
        let offset = match self.kind {
            Kind::TypeI => 0,
            Kind::TypeII => 1,
        };
        let d = scaling_diag(solution.len() + offset, &self.x);
        solution.iter().zip(&d[offset..]).map(|(s, di)| s / di).collect()
    }

    /// The scaled Bernoulli vector this system is solved by, from known values `B_0, B_2, ...`.
    pub fn expected_solution(&self, bernoulli: &[Rational]) -> Vec<Rational> {
        let offset = match self.kind {
            Kind::TypeI => 0,
            Kind::TypeII => 1,
        };
        let d = scaling_diag(self.n + offset, &self.x);
        (0..self.n).map(|i| &bernoulli[i + offset] * &d[i + offset]).collect()
    }
}

fn check_x(x: &Rational) -> Result<()> {
    if x.is_zero() {
        return Err(Error::DegenerateScaling("x must be nonzero".into()));
    }
    Ok(())
}

pub fn gen_system(family: Family, kind: Kind, n: usize, x: &Rational) -> Result<BernoulliSystem> {
    check_x(x)?;
    if n == 0 {
        return Err(Error::Shape("a Bernoulli system needs at least one unknown".into()));
    }
    let fact = factorials(2 * n + 2);
    let xs = powers(x, n + 1);
    let a: Vec<Rational> = (0..n).map(|i| coeff_with(family, i, &xs[i], &fact)).collect();
    let d: Vec<Rational> = (0..=n).map(|i| fact_ratio(xs[i].clone(), &fact[2 * i])).collect();
    let system = match kind {
        Kind::TypeI => {
            let q: Vec<Rational> = (0..n).map(|i| rhs_weight(family, i)).collect();
            let rhs = q.iter().zip(&d).map(|(qi, di)| qi * di).collect();
            BernoulliSystem { family, kind, n, x: x.clone(), a: SeriesColumn::new(a)?, q, zscale: None, rhs }
        }
        Kind::TypeII => {
            let q: Vec<Rational> = (0..=n).map(|i| rhs_weight(family, i)).collect();
            let z: Vec<Rational> = (1..=n).map(|i| z_weight(family, i)).collect();
            let rhs = (1..=n).map(|i| &z[i - 1] * &d[i] * &q[i]).collect();
            BernoulliSystem { family, kind, n, x: x.clone(), a: SeriesColumn::new(a)?, q, zscale: Some(z), rhs }
        }
    };
    Ok(system)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conversion {
    IToII,
    IIToI,
}

/// Moves between the type I and type II forms of a system (drop or prepend `B_0`).
///
/// Type II to type I uses `w_0 = a_0`, i.e. `eta = a_0`, `mu = 0`.
pub fn convert_type(sys: &BernoulliSystem, direction: Conversion) -> Result<BernoulliSystem> {
    match direction {
        Conversion::IToII => to_type_two(sys),
        Conversion::IIToI => {
            let w0 = sys.a.coeffs()[0].clone();
            to_type_one(sys, &w0)
        }
    }
}

fn to_type_two(sys: &BernoulliSystem) -> Result<BernoulliSystem> {
    if sys.kind != Kind::TypeI {
        return Err(Error::Conversion("expected a type I system".into()));
    }
    if sys.n < 2 {
        return Err(Error::Conversion("a type I system needs n >= 2 to drop B_0".into()));
    }
    let n = sys.n - 1;
    let alpha = sys.a.coeffs();
    // B_0 = 1 moves to the right-hand side.
    let rhs: Vec<Rational> = (1..=n).map(|i| &sys.rhs[i] - &alpha[i]).collect();
    let d = scaling_diag(n + 1, &sys.x);
    let zscale = (1..=n)
        .map(|i| {
            let base = &d[i] * &sys.q[i];
            if base.is_zero() {
                Err(Error::Conversion(format!("zero rhs weight at index {i}")))
            } else {
                Ok(&rhs[i - 1] / base)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BernoulliSystem {
        family: sys.family,
        kind: Kind::TypeII,
        n,
        x: sys.x.clone(),
        a: SeriesColumn::new(alpha[..n].to_vec())?,
        q: sys.q[..=n].to_vec(),
        zscale: Some(zscale),
        rhs,
    })
}

/// Type II to type I with an explicit head `w_0`; requires `a_0 B_0 = w_0`.
pub fn to_type_one(sys: &BernoulliSystem, w0: &Rational) -> Result<BernoulliSystem> {
    if sys.kind != Kind::TypeII {
        return Err(Error::Conversion("expected a type II system".into()));
    }
    let alpha0 = &sys.a.coeffs()[0];
    if alpha0 != w0 {
        return Err(Error::Conversion(format!(
            "a_0 B_0 = {} differs from w_0 = {}",
            crate::scalars::format_rational(alpha0),
            crate::scalars::format_rational(w0)
        )));
    }
    let n = sys.n + 1;
    let mut alpha = sys.a.coeffs().to_vec();
    alpha.push(coefficient(sys.family, sys.n, &sys.x));
    let mut rhs = Vec::with_capacity(n);
    rhs.push(w0.clone());
    rhs.extend((1..n).map(|i| &sys.rhs[i - 1] + &alpha[i]));
    let d = scaling_diag(n, &sys.x);
    let q = rhs.iter().zip(&d).map(|(r, di)| r / di).collect();
    Ok(BernoulliSystem {
        family: sys.family,
        kind: Kind::TypeI,
        n,
        x: sys.x.clone(),
        a: SeriesColumn::new(alpha)?,
        q,
        zscale: None,
        rhs,
    })
}

/// A lower triangular binomial system; row `r` holds `r + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialSystem {
    pub parity: Parity,
    pub n: usize,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Even rows `[C(2j,0), C(2j,2), ..., C(2j,2j-2)]` with rhs `j`; odd rows
/// `[C(2j-1,0), ..., C(2j-1,2j-2)]` with rhs `(2j-1)/2` except the first, `B_0 = 1`.
pub fn binomial_system(parity: Parity, n: usize) -> BinomialSystem {
    let matrix = (0..n)
        .map(|r| {
            let top = match parity {
                Parity::Even => 2 * r + 2,
                Parity::Odd => 2 * r + 1,
            };
            (0..=r).map(|k| Rational::from_integer(binomial(top, 2 * k))).collect()
        })
        .collect();
    let rhs = (0..n as i64)
        .map(|r| match parity {
            Parity::Even => integer(r + 1),
            Parity::Odd if r == 0 => integer(1),
            Parity::Odd => rational(2 * r + 1, 2),
        })
        .collect();
    BinomialSystem { parity, n, matrix, rhs }
}

impl BinomialSystem {
    pub fn solve(&self) -> Result<Vec<Rational>> {
        let mut x: Vec<Rational> = Vec::with_capacity(self.n);
        for (row, f) in self.matrix.iter().zip(&self.rhs) {
            let (diag, rest) = row.split_last().expect("rows are non-empty");
            if diag.is_zero() {
                return Err(Error::Singular("zero diagonal in binomial system".into()));
            }
            let acc = rest.iter().zip(&x).fold(f.clone(), |acc, (c, xj)| acc - c * xj);
            x.push(acc / diag);
        }
        Ok(x)
    }
}

type Matrix = Vec<Vec<Rational>>;

fn zeros(n: usize) -> Matrix {
    vec![vec![Rational::zero(); n]; n]
}

fn identity(n: usize) -> Matrix {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// `sum_k weight(k) M^k` for a nilpotent `M`.
fn power_series(m: &Matrix, weight: impl Fn(usize) -> Rational) -> Matrix {
    let n = m.len();
    let mut out = zeros(n);
    let mut power = identity(n);
    for k in 0..n {
        let w = weight(k);
        for i in 0..n {
            for j in 0..n {
                if !power[i][j].is_zero() {
                    out[i][j] += &power[i][j] * &w;
                }
            }
        }
        power = matmul(&power, m);
    }
    out
}

fn subdiagonal(n: usize, f: impl Fn(usize) -> i64) -> Matrix {
    let mut m = zeros(n);
    for i in 0..n.saturating_sub(1) {
        m[i + 1][i] = integer(f(i));
    }
    m
}

/// `phi` with subdiagonal `2, 12, 30, 56, ...` (`(2i+1)(2i+2)`).
fn phi(n: usize) -> Matrix {
    subdiagonal(n, |i| (2 * i as i64 + 1) * (2 * i as i64 + 2))
}

fn inv_factorial(k: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(k))
}

fn lower_square(rows: &[Vec<Rational>]) -> Matrix {
    let n = rows.len();
    rows.iter()
        .map(|row| {
            let mut full = row.clone();
            full.resize(n, Rational::zero());
            full
        })
        .collect()
}

/// Outcome of rebuilding the Pascal matrix and both binomial matrices from matrix series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TartagliaReport {
    pub pascal: bool,
    pub even: bool,
    pub odd: bool,
}

impl TartagliaReport {
    pub fn passed(&self) -> bool {
        self.pascal && self.even && self.odd
    }
}

/// Checks `X = sum Y^k / k!`, `W_e = Z^T phi sum phi^k / (2k+2)!` and
/// `W_o = diag(1, 3, 5, ...) sum phi^k / (2k+1)!` exactly on the `n x n` truncation.
pub fn tartaglia_check(n: usize) -> Result<TartagliaReport> {
    if n == 0 || n > 16 {
        return Err(Error::Domain(format!("tartaglia check supports 1 <= n <= 16, got {n}")));
    }
    let pascal: Matrix = (0..n).map(|i| (0..n).map(|j| Rational::from_integer(binomial(i, j))).collect()).collect();
    let y = subdiagonal(n, |i| i as i64 + 1);
    let pascal_ok = power_series(&y, inv_factorial) == pascal;

    // Z^T phi needs one row beyond the block.
    let big = phi(n + 1);
    let series_e = power_series(&big, |k| inv_factorial(2 * k + 2));
    let shifted: Matrix = big[1..].iter().cloned().chain(std::iter::once(vec![Rational::zero(); n + 1])).collect();
    let we_series = matmul(&shifted, &series_e);
    let we_series: Matrix = we_series[..n].iter().map(|row| row[..n].to_vec()).collect();
    let even_ok = we_series == lower_square(&binomial_system(Parity::Even, n).matrix);

    let series_o = power_series(&phi(n), |k| inv_factorial(2 * k + 1));
    let wo_series: Matrix = series_o
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|v| v * integer(2 * i as i64 + 1)).collect())
        .collect();
    let odd_ok = wo_series == lower_square(&binomial_system(Parity::Odd, n).matrix);

    Ok(TartagliaReport { pascal: pascal_ok, even: even_ok, odd: odd_ok })
}

/// `D phi D^{-1} = x Z` on the `n x n` truncation, `D = diag(scaling_diag(n, x))`.
pub fn scaling_identity_holds(n: usize, x: &Rational) -> Result<bool> {
    check_x(x)?;
    let d = scaling_diag(n, x);
    let p = phi(n);
    let ok = (0..n).all(|i| {
        (0..n).all(|j| {
            let entry = &d[i] * &p[i][j] / &d[j];
            let expected = if i == j + 1 { x.clone() } else { Rational::zero() };
            entry == expected
        })
    });
    Ok(ok)
}

/// `f_1..f_{n-1}` of Ramanujan's sparse system.
pub fn ramanujan_rhs(n: usize) -> Result<Vec<Rational>> {
    if n < 2 {
        return Err(Error::Domain(format!("ramanujan_rhs needs n >= 2, got {n}")));
    }
    Ok((1..n)
        .map(|i| {
            let k = i as i64;
            let mut factor = integer(1);
            if i % 3 == 2 {
                factor -= rational(3, 2);
            }
            if i % 3 == 0 {
                factor -= rational(3, 2 * k + 3);
            }
            factor * rational(1, (2 * k + 1) * (k + 1))
        })
        .collect())
}

fn next_power(n: usize, base: usize) -> usize {
    let mut p = 1;
    while p < n {
        p *= base;
    }
    p
}

fn solve_system(sys: &BernoulliSystem, solver: SolverChoice) -> Result<Vec<Rational>> {
    match solver {
        SolverChoice::Forward => ltt_solve_forward(sys.a.coeffs(), &sys.rhs),
        SolverChoice::Fast { base } => ltt_solve_fast(sys.a.coeffs(), &sys.rhs, base, MatvecBackend::Naive),
    }
}

/// `[B_0, B_2, ..., B_{2(count-1)}]` through the chosen system and solver.
///
/// The fast solver generates the system at the next power of its radix and truncates.
pub fn bernoulli_numbers(count: usize, method: Method, x: &Rational, solver: SolverChoice) -> Result<Vec<Rational>> {
    check_x(x)?;
    if count == 0 {
        return Err(Error::Shape("count must be at least 1".into()));
    }
    match method {
        Method::Binomial(parity) => binomial_system(parity, count).solve(),
        Method::Toeplitz(family, kind) => {
            let unknowns = match kind {
                Kind::TypeI => count,
                Kind::TypeII => count - 1,
            };
            let mut out = Vec::with_capacity(count);
            if kind == Kind::TypeII {
                out.push(Rational::one());
            }
            if unknowns == 0 {
                return Ok(out);
            }
            let size = match solver {
                SolverChoice::Forward => unknowns,
                SolverChoice::Fast { base } => next_power(unknowns, base.max(2)),
            };
            let sys = gen_system(family, kind, size, x)?;
            let solution = solve_system(&sys, solver)?;
            out.extend(sys.unscale(&solution).into_iter().take(unknowns));
            Ok(out)
        }
    }
}

/// `|B_2j| (2 pi)^{2j} / (2 (2j)!)` divided by `sum_{k <= terms} k^{-2j}`.
pub fn zeta_consistency(j: usize, terms: usize) -> Result<f64> {
    if j == 0 || terms == 0 {
        return Err(Error::Domain("zeta_consistency needs j >= 1 and terms >= 1".into()));
    }
    let b = bernoulli_numbers(j + 1, Method::Binomial(Parity::Even), &integer(1), SolverChoice::Forward)?;
    let magnitude = rational_to_f64(&b[j].abs());
    let two_pi = 2.0 * std::f64::consts::PI;
    let scale = (1..=2 * j).fold(0.5, |acc, k| acc * two_pi / k as f64);
    let exponent = -(2.0 * j as f64);
    let partial: f64 = (1..=terms).rev().map(|k| (k as f64).powf(exponent)).sum();
    Ok(magnitude * scale / partial)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `prod { p prime : (p - 1) | 2j }`.
pub fn von_staudt_denominator(j: usize) -> BigInt {
    let m = 2 * j as u64;
    (1..=m).filter(|d| m.is_multiple_of(*d) && is_prime(d + 1)).fold(BigInt::one(), |acc, d| acc * (d + 1))
}

/// Whether the denominator of `B_2j` is the von Staudt-Clausen prime product.
pub fn von_staudt_check(j: usize) -> Result<bool> {
    if j == 0 {
        return Err(Error::Domain("von_staudt_check needs j >= 1".into()));
    }
    let b = bernoulli_numbers(j + 1, Method::Binomial(Parity::Odd), &integer(1), SolverChoice::Forward)?;
    Ok(von_staudt_holds(j, &b[j]))
}

pub fn von_staudt_holds(j: usize, b2j: &Rational) -> bool {
    b2j.denom() == &von_staudt_denominator(j)
}

/// Truncated coefficients of `t / (e^t - 1) + t / 2` mod `t^len`, by inverting `(e^t - 1) / t`.
pub fn generating_series(len: usize) -> Result<Vec<Rational>> {
    let fact = factorials(len + 1);
    let column: Vec<Rational> = (0..len).map(|k| Rational::new(BigInt::one(), fact[k + 1].clone())).collect();
    let mut e1 = vec![Rational::zero(); len];
    if let Some(head) = e1.first_mut() {
        *head = Rational::one();
    }
    let mut series = ltt_solve_forward(&column, &e1)?;
    if len > 1 {
        series[1] += rational(1, 2);
    }
    Ok(series)
}

/// Compares the generating series with `sum B_2k / (2k)! t^{2k}` through `t^{2m - 1}`.
pub fn generating_series_holds(m: usize, bernoulli: &[Rational]) -> Result<bool> {
    if bernoulli.len() < m {
        return Err(Error::Shape(format!("need {m} Bernoulli numbers, got {}", bernoulli.len())));
    }
    let series = generating_series(2 * m)?;
    let fact = factorials(2 * m);
    Ok(series.iter().enumerate().all(|(i, c)| {
        if i % 2 == 1 {
            c.is_zero()
        } else {
            *c == &bernoulli[i / 2] / Rational::from_integer(fact[i].clone())
        }
    }))
}

/// Positive for odd `j`, negative for even `j >= 1`.
pub fn sign_pattern_holds(bernoulli: &[Rational]) -> bool {
    bernoulli.iter().enumerate().skip(1).all(|(j, b)| if j % 2 == 1 { b.is_positive() } else { b.is_negative() })
}

/// `gcd` of numerator and denominator is one whenever `num_rational` built the value.
pub fn is_reduced(r: &Rational) -> bool {
    r.numer().gcd(r.denom()).is_one() && r.denom().is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn golden() -> Vec<Rational> {
        ["1", "1/6", "-1/30", "1/42", "-1/30", "5/66", "-691/2730", "7/6", "-3617/510"].iter().map(|s| r(s)).collect()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("ltt-even".parse::<Method>().is_err());
    }

    #[test]
    fn even_system_entries() {
        let sys = gen_system(Family::Even, Kind::TypeI, 4, &integer(1)).unwrap();
        assert_eq!(sys.a.coeffs(), &[r("1"), r("2/24"), r("2/720"), r("2/40320")]);
        assert_eq!(sys.q, vec![r("1"), r("1/3"), r("1/5"), r("1/7")]);
        let sys2 = gen_system(Family::Even, Kind::TypeII, 3, &integer(1)).unwrap();
        assert_eq!(sys2.zscale.as_ref().unwrap()[0], r("1/2"));
    }

    #[test]
    fn ramanujan_system_entries() {
        let sys = gen_system(Family::Ramanujan, Kind::TypeII, 5, &integer(1)).unwrap();
        let a = sys.a.coeffs();
        assert_eq!(a[0], r("1"));
        assert!(a[1].is_zero() && a[2].is_zero());
        assert_eq!(a[3], Rational::new(BigInt::from(2), factorial(8) * 3));
        assert_eq!(&sys.q[..3], &[r("1"), r("1/6"), r("-1/30")]);
        assert_eq!(sys.zscale.as_ref().unwrap()[2], r("2/3"));
        let nonzero = gen_system(Family::Ramanujan, Kind::TypeI, 10, &integer(1)).unwrap();
        assert_eq!(nonzero.a.coeffs().iter().filter(|c| !c.is_zero()).count(), 4);
    }

    #[test]
    fn system_errors() {
        assert!(matches!(gen_system(Family::Even, Kind::TypeI, 3, &integer(0)), Err(Error::DegenerateScaling(_))));
        assert!(gen_system(Family::Odd, Kind::TypeI, 0, &integer(1)).is_err());
        assert!(bernoulli_numbers(3, Method::Binomial(Parity::Even), &integer(0), SolverChoice::Forward).is_err());
        assert!(ramanujan_rhs(1).is_err());
        assert!(tartaglia_check(17).is_err());
        assert!(von_staudt_check(0).is_err());
    }

    #[test]
    fn scaling_diag_examples() {
        assert_eq!(scaling_diag(3, &integer(1)), vec![r("1"), r("1/2"), r("1/24")]);
        assert_eq!(scaling_diag(2, &integer(4)), vec![r("1"), r("2")]);
        assert!(scaling_identity_holds(12, &r("7/3")).unwrap());
    }

    #[test]
    fn binomial_systems() {
        let even = binomial_system(Parity::Even, 2);
        assert_eq!(even.matrix, vec![vec![r("1")], vec![r("1"), r("6")]]);
        assert_eq!(even.rhs, vec![r("1"), r("2")]);
        assert_eq!(even.solve().unwrap(), vec![r("1"), r("1/6")]);
        let odd = binomial_system(Parity::Odd, 2);
        assert_eq!(odd.matrix, vec![vec![r("1")], vec![r("1"), r("3")]]);
        assert_eq!(odd.rhs, vec![r("1"), r("3/2")]);
        assert_eq!(odd.solve().unwrap(), vec![r("1"), r("1/6")]);
    }

    #[test]
    fn tartaglia_small() {
        for n in [1, 4, 6] {
            assert!(tartaglia_check(n).unwrap().passed());
        }
    }

    #[test]
    fn ramanujan_rhs_values() {
        let f = ramanujan_rhs(12).unwrap();
        let expected =
            ["1/6", "-1/30", "1/42", "1/45", "-1/132", "4/455", "1/120", "-1/306", "3/665", "1/231", "-1/552"];
        assert_eq!(f, expected.iter().map(|s| r(s)).collect::<Vec<_>>());
    }

    #[test]
    fn ramanujan_rhs_matches_scaled_weights() {
        // z_i q_i = f_i for i >= 1, from the type I and type II right-hand sides.
        let f = ramanujan_rhs(25).unwrap();
        for i in 1..25 {
            assert_eq!(z_weight(Family::Ramanujan, i) * rhs_weight(Family::Ramanujan, i), f[i - 1]);
        }
    }

    #[test]
    fn conversions() {
        let x = r("1");
        let even = gen_system(Family::Even, Kind::TypeI, 5, &x).unwrap();
        let two = convert_type(&even, Conversion::IToII).unwrap();
        assert_eq!(two, gen_system(Family::Even, Kind::TypeII, 4, &x).unwrap());
        // x^i 2i / (2i+2)!
        assert_eq!(&two.rhs[..3], &[r("2/24"), r("4/720"), r("6/40320")]);

        let odd = gen_system(Family::Odd, Kind::TypeI, 4, &x).unwrap();
        let odd_two = convert_type(&odd, Conversion::IToII).unwrap();
        // x^i (2i - 1) / (2 (2i+1)!)
        assert_eq!(odd_two.rhs, vec![r("1/12"), r("3/240"), r("5/10080")]);

        for family in Family::ALL {
            let sys = gen_system(family, Kind::TypeII, 6, &r("-2/5")).unwrap();
            let one = convert_type(&sys, Conversion::IIToI).unwrap();
            assert_eq!(one, gen_system(family, Kind::TypeI, 7, &r("-2/5")).unwrap());
            assert_eq!(convert_type(&one, Conversion::IToII).unwrap(), sys);
        }
        assert!(matches!(convert_type(&two, Conversion::IToII), Err(Error::Conversion(_))));
        assert!(matches!(to_type_one(&two, &r("2")), Err(Error::Conversion(_))));
    }

    #[test]
    fn golden_values_every_method() {
        for method in Method::ALL {
            for solver in [SolverChoice::Forward, SolverChoice::Fast { base: 2 }, SolverChoice::Fast { base: 3 }] {
                let b = bernoulli_numbers(9, method, &integer(1), solver).unwrap();
                assert_eq!(b, golden(), "{method} {solver:?}");
            }
            assert_eq!(bernoulli_numbers(1, method, &integer(1), SolverChoice::Forward).unwrap(), vec![r("1")]);
        }
    }

    #[test]
    fn independent_of_x() {
        let m = Method::Toeplitz(Family::Ramanujan, Kind::TypeI);
        let a = bernoulli_numbers(16, m, &integer(1), SolverChoice::Fast { base: 3 }).unwrap();
        let b = bernoulli_numbers(16, m, &r("7/3"), SolverChoice::Fast { base: 3 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn number_theory() {
        assert_eq!(von_staudt_denominator(1), BigInt::from(6));
        assert_eq!(von_staudt_denominator(6), BigInt::from(2730));
        assert_eq!(von_staudt_denominator(7), BigInt::from(6));
        for j in [1, 6, 7] {
            assert!(von_staudt_check(j).unwrap());
        }
        let single = zeta_consistency(1, 1).unwrap();
        assert!((single - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert!((zeta_consistency(1, 1_000_000).unwrap() - 1.0).abs() < 1e-5);
        assert!((zeta_consistency(8, 1000).unwrap() - 1.0).abs() < 1e-9);
        assert!(sign_pattern_holds(&golden()));
    }

    #[test]
    fn generating_series_small() {
        assert!(generating_series_holds(5, &golden()).unwrap());
        let mut wrong = golden();
        wrong[2] = r("1/30");
        assert!(!generating_series_holds(5, &wrong).unwrap());
        assert!(is_reduced(&golden()[6]));
    }
}
