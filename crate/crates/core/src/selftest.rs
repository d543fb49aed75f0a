//! Desk-scale invariant suites, seeded so that every run prints the same report.

use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bernoulli::{
    bernoulli_numbers, convert_type, gen_system, ramanujan_rhs, scaling_identity_holds, sign_pattern_holds,
    tartaglia_check, von_staudt_holds, Conversion, Family, Kind, Method, SolverChoice,
};
use crate::fft::{
    dft, idft, toeplitz_matvec_dense, toeplitz_matvec_embed, toeplitz_matvec_split, DftPlan, ToeplitzSpec,
};
use crate::scalars::{format_rational, integer, parse_rational, rational, ComplexF, Rational, Scalar};
use crate::series::{ltt_compose, ltt_matvec_naive, ltt_solve_forward, spread, unspread, SeriesColumn, SpreadShape};
use crate::solver::{hat_closed_form_base3, invert_first_column, sparsify_hat, MatvecBackend};

/// A deliberate defect to confirm the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negate the nonzero off-diagonal coefficients of the Ramanujan column.
    RamanujanSignFlip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let status = if s.ok() { "ok" } else { "FAILED" };
            let _ = writeln!(out, "suite {:<10} {:>4}/{:<4} {status}", s.name, s.passed, s.total);
        }
        let failed = self.suites.iter().filter(|s| !s.ok()).count();
        if failed == 0 {
            out.push_str("all suites passed\n");
        } else {
            let _ = writeln!(out, "{failed} suite(s) failed");
        }
        out
    }
}

struct Tally {
    name: &'static str,
    passed: usize,
    total: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, passed: 0, total: 0 }
    }

    fn check(&mut self, ok: bool) {
        self.total += 1;
        self.passed += usize::from(ok);
    }

    fn finish(self) -> SuiteResult {
        SuiteResult { name: self.name, passed: self.passed, total: self.total }
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn column(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
    a[0] = integer(1);
    a
}

fn complex_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<ComplexF> {
    (0..n).map(|_| ComplexF::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn rel_err(x: &[ComplexF], y: &[ComplexF]) -> f64 {
    let diff: f64 = x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let scale: f64 = y.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    diff / scale
}

fn naive_dft(z: &[ComplexF]) -> Vec<ComplexF> {
    let n = z.len();
    (0..n)
        .map(|i| {
            z.iter()
                .enumerate()
                .map(|(j, zj)| {
                    zj * ComplexF::from_polar(1.0, 2.0 * std::f64::consts::PI * ((i * j) % n) as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

fn scalars_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("scalars");
    for _ in 0..50 {
        let r = rational(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000));
        t.check(parse_rational(&format_rational(&r)).as_ref() == Ok(&r));
    }
    t.check(parse_rational("1/0").is_err());
    t.finish()
}

fn series_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("series");
    for _ in 0..20 {
        let n = rng.gen_range(1..=24);
        let a = column(rng, n);
        let u: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        let v: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        let c = ltt_compose(&SeriesColumn::new(a.clone()).unwrap(), &SeriesColumn::new(u.clone()).unwrap()).unwrap();
        let lhs = ltt_matvec_naive(c.coeffs(), &v).unwrap();
        let rhs = ltt_matvec_naive(&a, &ltt_matvec_naive(&u, &v).unwrap()).unwrap();
        t.check(lhs == rhs);

        let f: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        let x = ltt_solve_forward(&a, &f).unwrap();
        t.check(ltt_matvec_naive(&a, &x).unwrap() == f);

        let shape = SpreadShape::new(rng.gen_range(2..=3), 1).unwrap();
        t.check(unspread(&spread(&v, shape, n * shape.stride()), shape) == v);
    }
    t.finish()
}

fn fft_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("fft");
    for (n, base) in [(16, 2), (64, 2), (27, 3), (81, 3), (25, 5)] {
        let plan = DftPlan::new(n, base).unwrap();
        let z = complex_vec(rng, n);
        let w = dft(&z, &plan).unwrap();
        t.check(rel_err(&w, &naive_dft(&z)) < 1e-12);
        t.check(rel_err(&idft(&w, &plan).unwrap(), &z) < 1e-12);
    }
    for (n, base) in [(16, 2), (64, 2), (9, 3), (27, 3)] {
        let diags = complex_vec(rng, 2 * n - 1);
        let spec = ToeplitzSpec::new(n, diags).unwrap();
        let v = complex_vec(rng, n);
        let dense = toeplitz_matvec_dense(&spec, &v).unwrap();
        t.check(rel_err(&toeplitz_matvec_embed(&spec, &v, base).unwrap(), &dense) < 1e-10);
        t.check(rel_err(&toeplitz_matvec_split(&spec, &v, base).unwrap(), &dense) < 1e-10);
    }
    t.finish()
}

fn solver_suite(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("solver");
    for (n, base) in [(8, 2), (32, 2), (9, 3), (27, 3)] {
        for _ in 0..5 {
            let a = column(rng, n);
            let mut e1 = vec![Rational::zero(); n];
            e1[0] = integer(1);
            let oracle = ltt_solve_forward(&a, &e1).unwrap();
            let col = SeriesColumn::new(a).unwrap();
            let (x, _) = invert_first_column(&col, base, MatvecBackend::Naive).unwrap();
            t.check(x == oracle);

            let hat = sparsify_hat(&col, base).unwrap();
            let product = ltt_compose(&col, &hat).unwrap();
            t.check(product.coeffs().iter().enumerate().all(|(i, c)| i % base == 0 || c.is_zero()));
        }
    }
    // The exact radix-3 expansion against the rotated product computed in floating point.
    for _ in 0..5 {
        let a = column(rng, 27);
        let closed: Vec<ComplexF> = hat_closed_form_base3(&a).iter().map(Scalar::to_complex).collect();
        let z: Vec<ComplexF> = a.iter().map(Scalar::to_complex).collect();
        let product = sparsify_hat(&SeriesColumn::new(z).unwrap(), 3).unwrap();
        t.check(rel_err(product.coeffs(), &closed) < 1e-9);
    }
    t.finish()
}

fn golden() -> Vec<Rational> {
    ["1", "1/6", "-1/30", "1/42", "-1/30", "5/66", "-691/2730", "7/6", "-3617/510"]
        .iter()
        .map(|s| parse_rational(s).expect("literal"))
        .collect()
}

fn bernoulli_suite(mutation: Option<Mutation>) -> SuiteResult {
    let mut t = Tally::new("bernoulli");
    let one = integer(1);
    let expected = golden();
    for method in Method::ALL {
        for solver in [SolverChoice::Forward, SolverChoice::Fast { base: 2 }, SolverChoice::Fast { base: 3 }] {
            t.check(bernoulli_numbers(9, method, &one, solver).ok().as_ref() == Some(&expected));
        }
    }
    let reference =
        bernoulli_numbers(24, Method::Binomial(crate::bernoulli::Parity::Even), &one, SolverChoice::Forward)
            .expect("binomial system");
    for family in Family::ALL {
        for kind in [Kind::TypeI, Kind::TypeII] {
            let mut sys = gen_system(family, kind, 16, &crate::scalars::rational(7, 3)).expect("system");
            if family == Family::Ramanujan && mutation == Some(Mutation::RamanujanSignFlip) {
                let flipped: Vec<Rational> =
                    sys.a.coeffs().iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c }).collect();
                sys.a = SeriesColumn::new(flipped).expect("non-empty");
            }
            let solution = ltt_solve_forward(sys.a.coeffs(), &sys.rhs).expect("a_0 = 1");
            t.check(solution == sys.expected_solution(&reference));
            if kind == Kind::TypeII {
                let back = convert_type(&sys, Conversion::IIToI).and_then(|s| convert_type(&s, Conversion::IToII));
                t.check(back.as_ref() == Ok(&sys));
            }
        }
    }
    let f = ramanujan_rhs(12).expect("n >= 2");
    t.check(f[5] == rational(4, 455) && f[10] == rational(-1, 552));
    t.check(tartaglia_check(8).map(|r| r.passed()) == Ok(true));
    t.check(scaling_identity_holds(8, &rational(7, 3)) == Ok(true));
    t.check(sign_pattern_holds(&reference));
    for (j, b) in reference.iter().enumerate().skip(1) {
        t.check(von_staudt_holds(j, b));
    }
    t.finish()
}

/// Runs every suite with a fixed seed.
pub fn run(mutation: Option<Mutation>) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    SelftestReport {
        suites: vec![
            scalars_suite(&mut rng),
            series_suite(&mut rng),
            fft_suite(&mut rng),
            solver_suite(&mut rng),
            bernoulli_suite(mutation),
        ],
    }
}
