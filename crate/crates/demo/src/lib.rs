//! Browser bindings: a Bernoulli table, a traced solve, and an operation-count curve.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so the logic is
//! testable off the browser.

use ltt_core::bernoulli::{bernoulli_numbers, Method, SolverChoice};
use ltt_core::fft::exact_log;
use ltt_core::scalars::{parse_rational, FieldKind};
use ltt_core::solver::{ltt_solve_fast_traced, MatvecBackend};
use ltt_core::vecfile::{format_vector, parse_vector, Vector};
use ltt_core::{ComplexF, Scalar};
use wasm_bindgen::prelude::*;

const MAX_COUNT: usize = 200;

/// `B_0 .. B_{2(count-1)}`, one `B_2j = p/q` line each.
pub fn table(count: usize, method: &str, x: &str) -> Result<String, String> {
    if count == 0 || count > MAX_COUNT {
        return Err(format!("count must be between 1 and {MAX_COUNT}"));
    }
    let method: Method = method.parse().map_err(|e: ltt_core::Error| e.to_string())?;
    let x = parse_rational(x).map_err(|e| e.to_string())?;
    let solver = SolverChoice::Fast { base: 2 };
    let values = bernoulli_numbers(count, method, &x, solver).map_err(|e| e.to_string())?;
    Ok(values.iter().enumerate().map(|(j, b)| format!("B_{} = {}\n", 2 * j, b.format())).collect())
}

/// Solves `L(a) x = f` exactly with the fast solver; the trace follows a blank line.
pub fn traced_solve(coeffs: &str, rhs: &str, base: usize) -> Result<String, String> {
    let read = |text: &str| match parse_vector(text, FieldKind::Rational) {
        Ok(Vector::Rational(v)) => Ok(v),
        Ok(Vector::Complex(_)) => Err("the demo solves over the rationals".to_string()),
        Err(e) => Err(e.to_string()),
    };
    let (a, f) = (read(coeffs)?, read(rhs)?);
    let (x, trace) = ltt_solve_fast_traced(&a, &f, base, MatvecBackend::Naive).map_err(|e| e.to_string())?;
    Ok(format!("{}\n{}", format_vector(&x, false), trace.report()))
}

/// CSV `n,mult_count,ratio` for `n = base^1 .. base^max_power`, FFT backend.
pub fn curve(base: usize, max_power: u32) -> Result<String, String> {
    if !(2..=5).contains(&base) || !(1..=10).contains(&max_power) || base.pow(max_power) > 1 << 16 {
        return Err("choose base 2..5 and at most 65536 points".into());
    }
    let mut out = String::from("n,mult_count,ratio\n");
    for k in 1..=max_power {
        let n = base.pow(k);
        // A fixed column with decaying entries keeps the run deterministic.
        let a: Vec<ComplexF> = (0..n).map(|i| ComplexF::new(1.0 / (i as f64 + 1.0), 0.0)).collect();
        let mut f = vec![ComplexF::new(0.0, 0.0); n];
        f[0] = ComplexF::new(1.0, 0.0);
        let (_, trace) = ltt_solve_fast_traced(&a, &f, base, MatvecBackend::Fft).map_err(|e| e.to_string())?;
        let levels = exact_log(n, base).expect("power of base");
        let ratio = trace.mult_count as f64 / (n as f64 * f64::from(levels));
        out.push_str(&format!("{n},{},{ratio:.3}\n", trace.mult_count));
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn bernoulli_table(count: usize, method: &str, x: &str) -> Result<String, JsValue> {
    table(count, method, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve_with_trace(coeffs: &str, rhs: &str, base: usize) -> Result<String, JsValue> {
    traced_solve(coeffs, rhs, base).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn op_count_curve(base: usize, max_power: u32) -> Result<String, JsValue> {
    curve(base, max_power).map_err(|e| JsValue::from_str(&e))
}
