use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ltt_core::scalars::{parse_rational, parse_scalar, FieldKind, ParsedScalar};

fn ltt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltt")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ramanujan_table_ends_with_b16() {
    let out = ltt(&["bernoulli", "--count", "9", "--method", "ltt-ram-I"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert_eq!(text.lines().last(), Some("B_16 = -3617/510"));
}

#[test]
fn single_row() {
    assert_eq!(stdout(&ltt(&["bernoulli", "--count", "1"])), "B_0 = 1\n");
}

#[test]
fn csv_matches_across_methods_and_round_trips() {
    let even = ltt(&["bernoulli", "--count", "16", "--method", "binom-even", "--format", "csv"]);
    let odd = ltt(&["bernoulli", "--count", "16", "--method", "ltt-odd", "--type", "II", "--format", "csv"]);
    let fast = ltt(&["bernoulli", "--count", "16", "--method", "ltt-odd-II", "--format", "csv", "--solver", "fast"]);
    assert_eq!(stdout(&even), stdout(&odd));
    assert_eq!(stdout(&odd), stdout(&fast));
    let text = stdout(&even);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,numerator,denominator"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    let fields: Vec<&str> = rows[6].split(',').collect();
    assert_eq!(fields[0], "6");
    let value = parse_scalar(&format!("{}/{}", fields[1], fields[2]), FieldKind::Rational).unwrap();
    assert_eq!(value, ParsedScalar::Rational(parse_rational("-691/2730").unwrap()));
}

#[test]
fn json_rows() {
    let out = ltt(&["bernoulli", "--count", "4", "--format", "json", "--method", "binom-odd"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["j"], 3);
    let text = format!("{}/{}", rows[3]["num"].as_str().unwrap(), rows[3]["den"].as_str().unwrap());
    assert_eq!(parse_rational(&text).unwrap(), parse_rational("1/42").unwrap());
}

#[test]
fn bernoulli_usage_errors() {
    assert_eq!(ltt(&["bernoulli", "--method", "ltt-foo"]).status.code(), Some(2));
    assert_eq!(ltt(&["bernoulli", "--count", "0"]).status.code(), Some(2));
    assert_eq!(ltt(&["bernoulli", "--x", "0"]).status.code(), Some(2));
    assert_eq!(ltt(&["bernoulli", "--method", "ltt-even-I", "--type", "II"]).status.code(), Some(2));
    assert_eq!(ltt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("table.txt");
    let a = ltt(&["bernoulli", "--count", "20", "--method", "ltt-ram-II", "--solver", "fast", "--base", "3"]);
    let b = ltt(&["bernoulli", "--count", "20", "--method", "ltt-ram-II", "--solver", "fast", "--base", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = ltt(&["bernoulli", "--count", "20", "--method", "ltt-ram-II", "--out", arg(&target)]);
    assert!(c.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), a.stdout);
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "1\n2\n3\n4\n");
    let e1 = write(dir.path(), "e1.txt", "# n=4 field=rational\n1\n0\n0\n0\n");
    let out = ltt(&["solve", arg(&a), arg(&e1), "--base", "2", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n-2\n1\n0\n");
    let trace = String::from_utf8(out.stderr).unwrap();
    assert!(trace.contains("levels=2") && trace.contains("mult_count="));

    let forward = ltt(&["solve", arg(&a), arg(&e1), "--solver", "forward"]);
    assert_eq!(stdout(&forward), "1\n-2\n1\n0\n");

    let identity = write(dir.path(), "id.txt", "1\n0\n0\n0\n");
    let rhs = write(dir.path(), "rhs.txt", "3/7\n-1\n0\n5\n");
    assert_eq!(stdout(&ltt(&["solve", arg(&identity), arg(&rhs)])), "3/7\n-1\n0\n5\n");
}

#[test]
fn solve_complex_with_fft_backend() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "1\n0.5\n0,1\n0.25\n0\n0\n0\n0\n0\n");
    let f = write(dir.path(), "f.txt", "1\n0\n0\n0\n0\n0\n0\n0\n0\n");
    let fast = ltt(&["solve", arg(&a), arg(&f), "--field", "complex", "--base", "3", "--impl", "fft"]);
    let forward = ltt(&["solve", arg(&a), arg(&f), "--field", "complex", "--solver", "forward"]);
    assert_eq!(fast.status.code(), Some(0));
    let parse = |o: &Output| -> Vec<(f64, f64)> {
        stdout(o)
            .lines()
            .map(|l| {
                let (re, im) = l.split_once(',').unwrap();
                (re.parse().unwrap(), im.parse().unwrap())
            })
            .collect()
    };
    for (x, y) in parse(&fast).iter().zip(parse(&forward)) {
        assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
    }
}

#[test]
fn solve_errors() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "z.txt", "0\n1\n2\n3\n");
    let f = write(dir.path(), "f.txt", "1\n0\n0\n0\n");
    let out = ltt(&["solve", arg(&zero), arg(&f)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("singular"));

    let short = write(dir.path(), "s.txt", "1\n0\n");
    assert_eq!(ltt(&["solve", arg(&f), arg(&short)]).status.code(), Some(2));
    let six = write(dir.path(), "six.txt", "1\n0\n0\n0\n0\n0\n");
    assert_eq!(ltt(&["solve", arg(&six), arg(&six)]).status.code(), Some(2));
    assert_eq!(ltt(&["solve", arg(&f), arg(&f), "--impl", "fft"]).status.code(), Some(2));
    assert_eq!(ltt(&["solve", "/nonexistent/a", arg(&f)]).status.code(), Some(2));
}

#[test]
fn matvec_backends_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "1\n2\n3\n4\n");
    let v = write(dir.path(), "v.txt", "1\n-2\n1\n0\n");
    assert_eq!(stdout(&ltt(&["matvec", arg(&a), arg(&v)])), "1\n0\n0\n0\n");
    for backend in ["fft", "split"] {
        let out = ltt(&["matvec", arg(&a), arg(&v), "--field", "complex", "--impl", backend]);
        assert_eq!(out.status.code(), Some(0), "{backend}");
        let values: Vec<f64> = stdout(&out).lines().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        for (x, y) in values.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((x - y).abs() < 1e-12, "{backend}: {values:?}");
        }
    }
    assert_eq!(ltt(&["matvec", arg(&a), arg(&v), "--impl", "fft"]).status.code(), Some(2));
}

#[test]
fn selftest_passes_fails_under_mutation_and_is_deterministic() {
    let first = ltt(&["selftest"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).ends_with("all suites passed\n"));
    assert_eq!(first.stdout, ltt(&["selftest"]).stdout);
    let mutated = ltt(&["selftest", "--mutate", "ramanujan-sign"]);
    assert_eq!(mutated.status.code(), Some(1));
    assert!(stdout(&mutated).contains("FAILED"));
}

fn bench_ratios(args: &[&str]) -> Vec<f64> {
    let out = ltt(args);
    assert_eq!(out.status.code(), Some(0));
    stdout(&out).lines().skip(1).map(|l| l.split_whitespace().last().unwrap().parse().unwrap()).collect()
}

#[test]
fn bench_ratio_is_roughly_flat() {
    for (base, sizes) in [("2", "64,128,256,512,1024,2048,4096"), ("3", "27,81,243,729,2187")] {
        let ratios = bench_ratios(&["bench", "--base", base, "--sizes", sizes]);
        assert_eq!(ratios.len(), sizes.split(',').count());
        let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo < 1.5, "base {base}: {ratios:?}");
    }
    assert_eq!(bench_ratios(&["bench", "--sizes", "16"]).len(), 1);
    assert_eq!(ltt(&["bench", "--sizes", "64,100"]).status.code(), Some(2));
}
