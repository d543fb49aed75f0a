//! `ltt`: Bernoulli tables, l.t.T. solves and products, self-test and benchmarks.
//!
//! Exit codes: 0 ok, 1 self-test failure, 2 usage or shape error, 3 singular system.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ltt_core::bernoulli::{bernoulli_numbers, Kind, Method, SolverChoice};
use ltt_core::fft::{exact_log, FftKernel, ToeplitzSpec};
use ltt_core::scalars::{parse_rational, FieldKind};
use ltt_core::selftest::{self, Mutation};
use ltt_core::series::ltt_matvec_naive;
use ltt_core::solver::{ltt_solve_fast_traced, MatvecBackend};
use ltt_core::vecfile::{format_vector, parse_vector, Vector};
use ltt_core::{ComplexF, Error, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "ltt", version, about = "Lower triangular Toeplitz solvers and exact Bernoulli numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print B_0, B_2, ..., B_{2(count-1)}.
    Bernoulli(BernoulliArgs),
    /// Solve L(a) x = f from two vector files.
    Solve(SolveArgs),
    /// Compute L(a) v from two vector files.
    Matvec(MatvecArgs),
    /// Run the built-in invariant suites.
    Selftest(SelftestArgs),
    /// Time the fast solver and report multiplication counts.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Forward,
    Fast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Impl {
    Naive,
    Fft,
    /// The `(-1)`-circulant split; matvec only.
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Field {
    Rational,
    Complex,
}

impl From<Field> for FieldKind {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldKind::Rational,
            Field::Complex => FieldKind::Complex,
        }
    }
}

#[derive(Args, Debug)]
struct BernoulliArgs {
    #[arg(long, default_value_t = 9)]
    count: usize,
    /// binom-even, binom-odd, or ltt-{even,odd,ram}[-I|-II].
    #[arg(long, default_value = "ltt-even-I")]
    method: String,
    /// System type for an `ltt-*` method given without a suffix.
    #[arg(long = "type", value_name = "I|II")]
    kind: Option<String>,
    /// Nonzero rational scaling parameter.
    #[arg(long, default_value = "1")]
    x: String,
    #[arg(long, value_enum, default_value_t = SolverKind::Forward)]
    solver: SolverKind,
    /// Radix of the fast solver (2 or 3 over rationals).
    #[arg(long, default_value_t = 2)]
    base: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    coeffs: PathBuf,
    rhs: PathBuf,
    #[arg(long, default_value_t = 2)]
    base: usize,
    /// Field for files without a header.
    #[arg(long, value_enum, default_value_t = Field::Rational)]
    field: Field,
    #[arg(long, value_enum, default_value_t = SolverKind::Fast)]
    solver: SolverKind,
    /// Product backend of the fast solver; fft needs complex scalars.
    #[arg(long = "impl", value_enum, default_value_t = Impl::Naive)]
    backend: Impl,
    /// Print the solver trace to standard error.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MatvecArgs {
    coeffs: PathBuf,
    vector: PathBuf,
    #[arg(long, default_value_t = 2)]
    base: usize,
    #[arg(long, value_enum, default_value_t = Field::Rational)]
    field: Field,
    #[arg(long = "impl", value_enum, default_value_t = Impl::Naive)]
    backend: Impl,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Inject a known defect; the run must then fail.
    #[arg(long, value_name = "ramanujan-sign", hide = true)]
    mutate: Option<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated sizes, each a power of the base; defaults to b^3..b^8.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    base: usize,
    #[arg(long = "impl", value_enum, default_value_t = Impl::Fft)]
    backend: Impl,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Tests,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_vector(path: &Path, field: Field) -> Result<Vector, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_vector(&text, field.into())?)
}

/// Reads both files into one field; a complex file promotes the other.
fn read_pair(first: &Path, second: &Path, field: Field) -> Result<Vector2, Failure> {
    let a = read_vector(first, field)?;
    let b = read_vector(second, field)?;
    Ok(match (a, b) {
        (Vector::Rational(a), Vector::Rational(b)) => Vector2::Rational(a, b),
        (a, b) => Vector2::Complex(a.into_complex(), b.into_complex()),
    })
}

enum Vector2 {
    Rational(Vec<Rational>, Vec<Rational>),
    Complex(Vec<ComplexF>, Vec<ComplexF>),
}

/// Accepts `ltt-ram-II`, or `ltt-ram` with the type from `--type` (default I).
fn parse_method(name: &str, kind: Option<&str>) -> Result<Method, Failure> {
    let kind = kind.map(str::parse::<Kind>).transpose()?;
    let full = if name.starts_with("ltt-") && name.matches('-').count() == 1 {
        let suffix = if kind == Some(Kind::TypeII) { "II" } else { "I" };
        format!("{name}-{suffix}")
    } else {
        name.to_string()
    };
    let method = full.parse::<Method>().map_err(|_| Failure::Usage(format!("unknown method `{name}`")))?;
    match (kind, method) {
        (Some(k), Method::Toeplitz(_, mk)) if k != mk => {
            Err(Failure::Usage(format!("--type conflicts with method `{name}`")))
        }
        (Some(_), Method::Binomial(_)) => Err(Failure::Usage("--type only applies to ltt-* methods".into())),
        _ => Ok(method),
    }
}

fn cmd_bernoulli(args: &BernoulliArgs) -> CmdResult {
    if args.count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let method = parse_method(&args.method, args.kind.as_deref())?;
    let x = parse_rational(&args.x)?;
    let solver = match args.solver {
        SolverKind::Forward => SolverChoice::Forward,
        SolverKind::Fast => SolverChoice::Fast { base: args.base },
    };
    let values = bernoulli_numbers(args.count, method, &x, solver)?;
    let mut text = String::new();
    match args.format {
        Format::Plain => {
            for (j, b) in values.iter().enumerate() {
                let _ = writeln!(text, "B_{} = {}", 2 * j, b.format());
            }
        }
        Format::Csv => {
            text.push_str("index,numerator,denominator\n");
            for (j, b) in values.iter().enumerate() {
                let _ = writeln!(text, "{j},{},{}", b.numer(), b.denom());
            }
        }
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(j, b)| json!({ "j": j, "num": b.numer().to_string(), "den": b.denom().to_string() }))
                .collect();
            text = serde_json::to_string_pretty(&rows).expect("plain JSON values");
            text.push('\n');
        }
    }
    emit(&text, args.out.as_deref())
}

fn solve_in<T: Scalar>(a: &[T], f: &[T], args: &SolveArgs) -> Result<(String, Option<String>), Failure> {
    if a.len() != f.len() {
        return Err(Error::Shape(format!("{} coefficients but {} right-hand side entries", a.len(), f.len())).into());
    }
    if a.first().is_none_or(|a0| a0.is_zero()) {
        return Err(Error::Singular("leading coefficient a_0 is zero".into()).into());
    }
    match args.solver {
        SolverKind::Forward => Ok((format_vector(&ltt_core::series::ltt_solve_forward(a, f)?, false), None)),
        SolverKind::Fast => {
            let backend = match args.backend {
                Impl::Naive => MatvecBackend::Naive,
                Impl::Fft => MatvecBackend::Fft,
                Impl::Split => return Err(Failure::Usage("--impl split is only available for matvec".into())),
            };
            if exact_log(a.len(), args.base).is_none() {
                return Err(Error::Shape(format!("length {} is not a power of {}", a.len(), args.base)).into());
            }
            let (x, trace) = ltt_solve_fast_traced(a, f, args.base, backend)?;
            Ok((format_vector(&x, false), Some(trace.report())))
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let (text, trace) = match read_pair(&args.coeffs, &args.rhs, args.field)? {
        Vector2::Rational(a, f) => {
            if args.base > 3 && args.solver == SolverKind::Fast {
                return Err(Failure::Usage("rational fast solves need --base 2 or 3".into()));
            }
            solve_in(&a, &f, args)?
        }
        Vector2::Complex(a, f) => solve_in(&a, &f, args)?,
    };
    if args.trace {
        match trace {
            Some(report) => eprint!("{report}"),
            None => eprintln!("trace: forward substitution has no levels"),
        }
    }
    emit(&text, args.out.as_deref())
}

fn cmd_matvec(args: &MatvecArgs) -> CmdResult {
    let text = match (read_pair(&args.coeffs, &args.vector, args.field)?, args.backend) {
        (Vector2::Rational(a, v), Impl::Naive) => format_vector(&ltt_matvec_naive(&a, &v)?, false),
        (Vector2::Rational(..), _) => {
            return Err(Failure::Usage("fft products need complex scalars (--field complex)".into()));
        }
        (Vector2::Complex(a, v), Impl::Naive) => format_vector(&ltt_matvec_naive(&a, &v)?, false),
        (Vector2::Complex(a, v), Impl::Fft) => format_vector(&FftKernel::new(args.base)?.ltt_matvec(&a, &v)?, false),
        (Vector2::Complex(a, v), Impl::Split) => {
            let spec = ToeplitzSpec::lower_triangular(&a)?;
            format_vector(&FftKernel::new(args.base)?.toeplitz_matvec_split(&spec, &v)?, false)
        }
    };
    emit(&text, args.out.as_deref())
}

fn cmd_selftest(args: &SelftestArgs) -> CmdResult {
    let mutation = match args.mutate.as_deref() {
        None => None,
        Some("ramanujan-sign") => Some(Mutation::RamanujanSignFlip),
        Some(other) => return Err(Failure::Usage(format!("unknown mutation `{other}`"))),
    };
    let report = selftest::run(mutation);
    print!("{}", report.render());
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Tests)
    }
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    if args.base < 2 {
        return Err(Failure::Usage("--base must be at least 2".into()));
    }
    let sizes: Vec<usize> =
        if args.sizes.is_empty() { (3..=8).map(|k| args.base.pow(k)).collect() } else { args.sizes.clone() };
    let backend = match args.backend {
        Impl::Naive => MatvecBackend::Naive,
        Impl::Fft => MatvecBackend::Fft,
        Impl::Split => return Err(Failure::Usage("bench supports --impl naive or fft".into())),
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let levels = match exact_log(n, args.base) {
            Some(k) if k >= 1 => k,
            _ => return Err(Error::Shape(format!("size {n} is not a positive power of {}", args.base)).into()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut a: Vec<ComplexF> = (0..n).map(|_| ComplexF::new(rng.gen_range(-0.5..0.5), 0.0)).collect();
        a[0] = ComplexF::new(1.0, 0.0);
        let f: Vec<ComplexF> = (0..n).map(|_| ComplexF::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let start = Instant::now();
        let (_, trace) = ltt_solve_fast_traced(&a, &f, args.base, backend)?;
        let seconds = start.elapsed().as_secs_f64();
        rows.push((n, seconds, trace.mult_count, trace.mult_count as f64 / (n as f64 * f64::from(levels))));
    }
    println!("{:>8} {:>12} {:>12} {:>10}", "n", "seconds", "mult_count", "ratio");
    for (n, seconds, mults, ratio) in rows {
        println!("{n:>8} {seconds:>12.6} {mults:>12} {ratio:>10.3}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bernoulli(args) => cmd_bernoulli(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Matvec(args) => cmd_matvec(args),
        Command::Selftest(args) => cmd_selftest(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tests) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::Singular(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
