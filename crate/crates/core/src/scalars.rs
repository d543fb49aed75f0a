//! Scalar fields shared by every kernel: exact rationals and `f64` complex numbers.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, NumAssignRef, NumRef, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fft::FftKernel;
use crate::intkernel;
use crate::series::LttProduct;

/// Arbitrary-precision fraction, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Double-precision complex number.
pub type ComplexF = Complex64;

/// A field the structured kernels can run over.
///
/// `EXACT` fields compare with `==`; inexact ones through [`Scalar::distance`].
pub trait Scalar: Clone + Debug + PartialEq + Num + NumRef + NumAssignRef + Send + Sync + 'static {
    const EXACT: bool;
    const NAME: &'static str;

    fn mul_ref(&self, rhs: &Self) -> Self;

    /// `exp(2 pi i * power / order)` if it lives in this field.
    fn root_of_unity(order: usize, power: usize) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Absolute distance used by the inexact paths; zero for identical exact values.
    fn distance(&self, other: &Self) -> f64;

    fn to_complex(&self) -> ComplexF;

    fn format(&self) -> String;

    /// An FFT-backed l.t.T. product for radix `base`, when the field supports one.
    fn fft_product(_base: usize) -> Option<Box<dyn LttProduct<Self>>> {
        None
    }

    /// `w_i = sum_{j <= i} a_{i-j} v_j`, `|w| = |v| <= |a|`.
    fn truncated_product(a: &[Self], v: &[Self]) -> Vec<Self> {
        let n = v.len();
        let mut out = vec![Self::zero(); n];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, ai) in a.iter().take(n - j).enumerate() {
                if !ai.is_zero() {
                    out[i + j] += ai.mul_ref(vj);
                }
            }
        }
        out
    }

    /// Forward substitution for `L(a) x = f`; callers guarantee `a_0 != 0` and `|a| >= |f|`.
    fn forward_substitution(a: &[Self], f: &[Self]) -> Vec<Self> {
        let lead = &a[0];
        let mut x: Vec<Self> = Vec::with_capacity(f.len());
        for (i, fi) in f.iter().enumerate() {
            let mut acc = fi.clone();
            for (j, xj) in x.iter().enumerate() {
                let c = &a[i - j];
                if !c.is_zero() {
                    acc -= c.mul_ref(xj);
                }
            }
            x.push(acc / lead.clone());
        }
        x
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn root_of_unity(order: usize, power: usize) -> Option<Self> {
        match order {
            0 => None,
            1 => Some(Rational::one()),
            2 if power.is_multiple_of(2) => Some(Rational::one()),
            2 => Some(-Rational::one()),
            _ if power.is_multiple_of(order) => Some(Rational::one()),
            _ => None,
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            rational_to_f64(&(self - other).abs())
        }
    }

    fn to_complex(&self) -> ComplexF {
        ComplexF::new(rational_to_f64(self), 0.0)
    }

    fn format(&self) -> String {
        format_rational(self)
    }

    fn truncated_product(a: &[Self], v: &[Self]) -> Vec<Self> {
        intkernel::truncated_product(a, v)
    }

    fn forward_substitution(a: &[Self], f: &[Self]) -> Vec<Self> {
        intkernel::forward_substitution(a, f)
    }
}

impl Scalar for ComplexF {
    const EXACT: bool = false;
    const NAME: &'static str = "complex";

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn root_of_unity(order: usize, power: usize) -> Option<Self> {
        if order == 0 {
            return None;
        }
        let k = power % order;
        // Exact values on the axes keep sign-flip paths free of rounding noise.
        if (4 * k).is_multiple_of(order) {
            return Some(match 4 * k / order {
                0 => ComplexF::new(1.0, 0.0),
                1 => ComplexF::new(0.0, 1.0),
                2 => ComplexF::new(-1.0, 0.0),
                _ => ComplexF::new(0.0, -1.0),
            });
        }
        let theta = 2.0 * PI * k as f64 / order as f64;
        Some(ComplexF::new(theta.cos(), theta.sin()))
    }

    fn from_i64(v: i64) -> Self {
        ComplexF::new(v as f64, 0.0)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    fn to_complex(&self) -> ComplexF {
        *self
    }

    fn format(&self) -> String {
        format_complex(self)
    }

    fn fft_product(base: usize) -> Option<Box<dyn LttProduct<Self>>> {
        FftKernel::new(base).ok().map(|k| Box::new(k) as Box<dyn LttProduct<Self>>)
    }
}

/// Which scalar field a text value or vector file is read into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Complex,
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(FieldKind::Rational),
            "complex" => Ok(FieldKind::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

impl FieldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldKind::Rational => "rational",
            FieldKind::Complex => "complex",
        }
    }
}

/// A parsed scalar of either field.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedScalar {
    Rational(Rational),
    Complex(ComplexF),
}

pub fn parse_scalar(text: &str, field: FieldKind) -> Result<ParsedScalar> {
    match field {
        FieldKind::Rational => parse_rational(text).map(ParsedScalar::Rational),
        FieldKind::Complex => parse_complex(text).map(ParsedScalar::Complex),
    }
}

/// Reads `p` or `p/q`; the result is reduced with a positive denominator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let num = parse_int(num, text)?;
    let den = parse_int(den, text)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

fn parse_int(part: &str, whole: &str) -> Result<BigInt> {
    let digits = part.strip_prefix('+').unwrap_or(part);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational `{whole}`")));
    }
    BigInt::from_str_radix(digits, 10).map_err(|e| Error::Parse(format!("`{whole}`: {e}")))
}

/// Reads `re` or `re,im` decimal literals; non-finite values are rejected.
pub fn parse_complex(text: &str) -> Result<ComplexF> {
    let text = text.trim();
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (text, "0"),
    };
    let parse = |s: &str| {
        s.parse::<f64>().map_err(|_| Error::Parse(format!("malformed complex `{text}`"))).and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("non-finite complex `{text}`")))
            }
        })
    };
    Ok(ComplexF::new(parse(re)?, parse(im)?))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `re,im` using the shortest round-tripping decimal form.
pub fn format_complex(z: &ComplexF) -> String {
    format!("{:?},{:?}", z.re, z.im)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient when either part overflows f64.
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let shift = shift.max(0) as u32;
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// The counterclockwise principal `r`-th root of unity `exp(2 pi i / r)`.
pub fn principal_root(r: usize) -> Result<ComplexF> {
    if r == 0 {
        return Err(Error::Domain("root order must be at least 1".into()));
    }
    Ok(ComplexF::root_of_unity(r, 1).expect("complex roots always exist"))
}

/// `exp(pi i / n)`, the primitive root with `rho^n = -1`.
pub fn neg_root(n: usize) -> Result<ComplexF> {
    if n == 0 {
        return Err(Error::Domain("root order must be at least 1".into()));
    }
    Ok(ComplexF::root_of_unity(2 * n, 1).expect("complex roots always exist"))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
