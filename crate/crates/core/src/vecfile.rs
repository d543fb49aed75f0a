//! Plain-text vector files: one scalar per line, optional `# n=<len> field=<kind>` header.

use crate::error::{Error, Result};
use crate::scalars::{parse_complex, parse_rational, ComplexF, FieldKind, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    Rational(Vec<Rational>),
    Complex(Vec<ComplexF>),
}

impl Vector {
    pub fn len(&self) -> usize {
        match self {
            Vector::Rational(v) => v.len(),
            Vector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> FieldKind {
        match self {
            Vector::Rational(_) => FieldKind::Rational,
            Vector::Complex(_) => FieldKind::Complex,
        }
    }

    /// Reads every entry as complex; rationals are rounded to `f64`.
    pub fn into_complex(self) -> Vec<ComplexF> {
        match self {
            Vector::Rational(v) => v.iter().map(Scalar::to_complex).collect(),
            Vector::Complex(v) => v,
        }
    }
}

#[derive(Debug, Default)]
struct Header {
    n: Option<usize>,
    field: Option<FieldKind>,
}

fn parse_header(line: &str) -> Result<Header> {
    let mut header = Header::default();
    for token in line.trim_start_matches('#').split_whitespace() {
        match token.split_once('=') {
            Some(("n", v)) => header.n = Some(v.parse().map_err(|_| Error::Parse(format!("bad header length `{v}`")))?),
            Some(("field", v)) => header.field = Some(v.parse()?),
            _ => return Err(Error::Parse(format!("unrecognized header token `{token}`"))),
        }
    }
    Ok(header)
}

/// Parses a vector file. A header `field=` wins over `default_field`.
pub fn parse_vector(text: &str, default_field: FieldKind) -> Result<Vector> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
    let header = match lines.peek() {
        Some(first) if first.starts_with('#') => {
            let h = parse_header(first)?;
            lines.next();
            h
        }
        _ => Header::default(),
    };
    let field = header.field.unwrap_or(default_field);
    let vector = match field {
        FieldKind::Rational => Vector::Rational(lines.map(parse_rational).collect::<Result<_>>()?),
        FieldKind::Complex => Vector::Complex(lines.map(parse_complex).collect::<Result<_>>()?),
    };
    if let Some(n) = header.n {
        if n != vector.len() {
            return Err(Error::Shape(format!("header says n={n}, file holds {} entries", vector.len())));
        }
    }
    Ok(vector)
}

pub fn format_vector<T: Scalar>(values: &[T], with_header: bool) -> String {
    let mut out = String::new();
    if with_header {
        out.push_str(&format!("# n={} field={}\n", values.len(), T::NAME));
    }
    for v in values {
        out.push_str(&v.format());
        out.push('\n');
    }
    out
}
