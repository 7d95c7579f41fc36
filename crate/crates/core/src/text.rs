//! Text formats: complex literals, vectors and row-major matrices.
//!
//! A complex literal is `[-]a[.b][+|-c[.d]i]` with no spaces, e.g. `3`,
//! `-0.5`, `1+2i`, `0-1i`. The parser also accepts a bare imaginary part
//! (`2i`, `-i`). Vectors are comma-separated literals; a matrix is one
//! vector per line.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::CVector;

fn parse_real(s: &str, whole: &str) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::Parse(format!("missing number in `{whole}`")));
    }
    let ok = s
        .chars()
        .all(|c| c.is_ascii_digit() || c == '.' || c == '-' || c == '+');
    if !ok {
        return Err(Error::Parse(format!("bad number `{s}` in `{whole}`")));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{s}` in `{whole}`")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number in `{whole}`")));
    }
    Ok(v)
}

/// Parses a complex literal.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s, text)?, 0.0));
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .rev()
        .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i);
    let imag = |part: &str| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => parse_real(p, text),
        }
    };
    match split {
        Some(i) => Ok(Complex64::new(
            parse_real(&body[..i], text)?,
            imag(&body[i..])?,
        )),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn fmt_real(v: f64) -> String {
    // -0 prints as 0
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Formats a complex number as `a+bi` / `a-bi` with decimal literals.
pub fn format_complex(z: Complex64) -> String {
    let re = fmt_real(z.re);
    if z.im < 0.0 {
        format!("{re}-{}i", fmt_real(-z.im))
    } else {
        format!("{re}+{}i", fmt_real(z.im))
    }
}

/// Parses a comma-separated list of complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

impl FromStr for CVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CVector::new(parse_complex_list(s)?)
    }
}

impl fmt::Display for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|&z| format_complex(z)).collect();
        f.write_str(&parts.join(","))
    }
}

impl serde::Serialize for CVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix must be non-empty".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product `T x`.
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.dim(),
            });
        }
        let out = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x.iter())
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect();
        CVector::new(out)
    }
}

impl FromStr for CMatrix {
    type Err = Error;

    /// One row per non-empty line; `#` starts a comment line.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(parse_complex_list)
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("matrix text has no rows".into()));
        }
        Self::from_rows(rows)
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let parts: Vec<String> = self.row(r).iter().map(|&z| format_complex(z)).collect();
            writeln!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}
