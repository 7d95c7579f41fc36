//! Complex coordinate spaces `ℂ^d` with a choice of norm.
//!
//! A [`NormSpec`] fixes one of four norm families together with the
//! dimension. Specs are validated at construction, so every downstream
//! computation can assume a genuine norm.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::text::{format_complex, parse_complex_list};

/// Tolerance for construction-time validation (Hermitian, PD, rank checks).
pub const VALIDATION_TOL: f64 = 1e-10;

/// A finite complex coordinate vector with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidVector("dimension must be at least 1".into()));
        }
        if components
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidVector("components must be finite".into()));
        }
        Ok(Self(components))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Builds a vector from real coordinates.
    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// The `k`-th standard basis vector of `ℂ^dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range for dim {dim}"
            )));
        }
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, a: Complex64) -> CVector {
        CVector(self.0.iter().map(|z| z * a).collect())
    }

    pub fn scale_real(&self, a: f64) -> CVector {
        CVector(self.0.iter().map(|z| z * a).collect())
    }

    /// `a·self + other`.
    pub fn axpy(&self, a: Complex64, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + y)
                .collect(),
        )
    }

    pub fn add(&self, other: &CVector) -> CVector {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        other.axpy(Complex64::new(-1.0, 0.0), self)
    }

    pub fn neg(&self) -> CVector {
        self.scale_real(-1.0)
    }
}

impl Deref for CVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// The norm families.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    /// `‖x‖_p`; `p = f64::INFINITY` is the max norm.
    Lp { p: f64 },
    /// `Σ w_k |x_k|` with positive weights.
    WeightedL1 { weights: Vec<f64> },
    /// `sqrt(x^H G x)` for a Hermitian positive-definite Gram matrix, stored row-major.
    PdInner { gram: Vec<Complex64> },
    /// `max_j |f_j(x)|` over covectors `f_j(x) = Σ_k f_jk x_k`.
    Polyhedral { functionals: Vec<Vec<Complex64>> },
}

/// A validated norm on `ℂ^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    family: NormFamily,
    dim: usize,
}

impl NormSpec {
    pub fn new(family: NormFamily, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        match &family {
            NormFamily::Lp { p } => {
                if p.is_nan() || *p < 1.0 {
                    return Err(Error::InvalidSpec(format!("p must be >= 1, got {p}")));
                }
            }
            NormFamily::WeightedL1 { weights } => {
                if weights.len() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "expected {dim} weights, got {}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
                    return Err(Error::InvalidSpec(
                        "weights must be positive and finite".into(),
                    ));
                }
            }
            NormFamily::PdInner { gram } => validate_gram(gram, dim)?,
            NormFamily::Polyhedral { functionals } => validate_functionals(functionals, dim)?,
        }
        Ok(Self { family, dim })
    }

    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        Self::new(NormFamily::Lp { p }, dim)
    }

    pub fn weighted_l1(weights: Vec<f64>) -> Result<Self> {
        let dim = weights.len();
        Self::new(NormFamily::WeightedL1 { weights }, dim)
    }

    pub fn pd_inner(gram: Vec<Complex64>, dim: usize) -> Result<Self> {
        Self::new(NormFamily::PdInner { gram }, dim)
    }

    /// Euclidean norm as a `PdInner` spec with identity Gram matrix.
    pub fn pd_identity(dim: usize) -> Result<Self> {
        let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            gram[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self::pd_inner(gram, dim)
    }

    pub fn polyhedral(functionals: Vec<Vec<Complex64>>, dim: usize) -> Result<Self> {
        Self::new(NormFamily::Polyhedral { functionals }, dim)
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent if this is an `Lp` spec.
    pub fn lp_exponent(&self) -> Option<f64> {
        match self.family {
            NormFamily::Lp { p } => Some(p),
            _ => None,
        }
    }

    /// True for `Lp` with `1 < p < ∞` and for `PdInner`: the families
    /// smooth everywhere off the origin.
    pub fn is_smooth_family(&self) -> bool {
        match self.family {
            NormFamily::Lp { p } => p > 1.0 && p.is_finite(),
            NormFamily::PdInner { .. } => true,
            _ => self.dim == 1,
        }
    }

    /// True when the norm comes from an inner product by construction.
    pub fn is_inner_product(&self) -> bool {
        self.inner(&[], &[]).is_some()
    }

    pub(crate) fn check_dim(&self, x: &CVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// Evaluates the norm without a dimension check.
    pub(crate) fn eval(&self, x: &[Complex64]) -> f64 {
        match &self.family {
            NormFamily::Lp { p } => lp_norm(*p, x),
            NormFamily::WeightedL1 { weights } => {
                weights.iter().zip(x).map(|(w, z)| w * z.norm()).sum()
            }
            NormFamily::PdInner { gram } => quadratic_form(gram, x, x).re.max(0.0).sqrt(),
            NormFamily::Polyhedral { functionals } => functionals
                .iter()
                .map(|f| apply_covector(f, x).norm())
                .fold(0.0, f64::max),
        }
    }

    /// `‖x + t y‖ − ‖x‖`.
    ///
    /// Sum-type norms are handled coordinate by coordinate through
    /// `|a + t b|^p − |a|^p = |a|^p expm1((p/2) ln1p(2 Re(u) + |u|²))`,
    /// `u = t b / a`, which avoids the cancellation of the plain difference
    /// when `t` is small. Intended for pairs of moderate magnitude.
    pub(crate) fn increment(&self, x: &[Complex64], y: &[Complex64], t: f64) -> f64 {
        let (p, weights) = match &self.family {
            NormFamily::Lp { p } if p.is_finite() => (*p, None),
            NormFamily::WeightedL1 { weights } => (1.0, Some(weights.as_slice())),
            _ => {
                let moved: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a + b * t).collect();
                return self.eval(&moved) - self.eval(x);
            }
        };
        let (mut s, mut d) = (0.0, 0.0);
        for (k, (a, b)) in x.iter().zip(y).enumerate() {
            let w = weights.map_or(1.0, |w| w[k]);
            let ma = a.norm();
            if ma == 0.0 {
                d += w * (t * b.norm()).powf(p);
                continue;
            }
            let u = b * t / a;
            let q = 2.0 * u.re + u.norm_sqr();
            let ap = ma.powf(p);
            s += w * ap;
            d += w * ap * ((0.5 * p) * q.ln_1p()).exp_m1();
        }
        if s == 0.0 {
            return d.powf(1.0 / p);
        }
        s.powf(1.0 / p) * ((d / s).ln_1p() / p).exp_m1()
    }

    /// `⟨x, y⟩ = y^H G x` for `PdInner` (Euclidean for `Lp{p=2}`).
    pub(crate) fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Option<Complex64> {
        match &self.family {
            NormFamily::PdInner { gram } => Some(quadratic_form(gram, x, y)),
            NormFamily::Lp { p } if *p == 2.0 => {
                Some(x.iter().zip(y).map(|(a, b)| a * b.conj()).sum())
            }
            _ => None,
        }
    }
}

pub(crate) fn apply_covector(f: &[Complex64], x: &[Complex64]) -> Complex64 {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `y^H G x`.
fn quadratic_form(gram: &[Complex64], x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let n = x.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, yj) in y.iter().enumerate() {
        let row: Complex64 = gram[j * n..(j + 1) * n]
            .iter()
            .zip(x)
            .map(|(g, xk)| g * xk)
            .sum();
        acc += yj.conj() * row;
    }
    acc
}

fn lp_norm(p: f64, x: &[Complex64]) -> f64 {
    if p == 1.0 {
        return x.iter().map(|z| z.norm()).sum();
    }
    let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|z| (z.norm() / max).powi(2)).sum();
        return max * s.sqrt();
    }
    let s: f64 = x.iter().map(|z| (z.norm() / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}

fn validate_gram(gram: &[Complex64], dim: usize) -> Result<()> {
    if gram.len() != dim * dim {
        return Err(Error::InvalidSpec(format!(
            "gram must have {} entries, got {}",
            dim * dim,
            gram.len()
        )));
    }
    if gram.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidSpec("gram entries must be finite".into()));
    }
    let m = DMatrix::from_row_slice(dim, dim, gram);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let asym = (&m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if asym > VALIDATION_TOL * scale {
        return Err(Error::InvalidSpec("gram is not Hermitian".into()));
    }
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eig = herm
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig <= VALIDATION_TOL {
        return Err(Error::InvalidSpec(format!(
            "gram is not positive definite (smallest eigenvalue {min_eig})"
        )));
    }
    Ok(())
}

fn validate_functionals(fs: &[Vec<Complex64>], dim: usize) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::InvalidSpec(
            "polyhedral norm needs functionals".into(),
        ));
    }
    if let Some(f) = fs.iter().find(|f| f.len() != dim) {
        return Err(Error::InvalidSpec(format!(
            "functional has {} entries, expected {dim}",
            f.len()
        )));
    }
    if fs
        .iter()
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidSpec(
            "functional entries must be finite".into(),
        ));
    }
    let m = DMatrix::from_row_iterator(fs.len(), dim, fs.iter().flatten().copied());
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv
        .iter()
        .filter(|&&s| s > VALIDATION_TOL * smax.max(1.0))
        .count();
    if rank < dim {
        return Err(Error::InvalidSpec(format!(
            "functionals do not separate points (rank {rank} < dim {dim})"
        )));
    }
    Ok(())
}

/// Evaluates `‖x‖`.
pub fn norm(spec: &NormSpec, x: &CVector) -> Result<f64> {
    spec.check_dim(x)?;
    Ok(spec.eval(x))
}

/// Where a [`DualInfo`] entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Table,
    Computed,
    Unknown,
}

/// Dual-geometry metadata of a norm.
///
/// `r_dual` is the length of the longest segment on the unit sphere of the
/// dual space; `is_smooth` and `is_rotund` describe the space itself.
/// In finite dimensions the space is smooth exactly when its dual is
/// rotund, i.e. when `r_dual = 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DualInfo {
    pub r_dual: Option<f64>,
    pub is_smooth: Option<bool>,
    pub is_rotund: Option<bool>,
    pub provenance: Provenance,
}

impl DualInfo {
    /// `1 + 2 r_dual`, the constant of the dual-segment Cauchy–Schwarz bound.
    pub fn cs_constant(&self) -> Option<f64> {
        self.r_dual.map(|r| 1.0 + 2.0 * r)
    }
}

/// Looks up the dual segment constant and smoothness data of a norm family.
pub fn dual_segment_constant(spec: &NormSpec) -> DualInfo {
    let known = |r: f64, smooth: bool, rotund: bool| DualInfo {
        r_dual: Some(r),
        is_smooth: Some(smooth),
        is_rotund: Some(rotund),
        provenance: Provenance::Table,
    };
    // every norm on ℂ^1 is c·|z|
    if spec.dim == 1 {
        return known(0.0, true, true);
    }
    match spec.family {
        NormFamily::Lp { p } if p > 1.0 && p.is_finite() => known(0.0, true, true),
        NormFamily::PdInner { .. } => known(0.0, true, true),
        NormFamily::Lp { .. } | NormFamily::WeightedL1 { .. } => known(2.0, false, false),
        NormFamily::Polyhedral { .. } => DualInfo {
            r_dual: None,
            is_smooth: None,
            is_rotund: None,
            provenance: Provenance::Unknown,
        },
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Complex64]| {
            v.iter()
                .map(|&z| format_complex(z))
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.family {
            NormFamily::Lp { p } if p.is_infinite() => write!(f, "lp:p=inf")?,
            NormFamily::Lp { p } => write!(f, "lp:p={p}")?,
            NormFamily::WeightedL1 { weights } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "wl1:w={}", w.join(","))?
            }
            NormFamily::PdInner { gram } => {
                if *self == NormSpec::pd_identity(self.dim).expect("valid") {
                    write!(f, "pd:gram=I")?
                } else {
                    let rows: Vec<String> = gram.chunks(self.dim).map(list).collect();
                    write!(f, "pd:gram={}", rows.join(";"))?
                }
            }
            NormFamily::Polyhedral { functionals } => {
                let rows: Vec<String> = functionals.iter().map(|r| list(r)).collect();
                write!(f, "poly:f={}", rows.join(";"))?
            }
        }
        write!(f, ":dim={}", self.dim)
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Parses `lp:p=1.5:dim=4`, `lp:p=inf:dim=2`, `wl1:w=1,2:dim=2`,
    /// `pd:gram=I:dim=3`, `pd:gram=2,0+1i;0-1i,2:dim=2`,
    /// `poly:f=1,0;0,1;1,1:dim=2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let tag = parts.next().unwrap_or_default();
        let mut dim: Option<usize> = None;
        let mut param: Option<(&str, &str)> = None;
        for kv in parts {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            if k == "dim" {
                dim = Some(
                    v.parse()
                        .map_err(|_| Error::Parse(format!("bad dim `{v}`")))?,
                );
            } else if param.replace((k, v)).is_some() {
                return Err(Error::Parse(format!("duplicate parameter in `{s}`")));
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse(format!("missing dim in `{s}`")))?;
        let rows = |v: &str| -> Result<Vec<Vec<Complex64>>> {
            v.split(';').map(parse_complex_list).collect()
        };
        match (tag, param) {
            ("lp", Some(("p", v))) => {
                let p = match v {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => v
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent `{v}`")))?,
                };
                NormSpec::lp(p, dim)
            }
            ("wl1", Some(("w", v))) => {
                let w = v
                    .split(',')
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad weight `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                NormSpec::new(NormFamily::WeightedL1 { weights: w }, dim)
            }
            ("pd", Some(("gram", "I"))) => NormSpec::pd_identity(dim),
            ("pd", Some(("gram", v))) => {
                NormSpec::pd_inner(rows(v)?.into_iter().flatten().collect(), dim)
            }
            ("poly", Some(("f", v))) => NormSpec::polyhedral(rows(v)?, dim),
            _ => Err(Error::Parse(format!("unrecognized norm spec `{s}`"))),
        }
    }
}
