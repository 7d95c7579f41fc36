//! The roots-of-unity functional `ρ_n` and its limit `ρ_∞`.
//!
//! `ρ_n(x, y) = (2/n) Σ_{k=1}^n c_k ρ+(x, c_k y)` with `c_k = e^{2πik/n}`,
//! and `ρ_∞(x, y) = (1/π) ∫_0^{2π} e^{iθ} ρ+(x, e^{iθ} y) dθ`. The
//! trapezoidal rule with `N` nodes applied to this periodic integral is
//! exactly `ρ_N`.
//!
//! `ρ_∞` is evaluated by, in order of preference:
//!
//! - closed forms: `⟨x, y⟩` for inner-product norms,
//!   `‖x‖ Σ_{x_k≠0} w_k x_k ȳ_k / |x_k|` for weighted ℓ¹ norms, and an exact
//!   piecewise integral of the upper envelope for max-type norms;
//! - the smooth identity `ρ+(x, y) + i ρ+(x, iy)` for `Lp`, `1 < p < ∞`;
//! - trapezoidal quadrature with node doubling.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::derivatives::{l1_weights, max_jet, rho_plus, FunctionalValue, Path};
use crate::error::{accept_estimate, Error, Result};
use crate::spaces::{CVector, NormSpec};

/// Diagnostics of a quadrature run.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTrace {
    /// Node counts, each double the previous one.
    pub node_counts: Vec<usize>,
    /// `ρ_N` estimate for each node count (unit-normalized pair).
    pub estimates: Vec<Complex64>,
    /// `|last − second-to-last|`.
    pub final_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance on `|ρ_{2N} − ρ_N|` for the unit-normalized pair.
    pub tol: f64,
    pub n_start: usize,
    pub n_max: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            n_start: 8,
            n_max: 4096,
        }
    }
}

/// Evaluation route for [`rho_inf_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfMethod {
    /// Closed form if available, then the smooth identity, then quadrature.
    Auto,
    ClosedForm,
    SmoothFastPath,
    Quadrature,
}

/// `Σ_{k=1}^n c_k²` over the `n`-th roots of unity, summed term by term.
///
/// Vanishes for every `n > 2` and equals `2` for `n = 2`.
pub fn root_sum_identity(n: usize) -> Complex64 {
    (1..=n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64).powi(2))
        .sum()
}

fn check_pair(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<()> {
    spec.check_dim(x)?;
    spec.check_dim(y)
}

/// `ρ_n(x, y)`; requires `n > 2`.
pub fn rho_n(spec: &NormSpec, x: &CVector, y: &CVector, n: usize) -> Result<FunctionalValue> {
    check_pair(spec, x, y)?;
    if n <= 2 {
        return Err(Error::NTooSmall(n));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut converged = true;
    for k in 1..=n {
        let c = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let (v, ok) = accept_estimate(rho_plus(spec, x, &y.scale(c)))?;
        sum += c * v.re();
        err += v.abs_error;
        converged &= ok;
    }
    let w = 2.0 / n as f64;
    let out = FunctionalValue::complex(sum * w, err * w, Path::Quadrature);
    if converged {
        Ok(out)
    } else {
        Err(Error::nonconverged(out))
    }
}

/// `ρ_∞(x, y)` through the default route.
pub fn rho_inf(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    rho_inf_with(spec, x, y, InfMethod::Auto, QuadratureConfig::default()).map(|(v, _)| v)
}

/// `ρ_∞(x, y)` through a chosen route; quadrature runs also return their trace.
pub fn rho_inf_with(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    method: InfMethod,
    cfg: QuadratureConfig,
) -> Result<(FunctionalValue, Option<QuadratureTrace>)> {
    check_pair(spec, x, y)?;
    if x.is_zero() || y.is_zero() {
        let path = if method == InfMethod::Auto {
            Path::ClosedForm
        } else {
            method_path(method)
        };
        return Ok((
            FunctionalValue::complex(Complex64::new(0.0, 0.0), 0.0, path),
            None,
        ));
    }
    match method {
        InfMethod::Auto => {
            if let Some(v) = closed_form(spec, x, y) {
                Ok((v, None))
            } else if spec.is_smooth_family() {
                smooth_identity(spec, x, y).map(|v| (v, None))
            } else {
                quadrature(spec, x, y, cfg).map(|(v, t)| (v, Some(t)))
            }
        }
        InfMethod::ClosedForm => closed_form(spec, x, y)
            .map(|v| (v, None))
            .ok_or_else(|| Error::InvalidParameter(format!("no closed form for `{spec}`"))),
        InfMethod::SmoothFastPath => {
            if !spec.is_smooth_family() {
                return Err(Error::NotSmooth);
            }
            smooth_identity(spec, x, y).map(|v| (v, None))
        }
        InfMethod::Quadrature => quadrature(spec, x, y, cfg).map(|(v, t)| (v, Some(t))),
    }
}

fn method_path(m: InfMethod) -> Path {
    match m {
        InfMethod::Auto | InfMethod::ClosedForm => Path::ClosedForm,
        InfMethod::SmoothFastPath => Path::SmoothFastPath,
        InfMethod::Quadrature => Path::Quadrature,
    }
}

fn closed_form(spec: &NormSpec, x: &CVector, y: &CVector) -> Option<FunctionalValue> {
    let cf = |v| Some(FunctionalValue::complex(v, 0.0, Path::ClosedForm));
    if let Some(ip) = spec.inner(x, y) {
        return cf(ip);
    }
    if let Some(w) = l1_weights(spec) {
        let nx = spec.eval(x);
        let s: Complex64 = w
            .iter()
            .zip(x.iter().zip(y.iter()))
            .filter(|(_, (xk, _))| **xk != Complex64::new(0.0, 0.0))
            .map(|(wk, (xk, yk))| xk * yk.conj() * (*wk / xk.norm()))
            .sum();
        return cf(s * nx);
    }
    let jet = max_jet(spec, x, y)?;
    cf(envelope_integral(&jet.coeffs) * jet.norm)
}

/// `(1/π) ∫_0^{2π} e^{iθ} max_j Re(e^{iθ} a_j) dθ`, integrated exactly
/// between the crossing angles of the sinusoids.
pub(crate) fn envelope_integral(coeffs: &[Complex64]) -> Complex64 {
    let mut a: Vec<Complex64> = Vec::with_capacity(coeffs.len());
    for &c in coeffs {
        if !a.contains(&c) {
            a.push(c);
        }
    }
    if a.len() == 1 {
        return a[0].conj();
    }
    let mut cuts = vec![0.0, TAU];
    for (j, aj) in a.iter().enumerate() {
        for ak in &a[j + 1..] {
            let d = aj - ak;
            // Re(e^{iθ} d) = 0  ⇔  θ = ±π/2 − arg d  (mod 2π)
            for base in [PI / 2.0, -PI / 2.0] {
                cuts.push((base - d.arg()).rem_euclid(TAU));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let (t1, t2) = (w[0], w[1]);
        if t2 <= t1 {
            continue;
        }
        let mid = Complex64::from_polar(1.0, 0.5 * (t1 + t2));
        let top = a
            .iter()
            .copied()
            .max_by(|p, q| (mid * p).re.total_cmp(&(mid * q).re))
            .expect("non-empty");
        // ∫ e^{iθ} Re(e^{iθ} a) dθ = (a/2) ∫ e^{2iθ} dθ + (ā/2)(t2 − t1)
        let e2 = (Complex64::from_polar(1.0, 2.0 * t2) - Complex64::from_polar(1.0, 2.0 * t1))
            / Complex64::new(0.0, 2.0);
        total += top * 0.5 * e2 + top.conj() * 0.5 * (t2 - t1);
    }
    total / PI
}

/// `ρ+(x, y) + i ρ+(x, iy)`, which equals `ρ_∞` at smooth points.
pub fn smooth_identity(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    check_pair(spec, x, y)?;
    let (re, ok_re) = accept_estimate(rho_plus(spec, x, y))?;
    let iy = y.scale(Complex64::new(0.0, 1.0));
    let (im, ok_im) = accept_estimate(rho_plus(spec, x, &iy))?;
    let out = FunctionalValue::complex(
        Complex64::new(re.re(), im.re()),
        re.abs_error + im.abs_error,
        Path::SmoothFastPath,
    );
    if ok_re && ok_im {
        Ok(out)
    } else {
        Err(Error::nonconverged(out))
    }
}

/// Trapezoidal rule with node doubling on the unit-normalized pair.
///
/// Node values are kept between levels: the nodes of `ρ_N` are the even
/// nodes of `ρ_{2N}`, so each level only evaluates the new odd nodes.
fn quadrature(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    cfg: QuadratureConfig,
) -> Result<(FunctionalValue, QuadratureTrace)> {
    if cfg.n_start < 3 || cfg.n_max < cfg.n_start || cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bad quadrature config {cfg:?}"
        )));
    }
    let nx = spec.eval(x);
    let ny = spec.eval(y);
    let xh = x.scale_real(1.0 / nx);
    let yh = y.scale_real(1.0 / ny);
    let scale = nx * ny;

    let mut converged = true;
    let node = |k: usize, n: usize| -> Result<(Complex64, f64, bool)> {
        let c = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let (v, ok) = accept_estimate(rho_plus(spec, &xh, &yh.scale(c)))?;
        Ok((c * v.re(), v.abs_error, ok))
    };

    let mut n = cfg.n_start;
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        let (f, e, ok) = node(k, n)?;
        converged &= ok;
        vals.push((f, e));
    }
    let estimate = |vals: &[(Complex64, f64)]| {
        let w = 2.0 / vals.len() as f64;
        let s: Complex64 = vals.iter().map(|v| v.0).sum();
        let e: f64 = vals.iter().map(|v| v.1).sum();
        (s * w, e * w)
    };
    let mut trace = QuadratureTrace {
        node_counts: vec![n],
        estimates: vec![estimate(&vals).0],
        final_gap: f64::INFINITY,
    };
    loop {
        if 2 * n > cfg.n_max {
            break;
        }
        let m = 2 * n;
        let mut next = Vec::with_capacity(m);
        for (k, &old) in vals.iter().enumerate() {
            let (f, e, ok) = node(2 * k + 1, m)?;
            converged &= ok;
            next.push(old);
            next.push((f, e));
        }
        vals = next;
        n = m;
        let (est, _) = estimate(&vals);
        let gap = (est - trace.estimates[trace.estimates.len() - 1]).norm();
        trace.node_counts.push(n);
        trace.estimates.push(est);
        trace.final_gap = gap;
        if gap < cfg.tol {
            let (_, node_err) = estimate(&vals);
            let out =
                FunctionalValue::complex(est * scale, (gap + node_err) * scale, Path::Quadrature);
            if converged {
                return Ok((out, trace));
            }
            return Err(Error::Nonconverged {
                estimate: Box::new(out),
                trace: Some(Box::new(trace)),
            });
        }
    }
    let (est, node_err) = estimate(&vals);
    let gap = if trace.final_gap.is_finite() {
        trace.final_gap
    } else {
        0.0
    };
    let out = FunctionalValue::complex(est * scale, (gap + node_err) * scale, Path::Quadrature);
    Err(Error::Nonconverged {
        estimate: Box::new(out),
        trace: Some(Box::new(trace)),
    })
}
