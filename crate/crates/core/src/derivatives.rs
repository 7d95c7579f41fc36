//! One-sided norm derivatives and the real functionals built from them.
//!
//! `ρ±(x, y) = ‖x‖ · lim_{t→0±} (‖x + t y‖ − ‖x‖) / t`.
//!
//! Closed forms are used for inner-product norms, weighted ℓ¹ norms, the
//! differentiable `ℓ^p` norms and max-type norms (ℓ^∞ and polyhedral). The
//! numeric one-sided limit, [`rho_plus_numeric`], serves as an independent
//! cross-check of those and as the fallback for anything else.
//!
//! The numeric limit works on the unit-normalized pair. It evaluates the
//! difference quotient `g(t)` on the steps `t_j = 0.1·4^{-j}`, `j = 0..12`.
//! Convexity makes `g` nondecreasing in `t`, and for small `t` it behaves
//! like `ρ+ + a·t + b·t² + O(t³)`, so successive quotients go through two
//! Richardson levels, `r_j = (4 g_j − g_{j−1}) / 3` and
//! `s_j = (16 r_j − r_{j−1}) / 15`. The iteration stops once three
//! successive `s_j` agree to within `1e-9`; the larger of the two gaps is the
//! reported error.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{accept_estimate, Error, Result};
use crate::spaces::{apply_covector, CVector, NormFamily, NormSpec};

/// First step of the numeric limit.
pub const LIMIT_FIRST_STEP: f64 = 0.1;
/// Ratio between successive steps.
pub const LIMIT_STEP_RATIO: f64 = 4.0;
/// Number of steps `t_0..t_12`.
pub const LIMIT_STEPS: usize = 13;
/// Absolute tolerance on successive refined values (unit-normalized pair).
pub const LIMIT_TOL: f64 = 1e-9;

/// Relative slack when deciding which functionals of a max-type norm are active.
const ACTIVE_TOL: f64 = 1e-12;

/// How a functional value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    ClosedForm,
    NumericLimit,
    Quadrature,
    SmoothFastPath,
}

impl Path {
    pub fn as_str(self) -> &'static str {
        match self {
            Path::ClosedForm => "closed_form",
            Path::NumericLimit => "numeric_limit",
            Path::Quadrature => "quadrature",
            Path::SmoothFastPath => "smooth_fast_path",
        }
    }
}

/// A computed functional value with an absolute error estimate.
///
/// Real-valued functionals store an exactly zero imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub value: Complex64,
    pub abs_error: f64,
    pub path: Path,
}

impl FunctionalValue {
    pub fn real(value: f64, abs_error: f64, path: Path) -> Self {
        Self {
            value: Complex64::new(value, 0.0),
            abs_error,
            path,
        }
    }

    pub fn complex(value: Complex64, abs_error: f64, path: Path) -> Self {
        Self {
            value,
            abs_error,
            path,
        }
    }

    /// Real part of the value.
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Record of one numeric-limit evaluation on the unit-normalized pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTrace {
    /// Steps `t_j` actually evaluated.
    pub steps: Vec<f64>,
    /// Difference quotients `(‖x̂ + t ŷ‖ − ‖x̂‖) / t`.
    pub quotients: Vec<f64>,
    /// First Richardson level; entry `j` combines quotients `j` and `j+1`.
    pub extrapolated: Vec<f64>,
    /// Second Richardson level, built from consecutive first-level values.
    pub refined: Vec<f64>,
    /// `ρ+(x̂, ŷ)` estimate.
    pub unit_value: f64,
    /// Gap behind `unit_value`.
    pub unit_gap: f64,
    pub converged: bool,
    /// `‖x‖·‖y‖`, the factor that rescales to the original pair.
    pub scale: f64,
}

impl LimitTrace {
    pub fn value(&self) -> FunctionalValue {
        FunctionalValue::real(
            self.scale * self.unit_value,
            self.scale * self.unit_gap,
            Path::NumericLimit,
        )
    }
}

fn check_pair(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<()> {
    spec.check_dim(x)?;
    spec.check_dim(y)
}

/// Runs the numeric one-sided limit and returns the whole trace.
pub fn limit_trace(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<LimitTrace> {
    check_pair(spec, x, y)?;
    let nx = spec.eval(x);
    let ny = spec.eval(y);
    let mut trace = LimitTrace {
        steps: Vec::new(),
        quotients: Vec::new(),
        extrapolated: Vec::new(),
        refined: Vec::new(),
        unit_value: 0.0,
        unit_gap: 0.0,
        converged: true,
        scale: nx * ny,
    };
    if nx == 0.0 || ny == 0.0 {
        return Ok(trace);
    }
    let xh = x.scale_real(1.0 / nx);
    let yh = y.scale_real(1.0 / ny);
    let base = spec.eval(&xh);

    let mut best: Option<(f64, f64)> = None;
    let mut t = LIMIT_FIRST_STEP;
    for j in 0..LIMIT_STEPS {
        let g = spec.increment(&xh, &yh, t) / t;
        trace.steps.push(t);
        trace.quotients.push(g);
        if j >= 1 {
            let r = (LIMIT_STEP_RATIO * g - trace.quotients[j - 1]) / (LIMIT_STEP_RATIO - 1.0);
            trace.extrapolated.push(r);
            let n = trace.extrapolated.len();
            if n >= 2 {
                let k2 = LIMIT_STEP_RATIO * LIMIT_STEP_RATIO;
                let r2 = (k2 * r - trace.extrapolated[n - 2]) / (k2 - 1.0);
                trace.refined.push(r2);
                let m = trace.refined.len();
                if m >= 3 {
                    // two consecutive small gaps guard against early coincidences
                    let gap = (r2 - trace.refined[m - 2])
                        .abs()
                        .max((trace.refined[m - 2] - trace.refined[m - 3]).abs());
                    if best.is_none_or(|(_, bg)| gap < bg) {
                        best = Some((r2, gap));
                    }
                    if gap < LIMIT_TOL {
                        trace.unit_value = base * r2;
                        trace.unit_gap = base * gap;
                        return Ok(trace);
                    }
                }
            }
        }
        t /= LIMIT_STEP_RATIO;
    }
    let (r, gap) = best.expect("at least two refined values");
    trace.unit_value = base * r;
    trace.unit_gap = base * gap;
    trace.converged = false;
    Ok(trace)
}

/// `ρ+(x, y)` forced through the numeric limit, whatever the family.
pub fn rho_plus_numeric(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    let trace = limit_trace(spec, x, y)?;
    if trace.converged {
        Ok(trace.value())
    } else {
        Err(Error::nonconverged(trace.value()))
    }
}

/// First-order data of a max-type norm `max_j |f_j(x)|` at `x` in direction `y`.
///
/// `ρ+(x, e^{iθ} y) = norm · max_j Re(e^{iθ} coeffs_j)` over the active
/// functionals.
#[derive(Debug, Clone)]
pub(crate) struct MaxJet {
    pub norm: f64,
    pub coeffs: Vec<Complex64>,
}

impl MaxJet {
    pub fn rho_plus_rotated(&self, phase: Complex64) -> f64 {
        self.norm
            * self
                .coeffs
                .iter()
                .map(|a| (phase * a).re)
                .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn max_jet(spec: &NormSpec, x: &[Complex64], y: &[Complex64]) -> Option<MaxJet> {
    let pairs: Vec<(Complex64, Complex64)> = match spec.family() {
        NormFamily::Lp { p } if p.is_infinite() => {
            x.iter().copied().zip(y.iter().copied()).collect()
        }
        NormFamily::Polyhedral { functionals } => functionals
            .iter()
            .map(|f| (apply_covector(f, x), apply_covector(f, y)))
            .collect(),
        _ => return None,
    };
    let norm = pairs.iter().map(|(fx, _)| fx.norm()).fold(0.0, f64::max);
    if norm == 0.0 {
        return Some(MaxJet {
            norm,
            coeffs: vec![Complex64::new(0.0, 0.0)],
        });
    }
    let coeffs = pairs
        .iter()
        .filter(|(fx, _)| fx.norm() >= norm * (1.0 - ACTIVE_TOL))
        .map(|(fx, fy)| fy * fx.conj() / fx.norm())
        .collect();
    Some(MaxJet { norm, coeffs })
}

/// Weights of an ℓ¹-type norm (`Lp{p=1}` has unit weights).
pub(crate) fn l1_weights(spec: &NormSpec) -> Option<Vec<f64>> {
    match spec.family() {
        NormFamily::Lp { p } if *p == 1.0 => Some(vec![1.0; spec.dim()]),
        NormFamily::WeightedL1 { weights } => Some(weights.clone()),
        _ => None,
    }
}

/// ℓ¹ closed form `‖x‖₁ (Σ_{x_k≠0} w_k Re(y_k x̄_k)/|x_k| + Σ_{x_k=0} w_k |y_k|)`.
fn l1_rho_plus(weights: &[f64], x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx: f64 = weights.iter().zip(x).map(|(w, z)| w * z.norm()).sum();
    let s: f64 = weights
        .iter()
        .zip(x.iter().zip(y))
        .map(|(w, (xk, yk))| {
            if *xk == Complex64::new(0.0, 0.0) {
                w * yk.norm()
            } else {
                w * (yk * xk.conj()).re / xk.norm()
            }
        })
        .sum();
    nx * s
}

/// Gradient form on `ℓ^p`, `1 < p < ∞`:
/// `‖x‖ Σ_{x_k≠0} (|x_k|/‖x‖)^{p−1} Re(y_k x̄_k)/|x_k|`.
fn lp_rho_plus(p: f64, x: &[Complex64], y: &[Complex64], nx: f64) -> f64 {
    if nx == 0.0 {
        return 0.0;
    }
    let s: f64 = x
        .iter()
        .zip(y)
        .filter(|(xk, _)| xk.norm() > 0.0)
        .map(|(xk, yk)| (xk.norm() / nx).powf(p - 1.0) * (yk * xk.conj()).re / xk.norm())
        .sum();
    nx * s
}

fn rho_plus_closed(spec: &NormSpec, x: &CVector, y: &CVector) -> Option<f64> {
    if let Some(ip) = spec.inner(x, y) {
        return Some(ip.re);
    }
    if let Some(w) = l1_weights(spec) {
        return Some(l1_rho_plus(&w, x, y));
    }
    if let NormFamily::Lp { p } = spec.family() {
        if p.is_finite() {
            return Some(lp_rho_plus(*p, x, y, spec.eval(x)));
        }
    }
    max_jet(spec, x, y).map(|jet| jet.rho_plus_rotated(Complex64::new(1.0, 0.0)))
}

/// Right norm derivative `ρ+(x, y)`.
pub fn rho_plus(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    check_pair(spec, x, y)?;
    match rho_plus_closed(spec, x, y) {
        Some(v) => Ok(FunctionalValue::real(v, 0.0, Path::ClosedForm)),
        None => rho_plus_numeric(spec, x, y),
    }
}

/// Left norm derivative, `ρ−(x, y) = −ρ+(x, −y)`.
pub fn rho_minus(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    let neg = |v: FunctionalValue| FunctionalValue::real(-v.re(), v.abs_error, v.path);
    match rho_plus(spec, x, &y.neg()) {
        Ok(v) => Ok(neg(v)),
        Err(Error::Nonconverged { estimate, trace }) => Err(Error::Nonconverged {
            estimate: Box::new(neg(*estimate)),
            trace,
        }),
        Err(e) => Err(e),
    }
}

/// Evaluates `ρ+` and `ρ−`, combines them, and reports non-convergence of
/// either side on the combined estimate.
fn combine(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    f: impl Fn(f64, f64) -> f64,
    err: impl Fn(&FunctionalValue, &FunctionalValue, f64) -> f64,
) -> Result<FunctionalValue> {
    let (plus, ok_p) = accept_estimate(rho_plus(spec, x, y))?;
    let (minus, ok_m) = accept_estimate(rho_minus(spec, x, y))?;
    let value = f(plus.re(), minus.re());
    let out = FunctionalValue::real(value, err(&plus, &minus, value), plus.path);
    if ok_p && ok_m {
        Ok(out)
    } else {
        Err(Error::nonconverged(out))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    Ok(())
}

/// Miličić functional `ρ = (ρ+ + ρ−) / 2`.
pub fn rho_milicic(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<FunctionalValue> {
    combine(
        spec,
        x,
        y,
        |p, m| 0.5 * (p + m),
        |p, m, _| p.abs_error + m.abs_error,
    )
}

/// `ρ_λ = λ ρ− + (1 − λ) ρ+`.
pub fn rho_lambda(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    lambda: f64,
) -> Result<FunctionalValue> {
    check_lambda(lambda)?;
    combine(
        spec,
        x,
        y,
        |p, m| lambda * m + (1.0 - lambda) * p,
        |p, m, _| lambda * m.abs_error + (1.0 - lambda) * p.abs_error,
    )
}

/// Real power `a^(num/den)` for odd `den`, defined for negative `a` through
/// the real odd root.
fn odd_root_pow(a: f64, num: u32, den: u32) -> f64 {
    if num == 0 {
        return 1.0;
    }
    let root = a.signum() * a.abs().powf(1.0 / den as f64);
    root.powi(num as i32)
}

fn upsilon_combination(lambda: f64, k: u32, plus: f64, minus: f64) -> f64 {
    let den = 2 * k - 1;
    lambda * odd_root_pow(minus, 1, den) * odd_root_pow(plus, den - 1, den)
        + (1.0 - lambda) * odd_root_pow(plus, 1, den) * odd_root_pow(minus, den - 1, den)
}

/// `ρ_λ^υ = λ ρ−^υ ρ+^{1−υ} + (1 − λ) ρ+^υ ρ−^{1−υ}` with `υ = 1/(2k − 1)`.
///
/// Powers of negative numbers use the real odd root, so `a^υ` keeps the sign
/// of `a` and `a^{1−υ}` is nonnegative.
pub fn rho_lambda_upsilon(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    lambda: f64,
    k: u32,
) -> Result<FunctionalValue> {
    check_lambda(lambda)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    combine(
        spec,
        x,
        y,
        |p, m| upsilon_combination(lambda, k, p, m),
        |p, m, v| {
            // worst corner of the input error box
            let (ep, em) = (p.abs_error, m.abs_error);
            if ep == 0.0 && em == 0.0 {
                return 0.0;
            }
            [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
                .iter()
                .map(|(sp, sm)| {
                    (upsilon_combination(lambda, k, p.re() + sp * ep, m.re() + sm * em) - v).abs()
                })
                .fold(0.0, f64::max)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CVector {
        s.parse().unwrap()
    }

    fn spec(s: &str) -> NormSpec {
        s.parse().unwrap()
    }

    #[test]
    fn l1_worked_example() {
        let l1 = spec("lp:p=1:dim=2");
        let r = rho_plus(&l1, &v("1,0"), &v("0+1i,0")).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.path, Path::ClosedForm);
    }

    // ‖(1,1) + t(1,−1)‖₁ = 2 for 0 < t < 1, so both one-sided quotients vanish.
    #[test]
    fn l1_pair_with_flat_quotient() {
        let l1 = spec("lp:p=1:dim=2");
        let (u, w) = (v("1,1"), v("1,-1"));
        assert_eq!(rho_plus(&l1, &u, &w).unwrap().re(), 0.0);
        assert_eq!(rho_minus(&l1, &u, &w).unwrap().re(), 0.0);
        assert!(rho_plus_numeric(&l1, &u, &w).unwrap().re().abs() < 1e-12);
    }

    #[test]
    fn zero_support_term() {
        let l1 = spec("lp:p=1:dim=2");
        assert_eq!(rho_plus(&l1, &v("1,0"), &v("0,1")).unwrap().re(), 1.0);
        let w = spec("wl1:w=1,3:dim=2");
        // ‖x‖ = 2, zero-support term 3·|y_2| = 6
        assert_eq!(rho_plus(&w, &v("2,0"), &v("0,0-2i")).unwrap().re(), 12.0);
    }

    #[test]
    fn self_pair_gives_norm_squared() {
        for s in [
            "lp:p=1:dim=3",
            "lp:p=1.5:dim=3",
            "lp:p=2:dim=3",
            "lp:p=4:dim=3",
            "lp:p=inf:dim=3",
            "wl1:w=1,2,3:dim=3",
            "pd:gram=I:dim=3",
            "poly:f=1,0,0;0,1,0;0,0,1;1,1,1:dim=3",
        ] {
            let sp = spec(s);
            let x = v("1+2i,-0.5,0.25-1i");
            let n2 = sp.eval(&x).powi(2);
            for f in [rho_plus, rho_minus, rho_milicic] {
                let r = f(&sp, &x, &x).unwrap();
                assert!((r.re() - n2).abs() <= 1e-8 * n2, "{s}: {} vs {n2}", r.re());
            }
        }
    }

    #[test]
    fn euclidean_examples() {
        let e = spec("pd:gram=I:dim=2");
        assert_eq!(rho_minus(&e, &v("1,0"), &v("0,1")).unwrap().re(), 0.0);
        assert_eq!(rho_milicic(&e, &v("1,0"), &v("0+1i,0")).unwrap().re(), 0.0);
    }

    #[test]
    fn zero_base_vector() {
        let sp = spec("lp:p=3:dim=2");
        let z = CVector::zeros(2).unwrap();
        assert_eq!(rho_plus(&sp, &z, &v("1,2")).unwrap().re(), 0.0);
        assert_eq!(
            rho_plus(&spec("lp:p=inf:dim=2"), &z, &v("1,2"))
                .unwrap()
                .re(),
            0.0
        );
    }

    #[test]
    fn lambda_endpoints() {
        let sp = spec("lp:p=1:dim=3");
        let (x, y) = (v("1,0,2-1i"), v("0.5,1+1i,-1"));
        let p = rho_plus(&sp, &x, &y).unwrap().re();
        let m = rho_minus(&sp, &x, &y).unwrap().re();
        assert_ne!(p, m);
        assert_eq!(rho_lambda(&sp, &x, &y, 0.0).unwrap().re(), p);
        assert_eq!(rho_lambda(&sp, &x, &y, 1.0).unwrap().re(), m);
        assert_eq!(
            rho_lambda(&sp, &x, &y, 0.5).unwrap().re(),
            rho_milicic(&sp, &x, &y).unwrap().re()
        );
        assert!(rho_lambda(&sp, &x, &y, 1.5).is_err());
        for k in [1, 2, 5] {
            let u = rho_lambda_upsilon(&sp, &x, &y, 0.3, k).unwrap().re();
            if k == 1 {
                assert!((u - rho_lambda(&sp, &x, &y, 0.3).unwrap().re()).abs() < 1e-14);
            }
            let xx = rho_lambda_upsilon(&sp, &x, &x, 0.3, k).unwrap().re();
            assert!((xx - sp.eval(&x).powi(2)).abs() < 1e-12);
        }
        assert!(rho_lambda_upsilon(&sp, &x, &y, 0.3, 0).is_err());
    }

    #[test]
    fn odd_roots_of_negative_numbers() {
        assert!((odd_root_pow(-8.0, 1, 3) + 2.0).abs() < 1e-15);
        assert!((odd_root_pow(-8.0, 2, 3) - 4.0).abs() < 1e-14);
        assert_eq!(odd_root_pow(0.0, 0, 1), 1.0);
        // opposite signs still give a real value
        let v = upsilon_combination(0.5, 2, 8.0, -1.0);
        assert!((v - 0.5 * (-4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn numeric_limit_matches_lp_gradient() {
        // ρ+(x,y) = ‖x‖^{2−p} Σ |x_k|^{p−2} Re(y_k x̄_k) for 1 < p < ∞
        for p in [1.5, 2.5, 3.0, 7.0] {
            let sp = NormSpec::lp(p, 3).unwrap();
            let (x, y) = (v("1+0.5i,-0.3,0.8-1i"), v("0.2,1-1i,0.4+0.1i"));
            let nx = sp.eval(&x);
            let grad: f64 = x
                .iter()
                .zip(y.iter())
                .map(|(a, b)| a.norm().powf(p - 2.0) * (b * a.conj()).re)
                .sum();
            let oracle = nx.powf(2.0 - p) * grad;
            let r = rho_plus(&sp, &x, &y).unwrap();
            assert_eq!(r.path, Path::ClosedForm);
            assert!(
                (r.re() - oracle).abs() < 1e-12,
                "p={p}: {} vs {oracle}",
                r.re()
            );
            let n = rho_plus_numeric(&sp, &x, &y).unwrap();
            assert_eq!(n.path, Path::NumericLimit);
            assert!(
                (n.re() - oracle).abs() < 1e-8,
                "p={p}: {} vs {oracle}",
                n.re()
            );
        }
    }

    #[test]
    fn quotients_decrease_as_steps_shrink() {
        let sp = spec("lp:p=3:dim=2");
        let t = limit_trace(&sp, &v("1,0.5+0.5i"), &v("-1,2i")).unwrap();
        assert!(t.converged);
        for w in t.quotients.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn max_norm_closed_form() {
        let sp = spec("lp:p=inf:dim=2");
        // active set {1, 2}: max(Re y_1, Re y_2 · conj(x_2)/|x_2|)
        let r = rho_plus(&sp, &v("1,0+1i"), &v("0.5,1")).unwrap();
        assert!((r.re() - 0.5).abs() < 1e-15);
        let n = rho_plus_numeric(&sp, &v("1,0+1i"), &v("0.5,1")).unwrap();
        assert!((n.re() - 0.5).abs() < 1e-9);
    }
}
