//! Orthogonality relations and counterexample search.
//!
//! Four relations are decided here:
//!
//! * `x ⊥ρ∞ y` iff `ρ∞(x, y) = 0`,
//! * `x ⊥ρ+ y` iff `ρ+(x, y) = 0`,
//! * Birkhoff–James: `‖x‖ ≤ ‖x + ξy‖` for every complex `ξ`,
//! * semi-inner-product orthogonality `[y, x] = 0` at smooth points.
//!
//! Residuals are normalized by `‖x‖‖y‖` so that verdicts are invariant under
//! rescaling either argument.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::derivatives::rho_plus;
use crate::error::{accept_estimate, Error, Result};
use crate::minimize::nelder_mead;
use crate::rho_infinity::rho_inf;
use crate::sampling::{rng_for, sparse_gaussian};
use crate::spaces::{CVector, NormSpec};

/// Default verdict tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Floor for residual denominators.
pub const EPS_FLOOR: f64 = 1e-300;

const BJ_ANGLES: usize = 64;
const BJ_DECADES: i32 = 6;
const BJ_PER_DECADE: i32 = 4;
const BJ_DIAMETER: f64 = 1e-10;
const BJ_MAX_ITER: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    RhoInf,
    RhoPlus,
    BirkhoffJames,
    Semi,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::RhoInf => "rho_inf",
            Relation::RhoPlus => "rho_plus",
            Relation::BirkhoffJames => "bj",
            Relation::Semi => "semi",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rho_inf" => Ok(Relation::RhoInf),
            "rho_plus" => Ok(Relation::RhoPlus),
            "bj" | "birkhoff_james" => Ok(Relation::BirkhoffJames),
            "semi" => Ok(Relation::Semi),
            other => Err(Error::Parse(format!(
                "unknown relation `{other}` (expected rho_inf, rho_plus, bj, semi)"
            ))),
        }
    }
}

/// Outcome of an orthogonality test.
///
/// `converged` is false when the underlying functional did not meet its
/// accuracy target; the verdict is then computed from the best estimate and
/// should be treated as unknown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthoVerdict {
    pub orthogonal: bool,
    pub residual: f64,
    pub tol: f64,
    pub relation: Relation,
    pub converged: bool,
}

impl OrthoVerdict {
    fn new(relation: Relation, residual: f64, tol: f64, converged: bool) -> Self {
        Self {
            orthogonal: residual <= tol,
            residual,
            tol,
            relation,
            converged,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )))
    }
}

fn check_pair(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<(f64, f64)> {
    spec.check_dim(x)?;
    spec.check_dim(y)?;
    Ok((spec.eval(x), spec.eval(y)))
}

fn scaled(value: Complex64, nx: f64, ny: f64) -> f64 {
    value.norm() / (nx * ny).max(EPS_FLOOR)
}

pub fn perp_rho_inf(spec: &NormSpec, x: &CVector, y: &CVector, tol: f64) -> Result<OrthoVerdict> {
    check_tol(tol)?;
    let (nx, ny) = check_pair(spec, x, y)?;
    let (v, ok) = accept_estimate(rho_inf(spec, x, y))?;
    Ok(OrthoVerdict::new(
        Relation::RhoInf,
        scaled(v.value, nx, ny),
        tol,
        ok,
    ))
}

pub fn perp_rho_plus(spec: &NormSpec, x: &CVector, y: &CVector, tol: f64) -> Result<OrthoVerdict> {
    check_tol(tol)?;
    let (nx, ny) = check_pair(spec, x, y)?;
    let (v, ok) = accept_estimate(rho_plus(spec, x, y))?;
    Ok(OrthoVerdict::new(
        Relation::RhoPlus,
        scaled(v.value, nx, ny),
        tol,
        ok,
    ))
}

/// Minimizer `(ξ*, m*)` of `m(ξ) = ‖x + ξy‖` over the complex plane.
///
/// A polar grid around the origin is scanned first, then the best grid
/// point is refined with a simplex search. `ξ = 0` is always a candidate,
/// so `m* ≤ ‖x‖`.
pub fn bj_minimum(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<(Complex64, f64)> {
    let (nx, ny) = check_pair(spec, x, y)?;
    if nx == 0.0 || ny == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), nx));
    }
    let m = |xi: Complex64| spec.eval(&y.axpy(xi, x));
    let scale = nx / ny;
    let mut best = (Complex64::new(0.0, 0.0), nx);
    let steps = 2 * BJ_DECADES * BJ_PER_DECADE;
    for j in 0..=steps {
        let exponent = f64::from(j - BJ_DECADES * BJ_PER_DECADE) / f64::from(BJ_PER_DECADE);
        let r = scale * 10f64.powf(exponent);
        for a in 0..BJ_ANGLES {
            let theta = std::f64::consts::TAU * a as f64 / BJ_ANGLES as f64;
            let xi = Complex64::from_polar(r, theta);
            let v = m(xi);
            if v < best.1 {
                best = (xi, v);
            }
        }
    }
    let step = if best.0.norm() > 0.0 {
        0.5 * best.0.norm()
    } else {
        1e-3 * scale
    };
    let refined = nelder_mead(m, best.0, step, BJ_DIAMETER * scale, BJ_MAX_ITER);
    if refined.1 < best.1 {
        best = refined;
    }
    Ok(best)
}

pub fn perp_birkhoff_james(
    spec: &NormSpec,
    x: &CVector,
    y: &CVector,
    tol: f64,
) -> Result<OrthoVerdict> {
    check_tol(tol)?;
    let (nx, _) = check_pair(spec, x, y)?;
    let (_, m) = bj_minimum(spec, x, y)?;
    let residual = ((nx - m) / nx.max(EPS_FLOOR)).max(0.0);
    Ok(OrthoVerdict::new(
        Relation::BirkhoffJames,
        residual,
        tol,
        true,
    ))
}

/// Scalar `α = −conj(ρ∞(x, y)) / ‖x‖²`, which makes `x ⊥ρ∞ αx + y`.
pub fn decomposition_alpha(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<Complex64> {
    let (nx, _) = check_pair(spec, x, y)?;
    if nx == 0.0 {
        return Err(Error::ZeroBase);
    }
    let v = rho_inf(spec, x, y)?;
    Ok(-v.value.conj() / (nx * nx))
}

/// Semi-inner product `[y, x] = ρ+(x, y) − iρ+(x, iy)` at a smooth point `x`.
pub fn semi_inner_product(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<(Complex64, bool)> {
    let (nx, _) = check_pair(spec, x, y)?;
    if !spec.is_smooth_family() {
        return Err(Error::NotSmooth);
    }
    if nx == 0.0 {
        return Err(Error::ZeroBase);
    }
    let (a, ok_a) = accept_estimate(rho_plus(spec, x, y))?;
    let iy = y.scale(Complex64::new(0.0, 1.0));
    let (b, ok_b) = accept_estimate(rho_plus(spec, x, &iy))?;
    Ok((Complex64::new(a.re(), -b.re()), ok_a && ok_b))
}

pub fn perp_semi(spec: &NormSpec, x: &CVector, y: &CVector, tol: f64) -> Result<OrthoVerdict> {
    check_tol(tol)?;
    let (nx, ny) = check_pair(spec, x, y)?;
    let (s, ok) = semi_inner_product(spec, x, y)?;
    Ok(OrthoVerdict::new(
        Relation::Semi,
        scaled(s, nx, ny),
        tol,
        ok,
    ))
}

/// Dispatches to the test for `relation`.
pub fn perp(
    spec: &NormSpec,
    relation: Relation,
    x: &CVector,
    y: &CVector,
    tol: f64,
) -> Result<OrthoVerdict> {
    match relation {
        Relation::RhoInf => perp_rho_inf(spec, x, y, tol),
        Relation::RhoPlus => perp_rho_plus(spec, x, y, tol),
        Relation::BirkhoffJames => perp_birkhoff_james(spec, x, y, tol),
        Relation::Semi => perp_semi(spec, x, y, tol),
    }
}

/// Sampling parameters for [`relation_compare`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    /// Probability that a coordinate of a sampled vector is zeroed.
    pub sparsity: f64,
    pub tol: f64,
}

impl SamplerConfig {
    pub fn new(dim: usize, samples: usize, seed: u64) -> Self {
        Self {
            dim,
            samples,
            seed,
            sparsity: 0.3,
            tol: DEFAULT_TOL,
        }
    }
}

/// A pair in relation `a` but not in relation `b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: CVector,
    pub y: CVector,
    pub residual_a: f64,
    pub residual_b: f64,
    pub seed: u64,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub relation_a: Relation,
    pub relation_b: Relation,
    pub samples: usize,
    /// Samples whose pair satisfied relation `a`.
    pub satisfied: usize,
    /// Samples skipped because a functional did not converge.
    pub unknown: usize,
    pub seed: u64,
    pub witnesses: Vec<Witness>,
}

/// Sample `(x, y)` for index `index`, pushed into relation `a` where a
/// direct construction exists.
fn candidate(
    spec: &NormSpec,
    a: Relation,
    cfg: &SamplerConfig,
    index: u64,
) -> Result<(CVector, CVector)> {
    let mut rng = rng_for(cfg.seed, index);
    let x = sparse_gaussian(&mut rng, cfg.dim, cfg.sparsity);
    let v = sparse_gaussian(&mut rng, cfg.dim, cfg.sparsity);
    let nx2 = spec.eval(&x).powi(2);
    let alpha = match a {
        Relation::RhoInf => decomposition_alpha(spec, &x, &v)?,
        Relation::RhoPlus => Complex64::new(-rho_plus(spec, &x, &v)?.re() / nx2, 0.0),
        Relation::Semi => -semi_inner_product(spec, &x, &v)?.0 / nx2,
        Relation::BirkhoffJames => return Ok((x, v)),
    };
    Ok((x.clone(), x.axpy(alpha, &v)))
}

/// Searches for pairs satisfying `a` but violating `b`.
///
/// An empty witness list is evidence, not proof, that `a ⊆ b`.
pub fn relation_compare(
    spec: &NormSpec,
    a: Relation,
    b: Relation,
    cfg: &SamplerConfig,
) -> Result<SearchOutcome> {
    if cfg.dim != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: cfg.dim,
        });
    }
    check_tol(cfg.tol)?;
    if (a == Relation::Semi || b == Relation::Semi) && !spec.is_smooth_family() {
        return Err(Error::NotSmooth);
    }
    let mut out = SearchOutcome {
        relation_a: a,
        relation_b: b,
        samples: cfg.samples,
        satisfied: 0,
        unknown: 0,
        seed: cfg.seed,
        witnesses: Vec::new(),
    };
    for index in 0..cfg.samples as u64 {
        let (x, y) = match candidate(spec, a, cfg, index) {
            Ok(pair) => pair,
            Err(Error::Nonconverged { .. }) => {
                out.unknown += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let va = perp(spec, a, &x, &y, cfg.tol)?;
        if !va.converged {
            out.unknown += 1;
            continue;
        }
        if !va.orthogonal {
            continue;
        }
        out.satisfied += 1;
        let vb = perp(spec, b, &x, &y, cfg.tol)?;
        if !vb.converged {
            out.unknown += 1;
        } else if !vb.orthogonal {
            out.witnesses.push(Witness {
                x,
                y,
                residual_a: va.residual,
                residual_b: vb.residual,
                seed: cfg.seed,
                index,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CVector {
        s.parse().unwrap()
    }

    fn l1() -> NormSpec {
        NormSpec::lp(1.0, 2).unwrap()
    }

    #[test]
    fn rho_inf_examples() {
        assert!(
            perp_rho_inf(&l1(), &v("1,1"), &v("1,-1"), 1e-6)
                .unwrap()
                .orthogonal
        );
        let r = perp_rho_inf(&l1(), &v("1,0"), &v("0+1i,0"), 1e-6).unwrap();
        assert!(!r.orthogonal);
        assert!((r.residual - 1.0).abs() < 1e-15);
        let zero = perp_rho_inf(&l1(), &v("0,0"), &v("1,2"), 1e-6).unwrap();
        assert!(zero.orthogonal && zero.residual == 0.0);
    }

    #[test]
    fn rho_plus_examples() {
        assert!(
            perp_rho_plus(&l1(), &v("1,0"), &v("0+1i,0"), 1e-6)
                .unwrap()
                .orthogonal
        );
        assert!(
            !perp_rho_plus(&l1(), &v("1,0"), &v("0,1"), 1e-6)
                .unwrap()
                .orthogonal
        );
        let pd = NormSpec::pd_identity(2).unwrap();
        assert!(
            perp_rho_plus(&pd, &v("1,0"), &v("0,5"), 1e-6)
                .unwrap()
                .orthogonal
        );
    }

    #[test]
    fn birkhoff_james_examples() {
        assert!(
            perp_birkhoff_james(&l1(), &v("0,1"), &v("2,1"), 1e-6)
                .unwrap()
                .orthogonal
        );
        let pd = NormSpec::pd_identity(2).unwrap();
        let r = perp_birkhoff_james(&pd, &v("1,0"), &v("1,0"), 1e-6).unwrap();
        assert!(!r.orthogonal);
        assert!((r.residual - 1.0).abs() < 1e-8);
        assert!(
            perp_birkhoff_james(&pd, &v("1,0"), &v("0,0"), 1e-6)
                .unwrap()
                .orthogonal
        );
    }

    #[test]
    fn bj_minimum_matches_euclidean_projection() {
        // min |x + ξy| in ℂ² is the distance from x to span(y)
        let pd = NormSpec::pd_identity(2).unwrap();
        let x = v("1,2");
        let y = v("1+1i,0");
        let (_, m) = bj_minimum(&pd, &x, &y).unwrap();
        assert!((m - 2.0).abs() < 1e-9, "{m}");
    }

    #[test]
    fn alpha_examples() {
        let a = decomposition_alpha(&l1(), &v("1,0"), &v("0+1i,0")).unwrap();
        assert!((a - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let pd = NormSpec::pd_identity(2).unwrap();
        let a = decomposition_alpha(&pd, &v("1,0"), &v("1,1")).unwrap();
        assert!((a + 1.0).norm() < 1e-15);
        assert_eq!(
            decomposition_alpha(&l1(), &v("1,3"), &v("0,0")).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(matches!(
            decomposition_alpha(&l1(), &v("0,0"), &v("1,0")),
            Err(Error::ZeroBase)
        ));
    }

    #[test]
    fn semi_refuses_non_smooth() {
        assert!(matches!(
            perp_semi(&l1(), &v("1,0"), &v("0,1"), 1e-6),
            Err(Error::NotSmooth)
        ));
        let pd = NormSpec::pd_identity(2).unwrap();
        assert!(matches!(
            perp_semi(&pd, &v("0,0"), &v("0,1"), 1e-6),
            Err(Error::ZeroBase)
        ));
        assert!(
            !perp_semi(&pd, &v("1,0"), &v("1,0"), 1e-6)
                .unwrap()
                .orthogonal
        );
        assert!(
            perp_semi(&pd, &v("1,0"), &v("0,1"), 1e-6)
                .unwrap()
                .orthogonal
        );
    }

    #[test]
    fn semi_product_is_conjugate_of_rho_inf_on_lp3() {
        let spec = NormSpec::lp(3.0, 3).unwrap();
        let x = v("1+0.5i,-2,0.3i");
        let y = v("0.2,1-1i,2");
        let (s, ok) = semi_inner_product(&spec, &x, &y).unwrap();
        assert!(ok);
        let r = rho_inf(&spec, &x, &y).unwrap().value;
        assert!((s - r.conj()).norm() < 1e-7);
    }

    #[test]
    fn relation_parsing() {
        for r in [
            Relation::RhoInf,
            Relation::RhoPlus,
            Relation::BirkhoffJames,
            Relation::Semi,
        ] {
            assert_eq!(r.as_str().parse::<Relation>().unwrap(), r);
        }
        assert!("perp".parse::<Relation>().is_err());
    }

    #[test]
    fn compare_finds_rho_plus_witness_in_l1() {
        let cfg = SamplerConfig::new(2, 200, 42);
        let out = relation_compare(&l1(), Relation::RhoPlus, Relation::RhoInf, &cfg).unwrap();
        assert!(!out.witnesses.is_empty());
        for w in &out.witnesses {
            assert!(w.residual_a <= cfg.tol && w.residual_b > cfg.tol);
        }
    }

    #[test]
    fn compare_is_deterministic() {
        let cfg = SamplerConfig::new(2, 50, 7);
        let a = relation_compare(&l1(), Relation::BirkhoffJames, Relation::RhoInf, &cfg).unwrap();
        let b = relation_compare(&l1(), Relation::BirkhoffJames, Relation::RhoInf, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
