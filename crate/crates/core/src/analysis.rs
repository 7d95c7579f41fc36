//! Sampled audits built on `ρ∞`: inner-product detection, Cauchy–Schwarz
//! type bounds, equivalence of two norms, and orthogonality preservation
//! by linear maps.
//!
//! Every report records the seed and sample count that produced it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{accept_estimate, Error, Result};
use crate::orthogonality::{decomposition_alpha, perp_rho_inf};
use crate::rho_infinity::rho_inf;
use crate::sampling::{complex_gaussian, rng_for, unit_sphere};
use crate::spaces::{dual_segment_constant, CVector, NormSpec};
use crate::text::CMatrix;

/// Slack used by the `passed` flag of an [`AuditReport`].
pub const AUDIT_SLACK: f64 = 1e-9;

/// `ρ∞` with non-convergence turned into `None`.
fn rho_inf_est(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<Option<Complex64>> {
    let (v, ok) = accept_estimate(rho_inf(spec, x, y))?;
    Ok(ok.then_some(v.value))
}

fn unit_pair(spec: &NormSpec, seed: u64, index: u64) -> (CVector, CVector) {
    let mut rng = rng_for(seed, index);
    let x = unit_sphere(spec, &mut rng);
    let y = unit_sphere(spec, &mut rng);
    (x, y)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// `max |ρ∞(x,y) − ρ∞(y,x)|` over unit pairs.
    pub raw_defect: f64,
    /// `max |ρ∞(x,y) − conj ρ∞(y,x)|` over unit pairs.
    pub conjugate_defect: f64,
    /// `max |‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2‖y‖²| / 4` over unit pairs.
    pub parallelogram_defect: f64,
    pub raw_worst_pair: (CVector, CVector),
    pub conjugate_worst_pair: (CVector, CVector),
    pub samples: usize,
    pub seed: u64,
    pub nonconverged: usize,
}

/// Raw and conjugate symmetry defects of `ρ∞` at a single pair.
pub fn pair_symmetry_defects(spec: &NormSpec, x: &CVector, y: &CVector) -> Result<(f64, f64)> {
    let a = rho_inf(spec, x, y)?.value;
    let b = rho_inf(spec, y, x)?.value;
    Ok(((a - b).norm(), (a - b.conj()).norm()))
}

/// Samples how far `ρ∞` is from being (conjugate) symmetric.
///
/// Both readings of symmetry are reported; in an inner-product space the
/// conjugate defect vanishes while the raw defect measures `2|Im⟨x,y⟩|`.
pub fn symmetry_defect(spec: &NormSpec, samples: usize, seed: u64) -> Result<SymmetryReport> {
    check_samples(samples)?;
    let mut report = SymmetryReport {
        raw_defect: 0.0,
        conjugate_defect: 0.0,
        parallelogram_defect: 0.0,
        raw_worst_pair: unit_pair(spec, seed, 0),
        conjugate_worst_pair: unit_pair(spec, seed, 0),
        samples,
        seed,
        nonconverged: 0,
    };
    for i in 0..samples as u64 {
        let (x, y) = unit_pair(spec, seed, i);
        let sq = |v: &CVector| spec.eval(v).powi(2);
        let par = (sq(&x.add(&y)) + sq(&x.sub(&y)) - 2.0 * sq(&x) - 2.0 * sq(&y)).abs() / 4.0;
        report.parallelogram_defect = report.parallelogram_defect.max(par);
        let (Some(a), Some(b)) = (rho_inf_est(spec, &x, &y)?, rho_inf_est(spec, &y, &x)?) else {
            report.nonconverged += 1;
            continue;
        };
        let raw = (a - b).norm();
        let conj = (a - b.conj()).norm();
        if raw > report.raw_defect {
            report.raw_defect = raw;
            report.raw_worst_pair = (x.clone(), y.clone());
        }
        if conj > report.conjugate_defect {
            report.conjugate_defect = conj;
            report.conjugate_worst_pair = (x, y);
        }
    }
    Ok(report)
}

/// Bound checked by [`cs_bound_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Bound {
    /// `4/π`, valid in every complex normed space.
    Universal4OverPi,
    /// `1 + 2 r_dual` from the dual segment constant.
    DualConstant,
    /// The conjectured sharp bound `1`.
    ConjectureOne,
}

impl Bound {
    pub fn value(self, spec: &NormSpec) -> Result<f64> {
        match self {
            Bound::Universal4OverPi => Ok(4.0 / PI),
            Bound::DualConstant => dual_segment_constant(spec)
                .cs_constant()
                .ok_or(Error::RUnknown),
            Bound::ConjectureOne => Ok(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub max_ratio: f64,
    pub bound: Bound,
    pub bound_used: f64,
    pub samples: usize,
    pub seed: u64,
    pub worst_pair: (CVector, CVector),
    /// `max_ratio ≤ bound_used + AUDIT_SLACK`.
    pub passed: bool,
    pub nonconverged: usize,
}

/// Largest sampled `|ρ∞(x,y)| / (‖x‖‖y‖)` compared with `bound`.
///
/// Besides the random unit pairs, the diagonal pair `(x₀, x₀)` of the first
/// sample is included, where the ratio is exactly `1`.
pub fn cs_bound_audit(
    spec: &NormSpec,
    samples: usize,
    seed: u64,
    bound: Bound,
) -> Result<AuditReport> {
    check_samples(samples)?;
    let bound_used = bound.value(spec)?;
    let first = unit_pair(spec, seed, 0);
    let mut report = AuditReport {
        max_ratio: 0.0,
        bound,
        bound_used,
        samples,
        seed,
        worst_pair: (first.0.clone(), first.0.clone()),
        passed: false,
        nonconverged: 0,
    };
    let diagonal = std::iter::once((first.0.clone(), first.0));
    let random = (0..samples as u64).map(|i| unit_pair(spec, seed, i));
    for (x, y) in diagonal.chain(random) {
        let Some(v) = rho_inf_est(spec, &x, &y)? else {
            report.nonconverged += 1;
            continue;
        };
        let ratio = v.norm() / (spec.eval(&x) * spec.eval(&y));
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.worst_pair = (x, y);
        }
    }
    report.passed = report.max_ratio <= bound_used + AUDIT_SLACK;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// `max |ρ∞₁ − ρ∞₂| / min(‖x‖₁‖y‖₁, ‖x‖₂‖y‖₂)`.
    pub empirical_c: f64,
    /// Estimated `inf ‖z‖₂ / ‖z‖₁`.
    pub m: f64,
    /// Estimated `sup ‖z‖₂ / ‖z‖₁`.
    #[serde(rename = "M")]
    pub big_m: f64,
    pub r_constant: f64,
    /// `R (1 + max(M², 1/m²))`.
    pub ceiling: f64,
    pub samples: usize,
    pub seed: u64,
    pub worst_pair: (CVector, CVector),
    pub nonconverged: usize,
}

/// Empirical constant `c` in `|ρ∞₁(x,y) − ρ∞₂(x,y)| ≤ c·min(‖x‖₁‖y‖₁, ‖x‖₂‖y‖₂)`
/// for two norms on the same space, with the predicted ceiling.
///
/// `R` is the larger of the two constants `1 + 2 r_dual` when both are
/// known and `4/π` otherwise.
pub fn norm_equivalence_constant(
    spec1: &NormSpec,
    spec2: &NormSpec,
    samples: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    check_samples(samples)?;
    if spec1.dim() != spec2.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec1.dim(),
            found: spec2.dim(),
        });
    }
    let dim = spec1.dim();
    let frame = |z: &CVector| spec2.eval(z) / spec1.eval(z);
    let mut probes: Vec<CVector> = (0..dim)
        .map(|k| CVector::basis(dim, k))
        .collect::<Result<_>>()?;
    probes.push(CVector::real(&vec![1.0; dim])?);
    let (mut m, mut big_m) = (f64::INFINITY, 0.0f64);
    for z in &probes {
        m = m.min(frame(z));
        big_m = big_m.max(frame(z));
    }
    let mut report = EquivalenceReport {
        empirical_c: 0.0,
        m: 0.0,
        big_m: 0.0,
        r_constant: 0.0,
        ceiling: 0.0,
        samples,
        seed,
        worst_pair: (probes[0].clone(), probes[0].clone()),
        nonconverged: 0,
    };
    for i in 0..samples as u64 {
        let mut rng = rng_for(seed, i);
        let x = complex_gaussian(&mut rng, dim);
        let y = complex_gaussian(&mut rng, dim);
        for z in [&x, &y] {
            m = m.min(frame(z));
            big_m = big_m.max(frame(z));
        }
        let (Some(a), Some(b)) = (rho_inf_est(spec1, &x, &y)?, rho_inf_est(spec2, &x, &y)?) else {
            report.nonconverged += 1;
            continue;
        };
        let scale = (spec1.eval(&x) * spec1.eval(&y)).min(spec2.eval(&x) * spec2.eval(&y));
        let c = (a - b).norm() / scale;
        if c > report.empirical_c {
            report.empirical_c = c;
            report.worst_pair = (x, y);
        }
    }
    let r = match (
        dual_segment_constant(spec1).cs_constant(),
        dual_segment_constant(spec2).cs_constant(),
    ) {
        (Some(a), Some(b)) => a.max(b),
        _ => 4.0 / PI,
    };
    report.m = m;
    report.big_m = big_m;
    report.r_constant = r;
    report.ceiling = r * (1.0 + (big_m * big_m).max(1.0 / (m * m)));
    Ok(report)
}

/// An orthogonal pair whose image is not orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapWitness {
    pub x: CVector,
    pub y: CVector,
    pub image_x: CVector,
    pub image_y: CVector,
    pub residual_domain: f64,
    pub residual_image: f64,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapAnalysis {
    pub operator_norm_est: f64,
    /// `max |‖Tx‖ − ‖T‖|` over sampled unit vectors.
    pub isometry_defect: f64,
    /// No witness was found among the generated orthogonal pairs.
    pub preserves: bool,
    /// `max |ρ∞(Tx,Ty) − ‖T‖²ρ∞(x,y)| / ‖T‖²` over sampled unit pairs.
    pub scale_identity_defect: f64,
    pub witnesses: Vec<MapWitness>,
    pub orthogonal_pairs: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub nonconverged: usize,
}

/// `‖Tz‖ / ‖z‖` maximized by coordinate pattern search from `start`,
/// staying on the unit sphere of `dom`.
fn ascend(dom: &NormSpec, ratio: &dyn Fn(&CVector) -> f64, start: CVector) -> f64 {
    const MAX_EVALS: usize = 20_000;
    let mut z = start.scale_real(1.0 / dom.eval(&start));
    let mut best = ratio(&z);
    let mut h = 0.25;
    let mut evals = 0;
    while h > 1e-12 && evals < MAX_EVALS {
        let mut improved = false;
        for k in 0..z.dim() {
            for d in [
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
                Complex64::new(0.0, h),
                Complex64::new(0.0, -h),
            ] {
                let mut c = z.components().to_vec();
                c[k] += d;
                let Ok(cand) = CVector::new(c) else { continue };
                let n = dom.eval(&cand);
                if n == 0.0 {
                    continue;
                }
                let cand = cand.scale_real(1.0 / n);
                evals += 1;
                let r = ratio(&cand);
                if r > best * (1.0 + 4.0 * f64::EPSILON) {
                    best = r;
                    z = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    best
}

/// Samples whether `T` maps `ρ∞`-orthogonal pairs to `ρ∞`-orthogonal pairs,
/// together with the isometry and scaling defects that characterize such
/// maps.
pub fn map_preservation_analysis(
    dom: &NormSpec,
    cod: &NormSpec,
    t: &CMatrix,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<MapAnalysis> {
    check_samples(samples)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if t.cols() != dom.dim() {
        return Err(Error::DimensionMismatch {
            expected: dom.dim(),
            found: t.cols(),
        });
    }
    if t.rows() != cod.dim() {
        return Err(Error::DimensionMismatch {
            expected: cod.dim(),
            found: t.rows(),
        });
    }
    if t.is_zero() {
        return Err(Error::ZeroMap);
    }
    let image = |z: &CVector| t.apply(z).expect("shape checked");
    let ratio = |z: &CVector| cod.eval(&image(z)) / dom.eval(z);

    let dim = dom.dim();
    let mut probes: Vec<CVector> = (0..dim)
        .map(|k| CVector::basis(dim, k))
        .collect::<Result<_>>()?;
    let units: Vec<CVector> = (0..samples as u64)
        .map(|i| unit_sphere(dom, &mut rng_for(seed, i)))
        .collect();
    probes.extend(units.iter().cloned());
    let mut ranked: Vec<(f64, usize)> = probes
        .iter()
        .enumerate()
        .map(|(i, z)| (ratio(z), i))
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut op_norm = ranked[0].0;
    for &(_, i) in ranked.iter().take(3) {
        op_norm = op_norm.max(ascend(dom, &ratio, probes[i].clone()));
    }
    if op_norm == 0.0 {
        return Err(Error::ZeroMap);
    }

    let isometry_defect = probes
        .iter()
        .map(|z| (ratio(z) - op_norm).abs())
        .fold(0.0, f64::max);

    let mut out = MapAnalysis {
        operator_norm_est: op_norm,
        isometry_defect,
        preserves: true,
        scale_identity_defect: 0.0,
        witnesses: Vec::new(),
        orthogonal_pairs: 0,
        samples,
        seed,
        tol,
        nonconverged: 0,
    };
    let n2 = op_norm * op_norm;
    for i in 0..samples as u64 {
        // stream offset keeps pair samples independent of the probes
        let mut rng = rng_for(seed, samples as u64 + i);
        let x = unit_sphere(dom, &mut rng);
        let v = unit_sphere(dom, &mut rng);
        let (tx, tv) = (image(&x), image(&v));

        match (rho_inf_est(dom, &x, &v)?, rho_inf_est(cod, &tx, &tv)?) {
            (Some(a), Some(b)) => {
                let d = (b - a * n2).norm() / n2;
                out.scale_identity_defect = out.scale_identity_defect.max(d);
            }
            _ => out.nonconverged += 1,
        }

        let alpha = match decomposition_alpha(dom, &x, &v) {
            Ok(a) => a,
            Err(Error::Nonconverged { .. }) => {
                out.nonconverged += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let y = x.axpy(alpha, &v);
        let vd = perp_rho_inf(dom, &x, &y, tol)?;
        if !vd.converged {
            out.nonconverged += 1;
            continue;
        }
        if !vd.orthogonal {
            continue;
        }
        out.orthogonal_pairs += 1;
        let ty = image(&y);
        let vi = perp_rho_inf(cod, &tx, &ty, tol)?;
        if !vi.converged {
            out.nonconverged += 1;
        } else if !vi.orthogonal {
            out.witnesses.push(MapWitness {
                x,
                y,
                image_x: tx,
                image_y: ty,
                residual_domain: vd.residual,
                residual_image: vi.residual,
                index: i,
            });
        }
    }
    out.preserves = out.witnesses.is_empty();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CVector {
        s.parse().unwrap()
    }

    #[test]
    fn l1_symmetry_witness() {
        let l1 = NormSpec::lp(1.0, 2).unwrap();
        let (raw, _) = pair_symmetry_defects(&l1, &v("1,1"), &v("1,0")).unwrap();
        assert_eq!(raw, 1.0);
    }

    #[test]
    fn detector_separates_inner_product_spaces() {
        let gram = "pd:gram=2+0i,0+1i;0-1i,2+0i:dim=2"
            .parse::<NormSpec>()
            .unwrap();
        let pd = symmetry_defect(&gram, 200, 3).unwrap();
        assert!(pd.conjugate_defect < 1e-12);
        assert!(pd.parallelogram_defect < 1e-12);
        let l1 = symmetry_defect(&NormSpec::lp(1.0, 2).unwrap(), 200, 3).unwrap();
        assert!(l1.raw_defect > 0.1 && l1.conjugate_defect > 0.1);
        assert!(l1.parallelogram_defect > 0.01);
    }

    #[test]
    fn audit_requires_known_dual_constant() {
        let poly: NormSpec = "poly:f=1,0;0,1;1,1:dim=2".parse().unwrap();
        assert!(matches!(
            cs_bound_audit(&poly, 10, 1, Bound::DualConstant),
            Err(Error::RUnknown)
        ));
        let r = cs_bound_audit(&poly, 50, 1, Bound::Universal4OverPi).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn audit_l2_attains_one() {
        let l2 = NormSpec::lp(2.0, 3).unwrap();
        let r = cs_bound_audit(&l2, 100, 5, Bound::ConjectureOne).unwrap();
        assert!(r.passed);
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equivalence_of_identical_norms_is_zero() {
        let a = NormSpec::lp(2.0, 3).unwrap();
        let b = NormSpec::pd_identity(3).unwrap();
        let r = norm_equivalence_constant(&a, &b, 100, 1).unwrap();
        assert!(r.empirical_c < 1e-12);
        assert!((r.m - 1.0).abs() < 1e-12 && (r.big_m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equivalence_l1_l2_under_ceiling() {
        let a = NormSpec::lp(1.0, 2).unwrap();
        let b = NormSpec::lp(2.0, 2).unwrap();
        let r = norm_equivalence_constant(&a, &b, 300, 1).unwrap();
        assert_eq!(r.r_constant, 5.0);
        assert!((r.m - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((r.big_m - 1.0).abs() < 1e-12);
        assert!(r.empirical_c > 0.0 && r.empirical_c <= r.ceiling);
    }

    #[test]
    fn map_errors() {
        let l1 = NormSpec::lp(1.0, 2).unwrap();
        let zero = CMatrix::new(2, 2, vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        assert!(matches!(
            map_preservation_analysis(&l1, &l1, &zero, 10, 1, 1e-6),
            Err(Error::ZeroMap)
        ));
        let wide = CMatrix::identity(3);
        assert!(map_preservation_analysis(&l1, &l1, &wide, 10, 1, 1e-6).is_err());
    }

    #[test]
    fn diag_map_on_l1_breaks_orthogonality() {
        let l1 = NormSpec::lp(1.0, 2).unwrap();
        let t = CMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let r = map_preservation_analysis(&l1, &l1, &t, 50, 42, 1e-6).unwrap();
        assert!(!r.preserves);
        assert!(!r.witnesses.is_empty());
        assert!((r.operator_norm_est - 2.0).abs() < 1e-12);
        assert!(r.isometry_defect > 1e-6);
    }
}
