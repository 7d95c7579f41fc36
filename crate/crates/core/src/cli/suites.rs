//! Named property suites run by `normlab check` and `normlab report`.
//!
//! Each assertion is aggregated over all samples into one [`CheckRecord`].
//! For upper-bound assertions the record shows the sample whose
//! `lhs / rhs` ratio was worst, so `pass` is true exactly when every sample
//! satisfied `lhs ≤ rhs`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{
    cs_bound_audit, map_preservation_analysis, pair_symmetry_defects, symmetry_defect, Bound,
};
use crate::derivatives::{
    l1_weights, limit_trace, rho_minus, rho_plus, rho_plus_numeric, FunctionalValue,
};
use crate::error::{accept_estimate, Error, Result};
use crate::orthogonality::{decomposition_alpha, perp_birkhoff_james, perp_rho_inf, perp_semi};
use crate::rho_infinity::{
    rho_inf, rho_inf_with, rho_n, root_sum_identity, smooth_identity, InfMethod, QuadratureConfig,
};
use crate::sampling::{complex_scalar, rng_for, sparse_gaussian, unit_phase, unit_sphere};
use crate::spaces::{dual_segment_constant, CVector, NormFamily, NormSpec};
use crate::text::CMatrix;

/// Name of the record that counts samples skipped for non-convergence.
pub const NONCONVERGED_ASSERTION: &str = "nonconverged samples == 0";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub assertion: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    NdProperties,
    RhoNProps,
    Homogeneity,
    Translation,
    Bounds,
    Lp1ClosedForm,
    SmoothEquivalence,
    SymmetryDetector,
    Preservation,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::NdProperties,
        Suite::RhoNProps,
        Suite::Homogeneity,
        Suite::Translation,
        Suite::Bounds,
        Suite::Lp1ClosedForm,
        Suite::SmoothEquivalence,
        Suite::SymmetryDetector,
        Suite::Preservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NdProperties => "nd-properties",
            Suite::RhoNProps => "rho-n-props",
            Suite::Homogeneity => "homogeneity",
            Suite::Translation => "translation",
            Suite::Bounds => "bounds",
            Suite::Lp1ClosedForm => "lp1-closed-form",
            Suite::SmoothEquivalence => "smooth-equivalence",
            Suite::SymmetryDetector => "symmetry-detector",
            Suite::Preservation => "preservation",
        }
    }

    /// Norm used when none is given: `(p, dim)` of an `Lp` norm, or the
    /// identity gram for the symmetry detector.
    fn default_spec(self, dim: Option<usize>) -> Result<NormSpec> {
        match self {
            Suite::NdProperties => NormSpec::lp(2.5, dim.unwrap_or(3)),
            Suite::RhoNProps | Suite::Homogeneity | Suite::Translation => {
                NormSpec::lp(3.0, dim.unwrap_or(4))
            }
            Suite::Bounds => NormSpec::lp(1.0, dim.unwrap_or(6)),
            Suite::Lp1ClosedForm => NormSpec::lp(1.0, dim.unwrap_or(2)),
            Suite::SmoothEquivalence => NormSpec::lp(3.0, dim.unwrap_or(3)),
            Suite::SymmetryDetector => NormSpec::pd_identity(dim.unwrap_or(3)),
            Suite::Preservation => NormSpec::lp(1.0, dim.unwrap_or(3)),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown suite `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters shared by all suites.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub spec: Option<NormSpec>,
    pub dim: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Worst sample of an upper-bound assertion `lhs ≤ rhs`.
struct Worst {
    ratio: f64,
    lhs: f64,
    rhs: f64,
}

impl Worst {
    fn new() -> Self {
        Self {
            ratio: f64::NEG_INFINITY,
            lhs: 0.0,
            rhs: 0.0,
        }
    }

    fn push(&mut self, lhs: f64, rhs: f64) {
        let ratio = if lhs.is_nan() || rhs.is_nan() {
            f64::INFINITY
        } else if rhs > 0.0 {
            lhs / rhs
        } else if lhs <= rhs {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > self.ratio {
            *self = Self { ratio, lhs, rhs };
        }
    }
}

struct Recorder {
    suite: Suite,
    seed: u64,
    records: Vec<CheckRecord>,
    skipped: usize,
}

impl Recorder {
    fn new(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            seed,
            records: Vec::new(),
            skipped: 0,
        }
    }

    fn push(&mut self, assertion: &str, lhs: f64, rhs: f64, tol: f64, pass: bool) {
        self.records.push(CheckRecord {
            suite: self.suite.name().to_string(),
            assertion: assertion.to_string(),
            lhs,
            rhs,
            tol,
            pass,
            seed: self.seed,
        });
    }

    fn upper(&mut self, assertion: &str, w: &Worst, tol: f64) {
        self.push(assertion, w.lhs, w.rhs, tol, w.ratio <= 1.0);
    }

    fn at_most(&mut self, assertion: &str, lhs: f64, rhs: f64, tol: f64) {
        self.push(assertion, lhs, rhs, tol, lhs <= rhs);
    }

    fn at_least(&mut self, assertion: &str, lhs: f64, rhs: f64, tol: f64) {
        self.push(assertion, lhs, rhs, tol, lhs >= rhs);
    }

    /// Converged value, or `None` after counting a skipped sample.
    fn value(&mut self, r: Result<FunctionalValue>) -> Result<Option<FunctionalValue>> {
        let (v, ok) = accept_estimate(r)?;
        if ok {
            Ok(Some(v))
        } else {
            self.skipped += 1;
            Ok(None)
        }
    }

    fn finish(mut self) -> Vec<CheckRecord> {
        let skipped = self.skipped as f64;
        self.at_most(NONCONVERGED_ASSERTION, skipped, 0.0, 0.0);
        self.records
    }
}

fn unit_pair(spec: &NormSpec, seed: u64, i: u64) -> (CVector, CVector, Complex64, Complex64) {
    let mut rng = rng_for(seed, i);
    let x = unit_sphere(spec, &mut rng);
    let y = unit_sphere(spec, &mut rng);
    (x, y, complex_scalar(&mut rng), complex_scalar(&mut rng))
}

/// Runs `suite`, using its default norm unless `params.spec` is set.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<Vec<CheckRecord>> {
    let spec = match &params.spec {
        Some(s) => {
            if let Some(d) = params.dim.filter(|&d| d != s.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: s.dim(),
                    found: d,
                });
            }
            s.clone()
        }
        None => suite.default_spec(params.dim)?,
    };
    let mut rec = Recorder::new(suite, params.seed);
    let n = params.samples as u64;
    match suite {
        Suite::NdProperties => nd_properties(&spec, n, params.seed, &mut rec)?,
        Suite::RhoNProps => rho_n_props(&spec, n, params.seed, &mut rec)?,
        Suite::Homogeneity => homogeneity(&spec, n, params.seed, &mut rec)?,
        Suite::Translation => translation(&spec, n, params.seed, &mut rec)?,
        Suite::Bounds => bounds(&spec, params.samples, params.seed, &mut rec)?,
        Suite::Lp1ClosedForm => lp1_closed_form(&spec, n, params.seed, &mut rec)?,
        Suite::SmoothEquivalence => {
            smooth_equivalence(&spec, n, params.seed, params.tol, &mut rec)?
        }
        Suite::SymmetryDetector => symmetry_detector(&spec, params.samples, params.seed, &mut rec)?,
        Suite::Preservation => {
            preservation(&spec, params.samples, params.seed, params.tol, &mut rec)?
        }
    }
    Ok(rec.finish())
}

fn nd_properties(spec: &NormSpec, samples: u64, seed: u64, rec: &mut Recorder) -> Result<()> {
    let (mut nd1, mut nd1_numeric, mut nd2, mut nd3) =
        (Worst::new(), Worst::new(), Worst::new(), Worst::new());
    let (mut nd4, mut mono) = (Worst::new(), Worst::new());
    let slack = 16.0 * spec.dim() as f64 * f64::EPSILON;
    for i in 0..samples {
        let (x, y, alpha, beta) = unit_pair(spec, seed, i);
        let nx = spec.eval(&x);

        let (Some(m), Some(p_neg), Some(p_num)) = (
            rec.value(rho_minus(spec, &x, &y))?,
            rec.value(rho_plus(spec, &x, &y.neg()))?,
            rec.value(rho_plus_numeric(spec, &x, &y.neg()))?,
        ) else {
            continue;
        };
        nd1.push((m.re() + p_neg.re()).abs(), 1e-12);
        nd1_numeric.push(
            (m.re() + p_num.re()).abs(),
            1e-8f64.max(2.0 * (m.abs_error + p_num.abs_error)),
        );

        let (Some(a), Some(b)) = (
            rec.value(rho_plus(spec, &x, &x.axpy(alpha, &y)))?,
            rec.value(rho_plus(spec, &x, &y))?,
        ) else {
            continue;
        };
        nd2.push(
            (a.re() - alpha.re * nx * nx - b.re()).abs(),
            1e-8f64.max(2.0 * (a.abs_error + b.abs_error)),
        );

        let rot = Complex64::from_polar(1.0, beta.arg() - alpha.arg());
        let (Some(c), Some(d)) = (
            rec.value(rho_plus(spec, &x.scale(alpha), &y.scale(beta)))?,
            rec.value(rho_plus(spec, &x, &y.scale(rot)))?,
        ) else {
            continue;
        };
        let ab = alpha.norm() * beta.norm();
        nd3.push(
            (c.re() - ab * d.re()).abs(),
            1e-8f64.max(2.0 * (c.abs_error + ab * d.abs_error)),
        );

        nd4.push(b.re().abs(), nx * spec.eval(&y) + 1e-9);

        let trace = limit_trace(spec, &x, &y)?;
        for j in 1..trace.quotients.len() {
            mono.push(
                trace.quotients[j] - trace.quotients[j - 1],
                slack / trace.steps[j],
            );
        }
    }
    rec.upper("rho_minus(x,y) == -rho_plus(x,-y)", &nd1, 1e-12);
    rec.upper(
        "rho_minus(x,y) == -(numeric limit of rho_plus(x,-y))",
        &nd1_numeric,
        1e-8,
    );
    rec.upper("rho_plus(x,ax+y) == Re(a)|x|^2 + rho_plus(x,y)", &nd2, 1e-8);
    rec.upper(
        "rho_plus(ax,by) == |ab| rho_plus(x,e^{i(w-t)}y)",
        &nd3,
        1e-8,
    );
    rec.upper("|rho_plus(x,y)| <= |x||y|", &nd4, 1e-9);
    rec.upper(
        "difference quotient nonincreasing as t decreases",
        &mono,
        slack,
    );
    Ok(())
}

fn rho_n_props(spec: &NormSpec, samples: u64, seed: u64, rec: &mut Recorder) -> Result<()> {
    let (mut diag, mut bound, mut recovery) = (Worst::new(), Worst::new(), Worst::new());
    let inner = spec.is_inner_product();
    for i in 0..samples {
        let (x, y, _, _) = unit_pair(spec, seed, i);
        let nx = spec.eval(&x);
        let ny = spec.eval(&y);
        for n in [3, 4, 7, 16] {
            if let Some(v) = rec.value(rho_n(spec, &x, &x, n))? {
                diag.push((v.value - nx * nx).norm(), 1e-6);
            }
            let Some(v) = rec.value(rho_n(spec, &x, &y, n))? else {
                continue;
            };
            bound.push(v.value.norm(), 2.0 * nx * ny + 1e-9);
            if let Some(ip) = spec.inner(&x, &y) {
                recovery.push((v.value - ip).norm(), 1e-8);
            }
        }
    }
    let mut roots = Worst::new();
    for n in 3..=64 {
        roots.push(root_sum_identity(n).norm(), 1e-12);
    }
    rec.upper("rho_n(x,x) == |x|^2", &diag, 1e-6);
    rec.upper("|rho_n(x,y)| <= 2|x||y|", &bound, 1e-9);
    if inner {
        rec.upper("rho_n(x,y) == <x,y>", &recovery, 1e-8);
    }
    rec.upper("|sum c_k^2| == 0 for n in 3..=64", &roots, 1e-12);
    rec.at_most(
        "|sum c_k^2 - 2| == 0 for n = 2",
        (root_sum_identity(2) - 2.0).norm(),
        1e-12,
        1e-12,
    );
    Ok(())
}

fn homogeneity(spec: &NormSpec, samples: u64, seed: u64, rec: &mut Recorder) -> Result<()> {
    let mut w = Worst::new();
    for i in 0..samples {
        let (x, y, alpha, beta) = unit_pair(spec, seed, i);
        let (Some(a), Some(b)) = (
            rec.value(rho_inf(spec, &x.scale(alpha), &y.scale(beta)))?,
            rec.value(rho_inf(spec, &x, &y))?,
        ) else {
            continue;
        };
        let ab = alpha * beta.conj();
        let scale = (1.0 + ab.norm()) * spec.eval(&x) * spec.eval(&y);
        w.push(
            (a.value - ab * b.value).norm(),
            1e-7f64.max(3.0 * (a.abs_error + b.abs_error)) * scale,
        );
    }
    rec.upper("rho_inf(ax,by) == a conj(b) rho_inf(x,y)", &w, 1e-7);
    Ok(())
}

fn translation(spec: &NormSpec, samples: u64, seed: u64, rec: &mut Recorder) -> Result<()> {
    let mut w = Worst::new();
    for i in 0..samples {
        let (x, y, alpha, _) = unit_pair(spec, seed, i);
        let nx = spec.eval(&x);
        let (Some(a), Some(b)) = (
            rec.value(rho_inf(spec, &x, &x.axpy(alpha, &y)))?,
            rec.value(rho_inf(spec, &x, &y))?,
        ) else {
            continue;
        };
        let scale = (1.0 + alpha.norm()) * nx * spec.eval(&y);
        w.push(
            (a.value - alpha.conj() * nx * nx - b.value).norm(),
            1e-7f64.max(3.0 * (a.abs_error + b.abs_error)) * scale,
        );
    }
    rec.upper("rho_inf(x,ax+y) == conj(a)|x|^2 + rho_inf(x,y)", &w, 1e-7);
    Ok(())
}

fn conjecture_applies(spec: &NormSpec) -> bool {
    spec.dim() == 1
        || matches!(spec.family(), NormFamily::Lp { p } if p.is_finite())
        || matches!(spec.family(), NormFamily::PdInner { .. })
}

fn bounds(spec: &NormSpec, samples: usize, seed: u64, rec: &mut Recorder) -> Result<()> {
    let report = cs_bound_audit(spec, samples, seed, Bound::Universal4OverPi)?;
    rec.skipped += report.nonconverged;
    let r = report.max_ratio;
    rec.at_most("max |rho_inf|/(|x||y|) <= 4/pi", r, 4.0 / PI + 1e-6, 1e-6);
    if let Some(c) = dual_segment_constant(spec).cs_constant() {
        rec.at_most("max |rho_inf|/(|x||y|) <= 1 + 2 r_dual", r, c + 1e-6, 1e-6);
    }
    if conjecture_applies(spec) {
        let exact = l1_weights(spec).is_some() || spec.is_inner_product();
        let tol = if exact { 1e-9 } else { 1e-6 };
        rec.at_most("max |rho_inf|/(|x||y|) <= 1", r, 1.0 + tol, tol);
    }
    Ok(())
}

fn lp1_closed_form(spec: &NormSpec, samples: u64, seed: u64, rec: &mut Recorder) -> Result<()> {
    if l1_weights(spec).is_none() {
        return Err(Error::InvalidParameter(format!(
            "suite lp1-closed-form needs an lp:p=1 or wl1 norm, got `{spec}`"
        )));
    }
    let (mut quad, mut limit, mut mono) = (Worst::new(), Worst::new(), Worst::new());
    let cfg = QuadratureConfig::default();
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let x = sparse_gaussian(&mut rng, spec.dim(), 0.3);
        let y = sparse_gaussian(&mut rng, spec.dim(), 0.3);
        let scale = spec.eval(&x) * spec.eval(&y);
        let cf = rho_inf_with(spec, &x, &y, InfMethod::ClosedForm, cfg)?
            .0
            .value;
        let q = match rho_inf_with(spec, &x, &y, InfMethod::Quadrature, cfg) {
            Ok((v, _)) => Some(v),
            Err(e) => rec.value(Err(e))?,
        };
        if let Some(q) = q {
            quad.push((q.value - cf).norm(), 1e-6 * scale);
        }
        let exact = rho_plus(spec, &x, &y)?.re();
        if let Some(num) = rec.value(rho_plus_numeric(spec, &x, &y))? {
            limit.push((num.re() - exact).abs(), 1e-6 * scale);
        }
        let mut prev: Option<f64> = None;
        for n in [32, 64, 128, 256] {
            let err = (rho_n(spec, &x, &y, n)?.value - cf).norm();
            if let Some(p) = prev {
                mono.push(err - p, 1e-12 * scale);
            }
            prev = Some(err);
        }
    }
    rec.upper("|quadrature - closed form| <= 1e-6 |x||y|", &quad, 1e-6);
    rec.upper(
        "|numeric limit - closed form rho_plus| <= 1e-6 |x||y|",
        &limit,
        1e-6,
    );
    rec.upper("|rho_n - rho_inf| nonincreasing in n >= 32", &mono, 1e-12);
    Ok(())
}

fn smooth_equivalence(
    spec: &NormSpec,
    samples: u64,
    seed: u64,
    tol: f64,
    rec: &mut Recorder,
) -> Result<()> {
    if !spec.is_smooth_family() {
        return Err(Error::NotSmooth);
    }
    let mut identity = Worst::new();
    let (mut bj_mismatch, mut semi_mismatch, mut orthogonal) = (0usize, 0usize, 0usize);
    let cfg = QuadratureConfig::default();
    for i in 0..samples {
        let (x, v, _, _) = unit_pair(spec, seed, i);
        let y = if i % 2 == 0 {
            match decomposition_alpha(spec, &x, &v) {
                Ok(a) => x.axpy(a, &v),
                Err(Error::Nonconverged { .. }) => {
                    rec.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            }
        } else {
            v
        };
        let q = match rho_inf_with(spec, &x, &y, InfMethod::Quadrature, cfg) {
            Ok((v, _)) => Some(v),
            Err(e) => rec.value(Err(e))?,
        };
        let (Some(q), Some(s)) = (q, rec.value(smooth_identity(spec, &x, &y))?) else {
            continue;
        };
        identity.push(
            (q.value - s.value).norm(),
            1e-6 * spec.eval(&x) * spec.eval(&y),
        );

        let a = perp_rho_inf(spec, &x, &y, tol)?;
        let b = perp_birkhoff_james(spec, &x, &y, tol)?;
        let c = perp_semi(spec, &x, &y, tol)?;
        if !(a.converged && c.converged) {
            rec.skipped += 1;
            continue;
        }
        orthogonal += usize::from(a.orthogonal);
        bj_mismatch += usize::from(a.orthogonal != b.orthogonal);
        semi_mismatch += usize::from(a.orthogonal != c.orthogonal);
    }
    rec.upper(
        "|quadrature - (rho_plus(x,y) + i rho_plus(x,iy))| <= 1e-6 |x||y|",
        &identity,
        1e-6,
    );
    rec.at_most(
        "rho_inf and birkhoff-james verdict mismatches == 0",
        bj_mismatch as f64,
        0.0,
        tol,
    );
    rec.at_most(
        "rho_inf and semi verdict mismatches == 0",
        semi_mismatch as f64,
        0.0,
        tol,
    );
    rec.at_least(
        "rho_inf-orthogonal pairs tested >= 1",
        orthogonal as f64,
        1.0,
        tol,
    );
    Ok(())
}

fn symmetry_detector(spec: &NormSpec, samples: usize, seed: u64, rec: &mut Recorder) -> Result<()> {
    let report = symmetry_defect(spec, samples, seed)?;
    rec.skipped += report.nonconverged;
    let inner = spec.is_inner_product();
    if inner || spec.dim() == 1 {
        rec.at_most(
            "conjugate symmetry defect <= 1e-7",
            report.conjugate_defect,
            1e-7,
            1e-7,
        );
        rec.at_most(
            "parallelogram defect <= 1e-7",
            report.parallelogram_defect,
            1e-7,
            1e-7,
        );
    } else {
        rec.at_least("raw symmetry defect >= 0.1", report.raw_defect, 0.1, 0.1);
        rec.at_least(
            "parallelogram defect > 1e-7",
            report.parallelogram_defect,
            1e-7,
            1e-7,
        );
        if matches!(spec.family(), NormFamily::Lp { p } if *p == 1.0) {
            let mut u = vec![Complex64::new(0.0, 0.0); spec.dim()];
            u[0] = Complex64::new(1.0, 0.0);
            let w = CVector::new(u.clone())?;
            u[1] = Complex64::new(1.0, 0.0);
            let u = CVector::new(u)?;
            let (raw, _) = pair_symmetry_defects(spec, &u, &w)?;
            rec.at_most(
                "|raw defect at ((1,1),(1,0)) - 1| == 0",
                (raw - 1.0).abs(),
                0.0,
                0.0,
            );
        }
    }
    Ok(())
}

/// Whether a coordinate permutation with unimodular phases is an isometry.
fn permutations_are_isometries(spec: &NormSpec) -> bool {
    match spec.family() {
        NormFamily::Lp { .. } => true,
        NormFamily::WeightedL1 { weights } => weights.iter().all(|w| *w == weights[0]),
        NormFamily::PdInner { gram } => {
            let n = spec.dim();
            (0..n * n).all(|k| {
                let target = if k / n == k % n { 1.0 } else { 0.0 };
                gram[k] == Complex64::new(target, 0.0)
            })
        }
        NormFamily::Polyhedral { .. } => false,
    }
}

fn preservation(
    spec: &NormSpec,
    samples: usize,
    seed: u64,
    tol: f64,
    rec: &mut Recorder,
) -> Result<()> {
    let n = spec.dim();
    let zero = Complex64::new(0.0, 0.0);
    // 2·(cyclic shift)·(phases): a scaled isometry with ‖T‖ = 2
    let mut data = vec![zero; n * n];
    let mut rng = rng_for(seed, u64::MAX);
    let iso_factor = 2.0;
    if permutations_are_isometries(spec) {
        for c in 0..n {
            data[((c + 1) % n) * n + c] = unit_phase(&mut rng) * iso_factor;
        }
    } else {
        for c in 0..n {
            data[c * n + c] = Complex64::new(iso_factor, 0.0);
        }
    }
    let iso = CMatrix::new(n, n, data)?;
    let a = map_preservation_analysis(spec, spec, &iso, samples, seed, tol)?;
    rec.skipped += a.nonconverged;
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    rec.at_least(
        "scaled isometry preserves orthogonality",
        flag(a.preserves),
        1.0,
        tol,
    );
    rec.at_most(
        "scaled isometry |op norm - 2|",
        (a.operator_norm_est - iso_factor).abs(),
        1e-6 * iso_factor,
        1e-6,
    );
    rec.at_most(
        "scaled isometry isometry_defect <= tol |T|",
        a.isometry_defect,
        tol * a.operator_norm_est,
        tol,
    );
    rec.at_most(
        "scaled isometry scale_identity_defect <= 10 tol",
        a.scale_identity_defect,
        10.0 * tol,
        tol,
    );

    if n >= 2 {
        let mut d = vec![Complex64::new(1.0, 0.0); n];
        d[1] = Complex64::new(2.0, 0.0);
        let a = map_preservation_analysis(spec, spec, &CMatrix::diagonal(&d), samples, seed, tol)?;
        rec.skipped += a.nonconverged;
        rec.at_least(
            "diag(1,2,..) witnesses >= 1",
            a.witnesses.len() as f64,
            1.0,
            tol,
        );
        rec.at_least(
            "diag(1,2,..) isometry_defect > tol",
            a.isometry_defect,
            tol,
            tol,
        );
        rec.at_least(
            "diag(1,2,..) does not preserve",
            flag(!a.preserves),
            1.0,
            tol,
        );
    }
    Ok(())
}
