//! Numerical laboratory for the geometry of finite-dimensional complex
//! normed spaces.
//!
//! The crate evaluates the one-sided norm derivatives `ρ±` and the
//! functionals built from them (`ρ`, `ρ_λ`, `ρ_λ^υ`, the roots-of-unity
//! average `ρ_n` and its limit `ρ_∞`), decides the orthogonality relations
//! they induce, and audits inequalities and characterizations by seeded
//! random sampling.
//!
//! ```
//! use normlab::{format_complex, rho_inf, CVector, NormSpec};
//!
//! let spec: NormSpec = "lp:p=1:dim=2".parse().unwrap();
//! let x: CVector = "1,0".parse().unwrap();
//! let y: CVector = "0+1i,0".parse().unwrap();
//! let v = rho_inf(&spec, &x, &y).unwrap();
//! assert_eq!(format_complex(v.value), "0-1i");
//! ```
//!
//! Modules:
//!
//! - [`spaces`]: vectors, norm families, norm evaluation, dual-geometry lookup.
//! - [`derivatives`]: `ρ+`, `ρ−`, `ρ`, `ρ_λ`, `ρ_λ^υ`.
//! - [`rho_infinity`]: `ρ_n`, `ρ_∞`, periodic quadrature.
//! - [`orthogonality`]: the relations `⊥_{ρ∞}`, `⊥_{ρ+}`, `⊥_B`, `⊥_s` and witness search.
//! - [`analysis`]: symmetry detector, Cauchy–Schwarz audits, norm equivalence,
//!   orthogonality-preserving maps.
//! - [`cli`]: the `normlab` command-line front end.

pub mod analysis;
pub mod cli;
pub mod derivatives;
mod error;
mod minimize;
pub mod orthogonality;
pub mod rho_infinity;
pub mod sampling;
pub mod spaces;
pub mod text;

pub use analysis::{
    cs_bound_audit, map_preservation_analysis, norm_equivalence_constant, symmetry_defect,
    AuditReport, Bound, EquivalenceReport, MapAnalysis, SymmetryReport,
};
pub use derivatives::{
    rho_lambda, rho_lambda_upsilon, rho_milicic, rho_minus, rho_plus, rho_plus_numeric,
    FunctionalValue, Path,
};
pub use error::{Error, Result};
pub use orthogonality::{
    decomposition_alpha, perp_birkhoff_james, perp_rho_inf, perp_rho_plus, perp_semi,
    relation_compare, OrthoVerdict, Relation, SamplerConfig, SearchOutcome, Witness,
};
pub use rho_infinity::{
    rho_inf, rho_inf_with, rho_n, root_sum_identity, InfMethod, QuadratureConfig, QuadratureTrace,
};
pub use spaces::{
    dual_segment_constant, norm, CVector, DualInfo, NormFamily, NormSpec, Provenance,
};
pub use text::{format_complex, parse_complex, CMatrix};
