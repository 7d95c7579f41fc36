//! Orthogonality-preserving maps are exactly the scaled isometries.

use normlab::{map_preservation_analysis, CMatrix, NormSpec};
use num_complex::Complex64;

fn show(label: &str, spec: &NormSpec, t: &CMatrix) -> normlab::Result<()> {
    let a = map_preservation_analysis(spec, spec, t, 500, 42, 1e-6)?;
    println!(
        "{label:28} |T| = {:.9}  isometry defect {:.2e}  scale defect {:.2e}  preserves {}  witnesses {}",
        a.operator_norm_est,
        a.isometry_defect,
        a.scale_identity_defect,
        a.preserves,
        a.witnesses.len()
    );
    if let Some(w) = a.witnesses.first() {
        println!(
            "  e.g. x = ({}), y = ({}) maps to image residual {:.3}",
            w.x, w.y, w.residual_image
        );
    }
    Ok(())
}

fn main() -> normlab::Result<()> {
    let c = Complex64::new;
    let z = c(0.0, 0.0);
    let l1 = NormSpec::lp(1.0, 3)?;
    let shift = CMatrix::from_rows(vec![
        vec![z, z, c(0.0, 2.0)],
        vec![c(2.0, 0.0), z, z],
        vec![z, c(-2.0, 0.0), z],
    ])?;
    show("2 * phase permutation on l1", &l1, &shift)?;
    show(
        "diag(1, 2, 1) on l1",
        &l1,
        &CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]),
    )?;

    let pd = NormSpec::pd_identity(2)?;
    let unitary = CMatrix::from_rows(vec![
        vec![c(0.6, 0.0), c(0.0, 0.8)],
        vec![c(0.0, 0.8), c(0.6, 0.0)],
    ])?;
    show("unitary on C^2", &pd, &unitary)?;
    Ok(())
}
