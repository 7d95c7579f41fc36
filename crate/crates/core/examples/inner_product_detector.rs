//! Symmetry of `ρ∞` separates inner-product norms from the rest.

use normlab::analysis::pair_symmetry_defects;
use normlab::{symmetry_defect, CVector, NormSpec};

fn main() -> normlab::Result<()> {
    for text in [
        "pd:gram=I:dim=3",
        "pd:gram=3,1;1,2:dim=2",
        "lp:p=2:dim=3",
        "lp:p=1:dim=3",
        "lp:p=4:dim=3",
        "lp:p=inf:dim=2",
    ] {
        let spec: NormSpec = text.parse()?;
        let r = symmetry_defect(&spec, 500, 42)?;
        println!(
            "{text:24} raw {:.3e}  conjugate {:.3e}  parallelogram {:.3e}",
            r.raw_defect, r.conjugate_defect, r.parallelogram_defect
        );
    }
    let l1: NormSpec = "lp:p=1:dim=2".parse()?;
    let (u, w): (CVector, CVector) = ("1,1".parse()?, "1,0".parse()?);
    let (raw, conj) = pair_symmetry_defects(&l1, &u, &w)?;
    println!("l1 pair ({u}), ({w}): raw {raw}, conjugate {conj}");
    Ok(())
}
