//! Cauchy–Schwarz type bounds for `|ρ∞(x, y)| / (‖x‖‖y‖)`.

use normlab::{cs_bound_audit, dual_segment_constant, Bound, NormSpec};

fn main() -> normlab::Result<()> {
    let families = [
        "lp:p=1:dim=4",
        "lp:p=1.5:dim=4",
        "lp:p=3:dim=4",
        "lp:p=inf:dim=4",
        "wl1:w=1,2,3,4:dim=4",
        "poly:f=1,0;0,1;1,1;1,0+1i:dim=2",
    ];
    for text in families {
        let spec: NormSpec = text.parse()?;
        let info = dual_segment_constant(&spec);
        for bound in [
            Bound::ConjectureOne,
            Bound::DualConstant,
            Bound::Universal4OverPi,
        ] {
            match cs_bound_audit(&spec, 2000, 42, bound) {
                Ok(r) => println!(
                    "{text:34} {bound:?}: max ratio {:.9} vs {:.9} -> {}",
                    r.max_ratio,
                    r.bound_used,
                    if r.passed { "pass" } else { "FAIL" }
                ),
                Err(e) => println!("{text:34} {bound:?}: {e} (r_dual {:?})", info.r_dual),
            }
        }
    }
    Ok(())
}
