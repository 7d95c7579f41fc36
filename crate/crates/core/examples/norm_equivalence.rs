//! How far `ρ∞` moves when the norm is replaced by an equivalent one.

use normlab::{norm_equivalence_constant, NormSpec};

fn main() -> normlab::Result<()> {
    let pairs = [
        ("lp:p=1:dim=2", "lp:p=2:dim=2"),
        ("lp:p=2:dim=3", "pd:gram=I:dim=3"),
        ("lp:p=3:dim=3", "lp:p=inf:dim=3"),
        ("wl1:w=1,3:dim=2", "pd:gram=2,1;1,2:dim=2"),
    ];
    for (a, b) in pairs {
        let (s1, s2): (NormSpec, NormSpec) = (a.parse()?, b.parse()?);
        let r = norm_equivalence_constant(&s1, &s2, 2000, 42)?;
        println!(
            "{a} vs {b}: c = {:.6}  (m = {:.4}, M = {:.4}, R = {:.4}, ceiling {:.4})",
            r.empirical_c, r.m, r.big_m, r.r_constant, r.ceiling
        );
    }
    Ok(())
}
