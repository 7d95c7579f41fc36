//! The four orthogonality relations on the same pairs.

use normlab::orthogonality::{perp, semi_inner_product};
use normlab::{decomposition_alpha, format_complex, CVector, NormSpec, Relation};

fn report(spec: &NormSpec, x: &CVector, y: &CVector) -> normlab::Result<()> {
    println!("{spec}: x = ({x}), y = ({y})");
    for rel in [
        Relation::RhoInf,
        Relation::RhoPlus,
        Relation::BirkhoffJames,
        Relation::Semi,
    ] {
        match perp(spec, rel, x, y, 1e-6) {
            Ok(v) => println!(
                "  {:9} orthogonal = {:5}  residual = {:.2e}",
                rel.as_str(),
                v.orthogonal,
                v.residual
            ),
            Err(e) => println!("  {:9} {e}", rel.as_str()),
        }
    }
    Ok(())
}

fn main() -> normlab::Result<()> {
    let l3: NormSpec = "lp:p=3:dim=3".parse()?;
    let x: CVector = "1,0.5-0.5i,-0.25".parse()?;
    let w: CVector = "0.2,1,1i".parse()?;
    // x ⊥ αx + w by construction
    let alpha = decomposition_alpha(&l3, &x, &w)?;
    let y = x.axpy(alpha, &w);
    println!("decomposition alpha = {}", format_complex(alpha));
    report(&l3, &x, &y)?;
    let (sip, _) = semi_inner_product(&l3, &y, &x)?;
    println!("  semi-inner product [y, x] = {}", format_complex(sip));

    let l1: NormSpec = "lp:p=1:dim=2".parse()?;
    report(&l1, &"0,1".parse()?, &"2,1".parse()?)?;
    Ok(())
}
