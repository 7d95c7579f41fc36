//! Seeded search for pairs orthogonal in one sense but not another.

use normlab::{relation_compare, NormSpec, Relation, SamplerConfig};

fn main() -> normlab::Result<()> {
    let l1: NormSpec = "lp:p=1:dim=2".parse()?;
    let searches = [
        (Relation::RhoPlus, Relation::RhoInf, 1000),
        (Relation::BirkhoffJames, Relation::RhoInf, 1000),
        (Relation::RhoInf, Relation::BirkhoffJames, 10_000),
    ];
    for (a, b, samples) in searches {
        let out = relation_compare(&l1, a, b, &SamplerConfig::new(2, samples, 42))?;
        println!(
            "{a} but not {b}: {} witnesses among {} pairs satisfying {a}",
            out.witnesses.len(),
            out.satisfied
        );
        if let Some(w) = out.witnesses.first() {
            println!("  sample {}: x = ({}), y = ({})", w.index, w.x, w.y);
            println!("  residuals {:.2e} / {:.2e}", w.residual_a, w.residual_b);
        }
    }

    let pd = NormSpec::pd_identity(4)?;
    let out = relation_compare(
        &pd,
        Relation::RhoInf,
        Relation::BirkhoffJames,
        &SamplerConfig::new(4, 1000, 42),
    )?;
    println!("inner-product space: {} witnesses", out.witnesses.len());
    Ok(())
}
