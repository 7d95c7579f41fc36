//! `ρ_n` (the roots-of-unity average) converging to `ρ∞`, and the root
//! identity behind it.

use normlab::{format_complex, rho_inf, rho_n, root_sum_identity, CVector, NormSpec};

fn main() -> normlab::Result<()> {
    for n in [2, 3, 4, 7, 16] {
        println!(
            "n = {n:2}: |sum of squared roots of unity| = {:.1e}",
            root_sum_identity(n).norm()
        );
    }

    // on ℓ¹ the integrand is a trigonometric polynomial of degree one and
    // every rho_n with n > 2 is already exact
    let l1: NormSpec = "lp:p=1:dim=3".parse()?;
    let x: CVector = "1+1i,0,0.25i".parse()?;
    let y: CVector = "0.3,1-2i,0.7+0.1i".parse()?;
    let exact = rho_inf(&l1, &x, &y)?.value;
    println!(
        "{l1}: |rho_3 - rho_inf| = {:.1e}",
        (rho_n(&l1, &x, &y, 3)?.value - exact).norm()
    );

    // three active coordinates of the max norm make the integrand kinked
    let linf: NormSpec = "lp:p=inf:dim=3".parse()?;
    let x: CVector = "1,1,1".parse()?;
    let y: CVector = "0.3+1i,-1,2i".parse()?;
    let exact = rho_inf(&linf, &x, &y)?.value;
    println!("{linf}: rho_inf = {}", format_complex(exact));
    let mut n = 8;
    while n <= 4096 {
        let v = rho_n(&linf, &x, &y, n)?.value;
        println!(
            "  n = {n:5}  |rho_n - rho_inf| = {:.3e}",
            (v - exact).norm()
        );
        n *= 2;
    }

    let pd: NormSpec = "pd:gram=2,0+1i;0-1i,2:dim=2".parse()?;
    let (u, w): (CVector, CVector) = ("1,0+1i".parse()?, "0.5,-1".parse()?);
    println!(
        "{pd}: rho_3 = {} equals the inner product at every n > 2",
        format_complex(rho_n(&pd, &u, &w, 3)?.value)
    );
    Ok(())
}
