//! The classical ℓ¹ pairs: `ρ+` and `ρ∞` disagree about orthogonality, and
//! a Birkhoff–James orthogonal pair with `ρ∞ ≠ 0`.

use normlab::{format_complex, perp_birkhoff_james, rho_inf, rho_plus, CVector, NormSpec};

fn main() -> normlab::Result<()> {
    let l1: NormSpec = "lp:p=1:dim=2".parse()?;

    let x: CVector = "1,0".parse()?;
    let y: CVector = "0+1i,0".parse()?;
    println!("x = ({x}), y = ({y})");
    println!("  rho_plus(x, y) = {}", rho_plus(&l1, &x, &y)?.re());
    println!(
        "  rho_inf(x, y)  = {}",
        format_complex(rho_inf(&l1, &x, &y)?.value)
    );

    let u: CVector = "1,1".parse()?;
    let v: CVector = "1,-1".parse()?;
    println!("u = ({u}), v = ({v})");
    println!("  rho_plus(u, v) = {}", rho_plus(&l1, &u, &v)?.re());
    println!(
        "  rho_inf(u, v)  = {}",
        format_complex(rho_inf(&l1, &u, &v)?.value)
    );

    let x: CVector = "0,1".parse()?;
    let y: CVector = "2,1".parse()?;
    let bj = perp_birkhoff_james(&l1, &x, &y, 1e-6)?;
    println!("x = ({x}), y = ({y})");
    println!(
        "  rho_inf(x, y)  = {}",
        format_complex(rho_inf(&l1, &x, &y)?.value)
    );
    println!(
        "  Birkhoff-James orthogonal: {} (residual {:e})",
        bj.orthogonal, bj.residual
    );
    Ok(())
}
