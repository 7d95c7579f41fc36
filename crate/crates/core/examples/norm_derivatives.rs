//! The family of real functionals built from the one-sided derivatives,
//! on a smooth and a non-smooth point.

use normlab::derivatives::limit_trace;
use normlab::{
    rho_lambda, rho_lambda_upsilon, rho_milicic, rho_minus, rho_plus, rho_plus_numeric, CVector,
    NormSpec,
};

fn show(spec: &NormSpec, x: &CVector, y: &CVector) -> normlab::Result<()> {
    println!("{spec}: x = ({x}), y = ({y})");
    println!("  rho_plus   {:+.12}", rho_plus(spec, x, y)?.re());
    println!("  rho_minus  {:+.12}", rho_minus(spec, x, y)?.re());
    println!("  rho        {:+.12}", rho_milicic(spec, x, y)?.re());
    for lambda in [0.25, 0.75] {
        println!(
            "  rho_{lambda}   {:+.12}",
            rho_lambda(spec, x, y, lambda)?.re()
        );
    }
    for k in [1, 2, 3] {
        println!(
            "  rho_0.5^(1/{}) {:+.12}",
            2 * k - 1,
            rho_lambda_upsilon(spec, x, y, 0.5, k)?.re()
        );
    }
    Ok(())
}

fn main() -> normlab::Result<()> {
    let l1: NormSpec = "lp:p=1:dim=3".parse()?;
    let x: CVector = "1,0,-1".parse()?;
    let y: CVector = "0.5,1-1i,2".parse()?;
    show(&l1, &x, &y)?;

    let l3: NormSpec = "lp:p=3:dim=3".parse()?;
    show(&l3, &x, &y)?;

    // the numeric one-sided limit against the closed form
    let trace = limit_trace(&l3, &x, &y)?;
    println!("numeric limit on {l3}:");
    for (t, g) in trace.steps.iter().zip(&trace.quotients) {
        println!("  t = {t:.3e}  quotient = {g:.12}");
    }
    let numeric = rho_plus_numeric(&l3, &x, &y)?;
    println!(
        "  extrapolated {:.12} (error estimate {:.1e})",
        numeric.re(),
        numeric.abs_error
    );
    Ok(())
}
