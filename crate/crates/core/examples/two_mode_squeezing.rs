//! Two oscillators driven towards a two-mode squeezed vacuum, on the
//! covariance level and with a truncated Fock space.

use qme::experiments::{fig2, fock_check};

fn main() -> qme::Result<()> {
    let fig = fig2(false)?;
    println!("{:>4} {:>8} {:>10} {:>12}", "r", "|b_gg|", "Γ", "t(F=0.98)");
    for c in &fig.curves {
        println!("{:>4} {:>8.3} {:>10.3e} {:>12.2}", c.r, c.b_gg, c.gamma_eff, c.t_cross.unwrap_or(f64::NAN));
    }

    let check = fock_check(0.5, 20, 5.0)?;
    println!(
        "d = {}: covariance agrees to {:.1e}, top Fock population ≤ {:.1e}",
        check.d, check.max_cov_diff, check.max_top_population
    );
    Ok(())
}
