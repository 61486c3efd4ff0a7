//! Repeated interactions against the master equation as Δt shrinks.

use num_complex::Complex64 as C64;
use qme::bath::BathState;
use qme::dynamics::convergence_order;
use qme::states::{ket, Bell};
use qme::DensityMatrix;

fn main() -> qme::Result<()> {
    let rho0 = DensityMatrix::pure(&[2, 2], &ket("ee"))?;
    let dts = [1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0, 1.0 / 320.0, 1.0 / 640.0];
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let baths = [
        ("ground", BathState::ground(2)),
        ("Phi+", BathState::bell(Bell::PhiPlus)),
        ("Psi-", BathState::bell(Bell::PsiMinus)),
        ("|+>|+>", BathState::product(&[(h, h), (h, h)])?),
    ];
    for (name, bath) in &baths {
        let r = convergence_order(&rho0, bath, &[1.0, 1.0], 2.0, &dts)?;
        let errs: Vec<String> = r.errors.iter().map(|e| format!("{e:.3e}")).collect();
        println!("{name:<8} {}  order {:?}", errs.join(" "), r.order);
    }
    Ok(())
}
