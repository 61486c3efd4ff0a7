//! A near-Bell bath mixed with white noise: the entanglement handed to the
//! atoms falls off with the noise weight.

use qme::bath::{BathState, CouplingSpec};
use qme::dynamics::steady_states;
use qme::liouvillian::{generator_nondiagonal, SubsystemSpec};
use qme::measures::{log_negativity, EntanglementReport};
use qme::states::near_bell_phi;
use qme::DensityMatrix;

fn main() -> qme::Result<()> {
    let qq = [SubsystemSpec::Qubit; 2];
    let c = CouplingSpec::from_rates(&[1.0, 1.0], 1e-3)?;
    let phi = DensityMatrix::pure(&[2, 2], &near_bell_phi(0.0, 0.5))?;
    let noise = DensityMatrix::maximally_mixed(&[2, 2]);
    for p in [1.0, 0.99, 0.9, 0.7, 0.5] {
        let rho_e = DensityMatrix::mixture(&[(p, &phi), (1.0 - p, &noise)])?;
        let l = generator_nondiagonal(&BathState::mixed(rho_e.clone())?, &c, &qq)?.liouvillian()?;
        let ss = steady_states(&l, None)?;
        let rep = EntanglementReport::new(&ss.state, None)?;
        println!(
            "p = {p:.2}: LN(bath) {:.4}  dim {}  LN(ss) {:.4}  purity {:.4}",
            log_negativity(&rho_e)?,
            ss.dimension,
            rep.log_negativity,
            rep.purity
        );
    }
    Ok(())
}
