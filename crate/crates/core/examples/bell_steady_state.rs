//! Bell-state baths have a degenerate stationary subspace; the steady state
//! depends on where you start.

use std::f64::consts::FRAC_PI_2;

use qme::bath::{BathState, CouplingSpec};
use qme::dynamics::{bell_steady_state_map, steady_states, BellPhase};
use qme::liouvillian::{generator_nondiagonal, SubsystemSpec};
use qme::measures::{log_negativity, purity};
use qme::states::{theta_state, Bell};
use qme::DensityMatrix;

fn main() -> qme::Result<()> {
    let qq = [SubsystemSpec::Qubit; 2];
    let c = CouplingSpec::from_rates(&[1.0, 1.0], 1e-3)?;
    let l = generator_nondiagonal(&BathState::bell(Bell::PhiPlus), &c, &qq)?.liouvillian()?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "theta", "LN(ρ0)", "LN(ρss)", "purity", "map diff");
    for k in 0..=8 {
        let theta = FRAC_PI_2 * k as f64 / 8.0;
        let rho0 = DensityMatrix::pure(&[2, 2], &theta_state(theta))?;
        let ss = steady_states(&l, Some(&rho0))?;
        let map = bell_steady_state_map(&rho0, BellPhase::Zero)?;
        println!(
            "{theta:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}",
            log_negativity(&rho0)?,
            log_negativity(&ss.state)?,
            purity(&ss.state),
            ss.state.max_abs_diff(&map)
        );
    }
    let ss = steady_states(&l, None)?;
    println!("stationary dimension {}, gap {:.3}", ss.dimension, ss.gap);
    Ok(())
}
