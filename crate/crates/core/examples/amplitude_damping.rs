//! A single qubit relaxing into a stream of ground-state bath qubits.

use qme::bath::{BathState, CouplingSpec};
use qme::dynamics::{evolve_me, Integrator};
use qme::liouvillian::{generator_nondiagonal, SubsystemSpec};
use qme::states::ket;
use qme::DensityMatrix;

fn main() -> qme::Result<()> {
    let gamma = 0.5;
    let c = CouplingSpec::from_rates(&[gamma], 1e-3)?;
    let l = generator_nondiagonal(&BathState::ground(1), &c, &[SubsystemSpec::Qubit])?.liouvillian()?;
    let rho0 = DensityMatrix::pure(&[2], &ket("e"))?;
    let traj = evolve_me(&l, &rho0, Integrator { dt: 1e-3, t_end: 6.0, stride: 1000 })?;

    println!("{:>6} {:>12} {:>12}", "t", "p_e", "exp(-γt)");
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        println!("{t:>6.2} {:>12.8} {:>12.8}", rho.get(0, 0).re, (-gamma * t).exp());
    }
    println!("invariants: {:?}", traj.stats);
    Ok(())
}
