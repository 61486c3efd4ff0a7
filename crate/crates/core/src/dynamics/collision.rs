use num_complex::Complex64 as C64;

use crate::bath::{BathState, CouplingSpec};
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, kron, partial_trace_operator, DensityMatrix, OperatorMatrix};
use crate::liouvillian::{generator_nondiagonal, SubsystemSpec};
use crate::measures::trace_distance;
use crate::states::{embed, sigma_minus};

use super::evolve::{evolve_final, Trajectory};

/// One interaction interval: ρ ↦ Tr_E[U (ρ ⊗ ρ_E) U†] with U = exp(−i H_I Δt)
/// computed exactly. The joint space is ordered systems first, then bath.
#[derive(Clone, Debug)]
pub struct CollisionMap {
    u: OperatorMatrix,
    u_dag: OperatorMatrix,
    rho_e: OperatorMatrix,
    sys_dims: Vec<usize>,
    dt: f64,
}

impl CollisionMap {
    pub fn new(bath: &BathState, coupling: &CouplingSpec, specs: &[SubsystemSpec]) -> Result<Self> {
        let n = specs.len();
        if bath.n() != n || coupling.n() != n {
            return Err(Error::Dimension(format!(
                "{} subsystems, {} bath qubits, {} couplings",
                n,
                bath.n(),
                coupling.n()
            )));
        }
        let sys_dims: Vec<usize> = specs.iter().map(|s| s.dim()).collect();
        let mut dims = sys_dims.clone();
        dims.extend(std::iter::repeat_n(2, n));
        let mut h = OperatorMatrix::zeros(&dims);
        for (l, spec) in specs.iter().enumerate() {
            let c = embed(&spec.lowering(), l, &dims);
            let s = embed(&sigma_minus(), n + l, &dims);
            let term = &c * &s.adjoint();
            let lam = C64::new(coupling.lambdas()[l], 0.0);
            h = &h + &(&term + &term.adjoint()).scale(lam);
        }
        let u = expm_hermitian(&h, coupling.dt())?;
        Ok(Self { u_dag: u.adjoint(), u, rho_e: bath.rho_e().as_operator().clone(), sys_dims, dt: coupling.dt() })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dims() != self.sys_dims.as_slice() {
            return Err(Error::Dimension(format!("state dims {:?} vs map dims {:?}", rho.dims(), self.sys_dims)));
        }
        let joint = kron(rho.as_operator(), &self.rho_e);
        let out = &(&self.u * &joint) * &self.u_dag;
        let keep: Vec<usize> = (0..self.sys_dims.len()).collect();
        DensityMatrix::new(partial_trace_operator(&out, &keep)?.hermitian_part())
    }
}

fn specs_for(rho: &DensityMatrix) -> Vec<SubsystemSpec> {
    rho.dims().iter().map(|&d| if d == 2 { SubsystemSpec::Qubit } else { SubsystemSpec::Oscillator { d } }).collect()
}

/// Single collision; subsystems of dimension 2 are qubits, others oscillators.
pub fn collision_step(rho: &DensityMatrix, bath: &BathState, c: &CouplingSpec) -> Result<DensityMatrix> {
    CollisionMap::new(bath, c, &specs_for(rho))?.apply(rho)
}

/// `steps` successive collisions, each with a fresh bath.
pub fn collision_trajectory(
    rho0: &DensityMatrix,
    bath: &BathState,
    c: &CouplingSpec,
    steps: usize,
) -> Result<Trajectory> {
    let map = CollisionMap::new(bath, c, &specs_for(rho0))?;
    let mut traj = Trajectory::default();
    traj.push(0.0, rho0.as_operator().clone())?;
    let mut rho = rho0.clone();
    for k in 1..=steps {
        rho = map.apply(&rho)?;
        traj.push(k as f64 * map.dt(), rho.as_operator().clone())?;
    }
    Ok(traj)
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// Trace distance between collision and master-equation states at t_fix.
    pub errors: Vec<f64>,
    /// Least-squares slope of log error against log Δt; None when an error vanishes.
    pub order: Option<f64>,
    /// Errors strictly decrease as Δt decreases.
    pub monotone: bool,
    pub stats: super::InvariantStats,
}

/// Compare the collision map with the master equation at t_fix for each Δt,
/// holding γ_ℓ = λ_ℓ²Δt fixed.
pub fn convergence_order(
    rho0: &DensityMatrix,
    bath: &BathState,
    gammas: &[f64],
    t_fix: f64,
    dt_list: &[f64],
) -> Result<ConvergenceReport> {
    let specs = specs_for(rho0);
    let mut errors = Vec::with_capacity(dt_list.len());
    let mut stats = super::InvariantStats::default();
    for &dt in dt_list {
        let coupling = CouplingSpec::from_rates(gammas, dt)?;
        let map = CollisionMap::new(bath, &coupling, &specs)?;
        let steps = (t_fix / dt).round() as usize;
        let mut rho = rho0.clone();
        for _ in 0..steps {
            rho = map.apply(&rho)?;
        }
        let l = generator_nondiagonal(bath, &coupling, &specs)?.liouvillian()?;
        let (me, s) = evolve_final(&l, rho0, steps as f64 * dt)?;
        stats.merge(&s);
        errors.push(trace_distance(&rho, &me)?);
    }
    let mut order_dts: Vec<(f64, f64)> = dt_list.iter().copied().zip(errors.iter().copied()).collect();
    order_dts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = order_dts.windows(2).all(|w| w[1].1 < w[0].1);
    let order =
        if errors.iter().all(|&e| e > 0.0) && errors.len() >= 2 { Some(log_log_slope(dt_list, &errors)) } else { None };
    Ok(ConvergenceReport { dts: dt_list.to_vec(), errors, order, monotone, stats })
}

fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::ket;

    #[test]
    fn zero_coupling_is_identity() {
        let rho = DensityMatrix::pure(&[2, 2], &crate::states::bell(crate::states::Bell::PsiMinus)).unwrap();
        let c = CouplingSpec::new(vec![0.0, 0.0], 0.1).unwrap();
        let out = collision_step(&rho, &BathState::bell(crate::states::Bell::PhiPlus), &c).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn single_exchange_follows_cosine() {
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        for x in [0.1, 0.7, std::f64::consts::FRAC_PI_2] {
            let c = CouplingSpec::new(vec![x / 0.01], 0.01).unwrap();
            let out = collision_step(&rho, &BathState::ground(1), &c).unwrap();
            assert!((out.get(0, 0).re - x.cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_atoms_decay_independently() {
        let rho = DensityMatrix::pure(&[2, 2], &ket("ee")).unwrap();
        let c = CouplingSpec::new(vec![10.0, 10.0], 0.01).unwrap();
        let out = collision_step(&rho, &BathState::ground(2), &c).unwrap();
        let marg = crate::linalg::partial_trace(&out, &[0]).unwrap();
        assert!((marg.get(0, 0).re - 0.1f64.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn zero_steps_returns_initial_state() {
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let c = CouplingSpec::new(vec![1.0], 0.01).unwrap();
        let t = collision_trajectory(&rho, &BathState::ground(1), &c, 0).unwrap();
        assert_eq!(t.states.len(), 1);
    }

    #[test]
    fn no_coupling_means_no_error() {
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let rep = convergence_order(&rho, &BathState::ground(1), &[0.0], 1.0, &[0.1, 0.05]).unwrap();
        assert!(rep.errors.iter().all(|&e| e == 0.0));
        assert!(rep.order.is_none());
    }
}
