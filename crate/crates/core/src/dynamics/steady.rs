use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, DensityMatrix, OperatorMatrix, ZERO};
use crate::liouvillian::Liouvillian;

/// Relative threshold below which a singular value or eigenvalue counts as zero.
pub const KERNEL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SteadyStateResult {
    /// Dimension of the stationary subspace.
    pub dimension: usize,
    /// Stationary operators spanning the kernel.
    pub basis: Vec<OperatorMatrix>,
    /// The steady state selected by the initial condition.
    pub state: DensityMatrix,
    pub unique: bool,
    /// Number of eigenvalues with |λ| ≤ KERNEL_TOL · spectral radius.
    pub zero_eigenvalues: usize,
    /// Smallest decay rate −Re λ among the remaining eigenvalues.
    pub gap: f64,
}

fn mat_to_op(dims: &[usize], m: &Mat<C64>) -> Result<OperatorMatrix> {
    let v: Vec<C64> = (0..m.nrows()).map(|i| m[(i, 0)]).collect();
    OperatorMatrix::unvectorize(dims, &v)
}

fn normalized_state(op: OperatorMatrix) -> Result<DensityMatrix> {
    let tr = op.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::InvalidState("stationary operator has zero trace".into()));
    }
    DensityMatrix::new(op.scale(tr.inv()).hermitian_part())
}

/// Stationary subspace of a generator and the steady state reached from
/// `rho0` (the maximally mixed state when absent). In the degenerate case the
/// state is the spectral projection P = R (Lᴴ R)⁻¹ Lᴴ of ρ₀, built from
/// bi-orthogonal right and left null vectors.
pub fn steady_states(l: &Liouvillian, rho0: Option<&DensityMatrix>) -> Result<SteadyStateResult> {
    let dims = l.dims().to_vec();
    if let Some(r) = rho0 {
        if r.dims() != dims.as_slice() {
            return Err(Error::Dimension(format!("state dims {:?} vs generator dims {:?}", r.dims(), dims)));
        }
    }
    let m = l.matrix();
    let right = kernel_basis(m, KERNEL_TOL)?;
    let m_adj = m.adjoint().to_owned();
    let left = kernel_basis(m_adj.as_ref(), KERNEL_TOL)?;
    if right.is_empty() || right.len() != left.len() {
        return Err(Error::Eigen(format!("kernel dimensions disagree: right {} left {}", right.len(), left.len())));
    }

    let eig = l.spectrum()?;
    let radius = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let zero = |z: &C64| z.norm() <= KERNEL_TOL * radius.max(f64::MIN_POSITIVE);
    let zero_eigenvalues = eig.iter().filter(|z| zero(z)).count();
    let gap = eig.iter().filter(|z| !zero(z)).map(|z| -z.re).fold(f64::INFINITY, f64::min);

    let k = right.len();
    let n2 = m.nrows();
    let r = Mat::<C64>::from_fn(n2, k, |i, j| right[j][i]);
    let lk = Mat::<C64>::from_fn(n2, k, |i, j| left[j][i]);
    let basis = (0..k).map(|j| OperatorMatrix::unvectorize(&dims, &right[j])).collect::<Result<Vec<_>>>()?;

    let state = if k == 1 {
        normalized_state(basis[0].clone())?
    } else {
        let start = match rho0 {
            Some(r0) => r0.clone(),
            None => DensityMatrix::maximally_mixed(&dims),
        };
        let v0 = start.as_operator().vectorize();
        let v = Mat::<C64>::from_fn(n2, 1, |i, _| v0[i]);
        let g = lk.adjoint() * &r;
        let rhs = lk.adjoint() * &v;
        let x = g.partial_piv_lu().solve(&rhs);
        normalized_state(mat_to_op(&dims, &(&r * &x))?)?
    };

    Ok(SteadyStateResult { dimension: k, basis, state, unique: k == 1, zero_eigenvalues, gap })
}

/// Phase of the Bell-state bath (|ee⟩ + e^{iφ}|gg⟩)/√2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellPhase {
    Zero,
    Pi,
}

/// Closed-form steady state for a (|ee⟩ ± |gg⟩)/√2 bath with equal rates.
///
/// Only the real part of ρ⁰_{ee,gg} enters; the imaginary part decays.
pub fn bell_steady_state_map(rho0: &DensityMatrix, phase: BellPhase) -> Result<DensityMatrix> {
    if rho0.dims() != [2, 2] {
        return Err(Error::Dimension(format!("two-qubit state expected, got dims {:?}", rho0.dims())));
    }
    let s = match phase {
        BellPhase::Zero => 1.0,
        BellPhase::Pi => -1.0,
    };
    let p = |i: usize| rho0.get(i, i).re;
    let (ee, eg, ge, gg) = (p(0), p(1), p(2), p(3));
    let x = s * rho0.get(0, 3).re;
    let a = (ee + gg - x + 0.5 * eg + 0.5 * ge) / 3.0;
    let b = (0.5 * ee + 0.5 * gg + x + eg + ge) / 3.0;
    let c = -(ee + gg - 4.0 * x - eg - ge) / 6.0;
    let diag = [a, b, b, a];
    let op = OperatorMatrix::from_fn(&[2, 2], |i, j| match (i, j) {
        (i, j) if i == j => C64::new(diag[i], 0.0),
        (0, 3) | (3, 0) => C64::new(s * c, 0.0),
        _ => ZERO,
    });
    DensityMatrix::new(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{BathState, CouplingSpec};
    use crate::liouvillian::{generator_diagonal, SubsystemSpec};
    use crate::states::{bell, ket, Bell};

    const QQ: [SubsystemSpec; 2] = [SubsystemSpec::Qubit, SubsystemSpec::Qubit];

    fn liouvillian(bath: &BathState) -> Liouvillian {
        let c = CouplingSpec::from_rates(&[1.0, 1.0], 1e-3).unwrap();
        generator_diagonal(bath, &c, &QQ).unwrap().liouvillian().unwrap()
    }

    fn pure(k: &[C64]) -> DensityMatrix {
        DensityMatrix::pure(&[2, 2], k).unwrap()
    }

    #[test]
    fn ground_bath_relaxes_to_gg() {
        let ss = steady_states(&liouvillian(&BathState::ground(2)), None).unwrap();
        assert!(ss.unique);
        assert!(ss.state.max_abs_diff(&pure(&ket("gg"))) < 1e-12);
    }

    #[test]
    fn bell_bath_is_degenerate() {
        let ss = steady_states(&liouvillian(&BathState::bell(Bell::PhiPlus)), None).unwrap();
        assert!(!ss.unique);
        assert!(ss.dimension >= 2);
    }

    #[test]
    fn werner_state_from_ee() {
        let out = bell_steady_state_map(&pure(&ket("ee")), BellPhase::Zero).unwrap();
        let phi_m = pure(&bell(Bell::PhiMinus));
        let expected =
            DensityMatrix::mixture(&[(2.0 / 3.0, &DensityMatrix::maximally_mixed(&[2, 2])), (1.0 / 3.0, &phi_m)])
                .unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn phi_minus_is_a_fixed_point_of_the_map() {
        let phi_m = pure(&bell(Bell::PhiMinus));
        let out = bell_steady_state_map(&phi_m, BellPhase::Zero).unwrap();
        assert!(out.max_abs_diff(&phi_m) < 1e-15);
    }

    #[test]
    fn map_matches_spectral_projection() {
        let l = liouvillian(&BathState::bell(Bell::PhiPlus));
        let rho0 = pure(&[C64::new(0.3, 0.2), C64::new(0.1, -0.4), C64::new(0.5, 0.0), C64::new(-0.2, 0.6)]);
        let ss = steady_states(&l, Some(&rho0)).unwrap();
        let map = bell_steady_state_map(&rho0, BellPhase::Zero).unwrap();
        assert!(ss.state.max_abs_diff(&map) < 1e-10);
        assert!(l.apply(ss.state.as_operator()).unwrap().max_abs() < 1e-9);
    }
}
