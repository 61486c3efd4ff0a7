//! Entanglement and state diagnostics.

use faer::Mat;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, DensityMatrix, OperatorMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct EntanglementReport {
    pub pt_spectrum: Vec<f64>,
    pub log_negativity: f64,
    pub purity: f64,
    pub fidelity: Option<(String, f64)>,
}

impl EntanglementReport {
    pub fn new(rho: &DensityMatrix, target: Option<(&str, &DensityMatrix)>) -> Result<Self> {
        let pt_spectrum = pt_spectrum(rho)?;
        let log_negativity = ln_from_spectrum(&pt_spectrum);
        let fidelity = match target {
            Some((name, t)) => Some((name.to_string(), state_fidelity(rho, t)?)),
            None => None,
        };
        Ok(Self { pt_spectrum, log_negativity, purity: purity(rho), fidelity })
    }
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 2 {
        return Err(Error::NotBipartite(rho.dims().len()));
    }
    if rho.dims() != [2, 2] {
        return Err(Error::Dimension(format!("two qubits expected, got dims {:?}", rho.dims())));
    }
    Ok(())
}

/// Ascending eigenvalues of the partial transpose on the second qubit.
pub fn pt_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    require_two_qubits(rho)?;
    partial_transpose(rho, 1)?.eigenvalues_hermitian()
}

fn ln_from_spectrum(spec: &[f64]) -> f64 {
    let ln = spec.iter().map(|v| v.abs()).sum::<f64>().log2();
    if ln < 0.0 && ln > -1e-12 {
        0.0
    } else {
        ln
    }
}

/// log₂ ‖ρ^PT‖₁ for a two-qubit state.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(ln_from_spectrum(&pt_spectrum(rho)?))
}

/// Tr ρ²
pub fn purity(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += rho.get(i, j).norm_sqr();
        }
    }
    s
}

fn sqrt_psd(op: &OperatorMatrix) -> Result<Mat<C64>> {
    let (vals, vecs) = op.eigh()?;
    let n = op.dim();
    let scaled = Mat::from_fn(n, n, |i, k| vecs[(i, k)] * vals[k].max(0.0).sqrt());
    Ok(&scaled * vecs.adjoint())
}

/// Uhlmann–Jozsa fidelity [Tr √(√ρ σ √ρ)]².
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::Dimension(format!("dims {:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    let s = sqrt_psd(rho.as_operator())?;
    let inner = &(&s * sigma.as_operator().data()) * &s;
    let op = OperatorMatrix::new(rho.dims().to_vec(), inner)?;
    let root: f64 = op.eigenvalues_hermitian()?.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root * root).min(1.0))
}

/// ½‖ρ − σ‖₁
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::Dimension(format!("dims {:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    let diff = rho.as_operator() - sigma.as_operator();
    Ok(0.5 * diff.eigenvalues_hermitian()?.iter().map(|v| v.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell, ket, Bell};

    fn pure(k: &[C64]) -> DensityMatrix {
        DensityMatrix::pure(&[2, 2], k).unwrap()
    }

    fn werner() -> DensityMatrix {
        DensityMatrix::mixture(&[
            (2.0 / 3.0, &DensityMatrix::maximally_mixed(&[2, 2])),
            (1.0 / 3.0, &pure(&bell(Bell::PhiMinus))),
        ])
        .unwrap()
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let ln = log_negativity(&pure(&bell(Bell::PhiMinus))).unwrap();
        assert!((ln - 1.0).abs() < 1e-14);
        let spec = pt_spectrum(&pure(&bell(Bell::PhiMinus))).unwrap();
        for (v, e) in spec.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn product_and_werner_have_no_negativity() {
        assert_eq!(log_negativity(&pure(&ket("eg"))).unwrap(), 0.0);
        assert!(log_negativity(&werner()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn werner_purity_is_one_third() {
        assert!((purity(&werner()) - 1.0 / 3.0).abs() < 1e-14);
        assert!((purity(&pure(&ket("gg"))) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let a = pure(&bell(Bell::PhiPlus));
        let b = pure(&bell(Bell::PsiMinus));
        assert!((state_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!(state_fidelity(&a, &b).unwrap() < 1e-12);
        let w = werner();
        assert!((state_fidelity(&w, &a).unwrap() - state_fidelity(&a, &w).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn werner_spectrum() {
        let spec = pt_spectrum(&werner()).unwrap();
        for (v, e) in spec.iter().zip([0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn third_mixture_spectrum() {
        let third = 1.0 / 3.0;
        let rho = DensityMatrix::mixture(&[
            (third, &pure(&bell(Bell::PhiPlus))),
            (third, &pure(&ket("eg"))),
            (third, &pure(&ket("ge"))),
        ])
        .unwrap();
        let spec = pt_spectrum(&rho).unwrap();
        let sixth = 1.0 / 6.0;
        for (v, e) in spec.iter().zip([sixth, sixth, sixth, 0.5]) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn three_qubits_rejected() {
        assert!(matches!(log_negativity(&DensityMatrix::maximally_mixed(&[2, 2, 2])), Err(Error::NotBipartite(3))));
    }
}
