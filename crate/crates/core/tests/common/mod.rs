#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qme::{DensityMatrix, OperatorMatrix};
use rand::Rng;

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    // Box–Muller gives Gaussian entries
    let (u1, u2): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
    let r = (-2.0 * u1.ln()).sqrt();
    let phi = std::f64::consts::TAU * u2;
    C64::new(r * phi.cos(), r * phi.sin())
}

pub fn random_ket(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Ginibre-distributed mixed state G G† / Tr G G†.
pub fn random_density(rng: &mut impl Rng, dims: &[usize]) -> DensityMatrix {
    let g = OperatorMatrix::from_fn(dims, |_, _| random_complex(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m.scale(tr.inv()).hermitian_part()).expect("Ginibre states are valid")
}

pub fn random_unitary_2(rng: &mut impl Rng) -> OperatorMatrix {
    let a = random_ket(rng, 2);
    let phase = C64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>());
    // columns (a, phase · a⊥)
    let perp = [-a[1].conj() * phase, a[0].conj() * phase];
    OperatorMatrix::from_fn(&[2], |i, j| if j == 0 { a[i] } else { perp[i] })
}
