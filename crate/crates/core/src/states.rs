//! Basis conventions and named states.
//!
//! Within a qubit, index 0 is |e⟩ and index 1 is |g⟩, so σ₋ = |g⟩⟨e| has its
//! single 1 below the diagonal. Multi-qubit kets are written left to right in
//! subsystem order: `ket("eg")` is |e⟩₁|g⟩₂. For n qubits, qubit ℓ is bit
//! (n − 1 − ℓ) of the basis index, and a set bit means g. Oscillators use the
//! Fock basis with ⟨k−1|a|k⟩ = √k.

use num_complex::Complex64 as C64;

use crate::linalg::{kron, OperatorMatrix, ONE, ZERO};

pub const EXCITED: usize = 0;
pub const GROUND: usize = 1;

/// Basis index of qubit `l` being in g, for an n-qubit index `x`.
pub fn is_ground(x: usize, l: usize, n: usize) -> bool {
    (x >> (n - 1 - l)) & 1 == 1
}

/// Flip qubit `l` of an n-qubit basis index.
pub fn flip(x: usize, l: usize, n: usize) -> usize {
    x ^ (1 << (n - 1 - l))
}

/// Computational ket from a label string of 'e' and 'g'.
pub fn ket(labels: &str) -> Vec<C64> {
    let n = labels.len();
    let mut idx = 0;
    for (pos, ch) in labels.chars().enumerate() {
        let bit = match ch {
            'e' => 0,
            'g' => 1,
            other => panic!("qubit label must be 'e' or 'g', got {other:?}"),
        };
        idx |= bit << (n - 1 - pos);
    }
    let mut v = vec![ZERO; 1 << n];
    v[idx] = ONE;
    v
}

/// σ₋ = |g⟩⟨e|.
pub fn sigma_minus() -> OperatorMatrix {
    OperatorMatrix::from_fn(&[2], |i, j| if i == GROUND && j == EXCITED { ONE } else { ZERO })
}

/// Truncated annihilation operator on a d-level oscillator.
pub fn destroy(d: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(&[d], |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

/// Embed a single-site operator at position `site` of a product space.
pub fn embed(op: &OperatorMatrix, site: usize, dims: &[usize]) -> OperatorMatrix {
    assert_eq!(op.dim(), dims[site], "operator does not match site dimension");
    let mut acc: Option<OperatorMatrix> = None;
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == site { op.clone() } else { OperatorMatrix::identity(&[d]) };
        acc = Some(match acc {
            None => factor,
            Some(a) => kron(&a, &factor),
        });
    }
    acc.expect("empty dims")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub fn label(self) -> &'static str {
        match self {
            Bell::PhiPlus => "Phi+",
            Bell::PhiMinus => "Phi-",
            Bell::PsiPlus => "Psi+",
            Bell::PsiMinus => "Psi-",
        }
    }
}

fn superpose(a: &[C64], ca: C64, b: &[C64], cb: C64) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
}

/// Φ± = (|ee⟩ ± |gg⟩)/√2, Ψ± = (|eg⟩ ± |ge⟩)/√2.
pub fn bell(which: Bell) -> Vec<C64> {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match which {
        Bell::PhiPlus => superpose(&ket("ee"), s, &ket("gg"), s),
        Bell::PhiMinus => superpose(&ket("ee"), s, &ket("gg"), -s),
        Bell::PsiPlus => superpose(&ket("eg"), s, &ket("ge"), s),
        Bell::PsiMinus => superpose(&ket("eg"), s, &ket("ge"), -s),
    }
}

/// (|ee⟩ + e^{iφ}|gg⟩)/√2.
pub fn phi_bell(phi: f64) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    superpose(&ket("ee"), C64::new(s, 0.0), &ket("gg"), C64::from_polar(s, phi))
}

/// (|ee⟩ + e^{iφ}√(1+ε)|gg⟩)/√(2+ε).
pub fn near_bell_phi(phi: f64, eps: f64) -> Vec<C64> {
    let norm = (2.0 + eps).sqrt();
    superpose(&ket("ee"), C64::new(1.0 / norm, 0.0), &ket("gg"), C64::from_polar((1.0 + eps).sqrt() / norm, phi))
}

/// (|eg⟩ + e^{iφ}√(1+ε)|ge⟩)/√(2+ε).
pub fn near_bell_psi(phi: f64, eps: f64) -> Vec<C64> {
    let norm = (2.0 + eps).sqrt();
    superpose(&ket("eg"), C64::new(1.0 / norm, 0.0), &ket("ge"), C64::from_polar((1.0 + eps).sqrt() / norm, phi))
}

/// sin θ |Φ⁺⟩ + cos θ |Φ⁻⟩.
pub fn theta_state(theta: f64) -> Vec<C64> {
    superpose(&bell(Bell::PhiPlus), C64::new(theta.sin(), 0.0), &bell(Bell::PhiMinus), C64::new(theta.cos(), 0.0))
}

/// sin θ |Ψ⁺⟩ + cos θ |Ψ⁻⟩.
pub fn theta_state_psi(theta: f64) -> Vec<C64> {
    superpose(&bell(Bell::PsiPlus), C64::new(theta.sin(), 0.0), &bell(Bell::PsiMinus), C64::new(theta.cos(), 0.0))
}

/// (|e…e⟩ + |g…g⟩)/√2.
pub fn ghz(n: usize) -> Vec<C64> {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = vec![ZERO; 1 << n];
    v[0] = s;
    v[(1 << n) - 1] = s;
    v
}

/// Equal superposition of the n single-excitation kets.
pub fn w_state(n: usize) -> Vec<C64> {
    let s = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; 1 << n];
    for l in 0..n {
        // all ground except qubit l
        let idx = ((1 << n) - 1) ^ (1 << (n - 1 - l));
        v[idx] = s;
    }
    v
}

/// Single-qubit ket α|g⟩ + β|e⟩.
pub fn qubit(alpha: C64, beta: C64) -> Vec<C64> {
    let mut v = vec![ZERO; 2];
    v[GROUND] = alpha;
    v[EXCITED] = beta;
    v
}

/// Fock ket |k⟩ in a d-level truncation.
pub fn fock(d: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[k] = ONE;
    v
}
