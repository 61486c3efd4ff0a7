//! Qubit environments and the master-equation coefficients they induce.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, OperatorMatrix, ZERO};
use crate::states::{self, flip, is_ground, Bell};

/// Coupling strengths above this value of λΔt leave the weak-coupling regime.
pub const WEAK_COUPLING_LIMIT: f64 = 0.1;

/// State of the n bath qubits that meet the systems in one interaction interval.
#[derive(Clone, Debug)]
pub struct BathState {
    n: usize,
    rho_e: DensityMatrix,
    pure_coeffs: Option<Vec<C64>>,
}

impl BathState {
    /// Pure bath from amplitudes b_x in the computational basis.
    pub fn pure(coeffs: Vec<C64>) -> Result<Self> {
        let n = qubit_count(coeffs.len())?;
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidBath(format!("Σ|b|² = {norm}, expected 1")));
        }
        let rho_e = DensityMatrix::new(OperatorMatrix::outer(&vec![2; n], &coeffs, &coeffs)?)?;
        Ok(Self { n, rho_e, pure_coeffs: Some(coeffs) })
    }

    /// Pure bath from unnormalized amplitudes.
    pub fn pure_normalized(coeffs: Vec<C64>) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidBath("all amplitudes vanish".into()));
        }
        Self::pure(coeffs.into_iter().map(|c| c / norm).collect())
    }

    /// General (possibly mixed) bath.
    pub fn mixed(rho_e: DensityMatrix) -> Result<Self> {
        let n = qubit_count(rho_e.dim())?;
        if rho_e.dims().iter().any(|&d| d != 2) || rho_e.dims().len() != n {
            return Err(Error::InvalidBath(format!("bath dims {:?} are not all qubits", rho_e.dims())));
        }
        Ok(Self { n, rho_e, pure_coeffs: None })
    }

    pub fn ground(n: usize) -> Self {
        Self::pure(states::ket(&"g".repeat(n))).expect("ground ket is normalized")
    }

    pub fn bell(which: Bell) -> Self {
        Self::pure(states::bell(which)).expect("Bell ket is normalized")
    }

    /// (|ee⟩ + e^{iφ}|gg⟩)/√2
    pub fn bell_phase(phi: f64) -> Self {
        Self::pure(states::phi_bell(phi)).expect("normalized")
    }

    pub fn near_bell_phi(phi: f64, eps: f64) -> Result<Self> {
        Self::pure(states::near_bell_phi(phi, eps))
    }

    pub fn near_bell_psi(phi: f64, eps: f64) -> Result<Self> {
        Self::pure(states::near_bell_psi(phi, eps))
    }

    pub fn ghz(n: usize) -> Self {
        Self::pure(states::ghz(n)).expect("normalized")
    }

    pub fn w(n: usize) -> Self {
        Self::pure(states::w_state(n)).expect("normalized")
    }

    /// ⊗ℓ (α_ℓ|g⟩ + β_ℓ|e⟩).
    pub fn product(factors: &[(C64, C64)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidBath("empty product".into()));
        }
        let mut ket = vec![C64::new(1.0, 0.0)];
        for &(alpha, beta) in factors {
            ket = crate::linalg::kron_kets(&ket, &states::qubit(alpha, beta));
        }
        Self::pure(ket)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho_e(&self) -> &DensityMatrix {
        &self.rho_e
    }

    pub fn pure_coeffs(&self) -> Option<&[C64]> {
        self.pure_coeffs.as_deref()
    }

    pub fn is_pure(&self) -> bool {
        self.pure_coeffs.is_some()
    }

    /// The same bath with only its diagonal kept.
    pub fn diagonal_part(&self) -> Self {
        let dims = vec![2; self.n];
        let op = OperatorMatrix::from_fn(&dims, |i, j| if i == j { self.rho_e.get(i, i) } else { ZERO });
        Self::mixed(DensityMatrix::new(op).expect("diagonal of a state is a state")).expect("qubit dims")
    }

    fn entry(&self, i: usize, j: usize) -> C64 {
        self.rho_e.get(i, j)
    }
}

fn qubit_count(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidBath(format!("length {len} is not 2ⁿ with n ≥ 1")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Coupling strengths λ_ℓ, the interaction interval Δt and detunings δ_ℓ.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingSpec {
    lambdas: Vec<f64>,
    dt: f64,
    detunings: Vec<f64>,
}

impl CouplingSpec {
    pub fn new(lambdas: Vec<f64>, dt: f64) -> Result<Self> {
        let n = lambdas.len();
        Self::with_detunings(lambdas, dt, vec![0.0; n])
    }

    pub fn with_detunings(lambdas: Vec<f64>, dt: f64, detunings: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidBath(format!("interaction interval must be positive, got {dt}")));
        }
        if detunings.len() != lambdas.len() {
            return Err(Error::Dimension(format!("{} detunings for {} couplings", detunings.len(), lambdas.len())));
        }
        if let Some(&d) = detunings.iter().find(|d| **d != 0.0) {
            return Err(Error::Detuning(d));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidBath("non-finite coupling".into()));
        }
        Ok(Self { lambdas, dt, detunings })
    }

    /// Couplings λ_ℓ = √(γ_ℓ/Δt) that realize the given rates.
    pub fn from_rates(gammas: &[f64], dt: f64) -> Result<Self> {
        if let Some(g) = gammas.iter().find(|g| **g < 0.0) {
            return Err(Error::InvalidBath(format!("negative rate {g}")));
        }
        Self::new(gammas.iter().map(|g| (g / dt).sqrt()).collect(), dt)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// γ_ℓ = |λ_ℓ|²Δt
    pub fn rates(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| l * l * self.dt).collect()
    }

    pub fn weak_coupling_warnings(&self) -> Vec<String> {
        self.lambdas
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() * self.dt > WEAK_COUPLING_LIMIT)
            .map(|(k, l)| format!("subsystem {k}: λΔt = {:.3} exceeds {WEAK_COUPLING_LIMIT}", l.abs() * self.dt))
            .collect()
    }
}

/// Rates and amplitudes of the n-system master equation.
///
/// `gamma_dd` and `gamma_du` are n×n; entry [ℓ][m] with ℓ < m is the pair
/// coefficient, the lower triangle holds the symmetric (↓↓) or conjugate
/// (↓↑) partner, and the diagonal is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub gamma_down: Vec<f64>,
    pub gamma_up: Vec<f64>,
    pub gamma_dd: Vec<Vec<C64>>,
    pub gamma_du: Vec<Vec<C64>>,
    pub h_eff_coeff: Vec<C64>,
}

impl CoefficientSet {
    pub fn n(&self) -> usize {
        self.gamma_down.len()
    }

    fn zeros(n: usize) -> Self {
        Self {
            gamma_down: vec![0.0; n],
            gamma_up: vec![0.0; n],
            gamma_dd: vec![vec![ZERO; n]; n],
            gamma_du: vec![vec![ZERO; n]; n],
            h_eff_coeff: vec![ZERO; n],
        }
    }

    fn set_pair(&mut self, l: usize, m: usize, dd: C64, du: C64) {
        self.gamma_dd[l][m] = dd;
        self.gamma_dd[m][l] = dd;
        self.gamma_du[l][m] = du;
        self.gamma_du[m][l] = du.conj();
    }

    /// Largest elementwise difference between two sets.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for l in 0..self.n() {
            d = d.max((self.gamma_down[l] - other.gamma_down[l]).abs());
            d = d.max((self.gamma_up[l] - other.gamma_up[l]).abs());
            d = d.max((self.h_eff_coeff[l] - other.h_eff_coeff[l]).norm());
            for m in 0..self.n() {
                d = d.max((self.gamma_dd[l][m] - other.gamma_dd[l][m]).norm());
                d = d.max((self.gamma_du[l][m] - other.gamma_du[l][m]).norm());
            }
        }
        d
    }

    /// Largest modulus among pair coefficients and Hamiltonian amplitudes.
    pub fn max_cross_term(&self) -> f64 {
        let pairs = self.gamma_dd.iter().chain(&self.gamma_du).flatten().map(|c| c.norm());
        pairs.chain(self.h_eff_coeff.iter().map(|c| c.norm())).fold(0.0, f64::max)
    }
}

fn check_sizes(bath: &BathState, c: &CouplingSpec) -> Result<()> {
    if bath.n != c.n() {
        return Err(Error::Dimension(format!("bath has {} qubits but {} couplings were given", bath.n, c.n())));
    }
    Ok(())
}

const EE: usize = 0;
const EG: usize = 1;
const GE: usize = 2;
const GG: usize = 3;

/// Two-qubit coefficients read from the bath density matrix.
pub fn coefficients_2q(bath: &BathState, c: &CouplingSpec) -> Result<CoefficientSet> {
    if bath.n != 2 {
        return Err(Error::InvalidBath(format!("two-qubit coefficients need n = 2, got {}", bath.n)));
    }
    check_sizes(bath, c)?;
    let g = c.rates();
    let lam = c.lambdas();
    let b = |i, j| bath.entry(i, j);
    let s = (g[0] * g[1]).sqrt();
    let mut out = CoefficientSet::zeros(2);
    out.gamma_down[0] = g[0] * (b(GG, GG) + b(GE, GE)).re;
    out.gamma_up[0] = g[0] * (b(EE, EE) + b(EG, EG)).re;
    out.gamma_down[1] = g[1] * (b(GG, GG) + b(EG, EG)).re;
    out.gamma_up[1] = g[1] * (b(EE, EE) + b(GE, GE)).re;
    out.set_pair(0, 1, b(GG, EE) * s, b(GE, EG) * s);
    out.h_eff_coeff[0] = (b(GG, EG) + b(GE, EE)) * lam[0];
    out.h_eff_coeff[1] = (b(EG, EE) + b(GG, GE)) * lam[1];
    Ok(out)
}

/// Two-qubit coefficients from pure-state amplitudes b_jk; a cross-check on
/// [`coefficients_2q`].
pub fn coefficients_2q_pure(bath: &BathState, c: &CouplingSpec) -> Result<CoefficientSet> {
    let b = bath.pure_coeffs().ok_or(Error::MixedBath)?;
    if bath.n != 2 {
        return Err(Error::InvalidBath(format!("two-qubit coefficients need n = 2, got {}", bath.n)));
    }
    check_sizes(bath, c)?;
    let g = c.rates();
    let lam = c.lambdas();
    let s = (g[0] * g[1]).sqrt();
    let mut out = CoefficientSet::zeros(2);
    out.gamma_down[0] = g[0] * (b[GG].norm_sqr() + b[GE].norm_sqr());
    out.gamma_up[0] = g[0] * (b[EE].norm_sqr() + b[EG].norm_sqr());
    out.gamma_down[1] = g[1] * (b[GG].norm_sqr() + b[EG].norm_sqr());
    out.gamma_up[1] = g[1] * (b[EE].norm_sqr() + b[GE].norm_sqr());
    out.set_pair(0, 1, b[GG] * b[EE].conj() * s, b[GE] * b[EG].conj() * s);
    out.h_eff_coeff[0] = (b[GG] * b[EG].conj() + b[GE] * b[EE].conj()) * lam[0];
    out.h_eff_coeff[1] = (b[EG] * b[EE].conj() + b[GG] * b[GE].conj()) * lam[1];
    Ok(out)
}

/// Coefficients for an n-qubit bath, as partial inner products of ρ_E.
pub fn coefficients_nq(bath: &BathState, c: &CouplingSpec) -> Result<CoefficientSet> {
    check_sizes(bath, c)?;
    let n = bath.n;
    let dim = 1 << n;
    let g = c.rates();
    let lam = c.lambdas();
    let mut out = CoefficientSet::zeros(n);
    for l in 0..n {
        let (mut down, mut up, mut h) = (0.0, 0.0, ZERO);
        for x in 0..dim {
            if is_ground(x, l, n) {
                down += bath.entry(x, x).re;
                h += bath.entry(x, flip(x, l, n));
            } else {
                up += bath.entry(x, x).re;
            }
        }
        out.gamma_down[l] = g[l] * down;
        out.gamma_up[l] = g[l] * up;
        out.h_eff_coeff[l] = h * lam[l];
        for m in l + 1..n {
            let (mut dd, mut du) = (ZERO, ZERO);
            for x in 0..dim {
                if !is_ground(x, l, n) {
                    continue;
                }
                let y = flip(flip(x, l, n), m, n);
                if is_ground(x, m, n) {
                    dd += bath.entry(x, y);
                } else {
                    du += bath.entry(x, y);
                }
            }
            let s = (g[l] * g[m]).sqrt();
            out.set_pair(l, m, dd * s, du * s);
        }
    }
    Ok(out)
}

/// Pure bath cosh r/√cosh 2r |gg⟩ + e^{iϑ} sinh r/√cosh 2r |ee⟩ whose jump
/// operators are the two-mode squeezing nullifiers with amplitude r.
pub fn bath_from_squeezing(r: f64, theta: f64) -> Result<BathState> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidBath(format!("squeezing amplitude must be finite and ≥ 0, got {r}")));
    }
    // cosh²r/cosh 2r computed stably for large r
    let norm = (2.0 * r).cosh().sqrt();
    let mut b = vec![ZERO; 4];
    b[GG] = C64::new(r.cosh() / norm, 0.0);
    b[EE] = C64::from_polar(r.sinh() / norm, theta);
    BathState::pure_normalized(b)
}

fn gg_ee_support(bath: &BathState) -> Result<(f64, f64, C64)> {
    if bath.n != 2 {
        return Err(Error::InvalidBath(format!("expected a two-qubit bath, got n = {}", bath.n)));
    }
    let leak = bath.entry(EG, EG).re + bath.entry(GE, GE).re;
    if leak > 1e-12 {
        return Err(Error::InvalidBath(format!("population {leak:.3e} outside span{{gg, ee}}")));
    }
    Ok((bath.entry(GG, GG).re, bath.entry(EE, EE).re, bath.entry(EE, GG)))
}

/// Recover (r, ϑ) from a bath in span{gg, ee} with |b_gg| > 1/√2.
pub fn squeezing_from_bath(bath: &BathState) -> Result<(f64, f64)> {
    let (pgg, pee, coh) = gg_ee_support(bath)?;
    let diff = pgg - pee;
    if diff <= 0.0 {
        return Err(Error::InvalidBath("|b_gg| ≤ 1/√2 has no squeezing parameter".into()));
    }
    // sinh r = |b_ee|/√(|b_gg|² − |b_ee|²) is well conditioned near r = 0
    let sinh_r = (pee / diff).sqrt();
    Ok((sinh_r.asinh(), coh.arg()))
}

/// Γ = γ(|b_gg|² − |b_ee|²).
pub fn effective_rate(bath: &BathState, gamma: f64) -> Result<f64> {
    let (pgg, pee, _) = gg_ee_support(bath)?;
    Ok(gamma * (pgg - pee))
}
