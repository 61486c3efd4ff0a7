//! Generators in matrix form.
//!
//! Density matrices are vectorized by stacking columns, so
//! vec(AρB) = (Bᵀ ⊗ A) vec ρ and, for example,
//! D[L] ↦ L̄ ⊗ L − ½(I ⊗ L†L + (L†L)ᵀ ⊗ I).

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::bath::{coefficients_nq, BathState, CoefficientSet, CouplingSpec};
use crate::error::{Error, Result};
use crate::linalg::{OperatorMatrix, ONE, ZERO};
use crate::states::{destroy, embed, sigma_minus};

/// Tolerance on the most negative eigenvalue of the coefficient matrix.
pub const CP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubsystemSpec {
    Qubit,
    Oscillator { d: usize },
}

impl SubsystemSpec {
    pub fn dim(self) -> usize {
        match self {
            SubsystemSpec::Qubit => 2,
            SubsystemSpec::Oscillator { d } => d,
        }
    }

    /// σ₋ for a qubit, the truncated annihilation operator otherwise.
    pub fn lowering(self) -> OperatorMatrix {
        match self {
            SubsystemSpec::Qubit => sigma_minus(),
            SubsystemSpec::Oscillator { d } => destroy(d),
        }
    }
}

pub fn dims_of(specs: &[SubsystemSpec]) -> Vec<usize> {
    specs.iter().map(|s| s.dim()).collect()
}

/// c_ℓ acting on the full product space.
pub fn site_lowering(specs: &[SubsystemSpec], site: usize) -> OperatorMatrix {
    embed(&specs[site].lowering(), site, &dims_of(specs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderTerm {
    pub coeff: C64,
    pub site: usize,
    pub ladder: Ladder,
}

/// A jump operator Σ_k coeff_k · c_{site_k} or c†_{site_k}.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LadderJump {
    pub terms: Vec<LadderTerm>,
}

impl LadderJump {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lower(mut self, coeff: C64, site: usize) -> Self {
        self.terms.push(LadderTerm { coeff, site, ladder: Ladder::Lower });
        self
    }

    pub fn raise(mut self, coeff: C64, site: usize) -> Self {
        self.terms.push(LadderTerm { coeff, site, ladder: Ladder::Raise });
        self
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.norm() <= tol)
    }

    pub fn to_operator(&self, specs: &[SubsystemSpec]) -> OperatorMatrix {
        let dims = dims_of(specs);
        let mut acc = OperatorMatrix::zeros(&dims);
        for t in &self.terms {
            let c = site_lowering(specs, t.site);
            let op = match t.ladder {
                Ladder::Lower => c,
                Ladder::Raise => c.adjoint(),
            };
            acc = &acc + &op.scale(t.coeff);
        }
        acc
    }

    /// Decompose a matrix over {c_ℓ, c_ℓ†}. These operators are mutually
    /// orthogonal in the Hilbert–Schmidt inner product, so projection
    /// recovers the coefficients; anything left over is not a ladder
    /// combination.
    pub fn from_operator(op: &OperatorMatrix, specs: &[SubsystemSpec]) -> Result<Self> {
        let dims = dims_of(specs);
        if op.dims() != dims.as_slice() {
            return Err(Error::Dimension(format!("operator dims {:?} vs subsystems {:?}", op.dims(), dims)));
        }
        let mut jump = LadderJump::new();
        for site in 0..specs.len() {
            let c = site_lowering(specs, site);
            let norm = hs_inner(&c, &c).re;
            let lo = hs_inner(&c, op) / norm;
            let hi = hs_inner(&c.adjoint(), op) / norm;
            if lo != ZERO {
                jump = jump.lower(lo, site);
            }
            if hi != ZERO {
                jump = jump.raise(hi, site);
            }
        }
        let residual = (op - &jump.to_operator(specs)).max_abs();
        if residual > 1e-10 * op.max_abs().max(1.0) {
            return Err(Error::NonlinearJump(residual));
        }
        Ok(jump)
    }
}

/// Tr(A†B)
fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> C64 {
    let n = a.dim();
    let mut s = ZERO;
    for j in 0..n {
        for i in 0..n {
            s += a.get(i, j).conj() * b.get(i, j);
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Diagonal,
    Nondiagonal,
}

/// Effective Hamiltonian, jump operators and the coefficients they came from.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub h_eff: OperatorMatrix,
    pub jump_ops: Vec<OperatorMatrix>,
    pub coeffs: CoefficientSet,
    pub form: Form,
    pub specs: Vec<SubsystemSpec>,
}

impl GeneratorSpec {
    pub fn liouvillian(&self) -> Result<Liouvillian> {
        match self.form {
            Form::Diagonal => build_liouvillian_diagonal(&self.h_eff, &self.jump_ops),
            Form::Nondiagonal => build_liouvillian_nondiagonal(&self.coeffs, &self.specs),
        }
    }
}

/// Column-stacked superoperator on density matrices of the given dims.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    superop: Mat<C64>,
    dims: Vec<usize>,
}

impl Liouvillian {
    pub fn from_matrix(dims: Vec<usize>, superop: Mat<C64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if superop.nrows() != n * n || superop.ncols() != n * n {
            return Err(Error::Dimension(format!("superoperator side {} for Hilbert dimension {n}", superop.nrows())));
        }
        Ok(Self { superop, dims })
    }

    pub fn zero(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self { superop: Mat::zeros(n * n, n * n), dims: dims.to_vec() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Hilbert-space dimension.
    pub fn hilbert_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn matrix(&self) -> faer::MatRef<'_, C64> {
        self.superop.as_ref()
    }

    pub fn apply(&self, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rho.dims() != self.dims.as_slice() {
            return Err(Error::Dimension(format!("state dims {:?} vs generator dims {:?}", rho.dims(), self.dims)));
        }
        let v = rho.vectorize();
        let n2 = v.len();
        let out: Vec<C64> = (0..n2).map(|i| (0..n2).map(|j| self.superop[(i, j)] * v[j]).sum()).collect();
        OperatorMatrix::unvectorize(&self.dims, &out)
    }

    /// max_j |Σ_i L[(i,i), j]|: how far (vec I)† L is from zero.
    pub fn trace_preservation_error(&self) -> f64 {
        let n = self.hilbert_dim();
        (0..n * n).map(|col| (0..n).map(|i| self.superop[(i * n + i, col)]).sum::<C64>().norm()).fold(0.0, f64::max)
    }

    pub fn spectrum(&self) -> Result<Vec<C64>> {
        self.superop.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))
    }

    /// Largest column sum of moduli; bounds the spectral radius.
    pub fn norm_one(&self) -> f64 {
        let m = self.superop.nrows();
        (0..m).map(|j| (0..m).map(|i| self.superop[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Liouvillian) -> f64 {
        assert_eq!(self.superop.nrows(), other.superop.nrows(), "superoperator sides differ");
        (&self.superop - &other.superop).norm_max()
    }
}

/// Accumulates superoperator terms, skipping structural zeros.
struct SuperBuilder {
    n: usize,
    mat: Mat<C64>,
}

fn nonzeros(a: &OperatorMatrix) -> Vec<(usize, usize, C64)> {
    let n = a.dim();
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = a.get(i, j);
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl SuperBuilder {
    fn new(n: usize) -> Self {
        Self { n, mat: Mat::zeros(n * n, n * n) }
    }

    /// ρ ↦ c·AρB, i.e. c·(Bᵀ ⊗ A).
    fn sandwich(&mut self, c: C64, a: &OperatorMatrix, b: &OperatorMatrix) {
        let n = self.n;
        let (na, nb) = (nonzeros(a), nonzeros(b));
        for &(l, j, bv) in &nb {
            for &(i, k, av) in &na {
                self.mat[(j * n + i, l * n + k)] += c * av * bv;
            }
        }
    }

    /// ρ ↦ c·(Aρ + ρA)
    fn anticommutator(&mut self, c: C64, a: &OperatorMatrix) {
        let n = self.n;
        for (i, k, v) in nonzeros(a) {
            for j in 0..n {
                self.mat[(j * n + i, j * n + k)] += c * v;
                self.mat[(k * n + j, i * n + j)] += c * v;
            }
        }
    }

    /// ρ ↦ −i[H, ρ]
    fn hamiltonian(&mut self, h: &OperatorMatrix) {
        let n = self.n;
        let mi = C64::new(0.0, -1.0);
        for (i, k, v) in nonzeros(h) {
            for j in 0..n {
                self.mat[(j * n + i, j * n + k)] += mi * v;
                self.mat[(k * n + j, i * n + j)] -= mi * v;
            }
        }
    }

    /// c·D[L]
    fn lindblad(&mut self, c: C64, l: &OperatorMatrix) {
        let ld = l.adjoint();
        self.sandwich(c, l, &ld);
        self.anticommutator(-c * 0.5, &(&ld * l));
    }

    /// c·S[o1, o2]
    fn symmetric(&mut self, c: C64, o1: &OperatorMatrix, o2: &OperatorMatrix) {
        self.sandwich(c, o1, o2);
        self.sandwich(c, o2, o1);
        let a = &(o1 * o2) + &(o2 * o1);
        self.anticommutator(-c * 0.5, &a);
    }
}

/// Σ_ℓ h_ℓ c_ℓ + h.c.
pub fn effective_hamiltonian(coeffs: &CoefficientSet, specs: &[SubsystemSpec]) -> Result<OperatorMatrix> {
    if coeffs.n() != specs.len() {
        return Err(Error::Dimension(format!("{} coefficient sites for {} subsystems", coeffs.n(), specs.len())));
    }
    let mut h = OperatorMatrix::zeros(&dims_of(specs));
    for (l, &amp) in coeffs.h_eff_coeff.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let term = site_lowering(specs, l).scale(amp);
        h = &h + &(&term + &term.adjoint());
    }
    Ok(h)
}

/// The four ladder-form jump operators of a pure two-qubit bath.
pub fn jump_ladders_2q(bath: &BathState, coupling: &CouplingSpec) -> Result<Vec<LadderJump>> {
    let b = bath.pure_coeffs().ok_or(Error::MixedBath)?;
    if bath.n() != 2 || coupling.n() != 2 {
        return Err(Error::InvalidBath(format!("two-qubit jump operators need n = 2, got {}", bath.n())));
    }
    let g = coupling.rates();
    let (s1, s2) = (g[0].sqrt(), g[1].sqrt());
    let (ee, eg, ge, gg) = (b[0], b[1], b[2], b[3]);
    Ok(vec![
        LadderJump::new().lower(gg * s1, 0).raise(ee * s2, 1),
        LadderJump::new().raise(ee * s1, 0).lower(gg * s2, 1),
        LadderJump::new().lower(ge * s1, 0).lower(eg * s2, 1),
        LadderJump::new().raise(eg * s1, 0).raise(ge * s2, 1),
    ])
}

/// The four jump operators of a pure two-qubit bath as matrices.
pub fn jump_ops_2q(bath: &BathState, coupling: &CouplingSpec, specs: &[SubsystemSpec]) -> Result<Vec<OperatorMatrix>> {
    if specs.len() != 2 {
        return Err(Error::Dimension(format!("two subsystems expected, got {}", specs.len())));
    }
    Ok(jump_ladders_2q(bath, coupling)?.iter().map(|j| j.to_operator(specs)).collect())
}

/// Diagonal (Lindblad) form for a pure two-qubit bath.
pub fn generator_diagonal(bath: &BathState, coupling: &CouplingSpec, specs: &[SubsystemSpec]) -> Result<GeneratorSpec> {
    let jump_ops = jump_ops_2q(bath, coupling, specs)?;
    let coeffs = coefficients_nq(bath, coupling)?;
    let h_eff = effective_hamiltonian(&coeffs, specs)?;
    Ok(GeneratorSpec { h_eff, jump_ops, coeffs, form: Form::Diagonal, specs: specs.to_vec() })
}

/// Nondiagonal form, valid for any bath and any n.
pub fn generator_nondiagonal(
    bath: &BathState,
    coupling: &CouplingSpec,
    specs: &[SubsystemSpec],
) -> Result<GeneratorSpec> {
    let coeffs = coefficients_nq(bath, coupling)?;
    let h_eff = effective_hamiltonian(&coeffs, specs)?;
    let jump_ops = diagonalize_dissipator(&coeffs, specs)?.iter().map(|j| j.to_operator(specs)).collect();
    Ok(GeneratorSpec { h_eff, jump_ops, coeffs, form: Form::Nondiagonal, specs: specs.to_vec() })
}

/// −i[H, ·] + Σ_m D[L_m].
pub fn build_liouvillian_diagonal(h_eff: &OperatorMatrix, jump_ops: &[OperatorMatrix]) -> Result<Liouvillian> {
    let dims = h_eff.dims().to_vec();
    if let Some(bad) = jump_ops.iter().find(|l| l.dims() != dims.as_slice()) {
        return Err(Error::Dimension(format!("jump operator dims {:?} vs Hamiltonian dims {:?}", bad.dims(), dims)));
    }
    let mut b = SuperBuilder::new(h_eff.dim());
    b.hamiltonian(h_eff);
    for l in jump_ops {
        b.lindblad(ONE, l);
    }
    Liouvillian::from_matrix(dims, b.mat)
}

/// Local dissipators, pair S-terms and effective Hamiltonians.
pub fn build_liouvillian_nondiagonal(coeffs: &CoefficientSet, specs: &[SubsystemSpec]) -> Result<Liouvillian> {
    let n = coeffs.n();
    let h = effective_hamiltonian(coeffs, specs)?;
    let c: Vec<OperatorMatrix> = (0..n).map(|l| site_lowering(specs, l)).collect();
    let cd: Vec<OperatorMatrix> = c.iter().map(|o| o.adjoint()).collect();
    let mut b = SuperBuilder::new(h.dim());
    b.hamiltonian(&h);
    for l in 0..n {
        b.lindblad(C64::new(coeffs.gamma_down[l], 0.0), &c[l]);
        b.lindblad(C64::new(coeffs.gamma_up[l], 0.0), &cd[l]);
        for m in l + 1..n {
            let dd = coeffs.gamma_dd[l][m];
            let du = coeffs.gamma_du[l][m];
            if dd != ZERO {
                b.symmetric(dd, &c[l], &c[m]);
                b.symmetric(dd.conj(), &cd[l], &cd[m]);
            }
            if du != ZERO {
                b.symmetric(du, &c[l], &cd[m]);
                b.symmetric(du.conj(), &cd[l], &c[m]);
            }
        }
    }
    Liouvillian::from_matrix(dims_of(specs), b.mat)
}

/// Coefficient matrix K of the dissipator Σ K_ij (F_i ρ F_j† − ½{F_j†F_i, ρ})
/// over the basis F_{2ℓ} = c_ℓ, F_{2ℓ+1} = c_ℓ†.
pub fn kossakowski_matrix(coeffs: &CoefficientSet) -> Mat<C64> {
    let n = coeffs.n();
    let mut k = Mat::<C64>::zeros(2 * n, 2 * n);
    for l in 0..n {
        k[(2 * l, 2 * l)] = C64::new(coeffs.gamma_down[l], 0.0);
        k[(2 * l + 1, 2 * l + 1)] = C64::new(coeffs.gamma_up[l], 0.0);
        for m in 0..n {
            if m == l {
                continue;
            }
            let dd = coeffs.gamma_dd[l][m];
            let du = coeffs.gamma_du[l][m];
            k[(2 * l, 2 * m + 1)] = dd;
            k[(2 * l + 1, 2 * m)] = dd.conj();
            k[(2 * l, 2 * m)] = du;
            k[(2 * l + 1, 2 * m + 1)] = du.conj();
        }
    }
    k
}

/// Jump operators √μ_k Σ_i u_k[i] F_i from the eigendecomposition of the
/// coefficient matrix, largest weight first. Null directions are dropped,
/// so the count is the realized rank.
pub fn diagonalize_dissipator(coeffs: &CoefficientSet, specs: &[SubsystemSpec]) -> Result<Vec<LadderJump>> {
    if coeffs.n() != specs.len() {
        return Err(Error::Dimension(format!("{} coefficient sites for {} subsystems", coeffs.n(), specs.len())));
    }
    let k = kossakowski_matrix(coeffs);
    let evd = k.self_adjoint_eigen(faer::Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let dim = k.nrows();
    let mus: Vec<f64> = (0..dim).map(|i| s[i].re).collect();
    let min = mus.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -CP_TOL {
        return Err(Error::NotCompletelyPositive(min));
    }
    let max = mus.iter().copied().fold(0.0, f64::max);
    let mut jumps = Vec::new();
    for idx in (0..dim).rev() {
        let mu = mus[idx];
        if mu <= 1e-12 * max.max(f64::MIN_POSITIVE) {
            continue;
        }
        let w = mu.sqrt();
        let mut jump = LadderJump::new();
        for l in 0..coeffs.n() {
            let (lo, hi) = (u[(2 * l, idx)], u[(2 * l + 1, idx)]);
            if lo != ZERO {
                jump = jump.lower(lo * w, l);
            }
            if hi != ZERO {
                jump = jump.raise(hi * w, l);
            }
        }
        jumps.push(jump);
    }
    Ok(jumps)
}

/// Smallest eigenvalue of the coefficient matrix.
pub fn kossakowski_min_eigenvalue(coeffs: &CoefficientSet) -> Result<f64> {
    let vals = kossakowski_matrix(coeffs)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DensityMatrix;
    use crate::states::{bell, ket, Bell};

    const QQ: [SubsystemSpec; 2] = [SubsystemSpec::Qubit, SubsystemSpec::Qubit];

    fn coupling(g: f64) -> CouplingSpec {
        CouplingSpec::from_rates(&[g, g], 1e-3).unwrap()
    }

    #[test]
    fn superoperator_matches_direct_application() {
        let l = site_lowering(&QQ, 0).scale(C64::new(0.7, 0.2));
        let h = &site_lowering(&QQ, 1) + &site_lowering(&QQ, 1).adjoint();
        let liou = build_liouvillian_diagonal(&h, std::slice::from_ref(&l)).unwrap();
        let rho = DensityMatrix::pure(&[2, 2], &bell(Bell::PsiPlus)).unwrap().into_operator();
        let ld = l.adjoint();
        let direct = &(&(&(&l * &rho) * &ld) - &(&(&ld * &l) * &rho).scale(C64::new(0.5, 0.0)))
            - &(&(&rho * &(&ld * &l)).scale(C64::new(0.5, 0.0)) + &h.commutator(&rho).scale(C64::new(0.0, 1.0)));
        assert!(liou.apply(&rho).unwrap().max_abs_diff(&direct) < 1e-14);
    }

    #[test]
    fn zero_inputs_give_zero_generator() {
        let h = OperatorMatrix::zeros(&[2, 2]);
        let liou = build_liouvillian_diagonal(&h, &[OperatorMatrix::zeros(&[2, 2])]).unwrap();
        assert_eq!(liou.matrix().norm_max(), 0.0);
    }

    #[test]
    fn ground_bath_jumps_are_local_loss() {
        let jumps = jump_ops_2q(&BathState::ground(2), &coupling(0.8), &QQ).unwrap();
        let s = C64::new(0.8f64.sqrt(), 0.0);
        assert!(jumps[0].max_abs_diff(&site_lowering(&QQ, 0).scale(s)) < 1e-14);
        assert!(jumps[1].max_abs_diff(&site_lowering(&QQ, 1).scale(s)) < 1e-14);
        assert_eq!(jumps[2].max_abs(), 0.0);
        assert_eq!(jumps[3].max_abs(), 0.0);
    }

    #[test]
    fn mixed_bath_cannot_use_diagonal_form() {
        let bath = BathState::mixed(DensityMatrix::maximally_mixed(&[2, 2])).unwrap();
        assert!(matches!(jump_ops_2q(&bath, &coupling(1.0), &QQ), Err(Error::MixedBath)));
    }

    #[test]
    fn phi_minus_is_stationary_under_phi_plus_bath() {
        let g = generator_diagonal(&BathState::bell(Bell::PhiPlus), &coupling(1.0), &QQ).unwrap();
        let liou = g.liouvillian().unwrap();
        let rho = DensityMatrix::pure(&[2, 2], &bell(Bell::PhiMinus)).unwrap().into_operator();
        assert!(liou.apply(&rho).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_rate() {
        let spec = [SubsystemSpec::Qubit];
        let l = site_lowering(&spec, 0).scale(C64::new(2.0f64.sqrt(), 0.0));
        let liou = build_liouvillian_diagonal(&OperatorMatrix::zeros(&[2]), &[l]).unwrap();
        let e = OperatorMatrix::outer(&[2], &ket("e"), &ket("e")).unwrap();
        let d = liou.apply(&e).unwrap();
        assert!((d.get(0, 0).re + 2.0).abs() < 1e-14);
        assert!(liou.trace_preservation_error() < 1e-15);
    }

    #[test]
    fn kossakowski_for_bell_bath_has_rank_two() {
        let c = coefficients_nq(&BathState::bell(Bell::PhiPlus), &coupling(1.0)).unwrap();
        let jumps = diagonalize_dissipator(&c, &QQ).unwrap();
        assert_eq!(jumps.len(), 2);
    }

    #[test]
    fn ladder_round_trip_and_nonlinear_rejection() {
        let specs = [SubsystemSpec::Oscillator { d: 4 }, SubsystemSpec::Oscillator { d: 4 }];
        let j = LadderJump::new().lower(C64::new(1.2, 0.0), 0).raise(C64::new(0.0, 0.4), 1);
        let back = LadderJump::from_operator(&j.to_operator(&specs), &specs).unwrap();
        assert!((back.to_operator(&specs).max_abs_diff(&j.to_operator(&specs))) < 1e-14);
        let a = site_lowering(&specs, 0);
        assert!(matches!(LadderJump::from_operator(&(&a * &a), &specs), Err(Error::NonlinearJump(_))));
    }
}
