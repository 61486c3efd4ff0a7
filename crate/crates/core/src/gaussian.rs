//! Covariance-matrix dynamics for bosonic modes driven by linear jump operators.
//!
//! Quadratures are ordered x = (q₁ … q_N, p₁ … p_N) with a = (q + ip)/√2,
//! so the vacuum has Σ = I/2 (ℏ = 1).

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{OperatorMatrix, ZERO};
use crate::liouvillian::{Ladder, LadderJump, SubsystemSpec};

/// Tolerance on the most negative eigenvalue of Σ + iΩ/2.
pub const UNCERTAINTY_TOL: f64 = -1e-9;

/// Symplectic eigenvalues within this distance of ½ count as pure.
pub const PURITY_TOL: f64 = 1e-6;

/// Ω = [[0, I], [−I, 0]] for `n` modes.
pub fn symplectic_form(n: usize) -> Mat<f64> {
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0
        } else if i == j + n {
            -1.0
        } else {
            0.0
        }
    })
}

fn asymmetry(m: &Mat<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn symmetrize(m: &Mat<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

fn complexify(m: &Mat<f64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], 0.0))
}

fn hermitian_eigenvalues(m: &Mat<C64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// Smallest eigenvalue of Σ + iΩ/2.
pub fn uncertainty_margin(cov: &Mat<f64>) -> Result<f64> {
    let n = cov.nrows() / 2;
    let omega = symplectic_form(n);
    let m = Mat::from_fn(2 * n, 2 * n, |i, j| C64::new(cov[(i, j)], 0.5 * omega[(i, j)]));
    Ok(hermitian_eigenvalues(&m)?.first().copied().unwrap_or(0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    means: Vec<f64>,
    cov: Mat<f64>,
}

impl GaussianState {
    /// Checks shape, symmetry within 1e-12 and the uncertainty relation.
    pub fn new(means: Vec<f64>, cov: Mat<f64>) -> Result<Self> {
        if cov.nrows() != cov.ncols() || !cov.nrows().is_multiple_of(2) || means.len() != cov.nrows() {
            return Err(Error::Dimension(format!(
                "means of length {} with a {}×{} covariance",
                means.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        let asym = asymmetry(&cov);
        if asym > 1e-12 {
            return Err(Error::InvalidState(format!("covariance asymmetric by {asym:.3e}")));
        }
        let margin = uncertainty_margin(&cov)?;
        if margin < UNCERTAINTY_TOL {
            return Err(Error::Uncertainty(margin));
        }
        Ok(Self { means, cov })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            means: vec![0.0; 2 * n_modes],
            cov: Mat::from_fn(2 * n_modes, 2 * n_modes, |i, j| if i == j { 0.5 } else { 0.0 }),
        }
    }

    /// Zero-mean state from the normally ordered moments
    /// `pairs[l][m] = ⟨a_l a_m⟩` and `numbers[l][m] = ⟨a_l† a_m⟩`.
    pub fn from_moments(pairs: &Mat<C64>, numbers: &Mat<C64>) -> Result<Self> {
        let n = pairs.nrows();
        if pairs.ncols() != n || numbers.nrows() != n || numbers.ncols() != n {
            return Err(Error::Dimension("moment matrices must be square and equal in size".into()));
        }
        let mut cov = Mat::<f64>::zeros(2 * n, 2 * n);
        for l in 0..n {
            for m in 0..n {
                let half = if l == m { 0.5 } else { 0.0 };
                let (a, b) = (pairs[(l, m)], numbers[(l, m)]);
                cov[(l, m)] = a.re + b.re + half;
                cov[(n + l, n + m)] = -a.re + b.re + half;
                cov[(l, n + m)] = a.im + b.im;
                cov[(n + m, l)] = a.im + b.im;
            }
        }
        Self::new(vec![0.0; 2 * n], symmetrize(&cov))
    }

    pub fn n_modes(&self) -> usize {
        self.means.len() / 2
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn cov(&self) -> &Mat<f64> {
        &self.cov
    }

    pub fn max_abs_diff(&self, other: &GaussianState) -> f64 {
        assert_eq!(self.cov.nrows(), other.cov.nrows(), "mode counts differ");
        (&self.cov - &other.cov).norm_max()
    }

    /// Symplectic eigenvalues ν₁ ≤ … ≤ ν_N, the moduli of the eigenvalues
    /// of iΩΣ, computed from the Hermitian form √Σ (iΩ) √Σ.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let dim = self.cov.nrows();
        let evd = self.cov.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let scaled = Mat::from_fn(dim, dim, |i, k| u[(i, k)] * s[k].max(0.0).sqrt());
        let root = &scaled * u.transpose();
        let omega = symplectic_form(self.n_modes());
        let i_omega = Mat::from_fn(dim, dim, |i, j| C64::new(0.0, omega[(i, j)]));
        let root_c = complexify(&root);
        let m = &(&root_c * &i_omega) * &root_c;
        let vals = hermitian_eigenvalues(&m)?;
        Ok(vals[self.n_modes()..].to_vec())
    }

    pub fn is_pure(&self) -> Result<bool> {
        Ok(self.symplectic_eigenvalues()?.iter().all(|v| (v - 0.5).abs() <= PURITY_TOL))
    }
}

/// Two-mode squeezed vacuum S(ζ)|0,0⟩, ζ = r e^{iϑ}: the common null state of
/// cosh r a₁ + e^{iϑ} sinh r a₂† and cosh r a₂ + e^{iϑ} sinh r a₁†.
pub fn tmsv_covariance(r: f64, theta: f64) -> Result<GaussianState> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::config("r", format!("squeezing amplitude must be finite and ≥ 0, got {r}")));
    }
    let pair = -C64::from_polar(r.sinh() * r.cosh(), theta);
    let occ = C64::new(r.sinh().powi(2), 0.0);
    let pairs = Mat::from_fn(2, 2, |i, j| if i == j { ZERO } else { pair });
    let numbers = Mat::from_fn(2, 2, |i, j| if i == j { occ } else { ZERO });
    GaussianState::from_moments(&pairs, &numbers)
}

/// Jump operators L_m = Σ_k C[m,k] x_k.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearJumpSet {
    c: Mat<C64>,
    n_modes: usize,
}

impl LinearJumpSet {
    pub fn from_matrix(c: Mat<C64>, n_modes: usize) -> Result<Self> {
        if c.ncols() != 2 * n_modes {
            return Err(Error::Dimension(format!("{} columns for {n_modes} modes", c.ncols())));
        }
        Ok(Self { c, n_modes })
    }

    pub fn c(&self) -> &Mat<C64> {
        &self.c
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Jump operators as matrices on the truncated Fock space of `specs`.
    /// Each must be a linear combination of a_ℓ and a_ℓ†.
    pub fn from_operators(ops: &[OperatorMatrix], specs: &[SubsystemSpec]) -> Result<Self> {
        let jumps = ops.iter().map(|op| LadderJump::from_operator(op, specs)).collect::<Result<Vec<_>>>()?;
        jumps_to_quadrature(&jumps, specs.len())
    }
}

/// a = (q + ip)/√2 and a† = (q − ip)/√2.
pub fn jumps_to_quadrature(jumps: &[LadderJump], n_modes: usize) -> Result<LinearJumpSet> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut c = Mat::<C64>::zeros(jumps.len(), 2 * n_modes);
    for (m, jump) in jumps.iter().enumerate() {
        for t in &jump.terms {
            if t.site >= n_modes {
                return Err(Error::Dimension(format!("jump acts on mode {} of {n_modes}", t.site)));
            }
            let p = match t.ladder {
                Ladder::Lower => C64::new(0.0, h),
                Ladder::Raise => C64::new(0.0, -h),
            };
            c[(m, t.site)] += t.coeff * h;
            c[(m, n_modes + t.site)] += t.coeff * p;
        }
    }
    LinearJumpSet::from_matrix(c, n_modes)
}

/// √Γ[cosh r a₁ + e^{iϑ} sinh r a₂†] and √Γ[cosh r a₂ + e^{iϑ} sinh r a₁†].
pub fn squeezing_jumps(gamma_eff: f64, r: f64, theta: f64) -> Vec<LadderJump> {
    let s = gamma_eff.sqrt();
    let ch = C64::new(s * r.cosh(), 0.0);
    let sh = C64::from_polar(s * r.sinh(), theta);
    vec![LadderJump::new().lower(ch, 0).raise(sh, 1), LadderJump::new().lower(ch, 1).raise(sh, 0)]
}

/// Σ̇ = AΣ + ΣAᵀ + B, ẋ = Ax.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftDiffusion {
    pub a: Mat<f64>,
    pub b: Mat<f64>,
}

impl DriftDiffusion {
    pub fn n_modes(&self) -> usize {
        self.a.nrows() / 2
    }

    /// AΣ + ΣAᵀ + B
    pub fn lyapunov_residual(&self, cov: &Mat<f64>) -> Mat<f64> {
        &(&(&self.a * cov) + &(cov * self.a.transpose())) + &self.b
    }

    /// Largest column sum of |A|.
    pub fn drift_norm(&self) -> f64 {
        let n = self.a.nrows();
        (0..n).map(|j| (0..n).map(|i| self.a[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

/// A = Ω(G + Im CᴴC), B = Ω Re(CᴴC) Ωᵀ, with G the quadratic Hamiltonian
/// H = ½ xᵀGx (zero when absent).
pub fn drift_diffusion(jumps: &LinearJumpSet, g: Option<&Mat<f64>>) -> Result<DriftDiffusion> {
    let dim = 2 * jumps.n_modes;
    let cc = jumps.c.adjoint() * &jumps.c;
    let mut ham = Mat::<f64>::zeros(dim, dim);
    if let Some(g) = g {
        if g.nrows() != dim || g.ncols() != dim {
            return Err(Error::Dimension(format!("G is {}×{}, expected {dim}×{dim}", g.nrows(), g.ncols())));
        }
        ham = symmetrize(g);
    }
    let im = Mat::from_fn(dim, dim, |i, j| ham[(i, j)] + cc[(i, j)].im);
    let re = Mat::from_fn(dim, dim, |i, j| cc[(i, j)].re);
    let omega = symplectic_form(jumps.n_modes);
    let a = &omega * &im;
    let b = symmetrize(&(&(&omega * &re) * omega.transpose()));
    Ok(DriftDiffusion { a, b })
}

#[derive(Clone, Debug, Default)]
pub struct GaussianTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<GaussianState>,
}

impl GaussianTrajectory {
    pub fn fidelities(&self, target: &GaussianState) -> Result<Vec<f64>> {
        self.states.iter().map(|s| gaussian_fidelity(s, target)).collect()
    }

    /// First time the fidelity to `target` reaches `threshold`, linearly
    /// interpolated between samples.
    pub fn crossing_time(&self, target: &GaussianState, threshold: f64) -> Result<Option<f64>> {
        let f = self.fidelities(target)?;
        if f.first().is_some_and(|&v| v >= threshold) {
            return Ok(Some(self.times[0]));
        }
        for k in 1..f.len() {
            if f[k] >= threshold {
                let w = (threshold - f[k - 1]) / (f[k] - f[k - 1]);
                return Ok(Some(self.times[k - 1] + w * (self.times[k] - self.times[k - 1])));
            }
        }
        Ok(None)
    }
}

fn step_rhs(dd: &DriftDiffusion, x: &[f64], cov: &Mat<f64>) -> (Vec<f64>, Mat<f64>) {
    let n = x.len();
    let dx = (0..n).map(|i| (0..n).map(|j| dd.a[(i, j)] * x[j]).sum()).collect();
    (dx, dd.lyapunov_residual(cov))
}

/// Fixed-step RK4 on the means and covariance, recording every `stride`
/// steps and at t_end. Requires dt ≤ 0.01/‖A‖₁.
pub fn evolve_covariance(
    dd: &DriftDiffusion,
    s0: &GaussianState,
    dt: f64,
    t_end: f64,
    stride: usize,
) -> Result<GaussianTrajectory> {
    if dd.a.nrows() != s0.cov.nrows() {
        return Err(Error::Dimension(format!("{}-mode drift for a {}-mode state", dd.n_modes(), s0.n_modes())));
    }
    if dt.is_nan() || dt <= 0.0 || t_end.is_nan() || t_end < 0.0 {
        return Err(Error::config("integrator", format!("need dt > 0 and t_end ≥ 0, got {dt} and {t_end}")));
    }
    let norm = dd.drift_norm();
    if norm > 0.0 && dt > 0.01 / norm * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, bound: 0.01 / norm });
    }
    let steps = if t_end == 0.0 { 0 } else { (t_end / dt - 1e-9).ceil().max(1.0) as usize };
    let h = if steps == 0 { dt } else { t_end / steps as f64 };
    let stride = stride.max(1);

    let mut traj = GaussianTrajectory::default();
    traj.times.push(0.0);
    traj.states.push(s0.clone());
    let mut x = s0.means.clone();
    let mut cov = s0.cov.clone();
    let axpy = |x: &[f64], k: &[f64], c: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + c * b).collect() };
    for step in 1..=steps {
        let (k1x, k1) = step_rhs(dd, &x, &cov);
        let (k2x, k2) = step_rhs(dd, &axpy(&x, &k1x, 0.5 * h), &(&cov + &k1 * (0.5 * h)));
        let (k3x, k3) = step_rhs(dd, &axpy(&x, &k2x, 0.5 * h), &(&cov + &k2 * (0.5 * h)));
        let (k4x, k4) = step_rhs(dd, &axpy(&x, &k3x, h), &(&cov + &k3 * h));
        let incr = &(&(&k1 + &k2 * 2.0) + &k3 * 2.0) + &k4;
        cov = symmetrize(&(&cov + &incr * (h / 6.0)));
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        }
        if step % stride == 0 || step == steps {
            traj.times.push(step as f64 * h);
            traj.states.push(GaussianState::new(x.clone(), cov.clone())?);
        }
    }
    Ok(traj)
}

/// F = det(Σ_a + Σ_b)^{−1/2}, valid for zero means when at least one state
/// is pure.
pub fn gaussian_fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.cov.nrows() != b.cov.nrows() {
        return Err(Error::Dimension(format!("{} modes vs {}", a.n_modes(), b.n_modes())));
    }
    let zero_means = a.means.iter().chain(&b.means).all(|v| v.abs() <= 1e-12);
    if !zero_means || !(a.is_pure()? || b.is_pure()?) {
        return Err(Error::FidelityPrecondition);
    }
    let det = (&a.cov + &b.cov).determinant();
    Ok(det.powf(-0.5).min(1.0))
}
