//! Two truncated oscillators evolved in the number basis.
//!
//! Jump operators built from a₁, a₂† lower the charge q = n₁ − n₂ by one and
//! those built from a₂, a₁† raise it. Starting from a state without
//! coherences between charge sectors, the density matrix stays block
//! diagonal in q and every operator is a sparse map between neighbouring
//! blocks, so a d = 30 pair costs O(d³) per step instead of O(d⁴) memory
//! for the dense generator.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::dynamics::{InvariantStats, TRACE_ABORT};
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::{OperatorMatrix, ONE, ZERO};
use crate::liouvillian::{Ladder, LadderJump};

/// Top-level population above which a run is aborted.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Sparse operator from one charge block to another: (row, col, value).
#[derive(Clone, Debug, Default)]
struct Sparse {
    entries: Vec<(usize, usize, C64)>,
}

#[derive(Clone, Debug)]
struct SectorJump {
    shift: isize,
    /// Indexed by source block.
    maps: Vec<Sparse>,
}

#[derive(Clone, Debug)]
pub struct TwoModeFock {
    d: usize,
    jumps: Vec<SectorJump>,
    /// Σ L†L restricted to each block.
    decay: Vec<Sparse>,
    rate_bound: f64,
}

/// Density matrix as one dense block per charge sector, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorState {
    d: usize,
    blocks: Vec<Vec<C64>>,
}

impl TwoModeFock {
    fn n_blocks(&self) -> usize {
        2 * self.d - 1
    }

    fn charge(&self, b: usize) -> isize {
        b as isize - (self.d as isize - 1)
    }

    fn block_of(&self, q: isize) -> Option<usize> {
        let b = q + self.d as isize - 1;
        (b >= 0 && (b as usize) < self.n_blocks()).then_some(b as usize)
    }

    fn size(&self, b: usize) -> usize {
        self.d - self.charge(b).unsigned_abs()
    }

    /// (n₁, n₂) of element k of block b.
    fn occupation(&self, b: usize, k: usize) -> (usize, usize) {
        let q = self.charge(b);
        (k + q.max(0) as usize, k + (-q).max(0) as usize)
    }

    fn index_in(&self, b: usize, n1: usize) -> usize {
        let (o1, _) = self.occupation(b, 0);
        n1 - o1
    }

    pub fn new(d: usize, jumps: &[LadderJump]) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension(format!("truncation d = {d} must be at least 2")));
        }
        let mut model = Self { d, jumps: Vec::new(), decay: Vec::new(), rate_bound: 0.0 };
        for jump in jumps.iter().filter(|j| !j.is_zero(0.0)) {
            let mut shift = None;
            for t in &jump.terms {
                if t.site > 1 {
                    return Err(Error::Dimension(format!("jump acts on mode {} of 2", t.site)));
                }
                let s = match (t.site, t.ladder) {
                    (0, Ladder::Lower) | (1, Ladder::Raise) => -1,
                    _ => 1,
                };
                if t.coeff != ZERO && shift.replace(s).is_some_and(|old| old != s) {
                    return Err(Error::InvalidBath(
                        "jump operator mixes charge sectors; only a₁/a₂† or a₂/a₁† combinations are supported".into(),
                    ));
                }
            }
            let shift = shift.unwrap_or(-1);
            let mut maps = vec![Sparse::default(); model.n_blocks()];
            for (b, map) in maps.iter_mut().enumerate() {
                let Some(target) = model.block_of(model.charge(b) + shift) else { continue };
                for k in 0..model.size(b) {
                    let (n1, n2) = model.occupation(b, k);
                    for t in jump.terms.iter().filter(|t| t.coeff != ZERO) {
                        let mut occ = [n1, n2];
                        let n = occ[t.site];
                        let amp = match t.ladder {
                            Ladder::Lower if n > 0 => {
                                occ[t.site] -= 1;
                                (n as f64).sqrt()
                            }
                            Ladder::Raise if n + 1 < d => {
                                occ[t.site] += 1;
                                ((n + 1) as f64).sqrt()
                            }
                            _ => continue,
                        };
                        let row = model.index_in(target, occ[0]);
                        map.entries.push((row, k, t.coeff * amp));
                    }
                }
            }
            model.jumps.push(SectorJump { shift, maps });
        }
        model.decay = (0..model.n_blocks()).map(|b| model.decay_block(b)).collect();
        model.rate_bound = model
            .decay
            .iter()
            .map(|s| {
                let mut rows = vec![0.0; d];
                for &(r, _, v) in &s.entries {
                    rows[r] += v.norm();
                }
                rows.into_iter().fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        Ok(model)
    }

    fn decay_block(&self, b: usize) -> Sparse {
        let n = self.size(b);
        let mut dense = vec![ZERO; n * n];
        for j in &self.jumps {
            let Some(t) = self.block_of(self.charge(b) + j.shift) else { continue };
            let m = self.size(t);
            let mut l = vec![ZERO; m * n];
            for &(r, c, v) in &j.maps[b].entries {
                l[r * n + c] += v;
            }
            for i in 0..n {
                for k in 0..n {
                    let s: C64 = (0..m).map(|r| l[r * n + i].conj() * l[r * n + k]).sum();
                    dense[i * n + k] += s;
                }
            }
        }
        let entries = (0..n * n).filter(|&x| dense[x] != ZERO).map(|x| (x / n, x % n, dense[x])).collect();
        Sparse { entries }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Upper bound on the decay rates: max row sum of |Σ L†L|.
    pub fn rate_bound(&self) -> f64 {
        self.rate_bound
    }

    pub fn vacuum(&self) -> SectorState {
        self.number_state(0, 0)
    }

    pub fn number_state(&self, n1: usize, n2: usize) -> SectorState {
        assert!(n1 < self.d && n2 < self.d, "occupation beyond truncation");
        let mut blocks: Vec<Vec<C64>> = (0..self.n_blocks()).map(|b| vec![ZERO; self.size(b).pow(2)]).collect();
        let b = self.block_of(n1 as isize - n2 as isize).expect("charge within range");
        let k = self.index_in(b, n1);
        blocks[b][k * self.size(b) + k] = ONE;
        SectorState { d: self.d, blocks }
    }

    fn rhs(&self, rho: &SectorState, out: &mut SectorState) {
        for (b, blk) in out.blocks.iter_mut().enumerate() {
            let n = self.size(b);
            blk.iter_mut().for_each(|v| *v = ZERO);
            // −½{K, ρ}
            for &(r, c, v) in &self.decay[b].entries {
                let h = v * 0.5;
                for j in 0..n {
                    blk[r * n + j] -= h * rho.blocks[b][c * n + j];
                    blk[j * n + c] -= h * rho.blocks[b][j * n + r];
                }
            }
        }
        // L ρ L† feeds block q + shift from block q.
        for j in &self.jumps {
            for b in 0..self.n_blocks() {
                let Some(t) = self.block_of(self.charge(b) + j.shift) else { continue };
                let (n, m) = (self.size(b), self.size(t));
                let map = &j.maps[b].entries;
                if map.is_empty() {
                    continue;
                }
                let mut tmp = vec![ZERO; m * n];
                for &(r, c, v) in map {
                    for col in 0..n {
                        tmp[r * n + col] += v * rho.blocks[b][c * n + col];
                    }
                }
                let dst = &mut out.blocks[t];
                for &(r, c, v) in map {
                    let vc = v.conj();
                    for row in 0..m {
                        dst[row * m + r] += tmp[row * n + c] * vc;
                    }
                }
            }
        }
    }

    /// Fixed-step RK4 from `rho0`, sampled every `stride` steps and at t_end.
    /// The step must satisfy dt · rate_bound ≤ 0.5, well inside the RK4
    /// stability region.
    pub fn evolve(&self, rho0: &SectorState, dt: f64, t_end: f64, stride: usize) -> Result<FockTrajectory> {
        if rho0.d != self.d {
            return Err(Error::Dimension(format!("state truncation {} vs model {}", rho0.d, self.d)));
        }
        if dt.is_nan() || dt <= 0.0 || t_end.is_nan() || t_end < 0.0 {
            return Err(Error::config("integrator", format!("need dt > 0 and t_end ≥ 0, got {dt} and {t_end}")));
        }
        let bound = if self.rate_bound > 0.0 { 0.5 / self.rate_bound } else { f64::INFINITY };
        if dt > bound {
            return Err(Error::StepTooLarge { dt, bound });
        }
        let steps = if t_end == 0.0 { 0 } else { (t_end / dt - 1e-9).ceil().max(1.0) as usize };
        let h = if steps == 0 { dt } else { t_end / steps as f64 };
        let stride = stride.max(1);

        let mut traj = FockTrajectory::default();
        traj.record(0.0, rho0)?;
        let mut rho = rho0.clone();
        let zero = rho.scaled_copy(0.0);
        let (mut k1, mut k2, mut k3, mut k4) = (zero.clone(), zero.clone(), zero.clone(), zero.clone());
        let mut stage = zero;
        for step in 1..=steps {
            self.rhs(&rho, &mut k1);
            stage.assign_axpy(&rho, &k1, 0.5 * h);
            self.rhs(&stage, &mut k2);
            stage.assign_axpy(&rho, &k2, 0.5 * h);
            self.rhs(&stage, &mut k3);
            stage.assign_axpy(&rho, &k3, h);
            self.rhs(&stage, &mut k4);
            for b in 0..rho.blocks.len() {
                for i in 0..rho.blocks[b].len() {
                    rho.blocks[b][i] +=
                        (k1.blocks[b][i] + (k2.blocks[b][i] + k3.blocks[b][i]) * 2.0 + k4.blocks[b][i]) * (h / 6.0);
                }
            }
            let drift = (rho.trace() - ONE).norm();
            traj.stats.max_trace_drift = traj.stats.max_trace_drift.max(drift);
            if drift > TRACE_ABORT {
                return Err(Error::TraceDrift { drift, time: step as f64 * h });
            }
            if step % stride == 0 || step == steps {
                traj.record(step as f64 * h, &rho)?;
            }
        }
        Ok(traj)
    }
}

impl SectorState {
    fn scaled_copy(&self, s: f64) -> Self {
        Self { d: self.d, blocks: self.blocks.iter().map(|b| b.iter().map(|v| v * s).collect()).collect() }
    }

    fn assign_axpy(&mut self, x: &SectorState, k: &SectorState, c: f64) {
        for b in 0..self.blocks.len() {
            for i in 0..self.blocks[b].len() {
                self.blocks[b][i] = x.blocks[b][i] + k.blocks[b][i] * c;
            }
        }
    }

    fn sizes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().enumerate().map(|(b, blk)| (b, (blk.len() as f64).sqrt().round() as usize))
    }

    fn charge(&self, b: usize) -> isize {
        b as isize - (self.d as isize - 1)
    }

    fn occupation(&self, b: usize, k: usize) -> (usize, usize) {
        let q = self.charge(b);
        (k + q.max(0) as usize, k + (-q).max(0) as usize)
    }

    pub fn trace(&self) -> C64 {
        self.sizes().map(|(b, n)| (0..n).map(|k| self.blocks[b][k * n + k]).sum::<C64>()).sum()
    }

    /// Population with either mode in its highest retained level.
    pub fn top_population(&self) -> f64 {
        let mut p = 0.0;
        for (b, n) in self.sizes() {
            for k in 0..n {
                let (n1, n2) = self.occupation(b, k);
                if n1 == self.d - 1 || n2 == self.d - 1 {
                    p += self.blocks[b][k * n + k].re;
                }
            }
        }
        p
    }

    /// ⟨a₁a₂⟩ and ⟨a_ℓ†a_ℓ⟩. Moments that change the charge vanish.
    pub fn moments(&self) -> (C64, [f64; 2]) {
        let mut pair = ZERO;
        let mut occ = [0.0; 2];
        for (b, n) in self.sizes() {
            for k in 0..n {
                let (n1, n2) = self.occupation(b, k);
                let p = self.blocks[b][k * n + k].re;
                occ[0] += n1 as f64 * p;
                occ[1] += n2 as f64 * p;
                if k > 0 {
                    // a₁a₂|n₁,n₂⟩ = √(n₁n₂)|n₁−1,n₂−1⟩, element k−1 of the same block
                    pair += self.blocks[b][k * n + (k - 1)] * ((n1 * n2) as f64).sqrt();
                }
            }
        }
        (pair, occ)
    }

    /// Quadrature covariance matrix from the second moments.
    pub fn covariance(&self) -> Result<GaussianState> {
        let (pair, occ) = self.moments();
        let pairs = Mat::from_fn(2, 2, |i, j| if i == j { ZERO } else { pair });
        let numbers = Mat::from_fn(2, 2, |i, j| if i == j { C64::new(occ[i], 0.0) } else { ZERO });
        GaussianState::from_moments(&pairs, &numbers)
    }

    /// Dense matrix on the d² product space, ordered |n₁⟩ ⊗ |n₂⟩.
    pub fn to_operator(&self) -> OperatorMatrix {
        let d = self.d;
        let mut data = Mat::<C64>::zeros(d * d, d * d);
        for (b, n) in self.sizes() {
            for i in 0..n {
                let (a1, a2) = self.occupation(b, i);
                for k in 0..n {
                    let (c1, c2) = self.occupation(b, k);
                    data[(a1 * d + a2, c1 * d + c2)] = self.blocks[b][i * n + k];
                }
            }
        }
        OperatorMatrix::new(vec![d, d], data).expect("side matches dims")
    }

    fn record_stats(&self, stats: &mut InvariantStats) -> Result<()> {
        stats.max_trace_drift = stats.max_trace_drift.max((self.trace() - ONE).norm());
        for (b, n) in self.sizes() {
            let blk = &self.blocks[b];
            let m = OperatorMatrix::new(vec![n], Mat::from_fn(n, n, |i, k| blk[i * n + k]))?;
            stats.max_hermiticity_error = stats.max_hermiticity_error.max(m.hermiticity_error());
            let min = m.eigenvalues_hermitian()?.first().copied().unwrap_or(0.0);
            stats.min_eigenvalue = stats.min_eigenvalue.min(min);
        }
        stats.samples += 1;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct FockTrajectory {
    pub times: Vec<f64>,
    pub covariances: Vec<GaussianState>,
    pub top_population: Vec<f64>,
    pub stats: InvariantStats,
    pub last: Option<SectorState>,
}

impl FockTrajectory {
    fn record(&mut self, t: f64, rho: &SectorState) -> Result<()> {
        let top = rho.top_population();
        if top > TRUNCATION_TOL {
            return Err(Error::Truncation(top));
        }
        rho.record_stats(&mut self.stats)?;
        self.times.push(t);
        self.covariances.push(rho.covariance()?);
        self.top_population.push(top);
        self.last = Some(rho.clone());
        Ok(())
    }
}

/// Truncated two-mode squeezed vacuum Σ_n c_n |n, n⟩ with
/// c_n = (−e^{iϑ} tanh r)ⁿ / cosh r, as a ket on the d² product space.
pub fn tmsv_ket(d: usize, r: f64, theta: f64) -> Vec<C64> {
    let mut ket = vec![ZERO; d * d];
    let ratio = -C64::from_polar(r.tanh(), theta);
    let mut c = C64::new(1.0 / r.cosh(), 0.0);
    for n in 0..d {
        ket[n * d + n] = c;
        c *= ratio;
    }
    ket
}
