use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, OperatorMatrix, ONE};
use crate::liouvillian::Liouvillian;

/// Trace drift beyond which a run is aborted.
pub const TRACE_ABORT: f64 = 1e-6;

/// Fixed-step settings. `stride` is the number of steps between recorded states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrator {
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
}

impl Integrator {
    /// Largest admissible step for a generator: 0.01 over its norm.
    pub fn max_step(l: &Liouvillian) -> f64 {
        let norm = l.norm_one();
        if norm == 0.0 {
            f64::INFINITY
        } else {
            0.01 / norm
        }
    }

    /// Largest admissible step, recording only the endpoints.
    pub fn auto(l: &Liouvillian, t_end: f64) -> Self {
        let dt = Self::max_step(l).min(t_end.max(f64::MIN_POSITIVE));
        Self { dt, t_end, stride: usize::MAX }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    /// Number of steps and the step actually taken so that t_end is hit.
    fn plan(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let steps = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }
}

/// Worst-case invariant violations seen over one or more runs.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct InvariantStats {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub samples: usize,
}

impl Default for InvariantStats {
    fn default() -> Self {
        Self { max_trace_drift: 0.0, max_hermiticity_error: 0.0, min_eigenvalue: f64::INFINITY, samples: 0 }
    }
}

impl InvariantStats {
    pub fn record(&mut self, op: &OperatorMatrix) -> Result<()> {
        self.max_trace_drift = self.max_trace_drift.max((op.trace() - ONE).norm());
        self.max_hermiticity_error = self.max_hermiticity_error.max(op.hermiticity_error());
        let min = op.eigenvalues_hermitian()?.first().copied().unwrap_or(0.0);
        self.min_eigenvalue = self.min_eigenvalue.min(min);
        self.samples += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &InvariantStats) {
        self.max_trace_drift = self.max_trace_drift.max(other.max_trace_drift);
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.samples += other.samples;
    }

    /// Trace within 1e-9, Hermiticity within 1e-10, eigenvalues ≥ −1e-9.
    pub fn passes(&self) -> bool {
        self.max_trace_drift <= 1e-9 && self.max_hermiticity_error <= 1e-10 && self.min_eigenvalue >= -1e-9
    }
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: BTreeMap<String, Vec<f64>>,
    pub stats: InvariantStats,
}

impl Trajectory {
    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    /// Evaluate a real observable on every recorded state and store it.
    pub fn observe(&mut self, name: &str, f: impl Fn(&DensityMatrix) -> Result<f64>) -> Result<&[f64]> {
        let series = self.states.iter().map(&f).collect::<Result<Vec<_>>>()?;
        self.observables.insert(name.to_string(), series);
        Ok(&self.observables[name])
    }

    pub(crate) fn push(&mut self, t: f64, op: OperatorMatrix) -> Result<()> {
        self.stats.record(&op)?;
        self.times.push(t);
        self.states.push(DensityMatrix::new(op)?);
        Ok(())
    }
}

/// One classical RK4 step of a linear autonomous system is the matrix
/// I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24.
fn rk4_step_matrix(l: &Liouvillian, h: f64) -> Mat<C64> {
    let n = l.matrix().nrows();
    let hl = l.matrix() * faer::Scale(C64::new(h, 0.0));
    let id = Mat::<C64>::identity(n, n);
    let mut acc = &id + &hl * faer::Scale(C64::new(0.25, 0.0));
    for k in [3.0, 2.0, 1.0] {
        acc = &id + (&hl * &acc) * faer::Scale(C64::new(1.0 / k, 0.0));
    }
    acc
}

fn check(l: &Liouvillian, rho0: &DensityMatrix, integ: &Integrator) -> Result<()> {
    if rho0.dims() != l.dims() {
        return Err(Error::Dimension(format!("state dims {:?} vs generator dims {:?}", rho0.dims(), l.dims())));
    }
    if integ.dt.is_nan() || integ.dt <= 0.0 || integ.t_end.is_nan() || integ.t_end < 0.0 {
        return Err(Error::config(
            "integrator",
            format!("need dt > 0 and t_end ≥ 0, got {} and {}", integ.dt, integ.t_end),
        ));
    }
    let bound = Integrator::max_step(l);
    if integ.dt > bound * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: integ.dt, bound });
    }
    Ok(())
}

fn trace_of(v: faer::ColRef<'_, C64>, n: usize) -> C64 {
    (0..n).map(|i| v[i * n + i]).sum()
}

/// Fixed-step RK4 integration of ρ̇ = L(ρ), recording every `stride` steps
/// and at t_end.
pub fn evolve_me(l: &Liouvillian, rho0: &DensityMatrix, integ: Integrator) -> Result<Trajectory> {
    check(l, rho0, &integ)?;
    let n = l.hilbert_dim();
    let (steps, h) = integ.plan();
    let m = rk4_step_matrix(l, h);
    let stride = integ.stride.max(1);
    let mut v = Mat::<C64>::from_fn(n * n, 1, |i, _| rho0.as_operator().vectorize()[i]);
    let mut traj = Trajectory::default();
    traj.push(0.0, rho0.as_operator().clone())?;
    for step in 1..=steps {
        v = &m * &v;
        let drift = (trace_of(v.col(0), n) - ONE).norm();
        traj.stats.max_trace_drift = traj.stats.max_trace_drift.max(drift);
        if drift > TRACE_ABORT {
            return Err(Error::TraceDrift { drift, time: step as f64 * h });
        }
        if step % stride == 0 || step == steps {
            let vals: Vec<C64> = (0..n * n).map(|i| v[(i, 0)]).collect();
            traj.push(step as f64 * h, OperatorMatrix::unvectorize(l.dims(), &vals)?)?;
        }
    }
    Ok(traj)
}

/// Final state only.
pub fn evolve_final(l: &Liouvillian, rho0: &DensityMatrix, t_end: f64) -> Result<(DensityMatrix, InvariantStats)> {
    let traj = evolve_me(l, rho0, Integrator::auto(l, t_end))?;
    let stats = traj.stats;
    let last = traj.states.into_iter().last().expect("trajectory holds the initial state");
    Ok((last, stats))
}

/// Evolve many initial states under one generator in lockstep; returns the
/// final states and the combined invariant statistics.
pub fn evolve_many(
    l: &Liouvillian,
    rho0s: &[DensityMatrix],
    t_end: f64,
) -> Result<(Vec<DensityMatrix>, InvariantStats)> {
    let integ = Integrator::auto(l, t_end);
    for r in rho0s {
        check(l, r, &integ)?;
    }
    let n = l.hilbert_dim();
    let (steps, h) = integ.plan();
    let m = rk4_step_matrix(l, h);
    let vecs: Vec<Vec<C64>> = rho0s.iter().map(|r| r.as_operator().vectorize()).collect();
    let mut v = Mat::<C64>::from_fn(n * n, rho0s.len(), |i, k| vecs[k][i]);
    let mut stats = InvariantStats::default();
    for r in rho0s {
        stats.record(r.as_operator())?;
    }
    for step in 1..=steps {
        v = &m * &v;
        for k in 0..rho0s.len() {
            let drift = (trace_of(v.col(k), n) - ONE).norm();
            stats.max_trace_drift = stats.max_trace_drift.max(drift);
            if drift > TRACE_ABORT {
                return Err(Error::TraceDrift { drift, time: step as f64 * h });
            }
        }
    }
    let mut out = Vec::with_capacity(rho0s.len());
    for k in 0..rho0s.len() {
        let vals: Vec<C64> = (0..n * n).map(|i| v[(i, k)]).collect();
        let op = OperatorMatrix::unvectorize(l.dims(), &vals)?;
        stats.record(&op)?;
        out.push(DensityMatrix::new(op)?);
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::{build_liouvillian_diagonal, site_lowering, SubsystemSpec};
    use crate::states::ket;

    fn damping(gamma: f64) -> Liouvillian {
        let spec = [SubsystemSpec::Qubit];
        let l = site_lowering(&spec, 0).scale(C64::new(gamma.sqrt(), 0.0));
        build_liouvillian_diagonal(&OperatorMatrix::zeros(&[2]), &[l]).unwrap()
    }

    #[test]
    fn zero_generator_keeps_state() {
        let l = Liouvillian::zero(&[2]);
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let traj = evolve_me(&l, &rho, Integrator { dt: 0.1, t_end: 1.0, stride: 1 }).unwrap();
        assert_eq!(traj.states.len(), 11);
        assert!(traj.states.iter().all(|s| s.max_abs_diff(&rho) == 0.0));
    }

    #[test]
    fn amplitude_damping_matches_exponential() {
        let l = damping(1.0);
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let (last, stats) = evolve_final(&l, &rho, 1.0).unwrap();
        assert!((last.get(0, 0).re - (-1.0f64).exp()).abs() < 1e-8);
        assert!(stats.passes());
    }

    #[test]
    fn oversized_step_is_rejected() {
        let l = damping(1.0);
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let r = evolve_me(&l, &rho, Integrator { dt: 0.5, t_end: 1.0, stride: 1 });
        assert!(matches!(r, Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn times_are_strictly_increasing_and_hit_t_end() {
        let l = damping(0.5);
        let rho = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let dt = Integrator::max_step(&l) * 0.9;
        let traj = evolve_me(&l, &rho, Integrator { dt, t_end: 0.37, stride: 7 }).unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert!((traj.times.last().unwrap() - 0.37).abs() < 1e-14);
    }

    #[test]
    fn batched_matches_single() {
        let l = damping(1.3);
        let a = DensityMatrix::pure(&[2], &ket("e")).unwrap();
        let b = DensityMatrix::pure(&[2], &[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let (many, _) = evolve_many(&l, &[a.clone(), b.clone()], 0.8).unwrap();
        let (sa, _) = evolve_final(&l, &a, 0.8).unwrap();
        let (sb, _) = evolve_final(&l, &b, 0.8).unwrap();
        assert!(many[0].max_abs_diff(&sa) < 1e-14);
        assert!(many[1].max_abs_diff(&sb) < 1e-14);
    }
}
