//! Scenario execution, CSV tables and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bath::coefficients_nq;
use crate::config::{FormChoice, Method, Observable, ScenarioConfig, StateSpec};
use crate::dynamics::{evolve_me, steady_states, CollisionMap, Integrator, InvariantStats, Trajectory};
use crate::error::{Error, Result};
use crate::fock::TwoModeFock;
use crate::gaussian::{
    drift_diffusion, evolve_covariance, gaussian_fidelity, jumps_to_quadrature, tmsv_covariance, GaussianState,
};
use crate::linalg::DensityMatrix;
use crate::liouvillian::{
    diagonalize_dissipator, generator_diagonal, generator_nondiagonal, jump_ladders_2q, SubsystemSpec,
};
use crate::measures::{log_negativity, pt_spectrum, purity, state_fidelity};

/// Largest Hilbert dimension integrated with a dense superoperator.
pub const DENSE_LIMIT: usize = 32;

/// A header plus rows of numbers, written with 17 significant digits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SteadySummary {
    pub dimension: usize,
    pub unique: bool,
    pub zero_eigenvalues: usize,
    pub gap: f64,
    pub observables: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub versions: BTreeMap<String, String>,
    pub config_sha256: String,
    pub name: Option<String>,
    pub method: String,
    pub runtime_seconds: f64,
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub invariants: InvariantStats,
    pub invariants_pass: bool,
    pub steady_state: Option<SteadySummary>,
}

impl Manifest {
    pub fn new(config_bytes: &[u8], name: Option<String>, method: &str) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("qme".into(), env!("CARGO_PKG_VERSION").into());
        versions.insert("faer".into(), "0.24".into());
        Self {
            tool: "qme".into(),
            versions,
            config_sha256: sha256_hex(config_bytes),
            name,
            method: method.into(),
            runtime_seconds: 0.0,
            files: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            invariants: InvariantStats::default(),
            invariants_pass: true,
            steady_state: None,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { out_dir: PathBuf::from("."), jobs: 1 }
    }
}

/// Result of one simulation before it is written out.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub method: Method,
    pub table: Table,
    pub stats: InvariantStats,
    pub steady: Option<SteadySummary>,
}

pub fn run_file(path: &Path, opts: &RunOptions) -> Result<Manifest> {
    let text = fs::read_to_string(path)?;
    let cfg = ScenarioConfig::from_json(&text)?;
    run_scenario(&cfg, text.as_bytes(), opts)
}

/// Run a validated scenario and write its table and manifest to `opts.out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, config_bytes: &[u8], opts: &RunOptions) -> Result<Manifest> {
    let start = Instant::now();
    let mut warnings = cfg.coupling()?.weak_coupling_warnings();
    let (outcome, steady) = match &cfg.sweep {
        None => {
            let o = simulate(cfg)?;
            let s = o.steady.clone();
            (o, s)
        }
        Some(sweep) => (run_sweep(cfg, &sweep.parameter, &sweep.grid, opts.jobs)?, None),
    };
    fs::create_dir_all(&opts.out_dir)?;
    outcome.table.write(&opts.out_dir.join(&cfg.outputs.file))?;

    let mut manifest = Manifest::new(config_bytes, cfg.name.clone(), method_name(outcome.method));
    if !outcome.stats.passes() && outcome.stats.samples > 0 {
        warnings.push("invariant tolerances exceeded; see `invariants`".into());
    }
    manifest.warnings = warnings;
    manifest.invariants = outcome.stats;
    manifest.invariants_pass = outcome.stats.samples == 0 || outcome.stats.passes();
    manifest.steady_state = steady;
    manifest.files = vec![cfg.outputs.file.clone(), "manifest.json".into()];
    manifest.runtime_seconds = start.elapsed().as_secs_f64();
    manifest.write(&opts.out_dir)?;
    Ok(manifest)
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Dense => "dense",
        Method::FockSectors => "fock_sectors",
        Method::Gaussian => "gaussian",
        Method::Collision => "collision",
    }
}

fn resolve_method(cfg: &ScenarioConfig) -> Result<Method> {
    let dim: usize = cfg.dims().iter().product();
    let oscillators = cfg.subsystems.iter().filter(|s| matches!(s, SubsystemSpec::Oscillator { .. })).count();
    let method = match cfg.method {
        Method::Auto if dim <= DENSE_LIMIT => Method::Dense,
        Method::Auto if oscillators == 2 && cfg.subsystems.len() == 2 => Method::FockSectors,
        Method::Auto => {
            return Err(Error::config(
                "subsystems",
                format!("Hilbert dimension {dim} exceeds the dense limit {DENSE_LIMIT}"),
            ))
        }
        m => m,
    };
    if matches!(method, Method::Dense | Method::Collision) && dim > DENSE_LIMIT {
        return Err(Error::config("method", format!("Hilbert dimension {dim} exceeds the dense limit {DENSE_LIMIT}")));
    }
    if matches!(method, Method::FockSectors | Method::Gaussian) && oscillators != cfg.subsystems.len() {
        return Err(Error::config("method", "this method needs every subsystem to be an oscillator"));
    }
    Ok(method)
}

/// Run one scenario (no sweep) in memory.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Outcome> {
    match resolve_method(cfg)? {
        Method::Dense => simulate_dense(cfg),
        Method::Collision => simulate_collision(cfg),
        Method::FockSectors => simulate_fock(cfg),
        Method::Gaussian => simulate_gaussian(cfg),
        Method::Auto => unreachable!("resolved above"),
    }
}

fn run_sweep(cfg: &ScenarioConfig, parameter: &str, grid: &[f64], jobs: usize) -> Result<Outcome> {
    let points = grid.iter().map(|&v| cfg.with_parameter(parameter, v)).collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::config("jobs", e.to_string()))?;
    let results: Vec<Result<Outcome>> = pool.install(|| points.par_iter().map(simulate).collect());
    let mut table: Option<Table> = None;
    let mut stats = InvariantStats::default();
    let mut method = Method::Auto;
    for (value, res) in grid.iter().zip(results) {
        let o = res?;
        method = o.method;
        stats.merge(&o.stats);
        let mut header = vec![parameter.to_string()];
        header.extend(o.table.header.iter().cloned());
        let mut row = vec![*value];
        row.extend(o.table.rows.last().cloned().unwrap_or_default());
        if let Some(ss) = &o.steady {
            header.extend(["ss_dimension".to_string(), "ss_gap".to_string()]);
            header.extend(ss.observables.keys().map(|k| format!("ss_{k}")));
            row.extend([ss.dimension as f64, ss.gap]);
            row.extend(ss.observables.values().copied());
        }
        table.get_or_insert_with(|| Table::new(header)).push(row);
    }
    Ok(Outcome { method, table: table.unwrap_or_default(), stats, steady: None })
}

/// Column names and evaluators for state observables.
struct StateObservables {
    names: Vec<String>,
    observables: Vec<Observable>,
    target: Option<DensityMatrix>,
}

impl StateObservables {
    fn new(cfg: &ScenarioConfig) -> Result<Self> {
        let specs = &cfg.subsystems;
        let two_qubits = specs == &[SubsystemSpec::Qubit, SubsystemSpec::Qubit];
        let mut names = Vec::new();
        let mut observables = cfg.outputs.observables.clone();
        observables.sort();
        observables.dedup();
        for o in &observables {
            match o {
                Observable::Populations => names.extend(population_labels(specs).into_iter().map(|l| format!("p_{l}"))),
                Observable::LogNegativity | Observable::PtSpectrum if !two_qubits => {
                    return Err(Error::config("outputs.observables", "log_negativity and pt_spectrum need two qubits"))
                }
                Observable::LogNegativity => names.push("log_negativity".into()),
                Observable::PtSpectrum => names.extend((0..4).map(|i| format!("pt_{i}"))),
                Observable::Purity => names.push("purity".into()),
                Observable::Fidelity => names.push("fidelity".into()),
                Observable::Covariance => {
                    return Err(Error::config(
                        "outputs.observables",
                        "covariance is reported by the fock_sectors and gaussian methods",
                    ))
                }
            }
        }
        Ok(Self { names, observables, target: cfg.target()? })
    }

    fn eval(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.names.len());
        for o in &self.observables {
            match o {
                Observable::Populations => out.extend((0..rho.dim()).map(|i| rho.get(i, i).re)),
                Observable::LogNegativity => out.push(log_negativity(rho)?),
                Observable::PtSpectrum => out.extend(pt_spectrum(rho)?),
                Observable::Purity => out.push(purity(rho)),
                Observable::Fidelity => out.push(state_fidelity(rho, self.target.as_ref().expect("validated"))?),
                Observable::Covariance => unreachable!("rejected in new"),
            }
        }
        Ok(out)
    }

    fn table(&self, traj: &Trajectory) -> Result<Table> {
        let mut table = Table::new(std::iter::once("time".to_string()).chain(self.names.iter().cloned()));
        for (t, rho) in traj.times.iter().zip(&traj.states) {
            let mut row = vec![*t];
            row.extend(self.eval(rho)?);
            table.push(row);
        }
        Ok(table)
    }
}

/// Basis labels: e/g for qubits, occupation numbers for oscillators.
pub fn population_labels(specs: &[SubsystemSpec]) -> Vec<String> {
    let dims: Vec<usize> = specs.iter().map(|s| s.dim()).collect();
    let total: usize = dims.iter().product();
    let all_qubits = specs.iter().all(|s| *s == SubsystemSpec::Qubit);
    (0..total)
        .map(|mut x| {
            let mut parts = vec![String::new(); dims.len()];
            for k in (0..dims.len()).rev() {
                let level = x % dims[k];
                x /= dims[k];
                parts[k] = match specs[k] {
                    SubsystemSpec::Qubit => (if level == 0 { "e" } else { "g" }).to_string(),
                    SubsystemSpec::Oscillator { .. } => level.to_string(),
                };
            }
            parts.join(if all_qubits { "" } else { "_" })
        })
        .collect()
}

fn simulate_dense(cfg: &ScenarioConfig) -> Result<Outcome> {
    let bath = cfg.bath()?;
    let coupling = cfg.coupling()?;
    let generator = match cfg.form {
        FormChoice::Diagonal => generator_diagonal(&bath, &coupling, &cfg.subsystems)?,
        FormChoice::Auto | FormChoice::Nondiagonal => generator_nondiagonal(&bath, &coupling, &cfg.subsystems)?,
    };
    let l = generator.liouvillian()?;
    let rho0 = cfg.initial_state()?;
    let obs = StateObservables::new(cfg)?;
    let t_end = cfg.integrator.t_end;
    let dt = cfg.integrator.dt.unwrap_or_else(|| Integrator::max_step(&l).min(t_end.max(f64::MIN_POSITIVE)));
    let traj = evolve_me(&l, &rho0, Integrator { dt, t_end, stride: cfg.integrator.stride })?;
    let table = obs.table(&traj)?;
    let steady = if cfg.outputs.steady_state {
        let ss = steady_states(&l, Some(&rho0))?;
        let values = obs.eval(&ss.state)?;
        Some(SteadySummary {
            dimension: ss.dimension,
            unique: ss.unique,
            zero_eigenvalues: ss.zero_eigenvalues,
            gap: ss.gap,
            observables: obs.names.iter().cloned().zip(values).collect(),
        })
    } else {
        None
    };
    Ok(Outcome { method: Method::Dense, table, stats: traj.stats, steady })
}

fn simulate_collision(cfg: &ScenarioConfig) -> Result<Outcome> {
    let map = CollisionMap::new(&cfg.bath()?, &cfg.coupling()?, &cfg.subsystems)?;
    let rho0 = cfg.initial_state()?;
    let obs = StateObservables::new(cfg)?;
    if cfg.outputs.steady_state {
        return Err(Error::config("outputs.steady_state", "not available for the collision method"));
    }
    let steps = (cfg.integrator.t_end / cfg.interaction_dt).round() as usize;
    let stride = cfg.integrator.stride;
    let mut traj = Trajectory::default();
    traj.push(0.0, rho0.as_operator().clone())?;
    let mut rho = rho0;
    for k in 1..=steps {
        rho = map.apply(&rho)?;
        if k % stride == 0 || k == steps {
            traj.push(k as f64 * map.dt(), rho.as_operator().clone())?;
        }
    }
    Ok(Outcome { method: Method::Collision, table: obs.table(&traj)?, stats: traj.stats, steady: None })
}

/// Squeezing target for the fidelity column of the bosonic methods.
fn tmsv_target(cfg: &ScenarioConfig) -> Result<Option<GaussianState>> {
    if !cfg.outputs.observables.contains(&Observable::Fidelity) {
        return Ok(None);
    }
    match &cfg.outputs.target {
        Some(StateSpec::Tmsv { r, theta }) if cfg.subsystems.len() == 2 => Ok(Some(tmsv_covariance(*r, *theta)?)),
        _ => Err(Error::config("outputs.target", "bosonic methods compute fidelity to a tmsv target only")),
    }
}

fn check_bosonic_observables(cfg: &ScenarioConfig, allowed: &[Observable]) -> Result<()> {
    if let Some(o) = cfg.outputs.observables.iter().find(|o| !allowed.contains(o)) {
        return Err(Error::config("outputs.observables", format!("{o:?} is not available for this method")));
    }
    if cfg.outputs.steady_state {
        return Err(Error::config("outputs.steady_state", "not available for this method"));
    }
    Ok(())
}

fn covariance_header(n: usize) -> Vec<String> {
    let names: Vec<String> =
        (0..n).map(|l| format!("q{}", l + 1)).chain((0..n).map(|l| format!("p{}", l + 1))).collect();
    let mut out = Vec::new();
    for i in 0..2 * n {
        for j in i..2 * n {
            out.push(format!("cov_{}_{}", names[i], names[j]));
        }
    }
    out
}

fn covariance_row(s: &GaussianState) -> Vec<f64> {
    let c = s.cov();
    let mut out = Vec::new();
    for i in 0..c.nrows() {
        for j in i..c.ncols() {
            out.push(c[(i, j)]);
        }
    }
    out
}

fn simulate_fock(cfg: &ScenarioConfig) -> Result<Outcome> {
    check_bosonic_observables(cfg, &[Observable::Populations, Observable::Covariance, Observable::Fidelity])?;
    let d = match cfg.subsystems.as_slice() {
        [SubsystemSpec::Oscillator { d: a }, SubsystemSpec::Oscillator { d: b }] if a == b => *a,
        _ => return Err(Error::config("subsystems", "fock_sectors needs two oscillators of equal truncation")),
    };
    let bath = cfg.bath()?;
    let coupling = cfg.coupling()?;
    if coefficients_nq(&bath, &coupling)?.h_eff_coeff.iter().any(|h| h.norm() > 1e-14) {
        return Err(Error::InvalidBath("the effective Hamiltonian couples charge sectors".into()));
    }
    let model = TwoModeFock::new(d, &jump_ladders_2q(&bath, &coupling)?)?;
    let rho0 = match &cfg.initial_state {
        StateSpec::Vacuum => model.vacuum(),
        StateSpec::Fock { levels } if levels.len() == 2 && levels.iter().all(|&k| k < d) => {
            model.number_state(levels[0], levels[1])
        }
        _ => return Err(Error::config("initial_state", "fock_sectors starts from vacuum or a number state")),
    };
    let target = tmsv_target(cfg)?;
    let dt = cfg.integrator.dt.unwrap_or(0.25 / model.rate_bound().max(f64::MIN_POSITIVE));
    let traj = model.evolve(&rho0, dt, cfg.integrator.t_end, cfg.integrator.stride)?;

    let with_cov = cfg.outputs.observables.contains(&Observable::Covariance);
    let mut header: Vec<String> =
        ["time", "n1", "n2", "re_a1a2", "im_a1a2", "top_population"].map(String::from).to_vec();
    if with_cov {
        header.extend(covariance_header(2));
    }
    if target.is_some() {
        header.push("fidelity".into());
    }
    let mut table = Table::new(header);
    for (k, t) in traj.times.iter().enumerate() {
        let s = &traj.covariances[k];
        let c = s.cov();
        let n1 = 0.5 * (c[(0, 0)] + c[(2, 2)] - 1.0);
        let n2 = 0.5 * (c[(1, 1)] + c[(3, 3)] - 1.0);
        // ⟨a₁a₂⟩ = ½(Σ_q1q2 − Σ_p1p2) + i Σ_q1p2
        let re = 0.5 * (c[(0, 1)] - c[(2, 3)]);
        let im = c[(0, 3)];
        let mut row = vec![*t, n1, n2, re, im, traj.top_population[k]];
        if with_cov {
            row.extend(covariance_row(s));
        }
        if let Some(tg) = &target {
            row.push(gaussian_fidelity(s, tg)?);
        }
        table.push(row);
    }
    Ok(Outcome { method: Method::FockSectors, table, stats: traj.stats, steady: None })
}

fn simulate_gaussian(cfg: &ScenarioConfig) -> Result<Outcome> {
    check_bosonic_observables(
        cfg,
        &[Observable::Populations, Observable::Covariance, Observable::Fidelity, Observable::Purity],
    )?;
    let n = cfg.subsystems.len();
    let bath = cfg.bath()?;
    let coupling = cfg.coupling()?;
    let coeffs = coefficients_nq(&bath, &coupling)?;
    if coeffs.h_eff_coeff.iter().any(|h| h.norm() > 1e-14) {
        return Err(Error::InvalidBath("linear drive terms are not supported on the Gaussian path".into()));
    }
    let jumps = diagonalize_dissipator(&coeffs, &cfg.subsystems)?;
    let dd = drift_diffusion(&jumps_to_quadrature(&jumps, n)?, None)?;
    let s0 = match &cfg.initial_state {
        StateSpec::Vacuum => GaussianState::vacuum(n),
        StateSpec::Fock { levels } if levels.iter().all(|&k| k == 0) => GaussianState::vacuum(n),
        _ => return Err(Error::config("initial_state", "the Gaussian path starts from vacuum")),
    };
    let target = tmsv_target(cfg)?;
    let t_end = cfg.integrator.t_end;
    let norm = dd.drift_norm();
    let dt = cfg.integrator.dt.unwrap_or(if norm > 0.0 { 0.01 / norm } else { t_end.max(f64::MIN_POSITIVE) });
    let traj = evolve_covariance(&dd, &s0, dt, t_end, cfg.integrator.stride)?;

    let obs = &cfg.outputs.observables;
    let mut header: Vec<String> = vec!["time".into()];
    header.extend((0..n).map(|l| format!("n{}", l + 1)));
    if obs.contains(&Observable::Covariance) {
        header.extend(covariance_header(n));
    }
    if obs.contains(&Observable::Purity) {
        header.push("purity".into());
    }
    if target.is_some() {
        header.push("fidelity".into());
    }
    let mut table = Table::new(header);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let c = s.cov();
        let mut row = vec![*t];
        row.extend((0..n).map(|l| 0.5 * (c[(l, l)] + c[(n + l, n + l)] - 1.0)));
        if obs.contains(&Observable::Covariance) {
            row.extend(covariance_row(s));
        }
        if obs.contains(&Observable::Purity) {
            // μ = 1 / (2ᴺ √det Σ)
            row.push(1.0 / (2f64.powi(n as i32) * c.determinant().sqrt()));
        }
        if let Some(tg) = &target {
            row.push(gaussian_fidelity(s, tg)?);
        }
        table.push(row);
    }
    Ok(Outcome { method: Method::Gaussian, table, stats: InvariantStats::default(), steady: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay_config() -> ScenarioConfig {
        ScenarioConfig::from_json(
            r#"{
                "bath": {"preset": "ground", "n": 1},
                "subsystems": [{"kind": "qubit"}],
                "rates": [1.0],
                "initial_state": {"preset": "labels", "labels": "e"},
                "integrator": {"t_end": 2.0, "stride": 50}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn ground_bath_decay_matches_exponential() {
        let o = simulate(&decay_config()).unwrap();
        let t = o.table.column("time").unwrap();
        let p = o.table.column("p_e").unwrap();
        for (t, p) in t.iter().zip(&p) {
            assert!((p - (-t).exp()).abs() < 1e-6);
        }
        assert!(o.stats.passes());
    }

    #[test]
    fn csv_uses_seventeen_significant_digits() {
        let mut t = Table::new(["x"]);
        t.push(vec![0.1]);
        assert_eq!(t.to_csv(), "x\n1.0000000000000001e-1\n");
        assert_eq!(t.to_csv().lines().nth(1).unwrap().parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn labels_follow_basis_order() {
        assert_eq!(population_labels(&[SubsystemSpec::Qubit, SubsystemSpec::Qubit]), ["ee", "eg", "ge", "gg"]);
        assert_eq!(
            population_labels(&[SubsystemSpec::Oscillator { d: 2 }, SubsystemSpec::Qubit]),
            ["0_e", "0_g", "1_e", "1_g"]
        );
    }

    #[test]
    fn sweep_rows_follow_the_grid() {
        let mut cfg = decay_config();
        cfg.sweep = Some(crate::config::SweepSpec { parameter: "rates.0".into(), grid: vec![0.5, 1.0, 2.0] });
        let o = run_sweep(&cfg, "rates.0", &[2.0, 0.5, 1.0], 2).unwrap();
        assert_eq!(o.table.column("rates.0").unwrap(), vec![2.0, 0.5, 1.0]);
        let p = o.table.column("p_e").unwrap();
        assert!((p[1] - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn collision_method_tracks_the_master_equation() {
        let mut cfg = decay_config();
        cfg.method = Method::Collision;
        cfg.interaction_dt = 1e-3;
        let o = simulate(&cfg).unwrap();
        let p = o.table.column("p_e").unwrap();
        assert!((p.last().unwrap() - (-2.0f64).exp()).abs() < 1e-3);
    }
}
