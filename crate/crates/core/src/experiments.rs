//! Named presets reproducing the squeezing, θ-sweep, non-maximally entangled
//! bath, Bell-bath summary and X-state experiments.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bath::{bath_from_squeezing, coefficients_nq, effective_rate, BathState, CouplingSpec};
use crate::dynamics::{bell_steady_state_map, evolve_final, evolve_many, steady_states, BellPhase, InvariantStats};
use crate::error::{Error, Result};
use crate::fock::TwoModeFock;
use crate::gaussian::{
    drift_diffusion, evolve_covariance, jumps_to_quadrature, tmsv_covariance, DriftDiffusion, GaussianState,
};
use crate::linalg::{DensityMatrix, OperatorMatrix};
use crate::liouvillian::{diagonalize_dissipator, generator_nondiagonal, jump_ladders_2q, Liouvillian, SubsystemSpec};
use crate::measures::{log_negativity, pt_spectrum, purity};
use crate::runner::{Manifest, Table};
use crate::states::{bell, ket, near_bell_phi, near_bell_psi, theta_state, theta_state_psi, Bell};

pub const PRESETS: [&str; 5] = ["fig2", "fig3", "fig4", "table1", "xstate"];

const QQ: [SubsystemSpec; 2] = [SubsystemSpec::Qubit, SubsystemSpec::Qubit];
/// Interaction time used wherever only the rates matter.
const DT_INT: f64 = 1e-3;
/// Length of the integration cross-checks, in units of 1/γ.
const CHECK_TIME: f64 = 50.0;

fn unit_rates(n: usize) -> Result<CouplingSpec> {
    CouplingSpec::from_rates(&vec![1.0; n], DT_INT)
}

fn two_qubit_generator(bath: &BathState) -> Result<Liouvillian> {
    generator_nondiagonal(bath, &unit_rates(2)?, &QQ)?.liouvillian()
}

fn proj(k: &[C64]) -> Result<DensityMatrix> {
    DensityMatrix::pure(&[2, 2], k)
}

/// Tables written by a preset, keyed by file name.
#[derive(Clone, Debug, Default)]
pub struct PresetTables {
    pub tables: Vec<(String, Table)>,
    pub stats: InvariantStats,
    pub notes: Vec<String>,
}

/// Run a preset and write its tables plus `manifest.json` into `out_dir`.
pub fn run_preset(name: &str, out_dir: &Path) -> Result<Manifest> {
    let start = Instant::now();
    let out = match name {
        "fig2" => fig2(true)?.tables(),
        "fig3" => fig3()?.tables(),
        "fig4" => fig4()?.tables(),
        "table1" => table1()?.tables(),
        "xstate" => xstate(&[2, 3, 4, 5])?.tables(),
        other => {
            return Err(Error::config(
                "preset",
                format!("unknown preset `{other}`; expected one of {}", PRESETS.join(", ")),
            ))
        }
    };
    std::fs::create_dir_all(out_dir)?;
    let mut manifest = Manifest::new(format!("preset:{name}").as_bytes(), Some(name.to_string()), "preset");
    for (file, table) in &out.tables {
        table.write(&out_dir.join(file))?;
        manifest.files.push(file.clone());
    }
    manifest.files.push("manifest.json".into());
    manifest.invariants = out.stats;
    manifest.invariants_pass = out.stats.samples == 0 || out.stats.passes();
    manifest.notes = out.notes;
    manifest.runtime_seconds = start.elapsed().as_secs_f64();
    manifest.write(out_dir)?;
    Ok(manifest)
}

// ---------------------------------------------------------------------------
// Two-mode squeezing

pub const FIG2_R: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];
pub const FIG2_THRESHOLD: f64 = 0.98;

#[derive(Clone, Debug)]
pub struct SqueezingCurve {
    pub r: f64,
    pub b_gg: f64,
    /// Γ = γ/cosh 2r.
    pub gamma_eff: f64,
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub t_cross: Option<f64>,
}

/// Oscillator-pair truncation check against the covariance equations.
#[derive(Clone, Debug)]
pub struct FockCheck {
    pub r: f64,
    pub d: usize,
    pub times: Vec<f64>,
    pub max_cov_diff: f64,
    pub max_top_population: f64,
    pub stats: InvariantStats,
}

#[derive(Clone, Debug)]
pub struct Fig2 {
    pub curves: Vec<SqueezingCurve>,
    pub fock: Vec<FockCheck>,
}

/// Drift and diffusion for two oscillators driven by the squeezing bath.
pub fn squeezing_drift(r: f64, gamma: f64) -> Result<DriftDiffusion> {
    let bath = bath_from_squeezing(r, 0.0)?;
    let coupling = CouplingSpec::from_rates(&[gamma, gamma], DT_INT)?;
    let specs = [SubsystemSpec::Oscillator { d: 2 }; 2];
    let jumps = diagonalize_dissipator(&coefficients_nq(&bath, &coupling)?, &specs)?;
    drift_diffusion(&jumps_to_quadrature(&jumps, 2)?, None)
}

fn squeezing_curve(r: f64) -> Result<SqueezingCurve> {
    let bath = bath_from_squeezing(r, 0.0)?;
    let gamma_eff = effective_rate(&bath, 1.0)?;
    let dd = squeezing_drift(r, 1.0)?;
    let dt = 0.01 / dd.drift_norm();
    let traj = evolve_covariance(&dd, &GaussianState::vacuum(2), dt, 20.0 / gamma_eff, 5)?;
    let target = tmsv_covariance(r, 0.0)?;
    Ok(SqueezingCurve {
        r,
        b_gg: bath.rho_e().get(3, 3).re.sqrt(),
        gamma_eff,
        t_cross: traj.crossing_time(&target, FIG2_THRESHOLD)?,
        fidelities: traj.fidelities(&target)?,
        times: traj.times,
    })
}

/// Integrate the truncated oscillator pair and the covariance equations on
/// the same time grid and compare covariances.
pub fn fock_check(r: f64, d: usize, t_end: f64) -> Result<FockCheck> {
    let bath = bath_from_squeezing(r, 0.0)?;
    let model = TwoModeFock::new(d, &jump_ladders_2q(&bath, &unit_rates(2)?)?)?;
    let dt = 0.25 / model.rate_bound();
    let stride = ((t_end / dt) / 80.0).ceil().max(1.0) as usize;
    let fock = model.evolve(&model.vacuum(), dt, t_end, stride)?;
    let gauss = evolve_covariance(&squeezing_drift(r, 1.0)?, &GaussianState::vacuum(2), dt, t_end, stride)?;
    if fock.times.len() != gauss.times.len() {
        return Err(Error::Dimension(format!("{} vs {} samples", fock.times.len(), gauss.times.len())));
    }
    let max_cov_diff = fock.covariances.iter().zip(&gauss.states).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
    let max_top_population = fock.top_population.iter().copied().fold(0.0, f64::max);
    Ok(FockCheck { r, d, times: fock.times, max_cov_diff, max_top_population, stats: fock.stats })
}

/// Fidelity curves for every r, and (optionally) the d = 30 truncation checks
/// for r ≤ 1.
pub fn fig2(with_fock: bool) -> Result<Fig2> {
    let curves = FIG2_R.iter().map(|&r| squeezing_curve(r)).collect::<Result<Vec<_>>>()?;
    let fock = if with_fock {
        [0.5, 1.0].iter().map(|&r| fock_check(r, 30, 8.0)).collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(Fig2 { curves, fock })
}

impl Fig2 {
    pub fn tables(&self) -> PresetTables {
        let mut a = Table::new(["r", "time", "gamma_time", "fidelity"]);
        let mut b = Table::new(["r", "b_gg", "gamma_eff", "t_cross"]);
        for c in &self.curves {
            for (t, f) in c.times.iter().zip(&c.fidelities) {
                a.push(vec![c.r, *t, c.gamma_eff * t, *f]);
            }
            b.push(vec![c.r, c.b_gg, c.gamma_eff, c.t_cross.unwrap_or(f64::NAN)]);
        }
        let mut out =
            PresetTables { tables: vec![("fig2a.csv".into(), a), ("fig2b.csv".into(), b)], ..Default::default() };
        if !self.fock.is_empty() {
            let mut f = Table::new(["r", "d", "max_cov_diff", "max_top_population"]);
            for c in &self.fock {
                f.push(vec![c.r, c.d as f64, c.max_cov_diff, c.max_top_population]);
                out.stats.merge(&c.stats);
            }
            out.tables.push(("fig2_fock_check.csv".into(), f));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// θ sweep with a Φ⁺ bath

pub const FIG3_POINTS: usize = 91;

#[derive(Clone, Debug)]
pub struct ThetaPoint {
    pub theta: f64,
    pub ln_initial: f64,
    pub ln_steady: f64,
    pub purity_steady: f64,
    /// Projection against the closed-form map.
    pub map_diff: f64,
    /// Projection against integration to t = 50/γ.
    pub integration_diff: f64,
}

#[derive(Clone, Debug)]
pub struct Fig3 {
    pub points: Vec<ThetaPoint>,
    pub stats: InvariantStats,
}

pub fn fig3() -> Result<Fig3> {
    let l = two_qubit_generator(&BathState::bell(Bell::PhiPlus))?;
    let thetas: Vec<f64> = (0..FIG3_POINTS).map(|k| FRAC_PI_2 * k as f64 / (FIG3_POINTS - 1) as f64).collect();
    let rho0s = thetas.iter().map(|&t| proj(&theta_state(t))).collect::<Result<Vec<_>>>()?;
    let (integrated, stats) = evolve_many(&l, &rho0s, CHECK_TIME)?;
    let mut points = Vec::with_capacity(thetas.len());
    for ((theta, rho0), late) in thetas.iter().zip(&rho0s).zip(&integrated) {
        let ss = steady_states(&l, Some(rho0))?.state;
        let map = bell_steady_state_map(rho0, BellPhase::Zero)?;
        points.push(ThetaPoint {
            theta: *theta,
            ln_initial: log_negativity(rho0)?,
            ln_steady: log_negativity(&ss)?,
            purity_steady: purity(&ss),
            map_diff: ss.max_abs_diff(&map),
            integration_diff: ss.max_abs_diff(late),
        });
    }
    Ok(Fig3 { points, stats })
}

impl Fig3 {
    pub fn tables(&self) -> PresetTables {
        let mut t = Table::new(["theta", "ln_initial", "ln_steady", "purity_steady", "map_diff", "integration_diff"]);
        for p in &self.points {
            t.push(vec![p.theta, p.ln_initial, p.ln_steady, p.purity_steady, p.map_diff, p.integration_diff]);
        }
        PresetTables { tables: vec![("fig3.csv".into(), t)], stats: self.stats, notes: Vec::new() }
    }
}

// ---------------------------------------------------------------------------
// Real superpositions b_ee|ee⟩ + b_gg|gg⟩

pub const FIG4_RANGE: f64 = 0.69;
pub const FIG4_POINTS: usize = 41;

#[derive(Clone, Debug)]
pub struct BathPoint {
    pub b_ee: f64,
    pub b_gg: f64,
    pub ln_steady: f64,
    pub ln_bath: f64,
    pub dimension: usize,
    pub gap: f64,
    /// max |L(ρ_ss)|.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Fig4 {
    pub points: Vec<BathPoint>,
}

pub fn fig4_bath(b_ee: f64) -> Result<BathState> {
    let b_gg = (1.0 - b_ee * b_ee).sqrt();
    let mut c = ket("ee").iter().map(|z| z * b_ee).collect::<Vec<_>>();
    c[3] = C64::new(b_gg, 0.0);
    BathState::pure(c)
}

pub fn fig4() -> Result<Fig4> {
    let mut points = Vec::with_capacity(FIG4_POINTS);
    for k in 0..FIG4_POINTS {
        let b_ee = -FIG4_RANGE + 2.0 * FIG4_RANGE * k as f64 / (FIG4_POINTS - 1) as f64;
        let bath = fig4_bath(b_ee)?;
        let l = two_qubit_generator(&bath)?;
        let ss = steady_states(&l, None)?;
        points.push(BathPoint {
            b_ee,
            b_gg: bath.rho_e().get(3, 3).re.sqrt(),
            ln_steady: log_negativity(&ss.state)?,
            ln_bath: log_negativity(bath.rho_e())?,
            dimension: ss.dimension,
            gap: ss.gap,
            residual: l.apply(ss.state.as_operator())?.max_abs(),
        });
    }
    Ok(Fig4 { points })
}

impl Fig4 {
    pub fn tables(&self) -> PresetTables {
        let mut t = Table::new(["b_ee", "b_gg", "ln_steady", "ln_bath", "dimension", "gap", "residual"]);
        for p in &self.points {
            t.push(vec![p.b_ee, p.b_gg, p.ln_steady, p.ln_bath, p.dimension as f64, p.gap, p.residual]);
        }
        let note = format!(
            "b_ee restricted to [-{FIG4_RANGE}, {FIG4_RANGE}]; at ±1/√2 the bath is maximally entangled and the steady state is not unique"
        );
        PresetTables { tables: vec![("fig4.csv".into(), t)], stats: InvariantStats::default(), notes: vec![note] }
    }
}

// ---------------------------------------------------------------------------
// Bell and near-Bell bath summary

/// ε used for the near-Bell rows.
pub const TABLE1_EPS: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct Table1Case {
    pub row: usize,
    pub label: String,
    pub bath: BathState,
    pub theta: f64,
    pub rho0: DensityMatrix,
    /// Closed-form steady state.
    pub expected: DensityMatrix,
    /// Spectrum as printed, ascending.
    pub printed_spectrum: Vec<f64>,
    /// Spectrum of the printed steady state. Differs from `printed_spectrum`
    /// only where the printed spectra of two rows are interchanged.
    pub reference_spectrum: Vec<f64>,
    /// The closed-form state is exact only in the ε → 0 limit, so the
    /// stationarity check replaces convergence from ρ₀.
    pub near_bell: bool,
}

#[derive(Clone, Debug)]
pub struct Table1Row {
    pub case: Table1Case,
    pub dimension: usize,
    pub steady: DensityMatrix,
    pub state_error: f64,
    /// Max elementwise distance between the projection and the state after
    /// integrating for 50/γ (from ρ₀, or from ρ_ss for near-Bell rows).
    pub integration_error: f64,
    pub spectrum: Vec<f64>,
    pub spectrum_error: f64,
    /// Distance to the spectrum of the closed-form state.
    pub exact_spectrum_error: f64,
    pub log_negativity: f64,
    pub stats: InvariantStats,
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn mix(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
    DensityMatrix::mixture(parts)
}

const BELL_PT: [f64; 4] = [-0.5, 0.5, 0.5, 0.5];
const WERNER_PT: [f64; 4] = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
const MIXTURE_PT: [f64; 4] = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.5];

/// The twelve exact-Bell rows followed by the two near-Bell rows, the latter
/// taken with the + bath at θ = π/4.
pub fn table1_cases() -> Result<Vec<Table1Case>> {
    let mut cases = Vec::new();
    let id = DensityMatrix::maximally_mixed(&[2, 2]);
    for family in [Family::Phi, Family::Psi] {
        let (plus, minus) = family.bells();
        let (p_plus, p_minus) = (proj(&bell(plus))?, proj(&bell(minus))?);
        // the two product kets outside the family's span
        let (o1, o2) = match family {
            Family::Phi => (proj(&ket("eg"))?, proj(&ket("ge"))?),
            Family::Psi => (proj(&ket("ee"))?, proj(&ket("gg"))?),
        };
        let third = 1.0 / 3.0;
        for bath_bell in [plus, minus] {
            let bath = BathState::bell(bath_bell);
            let preserved_is_minus = bath_bell == plus;
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
                let rho0 = proj(&family.theta_state(theta))?;
                let (expected, printed, reference) = if theta == FRAC_PI_4 {
                    let kept = if preserved_is_minus { &p_minus } else { &p_plus };
                    let state = mix(&[(2.0 / 3.0, &id), (third, kept)])?;
                    (state, MIXTURE_PT.to_vec(), WERNER_PT.to_vec())
                } else {
                    let initial = if theta == 0.0 { &p_minus } else { &p_plus };
                    let fixed = (theta == 0.0) == preserved_is_minus;
                    if fixed {
                        (initial.clone(), BELL_PT.to_vec(), BELL_PT.to_vec())
                    } else {
                        let state = mix(&[(third, &o1), (third, &o2), (third, initial)])?;
                        (state, WERNER_PT.to_vec(), MIXTURE_PT.to_vec())
                    }
                };
                cases.push(Table1Case {
                    row: cases.len() + 1,
                    label: format!("{} bath, theta={theta:.6}", bath_bell.label()),
                    bath: bath.clone(),
                    theta,
                    rho0,
                    expected,
                    printed_spectrum: printed.clone(),
                    reference_spectrum: reference,
                    near_bell: false,
                });
            }
        }
    }
    let mut out: Vec<Table1Case> = cases[..6].to_vec();
    out.push(near_bell_case(Family::Phi, true, FRAC_PI_4, TABLE1_EPS)?);
    out.extend(cases[6..].iter().cloned());
    out.push(near_bell_case(Family::Psi, true, FRAC_PI_4, TABLE1_EPS)?);
    for (k, c) in out.iter_mut().enumerate() {
        c.row = k + 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Phi,
    Psi,
}

impl Family {
    fn bells(self) -> (Bell, Bell) {
        match self {
            Family::Phi => (Bell::PhiPlus, Bell::PhiMinus),
            Family::Psi => (Bell::PsiPlus, Bell::PsiMinus),
        }
    }

    pub fn theta_state(self, theta: f64) -> Vec<C64> {
        match self {
            Family::Phi => theta_state(theta),
            Family::Psi => theta_state_psi(theta),
        }
    }

    pub fn near_bell(self, phi: f64, eps: f64) -> Vec<C64> {
        match self {
            Family::Phi => near_bell_phi(phi, eps),
            Family::Psi => near_bell_psi(phi, eps),
        }
    }
}

/// Near-Bell bath with phase 0 (`plus`) or π; the steady state is the
/// opposite-phase near-Bell state.
pub fn near_bell_case(family: Family, plus: bool, theta: f64, eps: f64) -> Result<Table1Case> {
    let (bath_phase, ss_phase) = if plus { (0.0, std::f64::consts::PI) } else { (std::f64::consts::PI, 0.0) };
    let bath = BathState::pure(family.near_bell(bath_phase, eps))?;
    let printed = sorted(vec![1.0 / (2.0 + eps), (1.0 + eps) / (2.0 + eps), 0.5, -0.5]);
    let sign = if plus { "+" } else { "-" };
    let name = match family {
        Family::Phi => "Phi",
        Family::Psi => "Psi",
    };
    Ok(Table1Case {
        row: 0,
        label: format!("{name}{sign}(eps={eps}) bath, theta={theta:.6}"),
        bath,
        theta,
        rho0: proj(&family.theta_state(theta))?,
        expected: proj(&family.near_bell(ss_phase, eps))?,
        printed_spectrum: printed.clone(),
        reference_spectrum: printed,
        near_bell: true,
    })
}

pub fn table1_row(case: &Table1Case) -> Result<Table1Row> {
    let l = two_qubit_generator(&case.bath)?;
    let ss = steady_states(&l, Some(&case.rho0))?;
    let start = if case.near_bell { &ss.state } else { &case.rho0 };
    let (late, stats) = evolve_final(&l, start, CHECK_TIME)?;
    let spectrum = pt_spectrum(&ss.state)?;
    let exact = pt_spectrum(&case.expected)?;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(Table1Row {
        dimension: ss.dimension,
        state_error: ss.state.max_abs_diff(&case.expected),
        integration_error: ss.state.max_abs_diff(&late),
        spectrum_error: dist(&spectrum, &case.reference_spectrum),
        exact_spectrum_error: dist(&spectrum, &exact),
        log_negativity: log_negativity(&ss.state)?,
        spectrum,
        steady: ss.state,
        case: case.clone(),
        stats,
    })
}

#[derive(Clone, Debug)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

pub fn table1() -> Result<Table1> {
    let rows = table1_cases()?.iter().map(table1_row).collect::<Result<Vec<_>>>()?;
    Ok(Table1 { rows })
}

impl Table1 {
    pub fn tables(&self) -> PresetTables {
        let mut header: Vec<String> =
            ["row", "theta", "dimension", "state_error", "integration_error"].map(String::from).to_vec();
        header.extend((0..4).map(|i| format!("pt_{i}")));
        header.extend((0..4).map(|i| format!("printed_pt_{i}")));
        header.extend(["spectrum_error", "exact_spectrum_error", "log_negativity", "near_bell"].map(String::from));
        let mut t = Table::new(header);
        let mut stats = InvariantStats::default();
        let mut notes = Vec::new();
        for r in &self.rows {
            let mut row = vec![r.case.row as f64, r.case.theta, r.dimension as f64, r.state_error, r.integration_error];
            row.extend(&r.spectrum);
            row.extend(&r.case.printed_spectrum);
            row.extend([
                r.spectrum_error,
                r.exact_spectrum_error,
                r.log_negativity,
                f64::from(u8::from(r.case.near_bell)),
            ]);
            t.push(row);
            stats.merge(&r.stats);
            if r.case.printed_spectrum != r.case.reference_spectrum {
                notes.push(format!("row {} ({}): printed spectrum belongs to the neighbouring row; compared with the spectrum of the printed state", r.case.row, r.case.label));
            }
        }
        PresetTables { tables: vec![("table1.csv".into(), t)], stats, notes }
    }
}

// ---------------------------------------------------------------------------
// X-state baths

#[derive(Clone, Debug)]
pub struct XStateReport {
    pub n: usize,
    pub label: String,
    /// max elementwise |L(ρ_E) − L(diag ρ_E)|.
    pub difference: f64,
}

/// Seeded random n-qubit X state: a random diagonal plus antidiagonal
/// coherences bounded by √(p_x p_x̄).
pub fn random_x_state(n: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = 1usize << n;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut p: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    let dims = vec![2; n];
    let mut op = OperatorMatrix::from_fn(&dims, |i, j| if i == j { C64::new(p[i], 0.0) } else { C64::new(0.0, 0.0) });
    let mut entries = Vec::new();
    for x in 0..dim / 2 {
        let xb = dim - 1 - x;
        let bound = (p[x] * p[xb]).sqrt();
        let c = C64::from_polar(bound * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>());
        entries.push((x, xb, c));
    }
    op = OperatorMatrix::from_fn(&dims, |i, j| {
        let base = op.get(i, j);
        entries.iter().fold(base, |acc, &(x, xb, c)| match (i, j) {
            (a, b) if a == x && b == xb => acc + c,
            (a, b) if a == xb && b == x => acc + c.conj(),
            _ => acc,
        })
    });
    DensityMatrix::new(op)
}

pub fn antidiagonal_difference(bath: &BathState) -> Result<f64> {
    let n = bath.n();
    let rates: Vec<f64> = (0..n).map(|l| 1.0 + 0.25 * l as f64).collect();
    let coupling = CouplingSpec::from_rates(&rates, DT_INT)?;
    let specs = vec![SubsystemSpec::Qubit; n];
    let full = generator_nondiagonal(bath, &coupling, &specs)?.liouvillian()?;
    let diag = generator_nondiagonal(&bath.diagonal_part(), &coupling, &specs)?.liouvillian()?;
    Ok(full.max_abs_diff(&diag))
}

/// n = 2 uses the Φ⁺ bath as a control, n = 3 the GHZ bath and larger n a
/// seeded random X state.
pub fn xstate(ns: &[usize]) -> Result<Vec<XStateReport>> {
    ns.iter()
        .map(|&n| {
            let (label, bath) = match n {
                0 | 1 => return Err(Error::config("n", format!("X-state comparison needs n ≥ 2, got {n}"))),
                2 => ("Phi+ (control)".to_string(), BathState::bell(Bell::PhiPlus)),
                3 => ("GHZ".to_string(), BathState::ghz(3)),
                _ => (format!("random X state (seed {n})"), BathState::mixed(random_x_state(n, n as u64)?)?),
            };
            Ok(XStateReport { n, label, difference: antidiagonal_difference(&bath)? })
        })
        .collect()
}

trait XTables {
    fn tables(&self) -> PresetTables;
}

impl XTables for Vec<XStateReport> {
    fn tables(&self) -> PresetTables {
        let mut t = Table::new(["n", "difference"]);
        for r in self {
            t.push(vec![r.n as f64, r.difference]);
        }
        let notes = self.iter().map(|r| format!("n = {}: {}", r.n, r.label)).collect();
        PresetTables { tables: vec![("xstate.csv".into(), t)], stats: InvariantStats::default(), notes }
    }
}
