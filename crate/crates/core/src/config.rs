//! JSON scenario files.
//!
//! Complex numbers are written as `[re, im]`. Unknown fields are rejected.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bath::{bath_from_squeezing, BathState, CouplingSpec};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, OperatorMatrix};
use crate::liouvillian::{dims_of, SubsystemSpec};
use crate::states::{self, Bell};

pub type Cx = [f64; 2];

fn cx(v: Cx) -> C64 {
    C64::new(v[0], v[1])
}

fn default_dt() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub bath: BathSpec,
    pub subsystems: Vec<SubsystemSpec>,
    /// γ_ℓ, one per subsystem.
    pub rates: Vec<f64>,
    /// Collision interval Δt; only enters through λ_ℓ = √(γ_ℓ/Δt).
    #[serde(default = "default_dt")]
    pub interaction_dt: f64,
    #[serde(default)]
    pub form: FormChoice,
    #[serde(default)]
    pub method: Method,
    pub initial_state: StateSpec,
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum BathSpec {
    Ground {
        n: usize,
    },
    Bell {
        which: Bell,
    },
    /// (|ee⟩ + e^{iφ}|gg⟩)/√2
    BellPhase {
        phi: f64,
    },
    Ghz {
        n: usize,
    },
    W {
        n: usize,
    },
    /// Two-qubit bath producing two-mode squeezing r, angle ϑ.
    Tms {
        r: f64,
        #[serde(default)]
        theta: f64,
    },
    NearBell {
        family: Family,
        #[serde(default)]
        phi: f64,
        eps: f64,
    },
    /// ⊗_ℓ (α_ℓ|g⟩ + β_ℓ|e⟩)
    Product {
        factors: Vec<QubitFactor>,
    },
    /// Amplitudes in the basis order e…e, …, g…g.
    Pure {
        coeffs: Vec<Cx>,
    },
    Density {
        entries: Vec<Vec<Cx>>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QubitFactor {
    pub alpha: Cx,
    pub beta: Cx,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Every subsystem in its lowest level.
    Vacuum,
    Bell {
        which: Bell,
    },
    /// sin θ |Φ⁺⟩ + cos θ |Φ⁻⟩, or the Ψ analogue; θ ∈ [0, π/2].
    Theta {
        theta: f64,
        #[serde(default = "default_family")]
        family: Family,
    },
    /// Qubit labels such as "eg".
    Labels {
        labels: String,
    },
    /// Excitation numbers per subsystem (for qubits 1 = e).
    Fock {
        levels: Vec<usize>,
    },
    Ghz,
    W,
    /// Truncated two-mode squeezed vacuum on two oscillators.
    Tmsv {
        r: f64,
        #[serde(default)]
        theta: f64,
    },
    Pure {
        coeffs: Vec<Cx>,
    },
    Density {
        entries: Vec<Vec<Cx>>,
    },
}

fn default_family() -> Family {
    Family::Phi
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    /// Nondiagonal form, valid for every bath.
    #[default]
    Auto,
    Diagonal,
    Nondiagonal,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Dense master equation, or charge sectors for two oscillators.
    #[default]
    Auto,
    Dense,
    FockSectors,
    Gaussian,
    Collision,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    /// Defaults to the largest admissible step.
    #[serde(default)]
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Populations,
    LogNegativity,
    Purity,
    Fidelity,
    PtSpectrum,
    Covariance,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    /// Target for the fidelity column.
    #[serde(default)]
    pub target: Option<StateSpec>,
    #[serde(default = "default_file")]
    pub file: String,
    /// Also report the stationary state selected by the initial state.
    #[serde(default)]
    pub steady_state: bool,
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::Populations, Observable::Purity]
}

fn default_file() -> String {
    "trajectory.csv".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { observables: default_observables(), target: None, file: default_file(), steady_state: false }
    }
}

/// Re-run the scenario with a dotted config path (for example
/// `initial_state.theta`) set to each grid value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub grid: Vec<f64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural checks that need no linear algebra.
    pub fn validate(&self) -> Result<()> {
        let n = self.subsystems.len();
        if n == 0 {
            return Err(Error::config("subsystems", "at least one subsystem is required"));
        }
        for (i, s) in self.subsystems.iter().enumerate() {
            if let SubsystemSpec::Oscillator { d } = s {
                if *d < 2 {
                    return Err(Error::config(format!("subsystems[{i}].d"), "truncation must be at least 2"));
                }
            }
        }
        if self.rates.len() != n {
            return Err(Error::config("rates", format!("{} rates for {n} subsystems", self.rates.len())));
        }
        if let Some((i, g)) = self.rates.iter().enumerate().find(|(_, g)| !(g.is_finite() && **g >= 0.0)) {
            return Err(Error::config(format!("rates[{i}]"), format!("rate must be finite and ≥ 0, got {g}")));
        }
        if !(self.interaction_dt.is_finite() && self.interaction_dt > 0.0) {
            return Err(Error::config("interaction_dt", "must be positive"));
        }
        let integ = &self.integrator;
        if !(integ.t_end.is_finite() && integ.t_end >= 0.0) {
            return Err(Error::config("integrator.t_end", "must be finite and ≥ 0"));
        }
        if let Some(dt) = integ.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::config("integrator.dt", "must be positive"));
            }
        }
        if integ.stride == 0 {
            return Err(Error::config("integrator.stride", "must be at least 1"));
        }
        check_state_spec("initial_state", &self.initial_state)?;
        if let Some(t) = &self.outputs.target {
            check_state_spec("outputs.target", t)?;
        }
        if self.outputs.observables.contains(&Observable::Fidelity) && self.outputs.target.is_none() {
            return Err(Error::config("outputs.target", "the fidelity observable needs a target state"));
        }
        if self.outputs.file.is_empty() || self.outputs.file.contains(['/', '\\']) {
            return Err(Error::config("outputs.file", "must be a plain file name"));
        }
        if let Some(s) = &self.sweep {
            if s.grid.is_empty() {
                return Err(Error::config("sweep.grid", "grid is empty"));
            }
            if s.grid.iter().any(|v| !v.is_finite()) {
                return Err(Error::config("sweep.grid", "grid values must be finite"));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<usize> {
        dims_of(&self.subsystems)
    }

    pub fn bath(&self) -> Result<BathState> {
        self.bath.build(self.subsystems.len())
    }

    pub fn coupling(&self) -> Result<CouplingSpec> {
        CouplingSpec::from_rates(&self.rates, self.interaction_dt)
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.initial_state.build("initial_state", &self.subsystems)
    }

    pub fn target(&self) -> Result<Option<DensityMatrix>> {
        self.outputs.target.as_ref().map(|t| t.build("outputs.target", &self.subsystems)).transpose()
    }

    /// The config with one sweep value substituted, sweep removed.
    pub fn with_parameter(&self, path: &str, value: f64) -> Result<Self> {
        let mut raw = serde_json::to_value(self)?;
        let mut slot = &mut raw;
        for key in path.split('.') {
            slot = match slot {
                serde_json::Value::Object(map) => map.get_mut(key),
                serde_json::Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
                _ => None,
            }
            .ok_or_else(|| Error::config("sweep.parameter", format!("`{path}` does not name a config field")))?;
        }
        if !slot.is_number() {
            return Err(Error::config("sweep.parameter", format!("`{path}` is not a numeric field")));
        }
        *slot = serde_json::json!(value);
        if let serde_json::Value::Object(map) = &mut raw {
            map.remove("sweep");
        }
        let cfg: ScenarioConfig = serde_json::from_value(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn check_state_spec(field: &str, s: &StateSpec) -> Result<()> {
    if let StateSpec::Theta { theta, .. } = s {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(theta) {
            return Err(Error::config(format!("{field}.theta"), format!("θ must lie in [0, π/2], got {theta}")));
        }
    }
    Ok(())
}

fn require_qubits(field: &str, specs: &[SubsystemSpec], count: Option<usize>) -> Result<()> {
    if specs.iter().any(|s| *s != SubsystemSpec::Qubit) {
        return Err(Error::config(field, "preset is defined for qubits only"));
    }
    if let Some(c) = count {
        if specs.len() != c {
            return Err(Error::config(field, format!("preset needs {c} subsystems, config has {}", specs.len())));
        }
    }
    Ok(())
}

fn density_from_entries(field: &str, dims: &[usize], entries: &[Vec<Cx>]) -> Result<DensityMatrix> {
    let n: usize = dims.iter().product();
    if entries.len() != n || entries.iter().any(|row| row.len() != n) {
        return Err(Error::config(format!("{field}.entries"), format!("expected a {n}×{n} matrix")));
    }
    let op = OperatorMatrix::from_fn(dims, |i, j| cx(entries[i][j]));
    DensityMatrix::new(op).map_err(|e| Error::config(format!("{field}.entries"), e.to_string()))
}

fn normalized(field: &str, coeffs: &[C64]) -> Result<()> {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::config(field, format!("amplitudes have squared norm {norm}, expected 1")));
    }
    Ok(())
}

impl BathSpec {
    pub fn build(&self, n_subsystems: usize) -> Result<BathState> {
        let field = "bath";
        let bath = match self {
            BathSpec::Ground { n } => BathState::ground(*n),
            BathSpec::Bell { which } => BathState::bell(*which),
            BathSpec::BellPhase { phi } => BathState::bell_phase(*phi),
            BathSpec::Ghz { n } => BathState::ghz(*n),
            BathSpec::W { n } => BathState::w(*n),
            BathSpec::Tms { r, theta } => {
                bath_from_squeezing(*r, *theta).map_err(|e| Error::config("bath.r", e.to_string()))?
            }
            BathSpec::NearBell { family, phi, eps } => {
                let b = match family {
                    Family::Phi => BathState::near_bell_phi(*phi, *eps),
                    Family::Psi => BathState::near_bell_psi(*phi, *eps),
                };
                b.map_err(|e| Error::config("bath.eps", e.to_string()))?
            }
            BathSpec::Product { factors } => {
                for (i, f) in factors.iter().enumerate() {
                    normalized(&format!("bath.factors[{i}]"), &[cx(f.alpha), cx(f.beta)])?;
                }
                let f: Vec<(C64, C64)> = factors.iter().map(|f| (cx(f.alpha), cx(f.beta))).collect();
                BathState::product(&f).map_err(|e| Error::config("bath.factors", e.to_string()))?
            }
            BathSpec::Pure { coeffs } => {
                let c: Vec<C64> = coeffs.iter().copied().map(cx).collect();
                if !c.len().is_power_of_two() || c.len() < 2 {
                    return Err(Error::config("bath.coeffs", format!("length {} is not 2ⁿ", c.len())));
                }
                normalized("bath.coeffs", &c)?;
                BathState::pure(c).map_err(|e| Error::config("bath.coeffs", e.to_string()))?
            }
            BathSpec::Density { entries } => {
                let n = entries.len();
                if !n.is_power_of_two() || n < 2 {
                    return Err(Error::config("bath.entries", format!("side {n} is not 2ⁿ")));
                }
                let qubits = n.trailing_zeros() as usize;
                let rho = density_from_entries(field, &vec![2; qubits], entries)?;
                BathState::mixed(rho).map_err(|e| Error::config("bath.entries", e.to_string()))?
            }
        };
        if bath.n() != n_subsystems {
            return Err(Error::config(field, format!("{}-qubit bath for {n_subsystems} subsystems", bath.n())));
        }
        Ok(bath)
    }
}

impl StateSpec {
    pub fn build(&self, field: &str, specs: &[SubsystemSpec]) -> Result<DensityMatrix> {
        let dims = dims_of(specs);
        let pure = |ket: Vec<C64>| DensityMatrix::pure(&dims, &ket).map_err(|e| Error::config(field, e.to_string()));
        match self {
            StateSpec::Vacuum => {
                let levels = vec![0; specs.len()];
                pure(excitation_ket(specs, &levels))
            }
            StateSpec::Fock { levels } => {
                if levels.len() != specs.len() {
                    return Err(Error::config(
                        format!("{field}.levels"),
                        format!("{} levels for {} subsystems", levels.len(), specs.len()),
                    ));
                }
                if let Some(i) = (0..specs.len()).find(|&i| levels[i] >= specs[i].dim()) {
                    return Err(Error::config(format!("{field}.levels[{i}]"), "level beyond the truncation"));
                }
                pure(excitation_ket(specs, levels))
            }
            StateSpec::Bell { which } => {
                require_qubits(field, specs, Some(2))?;
                pure(states::bell(*which))
            }
            StateSpec::Theta { theta, family } => {
                require_qubits(field, specs, Some(2))?;
                pure(match family {
                    Family::Phi => states::theta_state(*theta),
                    Family::Psi => states::theta_state_psi(*theta),
                })
            }
            StateSpec::Labels { labels } => {
                require_qubits(field, specs, Some(labels.chars().count()))?;
                if labels.chars().any(|c| c != 'e' && c != 'g') {
                    return Err(Error::config(format!("{field}.labels"), "labels must be e or g"));
                }
                pure(states::ket(labels))
            }
            StateSpec::Ghz => {
                require_qubits(field, specs, None)?;
                pure(states::ghz(specs.len()))
            }
            StateSpec::W => {
                require_qubits(field, specs, None)?;
                pure(states::w_state(specs.len()))
            }
            StateSpec::Tmsv { r, theta } => {
                let d = match specs {
                    [SubsystemSpec::Oscillator { d: a }, SubsystemSpec::Oscillator { d: b }] if a == b => *a,
                    _ => return Err(Error::config(field, "tmsv needs two oscillators of equal truncation")),
                };
                if !(r.is_finite() && *r >= 0.0) {
                    return Err(Error::config(format!("{field}.r"), "must be finite and ≥ 0"));
                }
                pure(crate::fock::tmsv_ket(d, *r, *theta))
            }
            StateSpec::Pure { coeffs } => {
                let c: Vec<C64> = coeffs.iter().copied().map(cx).collect();
                if c.len() != dims.iter().product::<usize>() {
                    return Err(Error::config(
                        format!("{field}.coeffs"),
                        format!("{} amplitudes for dims {dims:?}", c.len()),
                    ));
                }
                normalized(&format!("{field}.coeffs"), &c)?;
                pure(c)
            }
            StateSpec::Density { entries } => density_from_entries(field, &dims, entries),
        }
    }
}

/// Product of number states; for qubits level 1 is |e⟩ (index 0).
fn excitation_ket(specs: &[SubsystemSpec], levels: &[usize]) -> Vec<C64> {
    let mut ket = vec![C64::new(1.0, 0.0)];
    for (s, &k) in specs.iter().zip(levels) {
        let local = match s {
            SubsystemSpec::Qubit => states::fock(2, 1 - k.min(1)),
            SubsystemSpec::Oscillator { d } => states::fock(*d, k),
        };
        ket = crate::linalg::kron_kets(&ket, &local);
    }
    ket
}
