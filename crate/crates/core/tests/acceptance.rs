//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use qme::bath::{coefficients_nq, BathState, CouplingSpec};
use qme::dynamics::{bell_steady_state_map, convergence_order, evolve_many, steady_states, BellPhase, InvariantStats};
use qme::experiments::{self, near_bell_case, table1_row, Family, FIG2_R, FIG2_THRESHOLD, TABLE1_EPS};
use qme::liouvillian::{
    build_liouvillian_diagonal, diagonalize_dissipator, effective_hamiltonian, generator_diagonal,
    generator_nondiagonal, SubsystemSpec,
};
use qme::measures::{log_negativity, state_fidelity};
use qme::states::{ket, Bell};
use qme::DensityMatrix;
use rand::rngs::StdRng;
use rand::SeedableRng;

const QQ: [SubsystemSpec; 2] = [SubsystemSpec::Qubit, SubsystemSpec::Qubit];

struct Report {
    failures: usize,
    stats: InvariantStats,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, budget: f64, start: Instant, detail: String) {
        let secs = start.elapsed().as_secs_f64();
        let ok = pass && secs < budget;
        if !ok {
            self.failures += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} {id:>2} {name}: {detail} [{secs:.2}s, budget {budget}s]");
    }

    fn note(&self, text: &str) {
        println!("        note: {text}");
    }
}

fn rates() -> CouplingSpec {
    CouplingSpec::from_rates(&[1.0, 1.0], 1e-3).unwrap()
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn table1(rep: &mut Report) {
    let start = Instant::now();
    let rows = experiments::table1().unwrap();
    let mut worst_state: f64 = 0.0;
    let mut worst_integration: f64 = 0.0;
    let mut failed_rows = Vec::new();
    for r in &rows.rows {
        rep.stats.merge(&r.stats);
        worst_state = worst_state.max(r.state_error);
        worst_integration = worst_integration.max(r.integration_error);
        let ok = r.state_error <= 1e-6 && r.integration_error <= 1e-6 && r.spectrum_error <= 1e-8;
        if !ok {
            failed_rows.push(format!("row {} spectrum off by {:.2e}", r.case.row, r.spectrum_error));
        }
    }
    // remaining near-Bell variants: both bath signs, several θ
    let mut variant_state: f64 = 0.0;
    let mut variant_spectrum: f64 = 0.0;
    let mut variant_exact: f64 = 0.0;
    for family in [Family::Phi, Family::Psi] {
        for plus in [true, false] {
            for theta in [0.0, 0.3, FRAC_PI_4, 1.2] {
                let r = table1_row(&near_bell_case(family, plus, theta, TABLE1_EPS).unwrap()).unwrap();
                rep.stats.merge(&r.stats);
                variant_state = variant_state.max(r.state_error.max(r.integration_error));
                variant_spectrum = variant_spectrum.max(r.spectrum_error);
                variant_exact = variant_exact.max(r.exact_spectrum_error);
            }
        }
    }
    let pass = failed_rows.is_empty() && variant_state <= 1e-6 && variant_spectrum <= 1e-8;
    let detail = format!(
        "14 rows, max state error {worst_state:.2e}, max integration gap {worst_integration:.2e}, near-Bell variants state {variant_state:.2e} spectrum {variant_spectrum:.2e}{}",
        if failed_rows.is_empty() { String::new() } else { format!("; {}", failed_rows.join(", ")) }
    );
    rep.line(1, "Bell-bath steady states", pass, 5.0, start, detail);
    rep.note("θc and π/2 rows compared with the spectra of the listed states; the listed spectra of those rows are interchanged");
    rep.note(&format!(
        "near-Bell rows: listed ±1/2 vs exact ±√(1+ε)/(2+ε) differ by ε²/16 = {:.2e} at ε = {TABLE1_EPS}; against the exact spectrum of the listed state the error is {variant_exact:.2e}",
        TABLE1_EPS * TABLE1_EPS / 16.0
    ));
}

fn map_consistency(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let rho0s: Vec<DensityMatrix> = (0..100).map(|_| common::random_density(&mut rng, &[2, 2])).collect();
    let mut worst: f64 = 0.0;
    for (phi, phase) in [(0.0, BellPhase::Zero), (std::f64::consts::PI, BellPhase::Pi)] {
        let l = generator_nondiagonal(&BathState::bell_phase(phi), &rates(), &QQ).unwrap().liouvillian().unwrap();
        let (late, stats) = evolve_many(&l, &rho0s, 50.0).unwrap();
        rep.stats.merge(&stats);
        for (r0, r) in rho0s.iter().zip(&late) {
            worst = worst.max(bell_steady_state_map(r0, phase).unwrap().max_abs_diff(r));
        }
    }
    rep.line(
        2,
        "steady-state map vs integration",
        worst <= 1e-6,
        10.0,
        start,
        format!("200 states, max deviation {worst:.2e}"),
    );
}

fn form_equivalence(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut forms: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for _ in 0..100 {
        let bath = BathState::pure(common::random_ket(&mut rng, 4)).unwrap();
        let c = rates();
        let diag = generator_diagonal(&bath, &c, &QQ).unwrap().liouvillian().unwrap();
        let nondiag = generator_nondiagonal(&bath, &c, &QQ).unwrap().liouvillian().unwrap();
        forms = forms.max(diag.max_abs_diff(&nondiag));
        let coeffs = coefficients_nq(&bath, &c).unwrap();
        let jumps = diagonalize_dissipator(&coeffs, &QQ).unwrap();
        let ops: Vec<_> = jumps.iter().map(|j| j.to_operator(&QQ)).collect();
        let rebuilt = build_liouvillian_diagonal(&effective_hamiltonian(&coeffs, &QQ).unwrap(), &ops).unwrap();
        round_trip = round_trip.max(rebuilt.max_abs_diff(&nondiag));
    }
    let pass = forms <= 1e-12 && round_trip <= 1e-10;
    rep.line(
        3,
        "form equivalence",
        pass,
        f64::INFINITY,
        start,
        format!("100 baths, forms {forms:.2e}, diagonalization round trip {round_trip:.2e}"),
    );
}

fn collision_convergence(rep: &mut Report) {
    let start = Instant::now();
    let rho0 = DensityMatrix::pure(&[2, 2], &ket("ee")).unwrap();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let presets = [
        ("ground", BathState::ground(2)),
        ("Phi+", BathState::bell(Bell::PhiPlus)),
        ("product superposition", BathState::product(&[(h, h), (h, h)]).unwrap()),
    ];
    let dts = [1.0 / 40.0, 1.0 / 160.0, 1.0 / 640.0];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, bath) in &presets {
        let r = convergence_order(&rho0, bath, &[1.0, 1.0], 2.0, &dts).unwrap();
        rep.stats.merge(&r.stats);
        let order = r.order.unwrap_or(f64::NAN);
        let ok = r.monotone && order >= 0.4;
        pass &= ok;
        let errs: Vec<String> = r.errors.iter().map(|e| format!("{e:.2e}")).collect();
        parts.push(format!("{name} [{}] order {order:.2}{}", errs.join(", "), if ok { "" } else { " (fails)" }));
    }
    rep.line(4, "collision-oracle convergence", pass, 30.0, start, parts.join("; "));
}

fn antidiagonal(rep: &mut Report) {
    let start = Instant::now();
    let reports = experiments::xstate(&[2, 3, 4]).unwrap();
    let pass = reports[0].difference > 1e-3 && reports[1].difference <= 1e-12 && reports[2].difference <= 1e-12;
    let detail =
        reports.iter().map(|r| format!("n={} {} {:.2e}", r.n, r.label, r.difference)).collect::<Vec<_>>().join("; ");
    rep.line(5, "antidiagonal insensitivity", pass, 5.0, start, detail);
}

fn squeezing(rep: &mut Report) {
    let start = Instant::now();
    let fig = experiments::fig2(true).unwrap();
    let expected_b_gg = [0.908, 0.796, 0.720, 0.709, 0.707];
    let mapping_ok = fig.curves.iter().zip(expected_b_gg).all(|(c, b)| format!("{:.3}", c.b_gg) == format!("{b:.3}"));
    let crossings: Vec<Option<f64>> = fig.curves.iter().filter(|c| c.r <= 3.0).map(|c| c.t_cross).collect();
    let crossed = crossings.iter().all(Option::is_some);
    let times: Vec<f64> = crossings.iter().flatten().copied().collect();
    let increasing = times.windows(2).all(|w| w[1] > w[0]);
    let fock_diff = max(fig.fock.iter().map(|f| f.max_cov_diff));
    for f in &fig.fock {
        rep.stats.merge(&f.stats);
    }
    let pass = mapping_ok && crossed && increasing && fock_diff <= 1e-4 && fig.fock.len() == 2;
    let t: Vec<String> = times.iter().map(|t| format!("{t:.1}")).collect();
    let b: Vec<String> = fig.curves.iter().map(|c| format!("{:.3}", c.b_gg)).collect();
    let detail = format!(
        "r = {FIG2_R:?}, |b_gg| = [{}], t({FIG2_THRESHOLD}) for r ≤ 3 = [{}], d=30 covariance gap {fock_diff:.2e}",
        b.join(", "),
        t.join(", ")
    );
    rep.line(6, "two-mode squeezing", pass, 60.0, start, detail);
}

fn theta_sweep(rep: &mut Report) {
    let start = Instant::now();
    let fig = experiments::fig3().unwrap();
    rep.stats.merge(&fig.stats);
    let below =
        max(fig.points.iter().filter(|p| p.theta < FRAC_PI_4 - 1e-12).map(|p| (p.ln_steady - p.ln_initial).abs()));
    let above = max(fig.points.iter().filter(|p| p.theta >= FRAC_PI_4 - 1e-12).map(|p| p.ln_steady.abs()));
    let min = fig.points.iter().min_by(|a, b| a.purity_steady.total_cmp(&b.purity_steady)).unwrap();
    let pass = below <= 1e-3
        && above <= 1e-9
        && (min.purity_steady - 0.25).abs() <= 0.01
        && (min.theta - FRAC_PI_3).abs() <= 0.02;
    let detail = format!(
        "θ<π/4 LN gap {below:.2e}, θ≥π/4 max LN {above:.2e}, purity min {:.4} at θ = {:.4}",
        min.purity_steady, min.theta
    );
    rep.line(7, "θ sweep with a Φ⁺ bath", pass, 30.0, start, detail);
}

fn non_maximal(rep: &mut Report) {
    let start = Instant::now();
    let fig = experiments::fig4().unwrap();
    let worst = max(fig.points.iter().map(|p| (p.ln_steady - p.ln_bath).abs()));
    let at_zero = fig.points.iter().find(|p| p.b_ee.abs() < 1e-12).map(|p| p.ln_steady.abs()).unwrap_or(f64::NAN);
    let unique = fig.points.iter().all(|p| p.dimension == 1);
    let pass = fig.points.len() == 41 && worst <= 1e-3 && at_zero <= 1e-9 && unique;
    rep.line(
        8,
        "non-maximally entangled baths",
        pass,
        60.0,
        start,
        format!("41 points, max LN gap {worst:.2e}, LN at b_ee=0 {at_zero:.2e}, all unique {unique}"),
    );
}

fn near_bell(rep: &mut Report) {
    let start = Instant::now();
    let eps = 1e-3;
    let mut parts = Vec::new();
    let mut pass = true;
    for family in [Family::Phi, Family::Psi] {
        for plus in [true, false] {
            let case = near_bell_case(family, plus, 0.0, eps).unwrap();
            let l = generator_nondiagonal(&case.bath, &rates(), &QQ).unwrap().liouvillian().unwrap();
            let ss = steady_states(&l, None).unwrap();
            let f = state_fidelity(&ss.state, &case.expected).unwrap();
            let ln = log_negativity(&ss.state).unwrap();
            pass &= ss.dimension == 1 && f >= 0.999 && ln >= 0.99;
            parts.push(format!(
                "{:?}{} dim {} F {f:.6} LN {ln:.6} gap {:.2e}",
                family,
                if plus { "+" } else { "-" },
                ss.dimension,
                ss.gap
            ));
        }
    }
    for which in [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus] {
        let l = generator_nondiagonal(&BathState::bell(which), &rates(), &QQ).unwrap().liouvillian().unwrap();
        let dim = steady_states(&l, None).unwrap().dimension;
        pass &= dim >= 2;
        parts.push(format!("{} exact dim {dim}", which.label()));
    }
    rep.line(9, "near-Bell uniqueness", pass, 5.0, start, parts.join("; "));
}

fn main() -> ExitCode {
    let mut rep = Report { failures: 0, stats: InvariantStats::default() };
    table1(&mut rep);
    map_consistency(&mut rep);
    form_equivalence(&mut rep);
    collision_convergence(&mut rep);
    antidiagonal(&mut rep);
    squeezing(&mut rep);
    theta_sweep(&mut rep);
    non_maximal(&mut rep);
    near_bell(&mut rep);

    let start = Instant::now();
    let s = rep.stats;
    let pass =
        s.samples > 0 && s.max_trace_drift <= 1e-9 && s.max_hermiticity_error <= 1e-10 && s.min_eigenvalue >= -1e-9;
    let detail = format!(
        "{} samples, trace drift {:.2e}, Hermiticity {:.2e}, min eigenvalue {:.2e}",
        s.samples, s.max_trace_drift, s.max_hermiticity_error, s.min_eigenvalue
    );
    rep.line(10, "physics invariants", pass, f64::INFINITY, start, detail);

    println!("{} of 10 criteria failed", rep.failures);
    if rep.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
