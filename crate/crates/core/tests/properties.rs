mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qme::bath::{coefficients_nq, BathState, CouplingSpec};
use qme::dynamics::{bell_steady_state_map, evolve_me, BellPhase, Integrator};
use qme::linalg::{expm_hermitian, kron, partial_transpose_operator};
use qme::liouvillian::{generator_diagonal, generator_nondiagonal, kossakowski_min_eigenvalue, SubsystemSpec, CP_TOL};
use qme::measures::{log_negativity, pt_spectrum, state_fidelity};
use qme::{DensityMatrix, OperatorMatrix};
use rand::rngs::StdRng;
use rand::SeedableRng;

const QQ: [SubsystemSpec; 2] = [SubsystemSpec::Qubit, SubsystemSpec::Qubit];

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn coupling(g1: f64, g2: f64) -> CouplingSpec {
    CouplingSpec::from_rates(&[g1, g2], 1e-3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn diagonal_and_nondiagonal_forms_agree(seed in any::<u64>(), g1 in 0.1f64..3.0, g2 in 0.1f64..3.0) {
        let bath = BathState::pure(common::random_ket(&mut rng(seed), 4)).unwrap();
        let c = coupling(g1, g2);
        let a = generator_diagonal(&bath, &c, &QQ).unwrap().liouvillian().unwrap();
        let b = generator_nondiagonal(&bath, &c, &QQ).unwrap().liouvillian().unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn generators_preserve_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bath = BathState::mixed(common::random_density(&mut r, &[2, 2])).unwrap();
        let l = generator_nondiagonal(&bath, &coupling(1.0, 0.5), &QQ).unwrap().liouvillian().unwrap();
        prop_assert!(l.trace_preservation_error() < 1e-12);
    }

    #[test]
    fn evolution_keeps_states_physical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bath = BathState::pure(common::random_ket(&mut r, 4)).unwrap();
        let rho0 = common::random_density(&mut r, &[2, 2]);
        let l = generator_nondiagonal(&bath, &coupling(1.0, 1.0), &QQ).unwrap().liouvillian().unwrap();
        let traj = evolve_me(&l, &rho0, Integrator::auto(&l, 3.0).with_stride(100)).unwrap();
        prop_assert!(traj.stats.passes(), "{:?}", traj.stats);
    }

    #[test]
    fn coefficient_matrix_is_positive_for_any_bath(seed in any::<u64>()) {
        let mut r = rng(seed);
        let bath = BathState::mixed(common::random_density(&mut r, &[2, 2])).unwrap();
        let coeffs = coefficients_nq(&bath, &coupling(0.7, 1.3)).unwrap();
        prop_assert!(kossakowski_min_eigenvalue(&coeffs).unwrap() >= -CP_TOL);
    }

    #[test]
    fn pure_and_density_paths_agree(seed in any::<u64>()) {
        let k = common::random_ket(&mut rng(seed), 4);
        let pure = BathState::pure(k.clone()).unwrap();
        let mixed = BathState::mixed(DensityMatrix::pure(&[2, 2], &k).unwrap()).unwrap();
        let c = coupling(1.0, 2.0);
        let a = coefficients_nq(&pure, &c).unwrap();
        let b = coefficients_nq(&mixed, &c).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn antidiagonal_coherences_do_not_matter_for_three_qubits(seed in any::<u64>()) {
        let rho = qme::experiments::random_x_state(3, seed).unwrap();
        let bath = BathState::mixed(rho).unwrap();
        let c = CouplingSpec::from_rates(&[1.0, 0.8, 1.2], 1e-3).unwrap();
        let specs = [SubsystemSpec::Qubit; 3];
        let a = generator_nondiagonal(&bath, &c, &specs).unwrap().liouvillian().unwrap();
        let b = generator_nondiagonal(&bath.diagonal_part(), &c, &specs).unwrap().liouvillian().unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn log_negativity_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = DensityMatrix::pure(&[2, 2], &common::random_ket(&mut r, 4)).unwrap();
        let u = kron(&common::random_unitary_2(&mut r), &common::random_unitary_2(&mut r));
        let rotated = DensityMatrix::new(&(&u * rho.as_operator()) * &u.adjoint()).unwrap();
        prop_assert!((log_negativity(&rho).unwrap() - log_negativity(&rotated).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn pt_spectrum_sums_to_one_with_at_most_one_negative(seed in any::<u64>()) {
        let rho = common::random_density(&mut rng(seed), &[2, 2]);
        let s = pt_spectrum(&rho).unwrap();
        prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(s.iter().filter(|&&v| v < -1e-12).count() <= 1);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), site in 0usize..2) {
        let rho = common::random_density(&mut rng(seed), &[2, 2]);
        let twice = partial_transpose_operator(&partial_transpose_operator(rho.as_operator(), site).unwrap(), site).unwrap();
        prop_assert!(twice.max_abs_diff(rho.as_operator()) < 1e-15);
    }

    #[test]
    fn fidelity_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = common::random_density(&mut r, &[2, 2]);
        let b = common::random_density(&mut r, &[2, 2]);
        prop_assert!((state_fidelity(&a, &b).unwrap() - state_fidelity(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn product_states_have_zero_log_negativity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = common::random_density(&mut r, &[2]);
        let b = common::random_density(&mut r, &[2]);
        let rho = DensityMatrix::new(OperatorMatrix::new(vec![2, 2], kron(a.as_operator(), b.as_operator()).into_data()).unwrap()).unwrap();
        prop_assert!(log_negativity(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unitary_exponential_inverts(seed in any::<u64>(), t in -3.0f64..3.0) {
        let g = common::random_density(&mut rng(seed), &[2, 2]);
        let u = expm_hermitian(g.as_operator(), t).unwrap();
        let v = expm_hermitian(g.as_operator(), -t).unwrap();
        prop_assert!((&u * &v).max_abs_diff(&OperatorMatrix::identity(&[2, 2])) < 1e-12);
    }

    #[test]
    fn kron_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c] = [0, 1, 2].map(|_| common::random_density(&mut r, &[2]).into_operator());
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn generator_is_linear_in_the_bath(seed in any::<u64>(), p in 0.0f64..1.0) {
        let mut r = rng(seed);
        let a = common::random_density(&mut r, &[2, 2]);
        let b = common::random_density(&mut r, &[2, 2]);
        let mix = DensityMatrix::mixture(&[(p, &a), (1.0 - p, &b)]).unwrap();
        let c = coupling(1.0, 1.0);
        let gen = |rho: &DensityMatrix| generator_nondiagonal(&BathState::mixed(rho.clone()).unwrap(), &c, &QQ).unwrap().liouvillian().unwrap();
        let (la, lb, lm) = (gen(&a), gen(&b), gen(&mix));
        let rho = common::random_density(&mut r, &[2, 2]);
        let combined = &la.apply(rho.as_operator()).unwrap().scale(C64::new(p, 0.0))
            + &lb.apply(rho.as_operator()).unwrap().scale(C64::new(1.0 - p, 0.0));
        prop_assert!(lm.apply(rho.as_operator()).unwrap().max_abs_diff(&combined) < 1e-12);
    }

    #[test]
    fn bell_map_is_idempotent(seed in any::<u64>(), pi in any::<bool>()) {
        let phase = if pi { BellPhase::Pi } else { BellPhase::Zero };
        let rho = common::random_density(&mut rng(seed), &[2, 2]);
        let once = bell_steady_state_map(&rho, phase).unwrap();
        let twice = bell_steady_state_map(&once, phase).unwrap();
        prop_assert!(once.max_abs_diff(&twice) < 1e-14);
    }
}
