use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use geogate::gates::{
    build_geometric_gate, exchange_gate, factorization_test, solve_aa_gate, solve_berry_gate, tilted_phase_gate,
    BuildMode, GateSpec, GateTarget, Mechanism,
};
use geogate::linalg::{
    distance_up_to_global_phase, eigh, expm_hermitian_generator, makhlin_invariants, tensor, MakhlinInvariants,
};
use geogate::model::{exchange_eigensystem, total_sigma_along, SpinModel};
use geogate::phase::wrap_phase;
use geogate::random::{self, haar_su2, random_hermitian};
use geogate::{FieldConfig, TwoQubitConfig, Unitary};

fn unitary(seed: u64, dim: usize) -> Unitary {
    let mut rng = random::rng(seed);
    expm_hermitian_generator(&random_hermitian(&mut rng, dim, 2.0), 1.0).unwrap()
}

fn local(seed: u64) -> Unitary {
    let mut rng = random::rng(seed);
    tensor(&haar_su2(&mut rng), &haar_su2(&mut rng)).unwrap()
}

fn field() -> impl Strategy<Value = FieldConfig> {
    (-1.0..1.0f64, 0.2..1.2f64, 0.6..2.0f64, 0.5..1.5f64, any::<bool>(), 0.0..PI / 2.0, 0.0..TAU).prop_map(
        |(b0, b1, omega, k, neg, chi, phi0)| {
            let kappa = if neg { -k } else { k };
            FieldConfig::new(b0, b1, omega, kappa).unwrap().with_chi(chi).with_phi0(phi0)
        },
    )
}

fn two_qubit() -> impl Strategy<Value = TwoQubitConfig> {
    (field(), 0.5..1.5f64, 0.5..2.5f64, -1.0..1.0f64)
        .prop_map(|(f, ka, kb, j)| TwoQubitConfig::new(f, ka, kb, j).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distance_is_a_metric_on_rays(s in any::<u64>(), four in any::<bool>()) {
        let dim = if four { 4 } else { 2 };
        let (a, b, c) = (unitary(s, dim), unitary(s ^ 1, dim), unitary(s ^ 2, dim));
        let d = |x: &Unitary, y: &Unitary| distance_up_to_global_phase(x, y).unwrap();
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(d(&a, &a.scale_phase(1.234)) <= 1e-12);
    }

    #[test]
    fn makhlin_invariants_ignore_local_gates(s in any::<u64>()) {
        let u = unitary(s, 4);
        let v = local(s ^ 7).then_after(&u).then_after(&local(s ^ 8));
        let dev = makhlin_invariants(&u).unwrap().deviation(&makhlin_invariants(&v).unwrap());
        prop_assert!(dev <= 1e-9, "{dev}");
        let id = makhlin_invariants(&local(s ^ 9)).unwrap().deviation(&MakhlinInvariants::IDENTITY_CLASS);
        prop_assert!(id <= 1e-9, "{id}");
    }

    #[test]
    fn exponential_is_a_one_parameter_group(s in any::<u64>(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let h = random_hermitian(&mut random::rng(s), 4, 1.0);
        let split = expm_hermitian_generator(&h, t1).unwrap().then_after(&expm_hermitian_generator(&h, t2).unwrap());
        let joint = expm_hermitian_generator(&h, t1 + t2).unwrap();
        prop_assert!((*split.matrix() - *joint.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn exchange_commutes_with_identical_local_gates(s in any::<u64>(), jt in -6.0..6.0f64) {
        let a = haar_su2(&mut random::rng(s));
        let aa = tensor(&a, &a).unwrap();
        let e = exchange_gate(1.0, jt).unwrap();
        let lhs = aa.then_after(&e);
        let rhs = e.then_after(&aa);
        prop_assert!((*lhs.matrix() - *rhs.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn berry_solver_round_trip(gamma in -6.2..6.2f64, b1 in 0.1..3.0f64, chi in 0.0..PI) {
        prop_assume!(gamma.abs() > 1e-3);
        let params = solve_berry_gate(gamma, b1).unwrap().with_chi(chi);
        let target = GateTarget::Custom(tilted_phase_gate(gamma, chi));
        let spec = GateSpec::new(target, Mechanism::BerryEcho).unwrap();
        let built = build_geometric_gate(&spec, &params, BuildMode::ClosedForm).unwrap();
        prop_assert!(built.distance <= 1e-12, "{}", built.distance);
    }

    #[test]
    fn aa_solver_round_trip(gamma in -3.1..3.1f64, b1 in 0.2..2.0f64) {
        prop_assume!(gamma.abs() > 1e-2);
        let kappa = gamma.signum();
        let params = solve_aa_gate(gamma, b1, kappa).unwrap();
        prop_assert!(params.max_residual() <= 1e-9, "{:?}", params.residuals);
        let spec = GateSpec::new(GateTarget::Custom(tilted_phase_gate(gamma, 0.0)), Mechanism::AaZeroDynamical).unwrap();
        let built = build_geometric_gate(&spec, &params, BuildMode::Exact { slowness: None }).unwrap();
        prop_assert!(built.distance <= 1e-9, "{}", built.distance);
    }

    #[test]
    fn total_spin_along_field_is_conserved_for_equal_couplings(cfg in two_qubit(), t in 0.0..20.0f64) {
        let cfg = TwoQubitConfig::new(cfg.field, cfg.kappa_alpha, cfg.kappa_alpha, cfg.j).unwrap();
        let f = cfg.field;
        let n = f.field_vector(f.phi_at(t), 1.0, f.chi);
        let c = total_sigma_along(n).commutator(&cfg.hamiltonian(t));
        prop_assert!(c.max_abs() <= 1e-12, "{}", c.max_abs());
    }

    #[test]
    fn analytic_two_spin_energies_match_diagonalization(cfg in two_qubit(), phi in 0.0..TAU) {
        let f = cfg.field;
        let h = cfg.hamiltonian_at(phi, 1.0, f.chi);
        let e = exchange_eigensystem(f.field_vector(phi, 1.0, f.chi), cfg.kappa_alpha, cfg.kappa_beta, cfg.j).unwrap();
        let mut analytic = e.energies.clone();
        analytic.sort_by(f64::total_cmp);
        let numeric = eigh(&h).unwrap();
        for (a, b) in analytic.iter().zip(numeric.values()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!(e.residual(&h) <= 1e-10);
    }

    #[test]
    fn single_spin_spectrum_is_time_independent(f in field(), t in 0.0..50.0f64) {
        let e0 = eigh(&f.hamiltonian(0.0)).unwrap();
        let e = eigh(&f.hamiltonian(t)).unwrap();
        let half = 0.5 * f.kappa.abs() * f.magnitude();
        prop_assert!((e.values()[0] + half).abs() <= 1e-12);
        for (a, b) in e.values().iter().zip(e0.values()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // Diagonal gates either factorize exactly or sit well away from the
    // local class; both verdicts must agree with the Makhlin invariants.
    #[test]
    fn factorization_agrees_with_makhlin_on_diagonals(
        a in -PI..PI, b in -PI..PI, c in -PI..PI, d in -PI..PI, make_local in any::<bool>(),
    ) {
        let d = if make_local { b + c - a } else { d };
        prop_assume!(make_local || wrap_phase(a - b - c + d).abs() > 1e-3);
        let u = Unitary::diagonal_phases(&[a, b, c, d]).unwrap();
        let f = factorization_test(&u).unwrap();
        let makhlin_local = makhlin_invariants(&u).unwrap().deviation(&MakhlinInvariants::IDENTITY_CLASS) <= 1e-8;
        prop_assert_eq!(f.factorizable, makhlin_local);
        prop_assert_eq!(f.factorizable, make_local);
        if let Some((x, y)) = f.factors {
            prop_assert!(distance_up_to_global_phase(&tensor(&x, &y).unwrap(), &u).unwrap() <= 1e-12);
        }
    }
}
