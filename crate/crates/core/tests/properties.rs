use catalyst_core::analysis::{ghz_fidelity, robustness_fidelity, robustness_fidelity_via_states};
use catalyst_core::dynamics::{
    embed_atom_operator, excitation_number_operator, propagate, rwa_force_hamiltonian, tavis_cummings_hamiltonian,
    JointShape,
};
use catalyst_core::fockspace::{displacement_operator, thermal_state, FieldDensity};
use catalyst_core::linalg::{self, unitarity_defect, StateTolerance};
use catalyst_core::protocol::{analytic_final_state, build_schedule, compose_rwa, net_displacement};
use catalyst_core::register::{collective_sigma_z, dicke_state, ghz_target, sector_projector};
use catalyst_core::scalar::cplx;
use catalyst_core::{AtomCount, AtomKet, BasisPhase, FockCutoff, JointDensity, Vector};
use proptest::prelude::*;

fn atoms(max: usize) -> impl Strategy<Value = AtomCount> {
    (1..=max).prop_map(|n| AtomCount::new(n).unwrap())
}

fn random_ket(n: AtomCount, seed: &[f64]) -> AtomKet {
    let v = Vector::from_fn(n.dim(), |i, _| {
        let a = seed[(2 * i) % seed.len()];
        let b = seed[(2 * i + 1) % seed.len()];
        cplx(a + 0.1, b)
    });
    AtomKet::new(v, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thermal_states_are_valid(n_bar in 0.0f64..3.0) {
        let rho = thermal_state(n_bar, FockCutoff::new(60).unwrap()).unwrap();
        prop_assert!(rho.defects().within(&StateTolerance::FIELD));
    }

    #[test]
    fn displaced_thermal_states_are_valid(n_bar in 0.0f64..1.0, re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let rho = thermal_state(n_bar, FockCutoff::new(50).unwrap()).unwrap().displaced(cplx(re, im));
        prop_assert!(rho.defects().within(&StateTolerance::FIELD));
    }

    #[test]
    fn displacement_is_unitary_and_inverts(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let cutoff = FockCutoff::new(40).unwrap();
        let d = displacement_operator(cplx(re, im), cutoff);
        prop_assert!(unitarity_defect(&d) < 1e-10);
        let back = displacement_operator(cplx(-re, -im), cutoff);
        prop_assert!(linalg::max_abs(&(d.adjoint() - back)) < 1e-10);
    }

    #[test]
    fn displacement_composition_law(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0) {
        // D(α)D(β) = e^{(αβ* − α*β)/2} D(α+β), checked on the interior block.
        let cutoff = FockCutoff::new(70).unwrap();
        let (x, y) = (cplx(a, b), cplx(c, d));
        let lhs = displacement_operator(x, cutoff) * displacement_operator(y, cutoff);
        let phase = ((x * y.conj() - x.conj() * y) * 0.5).exp();
        let rhs = displacement_operator(x + y, cutoff) * phase;
        let mut worst: f64 = 0.0;
        for i in 0..25 {
            for j in 0..25 {
                worst = worst.max((lhs[(i, j)] - rhs[(i, j)]).norm());
            }
        }
        prop_assert!(worst < 1e-8, "{worst:e}");
    }

    #[test]
    fn dicke_states_are_sigma_z_eigenstates(n in atoms(4), phi in 0.0f64..6.3) {
        let basis = BasisPhase::new(phi);
        let sz = collective_sigma_z(n, basis);
        for k in 0..=n.get() {
            let psi = dicke_state(n, k, basis).unwrap();
            let expected = psi.amplitudes() * cplx(n.get() as f64 / 2.0 - k as f64, 0.0);
            prop_assert!((&sz * psi.amplitudes() - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn sector_projectors_resolve_identity(n in atoms(4), phi in 0.0f64..6.3) {
        let basis = BasisPhase::new(phi);
        let sum = (0..=n.get()).fold(linalg::identity::<f64>(n.dim()) * cplx(0.0, 0.0), |acc, k| {
            acc + sector_projector(n, k, basis)
        });
        prop_assert!(linalg::max_abs(&(sum - linalg::identity(n.dim()))) < 1e-12);
    }

    #[test]
    fn tavis_cummings_conserves_excitation_number(
        n in atoms(2),
        t in 0.0f64..3.0,
        seed in prop::collection::vec(-1.0f64..1.0, 8),
        n_bar in 0.0f64..0.5,
    ) {
        let cutoff = FockCutoff::new(20).unwrap();
        let shape = JointShape::new(n, cutoff);
        let rho = JointDensity::product(&random_ket(n, &seed).density(), &thermal_state(n_bar, cutoff).unwrap());
        let nex = excitation_number_operator::<f64>(shape);
        let out = propagate(&tavis_cummings_hamiltonian(shape, 1.0), t, &rho).unwrap();
        prop_assert!((out.expectation(&nex).re - rho.expectation(&nex).re).abs() < 1e-9);
        prop_assert!(out.defects().within(&StateTolerance::JOINT));
    }

    #[test]
    fn rwa_force_conserves_sector_populations(
        n in atoms(2),
        phi in 0.0f64..6.3,
        t in 0.0f64..1.2,
        seed in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let cutoff = FockCutoff::new(25).unwrap();
        let shape = JointShape::new(n, cutoff);
        let basis = BasisPhase::new(phi);
        let rho = JointDensity::product(&random_ket(n, &seed).density(), &FieldDensity::vacuum(cutoff));
        let out = propagate(&rwa_force_hamiltonian(shape, 1.0, basis), t, &rho).unwrap();
        for k in 0..=n.get() {
            let p = embed_atom_operator(&sector_projector(n, k, basis), shape).unwrap();
            prop_assert!((out.expectation(&p).re - rho.expectation(&p).re).abs() < 1e-12);
        }
        let sz = embed_atom_operator(&collective_sigma_z(n, basis), shape).unwrap();
        prop_assert!(linalg::max_abs(&linalg::commutator(&rwa_force_hamiltonian(shape, 1.0, basis), &sz)) < 1e-12);
    }

    #[test]
    fn analytic_state_has_unit_norm(n in atoms(6), r in 0.0f64..200.0, tau in 0.0f64..3.0) {
        prop_assert!((analytic_final_state(n, r, tau).norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn analytic_state_is_ghz_at_design_point(n in atoms(6), r in 0.0f64..200.0) {
        let tau = std::f64::consts::PI.sqrt() / 2.0;
        let psi = analytic_final_state(n, r, tau);
        let target = ghz_target(n, r * tau, BasisPhase::new(-std::f64::consts::FRAC_PI_2)).target;
        prop_assert!((ghz_fidelity(&psi.density(), &target).unwrap() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn literal_schedule_composes_for_any_parameters(r in 0.1f64..100.0, tau in 0.05f64..2.0, n in atoms(5)) {
        let steps = build_schedule(r, tau).unwrap();
        prop_assert!((net_displacement(&steps) - cplx(0.0, -r)).norm() < 1e-12 * r.max(1.0));
        let c = compose_rwa(&steps, 1.0).unwrap();
        prop_assert!((c.quadratic_phase() + 2.0 * tau * tau).abs() < 1e-12);
        let psi = c.apply(&catalyst_core::register::bloch_initial_state(n));
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn robustness_routes_agree(x in 0.0f64..std::f64::consts::PI) {
        let f = robustness_fidelity(x);
        prop_assert!((f - robustness_fidelity_via_states(x)).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&f));
    }

    #[test]
    fn fidelity_is_bounded(n in atoms(3), seed in prop::collection::vec(-1.0f64..1.0, 16), other in prop::collection::vec(-1.0f64..1.0, 16)) {
        let rho = random_ket(n, &seed).density();
        let f = ghz_fidelity(&rho, &random_ket(n, &other)).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }
}
