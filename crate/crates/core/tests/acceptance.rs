//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use catalyst_core::analysis::{
    decoherence_budget, distance_for_effective_damping, evaluate, robustness_fidelity, robustness_fidelity_via_states,
};
use catalyst_core::dynamics::{
    displaced_frame_hamiltonian, embed_atom_operator, excitation_number_operator, partial_trace_field, propagate,
    rwa_force_hamiltonian, tavis_cummings_hamiltonian, JointShape,
};
use catalyst_core::fockspace::{displacement_operator, thermal_state, FieldDensity};
use catalyst_core::linalg::{self, trace_distance, StateDefects, StateTolerance};
use catalyst_core::protocol::{build_schedule, design_tau, extract_two_qubit_phases, run};
use catalyst_core::register::{
    bloch_initial_state, collective_sigma_z, dicke_state, ghz_target, rotation_g_to_ig, sector_projector,
};
use catalyst_core::scalar::cplx;
use catalyst_core::{
    AtomCount, AtomDensity, BasisPhase, DecoherenceParams, Engine, FockCutoff, JointDensity, Metrics, ProtocolConfig,
    ProtocolStep,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn atoms(n: usize) -> AtomCount {
    AtomCount::new(n).unwrap()
}

fn displaced(n: usize, r: f64, n_bar: f64, cutoff: usize) -> ProtocolConfig {
    ProtocolConfig::new(atoms(n), r, design_tau(), n_bar, Engine::DisplacedExact)
        .unwrap()
        .with_cutoff(Some(FockCutoff::new(cutoff).unwrap()))
}

fn metrics(cfg: &ProtocolConfig) -> Metrics {
    evaluate(&run(cfg).unwrap())
}

fn analytic_ghz_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        let cfg = ProtocolConfig::new(atoms(n), 50.0, design_tau(), 0.0, Engine::AnalyticRwa).unwrap();
        worst = worst.max((metrics(&cfg).ghz_fidelity - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-12 && secs < 1.0,
        format!("max |F - 1| = {worst:.2e} (< 1e-12), {secs:.3} s (< 1 s)"),
    )
}

fn macroscopic_catalyst() -> Outcome {
    let start = Instant::now();
    let m = metrics(&displaced(2, 50.0, 0.0, 40));
    let secs = start.elapsed().as_secs_f64();
    outcome(
        m.ghz_fidelity >= 0.98 && m.atomic_purity >= 0.98 && m.product_form_distance <= 0.05 && secs < 60.0,
        format!(
            "F = {:.6} (>= 0.98), purity = {:.6} (>= 0.98), product distance = {:.4} (<= 0.05), {secs:.2} s (< 60 s)",
            m.ghz_fidelity, m.atomic_purity, m.product_form_distance
        ),
    )
}

fn thermal_insensitivity() -> Outcome {
    let f: Vec<f64> = [0.0, 1.0, 2.0]
        .iter()
        .map(|&nb| metrics(&displaced(2, 50.0, nb, 60)).ghz_fidelity)
        .collect();
    let spread = f.iter().cloned().fold(f64::MIN, f64::max) - f.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        spread < 0.02,
        format!(
            "F(n_th = 0, 1, 2) = {:.5}, {:.5}, {:.5}; spread {spread:.5} (< 0.02)",
            f[0], f[1], f[2]
        ),
    )
}

fn speed_independence() -> Outcome {
    let f: Vec<f64> = [20.0, 50.0, 100.0]
        .iter()
        .map(|&r| metrics(&displaced(2, r, 0.0, 40)).ghz_fidelity)
        .collect();
    let monotone = f.windows(2).all(|w| w[1] >= w[0] - 0.01);
    let f3 = metrics(&displaced(3, 50.0, 0.0, 40)).ghz_fidelity;
    outcome(
        monotone && f3 >= 0.97,
        format!(
            "F(r = 20, 50, 100) = {:.5}, {:.5}, {:.5} (non-decreasing within 0.01); N = 3, r = 50: F = {f3:.5} (>= 0.97)",
            f[0], f[1], f[2]
        ),
    )
}

/// Displaced-frame execution in which each lab displacement is folded into
/// the frame with the wrong sign of its imaginary part.
fn misfolded_displaced(cfg: &ProtocolConfig) -> AtomDensity {
    let shape = cfg.shape();
    let field = thermal_state(cfg.n_bar_th(), shape.cutoff).unwrap();
    let mut rho = JointDensity::product(&cfg.initial_state().density(), &field);
    let rot = embed_atom_operator(&rotation_g_to_ig(shape.n_atoms), shape).unwrap();
    let mut frame = cplx(0.0, 0.0);
    for step in build_schedule(cfg.r(), cfg.tau()).unwrap() {
        match step {
            ProtocolStep::DisplaceField(b) => frame += b.conj(),
            ProtocolStep::RotateAtoms => rho = rho.conjugated(&rot),
            ProtocolStep::Evolve(t) => {
                rho = propagate(&displaced_frame_hamiltonian(shape, 1.0, frame), t, &rho).unwrap()
            }
        }
    }
    partial_trace_field(&rho)
}

fn engine_cross_validation() -> Outcome {
    let lab = ProtocolConfig::new(atoms(2), 3.0, design_tau(), 1.0, Engine::LabExact)
        .unwrap()
        .with_cutoff(Some(FockCutoff::new(80).unwrap()));
    let disp = displaced(2, 3.0, 1.0, 40);
    let a = run(&lab).unwrap();
    let b = run(&disp).unwrap();
    let d = trace_distance(a.final_atoms.matrix(), b.final_atoms.matrix());
    let buggy = trace_distance(a.final_atoms.matrix(), misfolded_displaced(&disp).matrix());
    outcome(
        d < 1e-6 && buggy > 1e-6 && !a.truncated() && !b.truncated(),
        format!("trace distance {d:.2e} (< 1e-6); misfolded frame gives {buggy:.2e} (detected)"),
    )
}

fn robustness_curve() -> Outcome {
    let f = robustness_fidelity(0.55 * PI);
    let worst = (0..100)
        .map(|i| {
            let x = PI * i as f64 / 99.0;
            (robustness_fidelity(x) - robustness_fidelity_via_states(x)).abs()
        })
        .fold(0.0f64, f64::max);
    outcome(
        (f - 0.99).abs() < 0.005 && worst < 1e-12,
        format!("F(0.55 pi) = {f:.4} (about 0.99); closed form vs states max diff {worst:.1e} (< 1e-12)"),
    )
}

fn phase_gate_truth_table() -> Outcome {
    let analytic = ProtocolConfig::new(atoms(2), 50.0, design_tau(), 0.0, Engine::AnalyticRwa).unwrap();
    let g = extract_two_qubit_phases(&analytic).unwrap();
    let n = g.normalized();
    let expected = [FRAC_PI_2, 0.0, 0.0, FRAC_PI_2];
    let analytic_err = n
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let e = extract_two_qubit_phases(&displaced(2, 50.0, 0.0, 30)).unwrap();
    let diagonal = (e.two_qubit_phase - FRAC_PI_2).abs();
    let cross = e
        .cross_asymmetry
        .abs()
        .max(e.normalized()[1].abs())
        .max(e.normalized()[2].abs());
    outcome(
        analytic_err < 1e-12 && diagonal < 0.02 && cross < 0.02,
        format!(
            "analytic max deviation {analytic_err:.1e}; displaced r = 50: |theta_pp - pi/2| = {diagonal:.4}, cross {cross:.4} (< 0.02), min overlap {:.4}",
            e.overlaps.iter().cloned().fold(1.0, f64::min)
        ),
    )
}

fn decoherence() -> Outcome {
    let g = 2.0 * PI * 25e3;
    let tau = design_tau::<f64>() / g;
    let (t_c, n_bar, t_c_eff) = (0.13, 5.0, 6.19e-3);
    let p = DecoherenceParams {
        g_physical: g,
        t_r: 3e-2,
        n_atoms: 3,
        t_c,
        n_bar_th: n_bar,
        d: distance_for_effective_damping(t_c, n_bar, t_c_eff),
    };
    let b = decoherence_budget(&p, tau).unwrap();
    let rel_t = (b.t_total - 2.26e-5).abs() / 2.26e-5;
    let rel_i = (b.infidelity - 0.591e-2).abs() / 0.591e-2;
    outcome(
        rel_t < 0.005 && rel_i < 0.005,
        format!(
            "t = {:.4e} s ({:.2}% off), T_r' = {:.2e} s, infidelity = {:.4e} ({:.2}% off)",
            b.t_total,
            100.0 * rel_t,
            b.t_r_eff,
            b.infidelity,
            100.0 * rel_i
        ),
    )
}

fn invariant_suite() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0;
    let mut check = |name: &str, ok: bool| {
        checks += 1;
        if !ok {
            failures.push(name.to_string());
        }
    };

    // Constructed states.
    for nb in [0.0, 1.0, 2.0] {
        let rho = thermal_state(nb, FockCutoff::new(60).unwrap()).unwrap();
        check("thermal state", rho.defects().within(&StateTolerance::FIELD));
        let shifted = rho.displaced(cplx(0.7, -0.4));
        check(
            "displaced thermal state",
            shifted.defects().within(&StateTolerance::FIELD),
        );
    }
    check(
        "coherent state",
        FieldDensity::coherent(cplx(1.2, 0.5), FockCutoff::new(40).unwrap())
            .defects()
            .within(&StateTolerance::FIELD),
    );
    for n in 1..=4 {
        let target = ghz_target(atoms(n), 0.3, BasisPhase::new(-FRAC_PI_2)).target;
        check(
            "GHZ density",
            StateDefects::measure(target.density().matrix()).within(&StateTolerance::JOINT),
        );
    }

    // Propagated states.
    for cfg in [displaced(2, 50.0, 1.0, 40), displaced(3, 20.0, 0.0, 25)] {
        let result = run(&cfg).unwrap();
        check(
            "segment traces",
            result.segment_records.iter().all(|s| (s.trace - 1.0).abs() < 1e-9),
        );
        check(
            "final joint state",
            result.final_joint.unwrap().defects().within(&StateTolerance::JOINT),
        );
        check("final atomic trace", (result.final_atoms.trace() - 1.0).abs() < 1e-9);
    }

    // Displacement composition law on the interior block.
    let cutoff = FockCutoff::new(70).unwrap();
    let (x, y) = (cplx(0.6, -0.3), cplx(-0.2, 0.8));
    let lhs = displacement_operator(x, cutoff) * displacement_operator(y, cutoff);
    let rhs = displacement_operator(x + y, cutoff) * ((x * y.conj() - x.conj() * y) * 0.5).exp();
    let mut worst: f64 = 0.0;
    for i in 0..25 {
        for j in 0..25 {
            worst = worst.max((lhs[(i, j)] - rhs[(i, j)]).norm());
        }
    }
    check("displacement composition", worst < 1e-8);

    // Dicke eigenvalue identity.
    for n in 1..=4 {
        for phi in [0.0, -FRAC_PI_2, 1.1] {
            let basis = BasisPhase::new(phi);
            let sz = collective_sigma_z(atoms(n), basis);
            for k in 0..=n {
                let psi = dicke_state(atoms(n), k, basis).unwrap();
                let err = (&sz * psi.amplitudes() - psi.amplitudes() * cplx(n as f64 / 2.0 - k as f64, 0.0)).norm();
                check("Dicke eigenvalue", err < 1e-12);
            }
        }
    }

    // Excitation conservation and RWA sector populations.
    let shape = JointShape::new(atoms(2), FockCutoff::new(25).unwrap());
    let nex = excitation_number_operator::<f64>(shape);
    let h = tavis_cummings_hamiltonian(shape, 1.0);
    check(
        "excitation commutator",
        linalg::max_abs(&linalg::commutator(&h, &nex)) < 1e-12,
    );
    let rho0 = JointDensity::product(
        &bloch_initial_state(atoms(2)).density(),
        &thermal_state(0.5, shape.cutoff).unwrap(),
    );
    let out = propagate(&h, 2.3, &rho0).unwrap();
    check(
        "excitation number",
        (out.expectation(&nex).re - rho0.expectation(&nex).re).abs() < 1e-8,
    );
    check("propagated joint state", out.defects().within(&StateTolerance::JOINT));
    let basis = BasisPhase::new(-FRAC_PI_2);
    let out = propagate(&rwa_force_hamiltonian(shape, 1.0, basis), 0.9, &rho0).unwrap();
    for k in 0..=2 {
        let p = embed_atom_operator(&sector_projector(atoms(2), k, basis), shape).unwrap();
        check(
            "sector population",
            (out.expectation(&p).re - rho0.expectation(&p).re).abs() < 1e-12,
        );
    }

    let detail = if failures.is_empty() {
        format!("{checks} checks passed")
    } else {
        format!("{} of {checks} checks failed: {}", failures.len(), failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

fn convergence() -> Outcome {
    let a = metrics(&displaced(2, 50.0, 0.0, 40)).ghz_fidelity;
    let b = metrics(&displaced(2, 50.0, 0.0, 50)).ghz_fidelity;
    let d = (a - b).abs();
    outcome(d < 1e-6, format!("|F(40) - F(50)| = {d:.2e} (< 1e-6)"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("analytic GHZ exactness", analytic_ghz_exactness),
        ("macroscopic catalyst", macroscopic_catalyst),
        ("thermal insensitivity", thermal_insensitivity),
        ("speed and size independence", speed_independence),
        ("engine cross-validation", engine_cross_validation),
        ("robustness curve", robustness_curve),
        ("phase-gate truth table", phase_gate_truth_table),
        ("decoherence budget", decoherence),
        ("invariant suite", invariant_suite),
        ("cutoff convergence", convergence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
