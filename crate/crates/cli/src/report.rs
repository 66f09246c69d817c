//! Serializable result documents. All floats are rounded to 12 significant
//! digits except the config echo, which must re-parse exactly.

use std::collections::BTreeMap;

use catalyst_core::protocol::gate::INPUT_LABELS;
use catalyst_core::{Complex, GatePhases, Metrics, ProtocolConfig, ProtocolStep, RunResult, SegmentRecord};
use serde::Serialize;

use crate::output::sig12;
use crate::spec::{MetricName, RunSpec};

fn pair(z: Complex) -> [f64; 2] {
    [sig12(z.re), sig12(z.im)]
}

#[derive(Debug, Serialize)]
pub struct Derived {
    pub engine: &'static str,
    pub g_tau: f64,
    pub two_g_tau_sq: f64,
    pub omega_tau: f64,
    /// Fock cutoff `n_max` actually used; absent for the analytic engine.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

impl Derived {
    pub fn new(config: &ProtocolConfig) -> Self {
        let exact = config.engine() != catalyst_core::Engine::AnalyticRwa;
        Self {
            engine: config.engine().name(),
            g_tau: sig12(config.tau()),
            two_g_tau_sq: sig12(config.two_g_tau_sq()),
            omega_tau: sig12(config.omega_tau()),
            cutoff: exact.then(|| config.cutoff().n_max()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SegmentEntry {
    pub index: usize,
    pub step: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub displacement: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    pub trace: f64,
    pub top_fock_population: f64,
    pub frame_amplitude: [f64; 2],
}

impl From<&SegmentRecord> for SegmentEntry {
    fn from(s: &SegmentRecord) -> Self {
        let (displacement, duration) = match s.step {
            ProtocolStep::DisplaceField(b) => (Some(pair(b)), None),
            ProtocolStep::RotateAtoms => (None, None),
            ProtocolStep::Evolve(t) => (None, Some(sig12(t))),
        };
        Self {
            index: s.index,
            step: s.step.label(),
            displacement,
            duration,
            trace: sig12(s.trace),
            top_fock_population: sig12(s.top_fock_population),
            frame_amplitude: pair(s.frame_amplitude),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Truncation {
    pub flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub timestamp: String,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunDocument {
    pub config: RunSpec,
    pub derived: Derived,
    pub metrics: BTreeMap<&'static str, f64>,
    pub final_frame_amplitude: [f64; 2],
    pub truncation: Truncation,
    pub segment_records: Vec<SegmentEntry>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

pub fn metric_value(m: &Metrics, name: MetricName) -> f64 {
    match name {
        MetricName::GhzFidelity => m.ghz_fidelity,
        MetricName::AtomicPurity => m.atomic_purity,
        MetricName::ProductFormDistance => m.product_form_distance,
        MetricName::MeanPhotonFinal => m.mean_photon_final,
        MetricName::ClosedFormFidelity => m.closed_form_fidelity,
    }
}

impl RunDocument {
    pub fn new(spec: &RunSpec, config: &ProtocolConfig, result: &RunResult, metrics: &Metrics) -> Self {
        Self {
            config: spec.clone(),
            derived: Derived::new(config),
            metrics: spec
                .requested_metrics()
                .into_iter()
                .map(|name| (name.key(), sig12(metric_value(metrics, name))))
                .collect(),
            final_frame_amplitude: pair(result.frame_amplitude),
            truncation: Truncation {
                flagged: result.truncated(),
                step: result.truncation.map(|t| t.step),
                population: result.truncation.map(|t| sig12(t.population)),
            },
            segment_records: result.segment_records.iter().map(SegmentEntry::from).collect(),
            timing: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GateDocument {
    pub config: RunSpec,
    pub derived: Derived,
    /// Output phases relative to the `+-` branch.
    pub relative_phases: BTreeMap<&'static str, f64>,
    pub overlaps: BTreeMap<&'static str, f64>,
    /// Single-qubit phases removed: `(theta, 0, 0, theta)` in `++, +-, -+, --` order.
    pub normalized_phases: [f64; 4],
    /// `normalized_phases` minus `(pi/2, 0, 0, pi/2)`, modulo pi.
    pub deviation_from_ideal: [f64; 4],
    pub cross_asymmetry: f64,
    pub target_phase: f64,
    /// Distance of `theta_pp` from `target_phase`, modulo pi.
    pub phase_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Gate fidelity with the ideal `pi/2` gate at the configured angle.
    pub robustness_fidelity: f64,
}

impl GateDocument {
    pub fn new(spec: &RunSpec, config: &ProtocolConfig, gate: &GatePhases, tolerance: f64) -> Self {
        use catalyst_core::analysis::robustness_fidelity;
        use catalyst_core::protocol::gate::phase_distance_mod_pi;
        use std::f64::consts::FRAC_PI_2;

        let normalized = gate.normalized();
        let ideal = [FRAC_PI_2, 0.0, 0.0, FRAC_PI_2];
        let target = config.two_g_tau_sq();
        let error = phase_distance_mod_pi(gate.two_qubit_phase, target);
        let labelled = |v: [f64; 4]| INPUT_LABELS.iter().copied().zip(v.map(sig12)).collect();
        Self {
            config: spec.clone(),
            derived: Derived::new(config),
            relative_phases: labelled(gate.relative),
            overlaps: labelled(gate.overlaps),
            normalized_phases: normalized.map(sig12),
            deviation_from_ideal: std::array::from_fn(|i| sig12(phase_distance_mod_pi(normalized[i], ideal[i]))),
            cross_asymmetry: sig12(gate.cross_asymmetry),
            target_phase: sig12(target),
            phase_error: sig12(error),
            tolerance,
            passed: error < tolerance,
            robustness_fidelity: sig12(robustness_fidelity(target)),
        }
    }
}
