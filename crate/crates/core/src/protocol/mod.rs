//! The four-segment displace/rotate/evolve protocol and its three engines.
//!
//! Internal units: `g = 1`, so `tau` is `gτ` and `Ω = r`.

mod engines;
pub mod gate;
pub mod rwa;
pub mod schedule;

use log::warn;
use nalgebra::ComplexField;

use crate::dynamics::{partial_trace_atoms, partial_trace_field, JointDensity, JointShape};
use crate::error::{Error, Result};
use crate::fockspace::{annihilation_operator, mean_photon_number, Amplitude, FieldDensity, FockCutoff};
use crate::register::{bloch_initial_state, ghz_target, AtomCount, AtomDensity, AtomKet, BasisPhase, GhzTarget};
use crate::scalar::{cplx, lit, to_f64, Real};

pub use gate::{extract_two_qubit_phases, GatePhases};
pub use rwa::{analytic_final_state, analytic_map, compose_rwa, ComposedSchedule};
pub use schedule::{build_schedule, net_displacement, total_evolution_time, ProtocolStep};

/// Top-Fock population above which a run is flagged as truncated.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;
/// Number of highest Fock levels summed by the truncation monitor.
pub const TRUNCATION_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Literal schedule on the lab-frame field.
    LabExact,
    /// Same dynamics with displacements folded into a frame amplitude.
    DisplacedExact,
    /// Closed-form strong-drive result; no field matrices.
    AnalyticRwa,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::LabExact => "LabExact",
            Engine::DisplacedExact => "DisplacedExact",
            Engine::AnalyticRwa => "AnalyticRWA",
        }
    }
}

/// `τ` (units of `1/g`) from the accumulated angle `2(gτ)²`.
pub fn tau_from_two_g_tau_sq<T: Real>(angle: T) -> Result<T> {
    if !(angle >= T::zero()) {
        return Err(Error::param("two_g_tau_sq", "must be >= 0"));
    }
    Ok((angle / lit(2.0)).sqrt())
}

/// `gτ = √π / 2`, where `2(gτ)² = π/2`.
pub fn design_tau<T: Real>() -> T {
    T::pi().sqrt() / lit(2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig<T: Real> {
    n_atoms: AtomCount,
    r: T,
    tau: T,
    n_bar_th: T,
    cutoff: Option<FockCutoff>,
    engine: Engine,
    initial: Option<AtomKet<T>>,
}

fn finite_nonnegative<T: Real>(name: &'static str, x: T) -> Result<T> {
    let v = to_f64(x);
    if !v.is_finite() || v < 0.0 {
        return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(x)
}

impl<T: Real> ProtocolConfig<T> {
    pub fn new(n_atoms: AtomCount, r: T, tau: T, n_bar_th: T, engine: Engine) -> Result<Self> {
        Ok(Self {
            n_atoms,
            r: finite_nonnegative("r", r)?,
            tau: finite_nonnegative("tau", tau)?,
            n_bar_th: finite_nonnegative("n_bar_th", n_bar_th)?,
            cutoff: None,
            engine,
            initial: None,
        })
    }

    pub fn with_n_atoms(mut self, n_atoms: AtomCount) -> Result<Self> {
        if let Some(psi) = &self.initial {
            if psi.n_atoms() != n_atoms {
                return Err(Error::InvalidConfig(
                    "initial state does not match the new atom count".into(),
                ));
            }
        }
        self.n_atoms = n_atoms;
        Ok(self)
    }

    pub fn with_r(mut self, r: T) -> Result<Self> {
        self.r = finite_nonnegative("r", r)?;
        Ok(self)
    }

    pub fn with_tau(mut self, tau: T) -> Result<Self> {
        self.tau = finite_nonnegative("tau", tau)?;
        Ok(self)
    }

    pub fn with_n_bar_th(mut self, n_bar_th: T) -> Result<Self> {
        self.n_bar_th = finite_nonnegative("n_bar_th", n_bar_th)?;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: Option<FockCutoff>) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_initial_state(mut self, psi: AtomKet<T>) -> Result<Self> {
        if psi.n_atoms() != self.n_atoms {
            return Err(Error::DimensionMismatch {
                expected: self.n_atoms.dim(),
                found: psi.n_atoms().dim(),
            });
        }
        self.initial = Some(psi);
        Ok(self)
    }

    pub fn n_atoms(&self) -> AtomCount {
        self.n_atoms
    }

    pub fn r(&self) -> T {
        self.r
    }

    /// `gτ`
    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn n_bar_th(&self) -> T {
        self.n_bar_th
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// `Ωτ = r·gτ`
    pub fn omega_tau(&self) -> T {
        self.r * self.tau
    }

    pub fn two_g_tau_sq(&self) -> T {
        lit::<T>(2.0) * self.tau * self.tau
    }

    /// The cutoff requested explicitly, if any.
    pub fn explicit_cutoff(&self) -> Option<FockCutoff> {
        self.cutoff
    }

    /// Explicit cutoff, or the engine's default from the Poisson-tail heuristic.
    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff.unwrap_or_else(|| {
            let n_bar = to_f64(self.n_bar_th);
            match self.engine {
                Engine::LabExact => FockCutoff::heuristic(n_bar, to_f64(self.lab_field_amplitude())),
                _ => FockCutoff::heuristic(n_bar, to_f64(self.frame_field_amplitude())),
            }
        })
    }

    pub fn shape(&self) -> JointShape {
        JointShape::new(self.n_atoms, self.cutoff())
    }

    /// `|e⟩^{⊗N}` unless configured otherwise.
    pub fn initial_state(&self) -> AtomKet<T> {
        self.initial
            .clone()
            .unwrap_or_else(|| bloch_initial_state(self.n_atoms))
    }

    /// Largest lab-frame field amplitude along the square path, `r√2 + N·gτ`.
    pub fn lab_field_amplitude(&self) -> T {
        self.r * T::SQRT_2() + self.frame_field_amplitude()
    }

    /// Scale of the conditional displacements inside the frame, `N·gτ`.
    pub fn frame_field_amplitude(&self) -> T {
        lit::<T>(self.n_atoms.get() as f64) * self.tau
    }

    /// Checks the engine-specific preconditions.
    pub fn validate(&self) -> Result<()> {
        if self.engine == Engine::AnalyticRwa {
            return Ok(());
        }
        if !(self.tau > T::zero()) {
            return Err(Error::InvalidConfig(format!("{} needs tau > 0", self.engine.name())));
        }
        let amplitude = match self.engine {
            Engine::LabExact => self.lab_field_amplitude(),
            _ => self.frame_field_amplitude(),
        };
        let scale = to_f64(self.n_bar_th + amplitude * amplitude);
        let n_max = self.cutoff().n_max();
        if (n_max as f64) <= scale {
            return Err(Error::CutoffTooSmall {
                engine: self.engine.name(),
                n_max,
                scale,
            });
        }
        Ok(())
    }
}

/// State bookkeeping after one schedule step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentRecord<T: Real> {
    pub index: usize,
    pub step: ProtocolStep<T>,
    pub trace: T,
    /// Population of the highest [`TRUNCATION_LEVELS`] Fock states (in frame).
    pub top_fock_population: T,
    /// Running frame amplitude; zero for the lab engine.
    pub frame_amplitude: Amplitude<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationEvent {
    pub step: usize,
    pub population: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult<T: Real> {
    pub engine: Engine,
    /// Joint state in the engine's frame: lab state is `D(A) ρ D†(A)`.
    pub final_joint: Option<JointDensity<T>>,
    pub final_atoms: AtomDensity<T>,
    /// Reduced field in the engine's frame.
    pub final_field: Option<FieldDensity<T>>,
    /// `A` of the final frame; zero for the lab engine.
    pub frame_amplitude: Amplitude<T>,
    /// Lab-frame `⟨a†a⟩` of the final field.
    pub mean_photon_lab: T,
    pub segment_records: Vec<SegmentRecord<T>>,
    /// First step whose top-Fock population exceeded [`TRUNCATION_THRESHOLD`].
    pub truncation: Option<TruncationEvent>,
    /// GHZ state the executed schedule steers toward.
    pub reference: GhzTarget<T>,
    /// GHZ state with `Ωτ = r·gτ` in basis `−π/2`, as in the closed form.
    pub closed_form_reference: GhzTarget<T>,
}

impl<T: Real> RunResult<T> {
    pub fn truncated(&self) -> bool {
        self.truncation.is_some()
    }

    /// [`Error::Truncation`] if the monitor fired.
    pub fn check_truncation(&self) -> Result<()> {
        match self.truncation {
            Some(TruncationEvent { step, population }) => Err(Error::Truncation { step, population }),
            None => Ok(()),
        }
    }
}

pub fn run<T: Real>(config: &ProtocolConfig<T>) -> Result<RunResult<T>> {
    config.validate()?;
    if config.engine == Engine::AnalyticRwa {
        return run_analytic(config);
    }
    let steps = build_schedule(config.r, config.tau)?;
    run_schedule(config, &steps)
}

/// Executes an arbitrary schedule with an exact engine.
pub fn run_schedule<T: Real>(config: &ProtocolConfig<T>, steps: &[ProtocolStep<T>]) -> Result<RunResult<T>> {
    config.validate()?;
    let trajectory = match config.engine {
        Engine::LabExact => engines::run_lab(config, steps)?,
        Engine::DisplacedExact => engines::run_displaced(config, steps)?,
        Engine::AnalyticRwa => {
            return Err(Error::InvalidConfig(
                "the analytic engine only runs the standard schedule".into(),
            ))
        }
    };
    let closed_form_reference = closed_form_reference(config);
    let reference = match compose_rwa(steps, T::one()) {
        Ok(c) => c.ghz_reference(config.n_atoms),
        Err(e) => {
            warn!("no strong-drive reference for this schedule ({e}); using the closed-form target");
            closed_form_reference.clone()
        }
    };
    let truncation = trajectory
        .records
        .iter()
        .find(|r| to_f64(r.top_fock_population) > TRUNCATION_THRESHOLD)
        .map(|r| TruncationEvent {
            step: r.index,
            population: to_f64(r.top_fock_population),
        });
    let field = partial_trace_atoms(&trajectory.state);
    let a = annihilation_operator::<T>(field.cutoff());
    let mean_a = (&a * field.matrix()).trace();
    let frame = trajectory.frame;
    let mean_photon_lab =
        mean_photon_number(&field) + lit::<T>(2.0) * (frame.conj() * mean_a).re + frame.modulus_squared();
    Ok(RunResult {
        engine: config.engine,
        final_atoms: partial_trace_field(&trajectory.state),
        final_field: Some(field),
        final_joint: Some(trajectory.state),
        frame_amplitude: frame,
        mean_photon_lab,
        segment_records: trajectory.records,
        truncation,
        reference,
        closed_form_reference,
    })
}

fn closed_form_reference<T: Real>(config: &ProtocolConfig<T>) -> GhzTarget<T> {
    ghz_target(config.n_atoms, config.omega_tau(), BasisPhase::new(-T::frac_pi_2()))
}

fn run_analytic<T: Real>(config: &ProtocolConfig<T>) -> Result<RunResult<T>> {
    let map = analytic_map(config.n_atoms, config.r, config.tau);
    let psi = AtomKet::new(map * config.initial_state().amplitudes(), config.n_atoms)?;
    // No field is simulated; records carry only the frame bookkeeping.
    let mut frame = cplx(T::zero(), T::zero());
    let steps: Vec<ProtocolStep<T>> = if config.tau > T::zero() {
        build_schedule(config.r, config.tau)?
    } else {
        Vec::new()
    };
    let segment_records = steps
        .iter()
        .enumerate()
        .map(|(index, step)| {
            if let ProtocolStep::DisplaceField(b) = step {
                frame += b;
            }
            SegmentRecord {
                index,
                step: *step,
                trace: T::one(),
                top_fock_population: T::zero(),
                frame_amplitude: frame,
            }
        })
        .collect();
    let reference = closed_form_reference(config);
    Ok(RunResult {
        engine: Engine::AnalyticRwa,
        final_joint: None,
        final_atoms: psi.density(),
        final_field: None,
        frame_amplitude: cplx(T::zero(), -config.r),
        // Field ends as D(−ir) ρ_th D†(−ir).
        mean_photon_lab: config.n_bar_th + config.r * config.r,
        segment_records,
        truncation: None,
        closed_form_reference: reference.clone(),
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_distance, StateTolerance};
    use crate::scalar::cplx;

    fn n(k: usize) -> AtomCount {
        AtomCount::new(k).unwrap()
    }

    fn cfg(k: usize, r: f64, tau: f64, n_bar: f64, engine: Engine) -> ProtocolConfig<f64> {
        ProtocolConfig::new(n(k), r, tau, n_bar, engine).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(ProtocolConfig::new(n(2), -1.0, 1.0, 0.0, Engine::LabExact).is_err());
        assert!(ProtocolConfig::new(n(2), 1.0, f64::NAN, 0.0, Engine::LabExact).is_err());
        assert!(ProtocolConfig::new(n(2), 1.0, 1.0, -0.1, Engine::LabExact).is_err());
        let c = cfg(2, 3.0, 0.5, 1.0, Engine::LabExact).with_cutoff(Some(FockCutoff::new(20).unwrap()));
        assert!(matches!(c.validate(), Err(Error::CutoffTooSmall { n_max: 20, .. })));
        assert!(cfg(2, 3.0, 0.5, 1.0, Engine::LabExact).validate().is_ok());
        assert!(cfg(2, 3.0, 0.0, 0.0, Engine::DisplacedExact).validate().is_err());
        assert!(cfg(2, 3.0, 0.0, 0.0, Engine::AnalyticRwa).validate().is_ok());
        let wrong = bloch_initial_state::<f64>(n(3));
        assert!(cfg(2, 1.0, 1.0, 0.0, Engine::LabExact)
            .with_initial_state(wrong)
            .is_err());
    }

    #[test]
    fn tau_conversion() {
        let t = tau_from_two_g_tau_sq(std::f64::consts::FRAC_PI_2).unwrap();
        assert!((t - design_tau::<f64>()).abs() < 1e-15);
        assert!(tau_from_two_g_tau_sq(-1.0f64).is_err());
    }

    #[test]
    fn lab_engine_first_segment_is_vacuum_rabi() {
        // r = 0, vacuum: the schedule is resonant JCM with rotations.
        let tau = 0.6;
        let r = run(&cfg(1, 0.0, tau, 0.0, Engine::LabExact)).unwrap();
        assert_eq!(r.segment_records.len(), 11);
        let c = cfg(1, 0.0, tau, 0.0, Engine::LabExact);
        let one_segment = run_schedule(&c, &[ProtocolStep::Evolve(tau)]).unwrap();
        let pe = one_segment.final_atoms.matrix()[(0, 0)].re;
        assert!((pe - tau.cos().powi(2)).abs() < 1e-10);
        assert!((r.final_atoms.trace() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn engines_agree_at_moderate_drive() {
        let tau = design_tau::<f64>();
        let lab = cfg(1, 1.5, tau, 0.3, Engine::LabExact);
        let disp = cfg(1, 1.5, tau, 0.3, Engine::DisplacedExact).with_cutoff(Some(FockCutoff::new(25).unwrap()));
        let a = run(&lab).unwrap();
        let b = run(&disp).unwrap();
        assert!(!a.truncated() && !b.truncated());
        let d = trace_distance(a.final_atoms.matrix(), b.final_atoms.matrix());
        assert!(d < 1e-7, "{d:e}");
        assert!((a.mean_photon_lab - b.mean_photon_lab).abs() < 1e-6);
        assert!((b.frame_amplitude - cplx(0.0, -1.5)).norm() < 1e-14);
    }

    #[test]
    fn displaced_records_track_frame() {
        let r = run(&cfg(1, 2.0, 0.5, 0.0, Engine::DisplacedExact)).unwrap();
        let frames: Vec<_> = r.segment_records.iter().map(|s| s.frame_amplitude).collect();
        assert_eq!(frames[0], cplx(2.0, 0.0));
        assert_eq!(frames[2], cplx(0.0, 2.0));
        assert_eq!(frames[5], cplx(-2.0, 0.0));
        assert_eq!(frames[10], cplx(0.0, -2.0));
        for rec in &r.segment_records {
            assert!((rec.trace - 1.0).abs() < 1e-9);
        }
        let joint = r.final_joint.unwrap();
        assert!(joint.defects().within(&StateTolerance::JOINT));
    }

    #[test]
    fn analytic_engine_hits_ghz() {
        for k in 2..=4 {
            let r = run(&cfg(k, 50.0, design_tau(), 0.0, Engine::AnalyticRwa)).unwrap();
            let f = r.final_atoms.expectation_in(&r.reference.target);
            assert!((f - 1.0).abs() < 1e-12);
            assert!(r.final_joint.is_none());
            assert_eq!(r.segment_records.len(), 11);
        }
    }

    #[test]
    fn truncation_is_flagged() {
        // Lab cutoff far too small for r = 3, bypassing validation.
        let c = cfg(1, 3.0, 0.5, 0.0, Engine::DisplacedExact).with_cutoff(Some(FockCutoff::new(6).unwrap()));
        let c = c.with_engine(Engine::LabExact);
        assert!(c.validate().is_err());
        let trajectory = engines::run_lab(&c, &build_schedule(3.0, 0.5).unwrap()).unwrap();
        assert!(trajectory
            .records
            .iter()
            .any(|r| r.top_fock_population > TRUNCATION_THRESHOLD));
    }
}
