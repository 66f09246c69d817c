//! Exact density-matrix engines over the truncated joint space.

use nalgebra::ComplexField;

use super::schedule::ProtocolStep;
use super::{ProtocolConfig, SegmentRecord, TRUNCATION_LEVELS};
use crate::dynamics::{
    displaced_frame_hamiltonian, embed_atom_operator, embed_field_operator, excitation_phase_diagonal,
    tavis_cummings_hamiltonian, JointDensity, JointShape,
};
use crate::error::{Error, Result};
use crate::fockspace::{displacement_operator, thermal_state, Amplitude};
use crate::linalg::Propagator;
use crate::register::rotation_g_to_ig;
use crate::scalar::{cplx, creal, to_f64, CMatrix, Real};

pub(crate) struct Trajectory<T: Real> {
    pub state: JointDensity<T>,
    pub frame: Amplitude<T>,
    pub records: Vec<SegmentRecord<T>>,
}

fn initial_state<T: Real>(config: &ProtocolConfig<T>, shape: JointShape) -> Result<JointDensity<T>> {
    let field = thermal_state(config.n_bar_th(), shape.cutoff)?;
    Ok(JointDensity::product(&config.initial_state().density(), &field))
}

fn record<T: Real>(
    index: usize,
    step: ProtocolStep<T>,
    rho: &JointDensity<T>,
    frame: Amplitude<T>,
) -> SegmentRecord<T> {
    SegmentRecord {
        index,
        step,
        trace: rho.trace(),
        top_fock_population: rho.top_fock_population(TRUNCATION_LEVELS),
        frame_amplitude: frame,
    }
}

fn check_duration<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero()) {
        return Err(Error::InvalidConfig(format!(
            "evolution duration must be positive, got {}",
            to_f64(t)
        )));
    }
    Ok(())
}

/// Unitaries `e^{−iHt}` keyed by a real parameter and duration.
struct UnitaryCache<T: Real> {
    entries: Vec<(T, T, CMatrix<T>)>,
}

impl<T: Real> UnitaryCache<T> {
    fn new() -> Self {
        Self { entries: Vec::new() }
    }

    fn get(&mut self, key: T, t: T, build: impl FnOnce() -> CMatrix<T>) -> Result<&CMatrix<T>> {
        let same = |a: T, b: T| to_f64((a - b).abs()) <= 1e-12 * to_f64(a.abs().max(b.abs())).max(1.0);
        if let Some(pos) = self.entries.iter().position(|(k, d, _)| same(*k, key) && same(*d, t)) {
            return Ok(&self.entries[pos].2);
        }
        let u = Propagator::new(&build())?.unitary(t);
        self.entries.push((key, t, u));
        Ok(&self.entries.last().expect("just pushed").2)
    }
}

/// Literal lab-frame execution: every displacement is applied to the field.
pub(crate) fn run_lab<T: Real>(config: &ProtocolConfig<T>, steps: &[ProtocolStep<T>]) -> Result<Trajectory<T>> {
    let shape = config.shape();
    let mut rho = initial_state(config, shape)?;
    let rotation = embed_atom_operator(&rotation_g_to_ig::<T>(shape.n_atoms), shape)?;
    let mut cache = UnitaryCache::new();
    let zero = cplx(T::zero(), T::zero());
    let mut records = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        match *step {
            ProtocolStep::DisplaceField(beta) => {
                let d = embed_field_operator(&displacement_operator(beta, shape.cutoff), shape)?;
                rho = rho.conjugated(&d);
            }
            ProtocolStep::RotateAtoms => rho = rho.conjugated(&rotation),
            ProtocolStep::Evolve(t) => {
                check_duration(t)?;
                let u = cache.get(T::zero(), t, || tavis_cummings_hamiltonian(shape, T::one()))?;
                rho = rho.conjugated(u);
            }
        }
        records.push(record(i, *step, &rho, zero));
    }
    Ok(Trajectory {
        state: rho,
        frame: zero,
        records,
    })
}

/// Execution in the displaced frame. The lab state is `D(A) σ D†(A)`; lab
/// displacements only update `A`, and evolution uses `H_d(A)` on `σ`.
///
/// `H_d(|A|e^{iθ}) = V H_d(|A|) V†` with `V = e^{iθ N_ex}` diagonal, so one
/// eigendecomposition per `(|A|, t)` covers every segment of the square path.
pub(crate) fn run_displaced<T: Real>(config: &ProtocolConfig<T>, steps: &[ProtocolStep<T>]) -> Result<Trajectory<T>> {
    let shape = config.shape();
    let mut sigma = initial_state(config, shape)?;
    let rotation = embed_atom_operator(&rotation_g_to_ig::<T>(shape.n_atoms), shape)?;
    let mut cache = UnitaryCache::new();
    let mut frame = cplx(T::zero(), T::zero());
    let mut records = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        match *step {
            ProtocolStep::DisplaceField(beta) => frame += beta,
            ProtocolStep::RotateAtoms => sigma = sigma.conjugated(&rotation),
            ProtocolStep::Evolve(t) => {
                check_duration(t)?;
                let modulus = frame.modulus();
                let u0 = cache.get(modulus, t, || {
                    displaced_frame_hamiltonian(shape, T::one(), creal(modulus))
                })?;
                let u = if to_f64(modulus) == 0.0 {
                    u0.clone()
                } else {
                    let v = excitation_phase_diagonal(shape, frame.argument());
                    CMatrix::from_fn(u0.nrows(), u0.ncols(), |r, c| v[r] * u0[(r, c)] * v[c].conj())
                };
                sigma = sigma.conjugated(&u);
            }
        }
        records.push(record(i, *step, &sigma, frame));
    }
    Ok(Trajectory {
        state: sigma,
        frame,
        records,
    })
}
