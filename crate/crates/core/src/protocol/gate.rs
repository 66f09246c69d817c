//! Two-qubit phase-gate extraction from product-basis runs.

use nalgebra::ComplexField;
use rayon::prelude::*;

use super::{run, ProtocolConfig};
use crate::error::{Error, Result};
use crate::register::{rotated_product_ket, AtomDensity, BasisPhase};
use crate::scalar::{lit, to_f64, wrap_pi, wrap_two_pi, Real};

/// Minimum `|⟨target|out⟩|` accepted for each product input.
pub const OVERLAP_THRESHOLD: f64 = 0.99;

/// Input labels in mask order: bit 1 is atom 1, bit 0 is atom 2, set = `|−⟩`.
pub const INPUT_LABELS: [&str; 4] = ["++", "+-", "-+", "--"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatePhases<T: Real> {
    /// Output phases relative to the `+−` branch, wrapped to `(−π, π]`.
    pub relative: [T; 4],
    /// `|⟨±±_{−π/2}|out⟩|` for each product input.
    pub overlaps: [T; 4],
    /// `χ/2` with `χ = θ₊₊ − θ₊₋ − θ₋₊ + θ₋₋`, reduced to `(−π/4, 3π/4]`.
    pub two_qubit_phase: T,
    /// `θ₋₊ − θ₊₋`, zero for identical atoms.
    pub cross_asymmetry: T,
}

impl<T: Real> GatePhases<T> {
    /// `(χ/2, 0, 0, χ/2)`: single-qubit phases removed with `θ₊₋ = 0`.
    pub fn normalized(&self) -> [T; 4] {
        [self.two_qubit_phase, T::zero(), T::zero(), self.two_qubit_phase]
    }
}

/// Distance between two-qubit phases modulo `π`.
pub fn phase_distance_mod_pi<T: Real>(a: T, b: T) -> T {
    let d = wrap_two_pi(lit::<T>(2.0) * (a - b));
    d.min(T::two_pi() - d) / lit(2.0)
}

fn reduce_half_phase<T: Real>(chi: T) -> T {
    let half = wrap_two_pi(chi) / lit(2.0);
    if half > lit::<T>(3.0) * T::frac_pi_4() {
        half - T::pi()
    } else {
        half
    }
}

/// Runs the protocol on the four rotated-basis products `|±⟩|±⟩` (basis 0)
/// and on `|e⟩|e⟩ = ½Σ|±⟩|±⟩`. The product runs certify that each input
/// maps onto the matching product in basis `−π/2`; the superposition run
/// yields the relative phases from its coherences.
pub fn extract_two_qubit_phases<T: Real>(config: &ProtocolConfig<T>) -> Result<GatePhases<T>> {
    let n_atoms = config.n_atoms();
    if n_atoms.get() != 2 {
        return Err(Error::InvalidConfig(format!(
            "gate extraction needs exactly 2 atoms, got {}",
            n_atoms.get()
        )));
    }
    let input_basis = BasisPhase::zero();
    let output_basis = BasisPhase::new(-T::frac_pi_2());
    let targets: Vec<_> = (0..4).map(|m| rotated_product_ket(n_atoms, m, output_basis)).collect();

    let mut inputs: Vec<_> = (0..4)
        .map(|m| Some(rotated_product_ket(n_atoms, m, input_basis)))
        .collect();
    inputs.push(None);
    let outputs: Vec<Result<AtomDensity<T>>> = inputs
        .into_par_iter()
        .map(|psi| {
            let cfg = match psi {
                Some(psi) => config.clone().with_initial_state(psi)?,
                None => config
                    .clone()
                    .with_initial_state(crate::register::bloch_initial_state(n_atoms))?,
            };
            let result = run(&cfg)?;
            result.check_truncation()?;
            Ok(result.final_atoms)
        })
        .collect();
    let mut outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;
    let superposition = outputs.pop().expect("five runs");

    let mut overlaps = [T::zero(); 4];
    for (mask, rho) in outputs.iter().enumerate() {
        let overlap = rho.expectation_in(&targets[mask]).max(T::zero()).sqrt();
        if to_f64(overlap) < OVERLAP_THRESHOLD {
            return Err(Error::OverlapCheck {
                input: INPUT_LABELS[mask].to_string(),
                overlap: to_f64(overlap),
                threshold: OVERLAP_THRESHOLD,
            });
        }
        overlaps[mask] = overlap;
    }

    let reference = &targets[1];
    let mut relative = [T::zero(); 4];
    for (mask, target) in targets.iter().enumerate() {
        relative[mask] = wrap_pi(superposition.coherence(target, reference).argument());
    }
    let chi = relative[0] - relative[1] - relative[2] + relative[3];
    Ok(GatePhases {
        relative,
        overlaps,
        two_qubit_phase: reduce_half_phase(chi),
        cross_asymmetry: wrap_pi(relative[2] - relative[1]),
    })
}
