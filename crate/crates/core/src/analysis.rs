//! Figures of merit over protocol runs, the detuned-gate fidelity curve, the
//! decoherence estimate and parameter sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{partial_trace_atoms, partial_trace_field, JointDensity};
use crate::error::{Error, Result};
use crate::fockspace::FockCutoff;
use crate::linalg;
use crate::protocol::{run, ProtocolConfig, RunResult};
use crate::register::{rotated_product_ket, AtomCount, AtomDensity, AtomKet, BasisPhase};
use crate::scalar::{cis, creal, lit, to_f64, CVector, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics<T: Real> {
    /// Fidelity with the GHZ state the schedule steers toward.
    pub ghz_fidelity: T,
    pub atomic_purity: T,
    /// `½‖ρ − ρ_A ⊗ ρ_F‖₁`; zero when no field is simulated.
    pub product_form_distance: T,
    /// Lab-frame mean photon number of the final field.
    pub mean_photon_final: T,
    /// Fidelity with the closed-form GHZ state (`Ωτ = r·gτ`, basis `−π/2`).
    pub closed_form_fidelity: T,
}

pub fn evaluate<T: Real>(result: &RunResult<T>) -> Metrics<T> {
    let atoms = &result.final_atoms;
    Metrics {
        ghz_fidelity: ghz_fidelity(atoms, &result.reference.target).expect("reference matches register"),
        atomic_purity: atoms.purity(),
        product_form_distance: result
            .final_joint
            .as_ref()
            .map(product_form_distance)
            .unwrap_or_else(T::zero),
        mean_photon_final: result.mean_photon_lab,
        closed_form_fidelity: ghz_fidelity(atoms, &result.closed_form_reference.target)
            .expect("reference matches register"),
    }
}

/// `⟨t|ρ|t⟩`
pub fn ghz_fidelity<T: Real>(rho: &AtomDensity<T>, target: &AtomKet<T>) -> Result<T> {
    if rho.n_atoms() != target.n_atoms() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_atoms().dim(),
            found: target.n_atoms().dim(),
        });
    }
    Ok(rho.expectation_in(target))
}

/// Trace distance between a joint state and the product of its reductions.
pub fn product_form_distance<T: Real>(joint: &JointDensity<T>) -> T {
    let atoms = partial_trace_field(joint);
    let field = partial_trace_atoms(joint);
    let product = linalg::kron(atoms.matrix(), field.matrix());
    linalg::trace_distance(joint.matrix(), &product)
}

/// `F = ¼(1 + sin x)² + ¼cos²x` with `x = 2(gτ)²`.
pub fn robustness_fidelity<T: Real>(two_g_tau_sq: T) -> T {
    let quarter = lit::<T>(0.25);
    let (s, c) = (two_g_tau_sq.sin(), two_g_tau_sq.cos());
    quarter * (T::one() + s) * (T::one() + s) + quarter * c * c
}

/// Same quantity as `|⟨φ_f|φ_f′⟩|²` with both two-atom states built
/// explicitly: `φ_f` has phase `i` on the `++` and `−−` branches, `φ_f′` has
/// `e^{ix}`.
pub fn robustness_fidelity_via_states<T: Real>(two_g_tau_sq: T) -> T {
    let n = AtomCount::new(2).expect("two atoms");
    let basis = BasisPhase::zero();
    let state = |phase: nalgebra::Complex<T>| {
        let mut v = CVector::zeros(4);
        for mask in 0..4 {
            let branch_phase = if mask == 0 || mask == 3 { phase } else { creal(T::one()) };
            v += rotated_product_ket(n, mask, basis).amplitudes() * (branch_phase * lit::<T>(0.5));
        }
        v
    };
    let ideal = state(cis(T::frac_pi_2()));
    let actual = state(cis(two_g_tau_sq));
    ideal.dotc(&actual).norm_sqr()
}

/// Inputs of the decoherence estimate, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceParams<T: Real> {
    /// Coupling `g` in rad/s.
    pub g_physical: T,
    /// Single-atom radiative time.
    pub t_r: T,
    pub n_atoms: usize,
    /// Cavity damping time.
    pub t_c: T,
    pub n_bar_th: T,
    /// Phase-space separation of the field components.
    pub d: T,
}

impl<T: Real> DecoherenceParams<T> {
    /// `d` defaults to `gτ`.
    pub fn with_default_distance(g_physical: T, t_r: T, n_atoms: usize, t_c: T, n_bar_th: T, g_tau: T) -> Self {
        Self {
            g_physical,
            t_r,
            n_atoms,
            t_c,
            n_bar_th,
            d: g_tau,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, x: T| {
            if to_f64(x) > 0.0 && to_f64(x).is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, "must be positive"))
            }
        };
        positive("g_physical", self.g_physical)?;
        positive("t_r", self.t_r)?;
        positive("t_c", self.t_c)?;
        positive("d", self.d)?;
        if self.n_atoms == 0 {
            return Err(Error::param("n_atoms", "must be positive"));
        }
        if !(to_f64(self.n_bar_th) >= 0.0) {
            return Err(Error::param("n_bar_th", "must be >= 0"));
        }
        Ok(())
    }
}

/// `d` for which `T_c / ((1 + 2n̄) d²)` equals a given effective damping time.
pub fn distance_for_effective_damping<T: Real>(t_c: T, n_bar_th: T, t_c_eff: T) -> T {
    (t_c / ((T::one() + lit::<T>(2.0) * n_bar_th) * t_c_eff)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceBudget<T: Real> {
    pub t_total: T,
    pub t_r_eff: T,
    pub t_c_eff: T,
    pub infidelity: T,
}

/// `t = 4τ`, `T_r′ = T_r/N`, `T_c′ = T_c/((1 + 2n̄)d²)`, infidelity
/// `t/T_r′ + t/T_c′`. `tau` is in seconds.
pub fn decoherence_budget<T: Real>(p: &DecoherenceParams<T>, tau: T) -> Result<DecoherenceBudget<T>> {
    p.validate()?;
    if !(to_f64(tau) > 0.0) {
        return Err(Error::param("tau", "must be positive"));
    }
    let t_total = lit::<T>(4.0) * tau;
    let t_r_eff = p.t_r / lit(p.n_atoms as f64);
    let t_c_eff = p.t_c / ((T::one() + lit::<T>(2.0) * p.n_bar_th) * p.d * p.d);
    Ok(DecoherenceBudget {
        t_total,
        t_r_eff,
        t_c_eff,
        infidelity: t_total / t_r_eff + t_total / t_c_eff,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    R,
    NBarTh,
    /// `gτ`
    Tau,
    NAtoms,
    Cutoff,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::R,
        SweepAxis::NBarTh,
        SweepAxis::Tau,
        SweepAxis::NAtoms,
        SweepAxis::Cutoff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::R => "r",
            SweepAxis::NBarTh => "n_bar_th",
            SweepAxis::Tau => "tau",
            SweepAxis::NAtoms => "N",
            SweepAxis::Cutoff => "cutoff",
        }
    }

    /// Applies one axis value to a configuration.
    pub fn apply<T: Real>(self, base: &ProtocolConfig<T>, value: f64) -> Result<ProtocolConfig<T>> {
        let integer = |name: &'static str| -> Result<usize> {
            if value.fract() != 0.0 || value < 0.0 || !value.is_finite() {
                return Err(Error::param(
                    name,
                    format!("expects a non-negative integer, got {value}"),
                ));
            }
            Ok(value as usize)
        };
        let c = base.clone();
        match self {
            SweepAxis::R => c.with_r(lit(value)),
            SweepAxis::NBarTh => c.with_n_bar_th(lit(value)),
            SweepAxis::Tau => c.with_tau(lit(value)),
            SweepAxis::NAtoms => c.with_n_atoms(AtomCount::new(integer("N")?)?),
            SweepAxis::Cutoff => Ok(c.with_cutoff(Some(FockCutoff::new(integer("cutoff")?)?))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown sweep axis `{s}` (expected r, n_bar_th, tau, N or cutoff)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T: Real> {
    pub metrics: Metrics<T>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T: Real> {
    pub value: f64,
    pub outcome: Result<SweepPoint<T>>,
}

/// One run per value, evaluated in parallel and returned in input order.
/// Failures are recorded per row.
pub fn sweep<T: Real>(base: &ProtocolConfig<T>, axis: SweepAxis, values: &[f64]) -> Vec<SweepRow<T>> {
    values
        .par_iter()
        .map(|&value| {
            let outcome = axis
                .apply(base, value)
                .and_then(|cfg| run(&cfg))
                .map(|result| SweepPoint {
                    metrics: evaluate(&result),
                    truncated: result.truncated(),
                });
            SweepRow { value, outcome }
        })
        .collect()
}
