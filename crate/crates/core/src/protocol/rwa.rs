//! Closed-form evolution in the strong-drive limit.
//!
//! In a frame with amplitude `A = |A|e^{−iφ}` the drive is `2g|A|σ_{z,φ}`; for
//! `g|A| ≫ g` the coupling reduces to the spin-dependent force
//! `g(e^{−iφ}a† + e^{iφ}a)σ_{z,φ}`. Each `σ_z` sector `m` then picks up a
//! dynamical phase and a conditional displacement, and a closed loop of
//! displacements leaves only a phase quadratic in `m`.

use nalgebra::ComplexField;

use super::schedule::ProtocolStep;
use crate::error::{Error, Result};
use crate::register::{
    dicke_state, ghz_target, rotated_product_basis, rotation_g_to_ig, sector_projector, AtomCount, AtomKet, BasisPhase,
    GhzTarget,
};
use crate::scalar::{binomial, cis, cplx, creal, lit, to_f64, wrap_pi, CMatrix, CVector, Real};

const BASIS_TOL: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-9;

/// A schedule reduced to per-sector phases `e^{i(Λm + Γm²)}` in a single
/// basis, preceded by `R^Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposedSchedule<T: Real> {
    basis: BasisPhase<T>,
    linear: T,
    quadratic: T,
    rotations: usize,
}

/// Reduces a schedule to its strong-drive form.
///
/// Rotations are moved to the start: a segment followed by `q` rotations acts
/// in basis `φ_s + qπ/2`. All segments must share one basis up to sign, run
/// at nonzero frame amplitude, and close their loop of conditional
/// displacements; otherwise [`Error::NotComposable`].
pub fn compose_rwa<T: Real>(steps: &[ProtocolStep<T>], g: T) -> Result<ComposedSchedule<T>> {
    let total_rotations = steps.iter().filter(|s| matches!(s, ProtocolStep::RotateAtoms)).count();
    let mut frame = cplx(T::zero(), T::zero());
    let mut rotations_seen = 0;
    let mut basis: Option<T> = None;
    let mut linear = T::zero();
    let mut quadratic = T::zero();
    let mut loop_sum = cplx(T::zero(), T::zero());
    let mut loop_scale = T::zero();

    for step in steps {
        match *step {
            ProtocolStep::DisplaceField(b) => frame += b,
            ProtocolStep::RotateAtoms => rotations_seen += 1,
            ProtocolStep::Evolve(t) => {
                let modulus = frame.modulus();
                if to_f64(modulus) == 0.0 {
                    return Err(Error::NotComposable("evolution at zero frame amplitude".into()));
                }
                let phi = -frame.argument();
                let after = (total_rotations - rotations_seen) as f64;
                let effective = phi + T::frac_pi_2() * lit(after);
                let reference = *basis.get_or_insert(effective);
                let offset = to_f64(wrap_pi(effective - reference)).abs();
                let sign = if offset < BASIS_TOL {
                    T::one()
                } else if (std::f64::consts::PI - offset).abs() < BASIS_TOL {
                    -T::one()
                } else {
                    return Err(Error::NotComposable(format!(
                        "segment basis differs from the first by {offset:.6} rad"
                    )));
                };
                linear -= lit::<T>(2.0) * g * modulus * t * sign;
                // Per unit m: β = −iεgt·A/|A|.
                let beta = cplx(T::zero(), -sign * g * t) * (frame / creal(modulus));
                quadratic += (beta * loop_sum.conj()).im;
                loop_sum += beta;
                loop_scale += beta.modulus();
            }
        }
    }
    let Some(basis) = basis else {
        return Err(Error::NotComposable("schedule has no evolution".into()));
    };
    if to_f64(loop_sum.modulus()) > CLOSURE_TOL * to_f64(loop_scale).max(1.0) {
        return Err(Error::NotComposable(format!(
            "conditional displacements do not close (residual {:.3e})",
            to_f64(loop_sum.modulus())
        )));
    }
    Ok(ComposedSchedule {
        basis: BasisPhase::new(basis),
        linear,
        quadratic,
        rotations: total_rotations,
    })
}

impl<T: Real> ComposedSchedule<T> {
    /// Common basis `φ*` of every segment (first segment has sign `+1`).
    pub fn basis(&self) -> BasisPhase<T> {
        self.basis
    }

    /// `Λ`, coefficient of `m` in the sector phase.
    pub fn linear_phase(&self) -> T {
        self.linear
    }

    /// `Γ`, coefficient of `m²`; negative for a clockwise loop.
    pub fn quadratic_phase(&self) -> T {
        self.quadratic
    }

    pub fn rotations(&self) -> usize {
        self.rotations
    }

    pub fn sector_phase(&self, m: T) -> nalgebra::Complex<T> {
        cis(self.linear * m + self.quadratic * m * m)
    }

    /// Atomic propagator `Σ_k e^{i(Λm_k + Γm_k²)} P_k R^Q`, `m_k = N/2 − k`.
    pub fn propagator(&self, n_atoms: AtomCount) -> CMatrix<T> {
        let n = n_atoms.get();
        let d = n_atoms.dim();
        let mut u = CMatrix::zeros(d, d);
        for k in 0..=n {
            let m = lit::<T>(n as f64 / 2.0 - k as f64);
            u += sector_projector(n_atoms, k, self.basis) * self.sector_phase(m);
        }
        let r = rotation_g_to_ig::<T>(n_atoms);
        (0..self.rotations).fold(u, |acc, _| acc * &r)
    }

    pub fn apply(&self, psi: &AtomKet<T>) -> AtomKet<T> {
        let v = self.propagator(psi.n_atoms()) * psi.amplitudes();
        AtomKet::new(v, psi.n_atoms()).expect("unitary image of a unit vector")
    }

    /// `Ωτ` for which [`ghz_target`] in basis `φ*` matches the composed state
    /// from `|e⟩^{⊗N}` when `|Γ| = π/2`.
    ///
    /// Writing the sector phase in `k` gives `e^{i(−Λ − ΓN)k + iΓk²}`. For
    /// `Γ = −π/2`, `−(π/2)k² ≡ (π/2)k² + πk (mod 2π)`, which shifts `8Ωτ` by
    /// `(N + 1)π`.
    pub fn effective_omega_tau(&self, n_atoms: AtomCount) -> T {
        let n = lit::<T>(n_atoms.get() as f64);
        let shift = if self.quadratic < T::zero() {
            (n + T::one()) * T::pi()
        } else {
            T::zero()
        };
        (shift - self.linear) / lit(8.0)
    }

    pub fn ghz_reference(&self, n_atoms: AtomCount) -> GhzTarget<T> {
        ghz_target(n_atoms, self.effective_omega_tau(n_atoms), self.basis)
    }
}

/// `8kΩτ − 2kN(gτ)² + 2k²(gτ)²` with `g = 1`, `Ω = r`.
fn analytic_phase<T: Real>(n: usize, k: usize, r: T, tau: T) -> T {
    let k_ = lit::<T>(k as f64);
    let n_ = lit::<T>(n as f64);
    let gt2 = tau * tau;
    lit::<T>(8.0) * k_ * r * tau - lit::<T>(2.0) * k_ * n_ * gt2 + lit::<T>(2.0) * k_ * k_ * gt2
}

/// Closed-form final state from `|e⟩^{⊗N}`:
/// `2^{−N/2} Σ_k e^{i(8kΩτ − 2kN(gτ)² + 2k²(gτ)²)} C(N,k)^{1/2} |Φ_{k,−π/2}⟩`.
pub fn analytic_final_state<T: Real>(n_atoms: AtomCount, r: T, tau: T) -> AtomKet<T> {
    let n = n_atoms.get();
    let phi = BasisPhase::new(-T::frac_pi_2());
    let scale = lit::<T>(2.0).powi(-(n as i32)).sqrt();
    let mut v = CVector::zeros(n_atoms.dim());
    for k in 0..=n {
        let weight = lit::<T>(binomial(n, k) as f64).sqrt() * scale;
        let dicke = dicke_state(n_atoms, k, phi).expect("k <= N");
        v += dicke.amplitudes() * (cis(analytic_phase(n, k, r, tau)) * weight);
    }
    AtomKet::new(v, n_atoms).expect("nonzero")
}

/// The same evolution as a linear map on product inputs:
/// `|s⟩_0 → e^{iθ_k}|s⟩_{−π/2}`, `k` the number of `|−⟩` factors in `s`.
pub fn analytic_map<T: Real>(n_atoms: AtomCount, r: T, tau: T) -> CMatrix<T> {
    let n = n_atoms.get();
    let out = rotated_product_basis(n_atoms, BasisPhase::new(-T::frac_pi_2()));
    let inp = rotated_product_basis(n_atoms, BasisPhase::zero());
    let phases = CVector::from_fn(n_atoms.dim(), |mask, _| {
        cis(analytic_phase(n, mask.count_ones() as usize, r, tau))
    });
    out * CMatrix::from_diagonal(&phases) * inp.adjoint()
}
