use crate::error::{Error, Result};
use crate::fockspace::Amplitude;
use crate::scalar::{cplx, Real};

/// One step of the displace/rotate/evolve sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolStep<T: Real> {
    /// Lab-frame field displacement `D(β)`.
    DisplaceField(Amplitude<T>),
    /// `|g_j⟩ → i|g_j⟩` on every atom.
    RotateAtoms,
    /// Free evolution for the given duration (units of `1/g`).
    Evolve(T),
}

impl<T: Real> ProtocolStep<T> {
    pub fn label(&self) -> &'static str {
        match self {
            ProtocolStep::DisplaceField(_) => "displace",
            ProtocolStep::RotateAtoms => "rotate",
            ProtocolStep::Evolve(_) => "evolve",
        }
    }
}

/// The square-path schedule: displacements `r, −r+ir, −r−ir, r−ir`, each of
/// the last three followed by an atomic rotation, with an evolution of `τ`
/// after every displacement.
pub fn build_schedule<T: Real>(r: T, tau: T) -> Result<Vec<ProtocolStep<T>>> {
    if !(r >= T::zero()) {
        return Err(Error::param("r", "displacement magnitude must be >= 0"));
    }
    if !(tau > T::zero()) {
        return Err(Error::param("tau", "interaction time must be positive"));
    }
    use ProtocolStep::*;
    Ok(vec![
        DisplaceField(cplx(r, T::zero())),
        Evolve(tau),
        DisplaceField(cplx(-r, r)),
        RotateAtoms,
        Evolve(tau),
        DisplaceField(cplx(-r, -r)),
        RotateAtoms,
        Evolve(tau),
        DisplaceField(cplx(r, -r)),
        RotateAtoms,
        Evolve(tau),
    ])
}

/// Sum of all displacement amplitudes in a schedule.
pub fn net_displacement<T: Real>(steps: &[ProtocolStep<T>]) -> Amplitude<T> {
    steps.iter().fold(cplx(T::zero(), T::zero()), |acc, s| match s {
        ProtocolStep::DisplaceField(b) => acc + b,
        _ => acc,
    })
}

/// Sum of all evolution durations in a schedule.
pub fn total_evolution_time<T: Real>(steps: &[ProtocolStep<T>]) -> T {
    steps.iter().fold(T::zero(), |acc, s| match s {
        ProtocolStep::Evolve(t) => acc + *t,
        _ => acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_shape() {
        let s = build_schedule(2.0f64, 0.5).unwrap();
        assert_eq!(s.len(), 11);
        let count = |label| s.iter().filter(|x| x.label() == label).count();
        assert_eq!((count("displace"), count("rotate"), count("evolve")), (4, 3, 4));
        assert_eq!(total_evolution_time(&s), 2.0);
        // No rotation after the last evolution.
        assert_eq!(s.last(), Some(&ProtocolStep::Evolve(0.5)));
    }

    #[test]
    fn displacements_sum_to_minus_i_r() {
        let r = 7.25f64;
        let net = net_displacement(&build_schedule(r, 1.0).unwrap());
        assert!((net - cplx(0.0, -r)).norm() < 1e-14);
    }

    #[test]
    fn schedule_rejects_bad_parameters() {
        assert!(build_schedule(-1.0f64, 1.0).is_err());
        assert!(build_schedule(1.0f64, 0.0).is_err());
        assert!(build_schedule(0.0f64, 1.0).is_ok());
    }
}
