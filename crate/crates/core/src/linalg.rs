//! Dense complex linear algebra: Hermitian eigendecomposition, unitary
//! propagators `e^{-iHt}`, and matrix norms used by the invariant checks.

use nalgebra::{ComplexField, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cis, lit, to_f64, CMatrix, CVector, Cplx, Real};

pub fn identity<T: Real>(dim: usize) -> CMatrix<T> {
    CMatrix::identity(dim, dim)
}

pub fn dagger<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// Largest entrywise deviation `max |m - m†|`.
pub fn hermiticity_defect<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for j in 0..n {
        for i in j..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

/// `(m + m†) / 2`
pub fn symmetrize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).unscale(lit(2.0))
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Cplx<T> {
    m.trace()
}

pub fn commutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * b - b * a
}

/// `u · m · u†`
pub fn conjugate<T: Real>(u: &CMatrix<T>, m: &CMatrix<T>) -> CMatrix<T> {
    u * m * u.adjoint()
}

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

pub fn outer<T: Real>(ket: &CVector<T>, bra: &CVector<T>) -> CMatrix<T> {
    ket * bra.adjoint()
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut values: Vec<T> = symmetrize(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    values
}

/// Trace norm `‖m‖₁` of a Hermitian matrix (sum of absolute eigenvalues).
pub fn trace_norm_hermitian<T: Real>(m: &CMatrix<T>) -> T {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(T::zero(), |acc, v| acc + v.abs())
}

/// `½‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    trace_norm_hermitian(&(a - b)) * lit(0.5)
}

/// Hermitian check used before exponentiation. The tolerance is relative to
/// the largest entry so that strongly driven Hamiltonians are not rejected
/// for rounding.
pub fn ensure_hermitian<T: Real>(h: &CMatrix<T>, tol: f64) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    let defect = to_f64(hermiticity_defect(h));
    let scale = to_f64(max_abs(h)).max(1.0);
    if defect > tol * scale {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Measured deviations of a matrix from the density-operator axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDefects {
    /// `max |ρ − ρ†|`
    pub hermiticity: f64,
    /// `|tr ρ − 1|`
    pub trace_error: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl StateDefects {
    pub fn measure<T: Real>(rho: &CMatrix<T>) -> Self {
        let tr = rho.trace();
        let min_eigenvalue = hermitian_eigenvalues(rho).first().map(|v| to_f64(*v)).unwrap_or(0.0);
        Self {
            hermiticity: to_f64(hermiticity_defect(rho)),
            trace_error: to_f64((tr - Cplx::new(T::one(), T::zero())).modulus()),
            min_eigenvalue,
        }
    }

    pub fn within(&self, tol: &StateTolerance) -> bool {
        self.hermiticity <= tol.hermiticity && self.trace_error <= tol.trace && self.min_eigenvalue >= -tol.positivity
    }
}

/// Thresholds for [`StateDefects::within`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateTolerance {
    pub hermiticity: f64,
    pub trace: f64,
    pub positivity: f64,
}

impl StateTolerance {
    /// Single-mode field states right after construction.
    pub const FIELD: Self = Self {
        hermiticity: 1e-12,
        trace: 1e-12,
        positivity: 1e-10,
    };
    /// Joint atom–field states, including after propagation.
    pub const JOINT: Self = Self {
        hermiticity: 1e-10,
        trace: 1e-9,
        positivity: 1e-8,
    };
}

/// Hermitian tolerance applied by [`Propagator::new`].
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigendecomposition `H = V Λ V†` of a Hermitian generator, reused for any
/// number of evolution times.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    values: DVector<T>,
    vectors: CMatrix<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &CMatrix<T>) -> Result<Self> {
        ensure_hermitian(h, HERMITIAN_TOL)?;
        let eig = SymmetricEigen::new(symmetrize(h));
        Ok(Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.values
    }

    pub fn eigenvectors(&self) -> &CMatrix<T> {
        &self.vectors
    }

    /// `e^{-iHt}`
    pub fn unitary(&self, t: T) -> CMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= cis(-self.values[j] * t);
        }
        scaled * self.vectors.adjoint()
    }

    /// `U ρ U†` with `U = e^{-iHt}`.
    pub fn evolve(&self, t: T, rho: &CMatrix<T>) -> CMatrix<T> {
        conjugate(&self.unitary(t), rho)
    }

    /// `U ψ` with `U = e^{-iHt}`.
    pub fn evolve_ket(&self, t: T, psi: &CVector<T>) -> CVector<T> {
        let mut coeffs = self.vectors.adjoint() * psi;
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c *= cis(-self.values[j] * t);
        }
        &self.vectors * coeffs
    }
}

/// `e^{-iHt}` for Hermitian `H`.
pub fn expm_hermitian<T: Real>(h: &CMatrix<T>, t: T) -> Result<CMatrix<T>> {
    Ok(Propagator::new(h)?.unitary(t))
}

/// `max |u u† − I|`
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    max_abs(&(u * u.adjoint() - identity::<T>(u.nrows())))
}
