//! Truncated single-mode bosonic space: Fock cutoff, ladder and displacement
//! operators, and thermal / coherent / displaced-thermal field states.
//!
//! Levels are `0..=n_max`. Operators are dense `(n_max+1)²` matrices; the
//! displacement operator is obtained by exponentiating the truncated
//! generator `α a† − α* a`, so it shares its truncation with the propagators.

use log::warn;
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::{self, Propagator, StateDefects};
use crate::scalar::{cis, creal, lit, to_f64, CMatrix, CVector, Cplx, Real};

/// Largest truncated thermal tail weight accepted without a warning.
pub const THERMAL_TAIL_THRESHOLD: f64 = 1e-9;

/// Highest retained Fock level `n_max` (dimension `n_max + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::param("cutoff", "n_max must be at least 1"));
        }
        Ok(Self(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0 + 1
    }

    /// `n_max = ceil(μ + 6√(μ+1)) + 6` with `μ = n̄_th + |α_max|²`.
    pub fn heuristic(n_bar_th: f64, alpha_max: f64) -> Self {
        let mu = n_bar_th.max(0.0) + alpha_max * alpha_max;
        let n_max = (mu + 6.0 * (mu + 1.0).sqrt()).ceil() as usize + 6;
        Self(n_max.max(1))
    }
}

/// Field amplitude `α = r e^{−iφ}`.
pub type Amplitude<T> = Cplx<T>;

pub fn amplitude_polar<T: Real>(r: T, phi: T) -> Amplitude<T> {
    cis(-phi) * r
}

/// Density operator of the cavity mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDensity<T: Real> {
    matrix: CMatrix<T>,
    cutoff: FockCutoff,
}

impl<T: Real> FieldDensity<T> {
    /// Wraps a matrix, symmetrizing it to suppress rounding asymmetry.
    pub fn from_matrix(matrix: CMatrix<T>, cutoff: FockCutoff) -> Result<Self> {
        if matrix.nrows() != cutoff.dim() || matrix.ncols() != cutoff.dim() {
            return Err(Error::DimensionMismatch {
                expected: cutoff.dim(),
                found: matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: linalg::symmetrize(&matrix),
            cutoff,
        })
    }

    pub fn vacuum(cutoff: FockCutoff) -> Self {
        Self::fock(0, cutoff).expect("level 0 always present")
    }

    pub fn fock(n: usize, cutoff: FockCutoff) -> Result<Self> {
        if n > cutoff.n_max() {
            return Err(Error::param("n", format!("level {n} above cutoff {}", cutoff.n_max())));
        }
        let mut m = CMatrix::zeros(cutoff.dim(), cutoff.dim());
        m[(n, n)] = creal(T::one());
        Ok(Self { matrix: m, cutoff })
    }

    /// `|α⟩⟨α|` built as `D(α)|0⟩`.
    pub fn coherent(alpha: Amplitude<T>, cutoff: FockCutoff) -> Self {
        let ket = coherent_ket(alpha, cutoff);
        let m = linalg::outer(&ket, &ket);
        Self::from_matrix(m, cutoff).expect("dimensions match")
    }

    /// `D(α) ρ D†(α)`
    pub fn displaced(&self, alpha: Amplitude<T>) -> Self {
        let d = displacement_operator(alpha, self.cutoff);
        Self::from_matrix(linalg::conjugate(&d, &self.matrix), self.cutoff).expect("dimensions match")
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn defects(&self) -> StateDefects {
        StateDefects::measure(&self.matrix)
    }

    /// Summed population of the `levels` highest retained Fock states.
    pub fn top_population(&self, levels: usize) -> T {
        let d = self.cutoff.dim();
        (d.saturating_sub(levels)..d).fold(T::zero(), |acc, n| acc + self.matrix[(n, n)].re)
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Weight of the geometric distribution beyond `n_max`, `(n̄/(1+n̄))^{n_max+1}`.
pub fn thermal_tail_weight(n_bar_th: f64, cutoff: FockCutoff) -> f64 {
    if n_bar_th <= 0.0 {
        return 0.0;
    }
    (n_bar_th / (1.0 + n_bar_th)).powi(cutoff.dim() as i32)
}

/// Thermal state with occupations `n̄ⁿ/(1+n̄)^{n+1}`, renormalized after
/// truncation. A tail heavier than [`THERMAL_TAIL_THRESHOLD`] only warns.
pub fn thermal_state<T: Real>(n_bar_th: T, cutoff: FockCutoff) -> Result<FieldDensity<T>> {
    let nbar = to_f64(n_bar_th);
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::param("n_bar_th", "mean thermal photon number must be >= 0"));
    }
    let tail = thermal_tail_weight(nbar, cutoff);
    if tail > THERMAL_TAIL_THRESHOLD {
        warn!(
            "thermal tail weight {tail:e} above {THERMAL_TAIL_THRESHOLD:e} at n_max = {}",
            cutoff.n_max()
        );
    }
    let d = cutoff.dim();
    let mut m = CMatrix::zeros(d, d);
    if nbar == 0.0 {
        m[(0, 0)] = creal(T::one());
    } else {
        let ratio = n_bar_th / (T::one() + n_bar_th);
        let mut p = T::one() / (T::one() + n_bar_th);
        let mut total = T::zero();
        for n in 0..d {
            m[(n, n)] = creal(p);
            total += p;
            p *= ratio;
        }
        m.unscale_mut(total);
    }
    Ok(FieldDensity { matrix: m, cutoff })
}

/// Lowering operator with `⟨n−1|a|n⟩ = √n`.
pub fn annihilation_operator<T: Real>(cutoff: FockCutoff) -> CMatrix<T> {
    let d = cutoff.dim();
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = creal(lit::<T>(n as f64).sqrt());
    }
    a
}

pub fn creation_operator<T: Real>(cutoff: FockCutoff) -> CMatrix<T> {
    annihilation_operator::<T>(cutoff).adjoint()
}

/// `a†a = diag(0, 1, …, n_max)`
pub fn number_operator<T: Real>(cutoff: FockCutoff) -> CMatrix<T> {
    let d = cutoff.dim();
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            creal(lit(i as f64))
        } else {
            Cplx::new(T::zero(), T::zero())
        }
    })
}

/// True when `|α|² + 6|α| + 6` exceeds `n_max`, i.e. the coherent tail of
/// `D(α)|0⟩` is not safely inside the truncated space.
pub fn displacement_exceeds_cutoff<T: Real>(alpha: Amplitude<T>, cutoff: FockCutoff) -> bool {
    let m = to_f64(alpha.modulus());
    m * m + 6.0 * m + 6.0 > cutoff.n_max() as f64
}

/// Hermitian generator `G = i(α a† − α* a)` with `D(α) = e^{−iG}`.
pub fn displacement_generator<T: Real>(alpha: Amplitude<T>, cutoff: FockCutoff) -> CMatrix<T> {
    let a = annihilation_operator::<T>(cutoff);
    let adag = a.adjoint();
    let i = Cplx::new(T::zero(), T::one());
    adag * (i * alpha) - a * (i * alpha.conj())
}

/// `D(α) = exp(α a† − α* a)` on the truncated space.
pub fn displacement_operator<T: Real>(alpha: Amplitude<T>, cutoff: FockCutoff) -> CMatrix<T> {
    if alpha.modulus() == T::zero() {
        return linalg::identity(cutoff.dim());
    }
    if displacement_exceeds_cutoff(alpha, cutoff) {
        warn!(
            "displacement |alpha| = {:.3} is large for n_max = {}",
            to_f64(alpha.modulus()),
            cutoff.n_max()
        );
    }
    let g = displacement_generator(alpha, cutoff);
    Propagator::new(&g)
        .expect("displacement generator is Hermitian by construction")
        .unitary(T::one())
}

pub fn coherent_ket<T: Real>(alpha: Amplitude<T>, cutoff: FockCutoff) -> CVector<T> {
    displacement_operator(alpha, cutoff).column(0).into_owned()
}

/// `tr(a†a ρ)`
pub fn mean_photon_number<T: Real>(rho: &FieldDensity<T>) -> T {
    (0..rho.cutoff.dim()).fold(T::zero(), |acc, n| acc + rho.matrix[(n, n)].re * lit(n as f64))
}
