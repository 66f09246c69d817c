//! N-atom two-level register.
//!
//! Each atom uses the ordered basis `(|e⟩, |g⟩)`; atom 1 is the most
//! significant tensor factor, so the computational index of a product state
//! reads atom 1 first. The rotated single-atom basis is
//! `|±_φ⟩ = (|e⟩ ± e^{iφ}|g⟩)/√2`. Product states in the rotated basis are
//! labelled by a bit mask whose set bits mark atoms in `|−_φ⟩`, using the same
//! significance order.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{binomial, cis, creal, lit, wrap_two_pi, CMatrix, CVector, Cplx, Real};

/// Upper bound on the register size for dense simulation.
pub const MAX_ATOMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomCount(usize);

impl AtomCount {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ATOMS {
            return Err(Error::param("n_atoms", format!("must be in 1..={MAX_ATOMS}, got {n}")));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `2^N`
    pub fn dim(self) -> usize {
        1 << self.0
    }
}

/// Rotated-basis phase `φ`, stored reduced into `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPhase<T: Real>(T);

impl<T: Real> BasisPhase<T> {
    pub fn new(phi: T) -> Self {
        Self(wrap_two_pi(phi))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn radians(self) -> T {
        self.0
    }

    /// Phase advanced by `quarter_turns · π/2`.
    pub fn advanced(self, quarter_turns: i32) -> Self {
        Self::new(self.0 + T::frac_pi_2() * lit(quarter_turns as f64))
    }
}

/// Normalized pure state of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomKet<T: Real> {
    amplitudes: CVector<T>,
    n_atoms: AtomCount,
}

impl<T: Real> AtomKet<T> {
    /// Normalizes `amplitudes`; rejects the zero vector and wrong lengths.
    pub fn new(amplitudes: CVector<T>, n_atoms: AtomCount) -> Result<Self> {
        if amplitudes.len() != n_atoms.dim() {
            return Err(Error::DimensionMismatch {
                expected: n_atoms.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::param("amplitudes", "state vector has zero norm"));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            n_atoms,
        })
    }

    pub(crate) fn from_normalized(amplitudes: CVector<T>, n_atoms: AtomCount) -> Self {
        debug_assert_eq!(amplitudes.len(), n_atoms.dim());
        Self { amplitudes, n_atoms }
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn n_atoms(&self) -> AtomCount {
        self.n_atoms
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Cplx<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap_sq(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn density(&self) -> AtomDensity<T> {
        AtomDensity {
            matrix: linalg::outer(&self.amplitudes, &self.amplitudes),
            n_atoms: self.n_atoms,
        }
    }

    /// Tensor product `self ⊗ other` (self is more significant).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = AtomCount::new(self.n_atoms.get() + other.n_atoms.get())?;
        Ok(Self::from_normalized(self.amplitudes.kronecker(&other.amplitudes), n))
    }
}

/// Density operator of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDensity<T: Real> {
    matrix: CMatrix<T>,
    n_atoms: AtomCount,
}

impl<T: Real> AtomDensity<T> {
    pub fn from_matrix(matrix: CMatrix<T>, n_atoms: AtomCount) -> Result<Self> {
        if matrix.nrows() != n_atoms.dim() || matrix.ncols() != n_atoms.dim() {
            return Err(Error::DimensionMismatch {
                expected: n_atoms.dim(),
                found: matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: linalg::symmetrize(&matrix),
            n_atoms,
        })
    }

    pub fn maximally_mixed(n_atoms: AtomCount) -> Self {
        let d = n_atoms.dim();
        Self {
            matrix: linalg::identity::<T>(d).unscale(lit(d as f64)),
            n_atoms,
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn n_atoms(&self) -> AtomCount {
        self.n_atoms
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation_in(&self, ket: &AtomKet<T>) -> T {
        ket.amplitudes.dotc(&(&self.matrix * &ket.amplitudes)).re
    }

    /// Off-diagonal element `⟨a|ρ|b⟩`.
    pub fn coherence(&self, a: &AtomKet<T>, b: &AtomKet<T>) -> Cplx<T> {
        a.amplitudes.dotc(&(&self.matrix * &b.amplitudes))
    }

    /// Reduced 2×2 state of atom `index` (0-based, atom 1 is index 0).
    pub fn single_atom(&self, index: usize) -> Result<CMatrix<T>> {
        let n = self.n_atoms.get();
        if index >= n {
            return Err(Error::param("index", format!("atom {index} outside register of {n}")));
        }
        let shift = n - 1 - index;
        let mut out = CMatrix::zeros(2, 2);
        let d = self.n_atoms.dim();
        for i in 0..d {
            for j in 0..d {
                // Trace over every other atom: indices must agree outside `shift`.
                if (i ^ j) & !(1 << shift) != 0 {
                    continue;
                }
                let a = (i >> shift) & 1;
                let b = (j >> shift) & 1;
                out[(a, b)] += self.matrix[(i, j)];
            }
        }
        Ok(out)
    }
}

fn basis_pair<T: Real>(phi: BasisPhase<T>) -> (CVector<T>, CVector<T>) {
    let s = T::FRAC_1_SQRT_2();
    let e = cis(phi.radians());
    let plus = CVector::from_vec(vec![creal(s), e * s]);
    let minus = CVector::from_vec(vec![creal(s), -e * s]);
    (plus, minus)
}

/// `(|+_φ⟩, |−_φ⟩)` for a single atom.
pub fn rotated_basis_kets<T: Real>(phi: BasisPhase<T>) -> (AtomKet<T>, AtomKet<T>) {
    let one = AtomCount(1);
    let (p, m) = basis_pair(phi);
    (AtomKet::from_normalized(p, one), AtomKet::from_normalized(m, one))
}

/// Product of rotated-basis states; bit `N−1−j` of `minus_mask` selects
/// `|−_φ⟩` for atom `j`.
pub fn rotated_product_ket<T: Real>(n_atoms: AtomCount, minus_mask: usize, phi: BasisPhase<T>) -> AtomKet<T> {
    let (p, m) = basis_pair(phi);
    let n = n_atoms.get();
    let mut v = CVector::from_element(1, creal(T::one()));
    for j in 0..n {
        let bit = (minus_mask >> (n - 1 - j)) & 1;
        v = v.kronecker(if bit == 1 { &m } else { &p });
    }
    AtomKet::from_normalized(v, n_atoms)
}

/// Unitary whose column `mask` is [`rotated_product_ket`]`(mask)`.
pub fn rotated_product_basis<T: Real>(n_atoms: AtomCount, phi: BasisPhase<T>) -> CMatrix<T> {
    let (p, m) = basis_pair(phi);
    let single = CMatrix::from_columns(&[p, m]);
    (1..n_atoms.get()).fold(single.clone(), |acc, _| acc.kronecker(&single))
}

/// Symmetric Dicke state with `k` atoms in `|−_φ⟩`, real positive amplitudes
/// on every contributing rotated product state.
pub fn dicke_state<T: Real>(n_atoms: AtomCount, k: usize, phi: BasisPhase<T>) -> Result<AtomKet<T>> {
    let n = n_atoms.get();
    if k > n {
        return Err(Error::param("k", format!("must be in 0..={n}, got {k}")));
    }
    let basis = rotated_product_basis(n_atoms, phi);
    let mut v = CVector::zeros(n_atoms.dim());
    for mask in (0..n_atoms.dim()).filter(|m| m.count_ones() as usize == k) {
        v += basis.column(mask);
    }
    let norm = lit::<T>(binomial(n, k) as f64).sqrt();
    Ok(AtomKet::from_normalized(v.unscale(norm), n_atoms))
}

/// `|e⟩^{⊗N}`
pub fn bloch_initial_state<T: Real>(n_atoms: AtomCount) -> AtomKet<T> {
    let mut v = CVector::zeros(n_atoms.dim());
    v[0] = creal(T::one());
    AtomKet::from_normalized(v, n_atoms)
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on atom `index` (0-based).
pub fn embed_single_atom<T: Real>(op: &CMatrix<T>, n_atoms: AtomCount, index: usize) -> CMatrix<T> {
    let n = n_atoms.get();
    let left = linalg::identity::<T>(1 << index);
    let right = linalg::identity::<T>(1 << (n - 1 - index));
    left.kronecker(op).kronecker(&right)
}

/// `σ_{z,j,φ} = ½(|+_φ⟩⟨+_φ| − |−_φ⟩⟨−_φ|)` for one atom.
pub fn single_sigma_z<T: Real>(phi: BasisPhase<T>) -> CMatrix<T> {
    let half = lit::<T>(0.5);
    let e = cis(phi.radians());
    let zero = creal(T::zero());
    CMatrix::from_row_slice(2, 2, &[zero, e.conj() * half, e * half, zero])
}

/// `σ_{z,φ} = Σ_j σ_{z,j,φ}`
pub fn collective_sigma_z<T: Real>(n_atoms: AtomCount, phi: BasisPhase<T>) -> CMatrix<T> {
    let single = single_sigma_z(phi);
    let d = n_atoms.dim();
    (0..n_atoms.get()).fold(CMatrix::zeros(d, d), |acc, j| {
        acc + embed_single_atom(&single, n_atoms, j)
    })
}

/// Projector onto the `σ_{z,φ}` eigenspace with eigenvalue `N/2 − k`.
pub fn sector_projector<T: Real>(n_atoms: AtomCount, k: usize, phi: BasisPhase<T>) -> CMatrix<T> {
    let basis = rotated_product_basis(n_atoms, phi);
    let d = n_atoms.dim();
    let mut p = CMatrix::zeros(d, d);
    for mask in (0..d).filter(|m| m.count_ones() as usize == k) {
        let col = basis.column(mask);
        p += col * col.adjoint();
    }
    p
}

/// Single-atom phase gate `diag(1, i)` (`|g⟩ → i|g⟩`) applied to every atom.
pub fn rotation_g_to_ig<T: Real>(n_atoms: AtomCount) -> CMatrix<T> {
    let d = n_atoms.dim();
    let i = Cplx::new(T::zero(), T::one());
    let diag = CVector::from_fn(d, |idx, _| {
        // Each set bit of the computational index is an atom in |g⟩.
        match idx.count_ones() % 4 {
            0 => creal(T::one()),
            1 => i,
            2 => creal(-T::one()),
            _ => -i,
        }
    });
    CMatrix::from_diagonal(&diag)
}

/// The two product branches and their equal-weight superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzTarget<T: Real> {
    pub branch_a: AtomKet<T>,
    pub branch_b: AtomKet<T>,
    pub target: AtomKet<T>,
}

/// `[e^{iπ/4} ⊗_j(|+⟩ + c|−⟩)/√2 + e^{−iπ/4} ⊗_j(|+⟩ − c|−⟩)/√2]/√2` in basis
/// `φ`, with `c = e^{i(8Ωτ − Nπ/2)}`.
pub fn ghz_target<T: Real>(n_atoms: AtomCount, omega_tau: T, phi: BasisPhase<T>) -> GhzTarget<T> {
    let n = n_atoms.get();
    let c = cis(lit::<T>(8.0) * omega_tau - T::frac_pi_2() * lit(n as f64));
    let (p, m) = basis_pair(phi);
    let s = T::FRAC_1_SQRT_2();
    let a1 = (&p + &m * c) * creal(s);
    let b1 = (&p - &m * c) * creal(s);
    let power = |v: &CVector<T>| (1..n).fold(v.clone(), |acc, _| acc.kronecker(v));
    let branch_a = power(&a1);
    let branch_b = power(&b1);
    let target = (&branch_a * cis(T::frac_pi_4()) + &branch_b * cis(-T::frac_pi_4())) * creal(s);
    GhzTarget {
        branch_a: AtomKet::from_normalized(branch_a, n_atoms),
        branch_b: AtomKet::from_normalized(branch_b, n_atoms),
        target: AtomKet::from_normalized(target, n_atoms),
    }
}
