//! Joint atom–field space: Hamiltonian builders, tensor embedding, unitary
//! propagation and partial traces.
//!
//! Tensor order is atoms first, field second: the joint index of
//! `|atoms = i⟩ ⊗ |n⟩` is `i · (n_max + 1) + n`. Times are in units of `1/g`
//! throughout the engines, but the builders accept any `g`.

use crate::error::{Error, Result};
use crate::fockspace::{annihilation_operator, number_operator, Amplitude, FieldDensity, FockCutoff};
use crate::linalg::{self, Propagator, StateDefects};
use crate::register::{collective_sigma_z, embed_single_atom, AtomCount, AtomDensity, BasisPhase};
use crate::scalar::{cis, creal, CMatrix, Cplx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointShape {
    pub n_atoms: AtomCount,
    pub cutoff: FockCutoff,
}

impl JointShape {
    pub fn new(n_atoms: AtomCount, cutoff: FockCutoff) -> Self {
        Self { n_atoms, cutoff }
    }

    pub fn atom_dim(&self) -> usize {
        self.n_atoms.dim()
    }

    pub fn field_dim(&self) -> usize {
        self.cutoff.dim()
    }

    pub fn dim(&self) -> usize {
        self.atom_dim() * self.field_dim()
    }
}

/// Physical coupling parameters with `Ω = r·g` fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams<T: Real> {
    g: T,
    tau: T,
    r: T,
    phi: T,
}

impl<T: Real> CouplingParams<T> {
    pub fn new(g: T, tau: T, r: T, phi: T) -> Result<Self> {
        if !(g > T::zero()) {
            return Err(Error::param("g", "coupling must be positive"));
        }
        if !(tau > T::zero()) {
            return Err(Error::param("tau", "interaction time must be positive"));
        }
        if !(r >= T::zero()) {
            return Err(Error::param("r", "displacement magnitude must be >= 0"));
        }
        Ok(Self { g, tau, r, phi })
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// `Ω = r·g`
    pub fn omega(&self) -> T {
        self.r * self.g
    }

    /// `α = r e^{−iφ}`
    pub fn alpha(&self) -> Amplitude<T> {
        cis(-self.phi) * self.r
    }
}

/// Joint density operator of atoms and field.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity<T: Real> {
    matrix: CMatrix<T>,
    shape: JointShape,
}

impl<T: Real> JointDensity<T> {
    pub fn from_matrix(matrix: CMatrix<T>, shape: JointShape) -> Result<Self> {
        if matrix.nrows() != shape.dim() || matrix.ncols() != shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.dim(),
                found: matrix.nrows(),
            });
        }
        Ok(Self { matrix, shape })
    }

    /// `ρ_A ⊗ ρ_F`
    pub fn product(atoms: &AtomDensity<T>, field: &FieldDensity<T>) -> Self {
        let shape = JointShape::new(atoms.n_atoms(), field.cutoff());
        Self {
            matrix: linalg::kron(atoms.matrix(), field.matrix()),
            shape,
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn shape(&self) -> JointShape {
        self.shape
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn defects(&self) -> StateDefects {
        StateDefects::measure(&self.matrix)
    }

    /// `tr(O ρ)` for an operator on the joint space.
    pub fn expectation(&self, op: &CMatrix<T>) -> Cplx<T> {
        (op * &self.matrix).trace()
    }

    /// `U ρ U†`, re-symmetrized.
    pub fn conjugated(&self, u: &CMatrix<T>) -> Self {
        Self {
            matrix: linalg::symmetrize(&linalg::conjugate(u, &self.matrix)),
            shape: self.shape,
        }
    }

    /// Population of the `levels` highest Fock states of the reduced field.
    pub fn top_fock_population(&self, levels: usize) -> T {
        let df = self.shape.field_dim();
        let da = self.shape.atom_dim();
        let mut total = T::zero();
        for i in 0..da {
            for n in df.saturating_sub(levels)..df {
                let idx = i * df + n;
                total += self.matrix[(idx, idx)].re;
            }
        }
        total
    }
}

fn sigma_plus<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = creal(T::one());
    m
}

/// `I_atoms ⊗ M`
pub fn embed_field_operator<T: Real>(m: &CMatrix<T>, shape: JointShape) -> Result<CMatrix<T>> {
    if m.nrows() != shape.field_dim() || m.ncols() != shape.field_dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.field_dim(),
            found: m.nrows(),
        });
    }
    Ok(linalg::kron(&linalg::identity(shape.atom_dim()), m))
}

/// `M ⊗ I_field`
pub fn embed_atom_operator<T: Real>(m: &CMatrix<T>, shape: JointShape) -> Result<CMatrix<T>> {
    if m.nrows() != shape.atom_dim() || m.ncols() != shape.atom_dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.atom_dim(),
            found: m.nrows(),
        });
    }
    Ok(linalg::kron(m, &linalg::identity(shape.field_dim())))
}

/// `Σ_j S_j⁺`
fn collective_raising<T: Real>(n_atoms: AtomCount) -> CMatrix<T> {
    let sp = sigma_plus::<T>();
    let d = n_atoms.dim();
    (0..n_atoms.get()).fold(CMatrix::zeros(d, d), |acc, j| acc + embed_single_atom(&sp, n_atoms, j))
}

/// Resonant Tavis–Cummings coupling `Σ_j g(a† S_j⁻ + a S_j⁺)`.
pub fn tavis_cummings_hamiltonian<T: Real>(shape: JointShape, g: T) -> CMatrix<T> {
    let sp = collective_raising::<T>(shape.n_atoms);
    let a = annihilation_operator::<T>(shape.cutoff);
    let coupling = linalg::kron(&sp, &a);
    let h = &coupling + coupling.adjoint();
    h * creal(g)
}

/// Displaced-frame Hamiltonian `Σ_j g[(a† + α*)S_j⁻ + (a + α)S_j⁺]`.
pub fn displaced_frame_hamiltonian<T: Real>(shape: JointShape, g: T, alpha: Amplitude<T>) -> CMatrix<T> {
    let sp = collective_raising::<T>(shape.n_atoms);
    let drive_atoms = &sp * alpha + sp.adjoint() * alpha.conj();
    let drive = linalg::kron(&drive_atoms, &linalg::identity(shape.field_dim())) * creal(g);
    tavis_cummings_hamiltonian(shape, g) + drive
}

/// Spin-dependent force `g(e^{−iφ}a† + e^{iφ}a) σ_{z,φ}`.
pub fn rwa_force_hamiltonian<T: Real>(shape: JointShape, g: T, phi: BasisPhase<T>) -> CMatrix<T> {
    let a = annihilation_operator::<T>(shape.cutoff);
    let e = cis(phi.radians());
    let quadrature = a.adjoint() * e.conj() + &a * e;
    let sz = collective_sigma_z(shape.n_atoms, phi);
    linalg::kron(&sz, &quadrature) * creal(g)
}

/// Total excitation number `a†a + Σ_j |e_j⟩⟨e_j|`, diagonal.
pub fn excitation_number_operator<T: Real>(shape: JointShape) -> CMatrix<T> {
    let photons = embed_field_operator(&number_operator::<T>(shape.cutoff), shape).expect("shape");
    let n = shape.n_atoms.get();
    let da = shape.atom_dim();
    // |e⟩ is bit 0 in each atom slot, so the excited count is N − popcount.
    let excited = CMatrix::from_fn(da, da, |i, j| {
        if i == j {
            creal(crate::scalar::lit((n - i.count_ones() as usize) as f64))
        } else {
            creal(T::zero())
        }
    });
    photons + embed_atom_operator(&excited, shape).expect("shape")
}

/// Diagonal of `exp(iθ(a†a + Σ_j |e_j⟩⟨e_j|))`. Conjugating the displaced-frame
/// Hamiltonian by it rotates the frame amplitude: `V H_d(α) V† = H_d(α e^{iθ})`.
pub fn excitation_phase_diagonal<T: Real>(shape: JointShape, theta: T) -> Vec<Cplx<T>> {
    let n = shape.n_atoms.get();
    let df = shape.field_dim();
    (0..shape.dim())
        .map(|idx| {
            let atoms = idx / df;
            let photons = idx % df;
            let excitations = photons + n - atoms.count_ones() as usize;
            cis(theta * crate::scalar::lit(excitations as f64))
        })
        .collect()
}

/// `e^{−iHt} ρ e^{iHt}`; requires `H` Hermitian (1e-8) and `t ≥ 0`.
pub fn propagate<T: Real>(h: &CMatrix<T>, t: T, rho: &JointDensity<T>) -> Result<JointDensity<T>> {
    if !(t >= T::zero()) {
        return Err(Error::param("t", "evolution time must be >= 0"));
    }
    if h.nrows() != rho.shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.shape.dim(),
            found: h.nrows(),
        });
    }
    if t == T::zero() {
        linalg::ensure_hermitian(h, linalg::HERMITIAN_TOL)?;
        return Ok(rho.clone());
    }
    let u = Propagator::new(h)?.unitary(t);
    Ok(rho.conjugated(&u))
}

/// Generic partial trace of a bipartite `(d1·d2)²` matrix over the second factor.
pub fn trace_out_second<T: Real>(m: &CMatrix<T>, d1: usize, d2: usize) -> CMatrix<T> {
    CMatrix::from_fn(d1, d1, |i, j| {
        (0..d2).fold(creal(T::zero()), |acc, k| acc + m[(i * d2 + k, j * d2 + k)])
    })
}

/// Generic partial trace of a bipartite `(d1·d2)²` matrix over the first factor.
pub fn trace_out_first<T: Real>(m: &CMatrix<T>, d1: usize, d2: usize) -> CMatrix<T> {
    CMatrix::from_fn(d2, d2, |i, j| {
        (0..d1).fold(creal(T::zero()), |acc, k| acc + m[(k * d2 + i, k * d2 + j)])
    })
}

/// Reduced atomic state `tr_F ρ`.
pub fn partial_trace_field<T: Real>(rho: &JointDensity<T>) -> AtomDensity<T> {
    let s = rho.shape;
    let m = trace_out_second(&rho.matrix, s.atom_dim(), s.field_dim());
    AtomDensity::from_matrix(m, s.n_atoms).expect("shape")
}

/// Reduced field state `tr_A ρ`.
pub fn partial_trace_atoms<T: Real>(rho: &JointDensity<T>) -> FieldDensity<T> {
    let s = rho.shape;
    let m = trace_out_first(&rho.matrix, s.atom_dim(), s.field_dim());
    FieldDensity::from_matrix(m, s.cutoff).expect("shape")
}
