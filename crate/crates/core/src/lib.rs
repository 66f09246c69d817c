//! Simulation of N two-level atoms resonantly coupled to a strongly displaced
//! thermal cavity mode, driven through a closed square of displacements that
//! leaves the atoms in a GHZ state and the field disentangled.
//!
//! Everything numeric is generic over [`scalar::Real`]; the aliases below fix
//! the scalar to `f64`.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod linalg;
pub mod protocol;
pub mod register;
pub mod scalar;

pub use error::{Error, Result};
pub use fockspace::FockCutoff;
pub use protocol::Engine;
pub use register::AtomCount;

pub type Complex = scalar::Cplx<f64>;
pub type Matrix = scalar::CMatrix<f64>;
pub type Vector = scalar::CVector<f64>;
pub type AtomKet = register::AtomKet<f64>;
pub type AtomDensity = register::AtomDensity<f64>;
pub type BasisPhase = register::BasisPhase<f64>;
pub type GhzTarget = register::GhzTarget<f64>;
pub type FieldDensity = fockspace::FieldDensity<f64>;
pub type JointDensity = dynamics::JointDensity<f64>;
pub type CouplingParams = dynamics::CouplingParams<f64>;
pub type ProtocolStep = protocol::ProtocolStep<f64>;
pub type ProtocolConfig = protocol::ProtocolConfig<f64>;
pub type RunResult = protocol::RunResult<f64>;
pub type SegmentRecord = protocol::SegmentRecord<f64>;
pub type GatePhases = protocol::GatePhases<f64>;
pub type Metrics = analysis::Metrics<f64>;
pub type DecoherenceParams = analysis::DecoherenceParams<f64>;
pub type DecoherenceBudget = analysis::DecoherenceBudget<f64>;
pub type SweepRow = analysis::SweepRow<f64>;
