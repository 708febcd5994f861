//! Cohomology rings and triple Massey products of cochain-level algebras,
//! simplicial or given explicitly.

mod algebra;
mod cohomology;
mod dga;
mod massey;

pub use algebra::{CochainAlgebra, Elem};
pub use cohomology::{cohomology_ring, Cohomology, CohomologyRing};
pub use dga::{exterior_dga, heisenberg, random_exterior_dga, Dga, DgaFile};
pub use massey::{
    massey_sweep, triple_massey, triple_massey_randomized, MasseyCertificate, MasseyOutcome,
    MasseyTensor, Pair, SweepEntry, SweepPattern, SweepReport, Verdict,
};

use crate::chaincore::Field;
use crate::simplicial::{SimplicialCochains, SimplicialComplex};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MasseyError {
    #[error("invalid DGA: {0}")]
    InvalidDga(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vector in degree {0} is not a cocycle")]
    NotCocycle(usize),
    #[error("{0}")]
    Shape(String),
    #[error("Massey product undefined: {pair:?} product has class {class:?}")]
    ProductNonzero { pair: Pair, class: Vec<String> },
}

/// The simplicial cochain algebra of `K` with the cup product; the unit is
/// the constant degree-0 cochain.
pub fn simplicial_to_dga<F: Field>(k: SimplicialComplex, field: F) -> SimplicialCochains<F> {
    SimplicialCochains::new(field, k)
}
