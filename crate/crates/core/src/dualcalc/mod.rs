//! Intersection calculus on graph-type patches of `S³ × S³` for the lens
//! action `(ζ, ζ^q)`: membranes `A_k` between consecutive diagonals, their
//! pairwise intersection pattern, bounding chains, and Massey products
//! read off as intersection numbers with exact transversality certificates.

mod chain;
mod frames;
mod massey;
mod patch;
mod pattern;
mod report;

pub use chain::{
    bounding_chain_search, bounding_chain_x14, classify_boundary, classify_faces, ChainSearch,
    FaceClass, FaceVerdict,
};
pub use frames::{
    intersection_frame, patch_tangents, transversality, BasePoint, Transversality, ROTATION_PARAM,
};
pub use massey::{
    h5_verdict, massey_via_intersection, H5Presentation, IntersectionMassey, IntersectionTriple,
    MasseyOptions, SliceIntersection,
};
pub use patch::{
    check_action, contains, intersection_system, same_set, Coord, Geometry, Intersection,
    ParamPatch,
};
pub use pattern::{
    intersection_pattern, pattern_for, pieces, CellKind, IntersectionPattern, PatternCell, Piece,
};
pub use report::{lemma_report, LemmaCheck, LemmaReport};

use crate::chaincore::ChainError;
use crate::cyclosolve::CycloError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("{0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("boundary face {0} lies on no diagonal and equals no membrane intersection")]
    UnmatchedFace(String),
    #[error("no bounding chain for A{k} ∩ A{j} with exponents up to {bound}")]
    SearchExhausted { k: u32, j: u32, bound: i64 },
    #[error("transversality of {name} not certified: {verdict}")]
    NotTransversal { name: String, verdict: String },
}
