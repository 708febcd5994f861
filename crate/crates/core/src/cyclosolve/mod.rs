//! Exact solving of phase equations `ζ^α u = ζ^β u` with affine rational
//! exponents over parameter boxes, and certified ranks of tangent frames.

mod affine;
mod interval;
mod polytope;
mod solve;
mod system;
mod tangent;

pub use affine::{q, qf, Affine, PhaseExponent, Q};
pub use interval::Interval;
pub use solve::{residue_range, satisfies, solve_congruences, Branch, Magnitude, SolutionSet};
pub use system::{CongruenceSystem, Equation, MagnitudeKind};
pub use tangent::{
    tangent_rank, verify_certificate, ComplexEntry, PhaseTerm, RankCertificate, RankVerdict,
    TangentFrame, DEFAULT_BUDGET,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
