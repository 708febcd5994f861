//! Lens-space pipelines and closed-form invariants of orbit configuration spaces.

mod complement;
mod formulas;
mod pipeline;
mod quaternion;
mod split;

pub use complement::{
    complement_pipeline, projected_product_size, ComplementOutcome, ComplementRun,
};
pub use formulas::{
    evaluate, fundamental_group_summary, h2_rank, h2_rank_closed, poincare_polynomial, GroupSummary,
};
pub use pipeline::{
    verify_headline, CertificateSummary, Claim, HomologySection, LemmaSection, ModelSection,
    PipelineReport, SweepSection, VerdictSection, VerifyOptions,
};
pub use quaternion::{quaternion_split_test, QuaternionSplitReport};
pub use split::{split_model, split_model_sweep, SplitSweep};

use crate::chaincore::ChainError;
use crate::cupmassey::MasseyError;
use crate::dualcalc::DualError;
use crate::simplicial::SimplicialError;

#[derive(Debug, thiserror::Error)]
pub enum ConfError {
    #[error(transparent)]
    Simplicial(SimplicialError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Massey(#[from] MasseyError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error("{0}")]
    Invalid(String),
}
