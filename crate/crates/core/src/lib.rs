//! Exact computational topology for lens-space configuration spaces.
//!
//! The crate has two independent engines for cup and Massey products: a
//! simplicial one running on finite models, and an intersection calculus on
//! parametrized patches of `S³ × S³` solved by exact congruence arithmetic.

pub mod chaincore;
pub mod confspaces;
pub mod cupmassey;
pub mod cyclosolve;
pub mod dualcalc;
pub mod simplicial;

pub use chaincore::{ChainError, CoefficientRing, SparseMatrix, SparseVec};
