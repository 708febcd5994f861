//! Exact sparse linear algebra over ℤ, ℚ and 𝔽_p, and (co)homology of chain
//! complexes built from it.

mod homology;
mod reduce;
mod ring;
mod snf;
mod solve;
mod sparse;

pub use homology::{
    euler_characteristic, homology, homology_of_operator, ChainComplex, DegreeHomology,
    HomologySummary,
};
pub use reduce::{boundary_ranks, ChainOperator, ColumnReduction};
pub use ring::{
    format_rational, is_prime, parse_rational, CoefficientRing, Field, PrimeField, Rationals,
};
pub use snf::{
    dense_det, dense_mul, invariant_factors, invariant_factors_dense, smith_normal_form, SmithForm,
};
pub use solve::{
    solve_linear, solve_linear_field, solve_linear_int, submodule_membership,
    submodule_membership_field, Membership,
};
pub use sparse::{
    int_matrix_from_dense, int_matrix_from_i64, int_matrix_to_dense, int_matrix_to_field,
    IntMatrix, MatrixFile, SparseMatrix, SparseVec,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("boundary composition ∂_{degree}∘∂_{} is nonzero at ({row}, {col})", degree + 1)]
    BoundarySquareNonzero {
        degree: usize,
        row: usize,
        col: usize,
    },
    #[error("operation needs a field, got {0}")]
    NotAField(CoefficientRing),
}
