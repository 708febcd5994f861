//! Linear systems and submodule membership over ℤ, ℚ and 𝔽_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::reduce::ColumnReduction;
use super::ring::{CoefficientRing, Field, PrimeField, Rationals};
use super::snf::{dense_mul, smith_normal_form};
use super::sparse::{int_matrix_to_field, IntMatrix, SparseMatrix, SparseVec};
use super::ChainError;

/// Outcome of a membership query: the coefficients on the generators, or no.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(Vec<BigRational>),
    No,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }
}

/// Integer solution of `M·x = b` by Smith normal form.
pub fn solve_linear_int(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, ChainError> {
    if b.len() != m.rows() {
        return Err(ChainError::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            m.rows(),
            b.len()
        )));
    }
    let snf = smith_normal_form(m);
    let col: Vec<Vec<BigInt>> = b.iter().map(|x| vec![x.clone()]).collect();
    let ub = dense_mul(&snf.u, &col);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, row) in ub.iter().enumerate() {
        let c = &row[0];
        if i < snf.rank {
            let (q, r) = c.div_rem(&snf.diagonal[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Ok(None);
        }
    }
    let ycol: Vec<Vec<BigInt>> = y.into_iter().map(|x| vec![x]).collect();
    let x = dense_mul(&snf.v, &ycol);
    Ok(Some(x.into_iter().map(|mut r| r.swap_remove(0)).collect()))
}

/// Solution of `M·x = b` over a field.
pub fn solve_linear_field<F: Field>(
    field: &F,
    m: &SparseMatrix<F::Elem>,
    b: &SparseVec<F::Elem>,
) -> Result<Option<SparseVec<F::Elem>>, ChainError> {
    ColumnReduction::new(field, m, true).solve(b)
}

/// Solves `M·x = b` for integer data interpreted in `ring`.
///
/// Over 𝔽_p the solution is reported by its representatives in `[0, p)`.
pub fn solve_linear(
    ring: CoefficientRing,
    m: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<Vec<BigRational>>, ChainError> {
    if b.len() != m.rows() {
        return Err(ChainError::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            m.rows(),
            b.len()
        )));
    }
    match ring {
        CoefficientRing::Integers => {
            Ok(solve_linear_int(m, b)?
                .map(|x| x.into_iter().map(BigRational::from_integer).collect()))
        }
        CoefficientRing::Rationals => field_solve(&Rationals, m, b),
        CoefficientRing::PrimeField(p) => field_solve(&PrimeField::new(p)?, m, b),
    }
}

fn field_solve<F: Field>(
    field: &F,
    m: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<Vec<BigRational>>, ChainError> {
    let fm = int_matrix_to_field(field, m);
    let fb = SparseVec::from_dense(
        field,
        &b.iter().map(|x| field.from_bigint(x)).collect::<Vec<_>>(),
    );
    Ok(solve_linear_field(field, &fm, &fb)?.map(|x| {
        let dense = x.to_dense(field, m.cols());
        dense.iter().map(|v| field.to_rational(v)).collect()
    }))
}

fn columns_matrix(generators: &[Vec<BigInt>], len: usize) -> Result<IntMatrix, ChainError> {
    let mut cols = Vec::with_capacity(generators.len());
    for g in generators {
        if g.len() != len {
            return Err(ChainError::DimensionMismatch(format!(
                "generator of length {} in ambient rank {len}",
                g.len()
            )));
        }
        cols.push(SparseVec::from_sorted_unchecked(
            g.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        ));
    }
    IntMatrix::from_columns(len, cols)
}

/// Exact membership of `v` in the submodule spanned by `generators`, inside
/// the quotient of the ambient free module by `relations`.
///
/// Over ℤ this is ℤ-membership, not ℚ-membership. Reported coefficients
/// cover the generators only.
pub fn submodule_membership(
    ring: CoefficientRing,
    generators: &[Vec<BigInt>],
    relations: &[Vec<BigInt>],
    v: &[BigInt],
) -> Result<Membership, ChainError> {
    let all: Vec<Vec<BigInt>> = generators.iter().chain(relations).cloned().collect();
    let m = columns_matrix(&all, v.len())?;
    Ok(match solve_linear(ring, &m, v)? {
        Some(mut x) => {
            x.truncate(generators.len());
            Membership::Yes(x)
        }
        None => Membership::No,
    })
}

/// Membership for vectors already living in a field.
pub fn submodule_membership_field<F: Field>(
    field: &F,
    generators: &[SparseVec<F::Elem>],
    ambient: usize,
    v: &SparseVec<F::Elem>,
) -> Result<Option<SparseVec<F::Elem>>, ChainError> {
    let m = SparseMatrix::from_columns(ambient, generators.to_vec())?;
    solve_linear_field(field, &m, v)
}
