use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::reduce::{boundary_ranks, ChainOperator, ColumnReduction};
use super::ring::{CoefficientRing, PrimeField, Rationals};
use super::snf::invariant_factors;
use super::sparse::{int_matrix_to_field, IntMatrix, SparseVec};
use super::ChainError;

/// Boundary matrices `∂_d : C_d → C_{d−1}` for `d = 0..=top`, with `∂_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: CoefficientRing,
    cells: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `boundaries[d − 1]` is `∂_d`; cell counts are read off the shapes.
    pub fn new(
        ring: CoefficientRing,
        cells: Vec<usize>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, ChainError> {
        if boundaries.len() + 1 != cells.len().max(1) {
            return Err(ChainError::DimensionMismatch(format!(
                "{} cell groups need {} boundary maps, got {}",
                cells.len(),
                cells.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let d = i + 1;
            if b.rows() != cells[d - 1] || b.cols() != cells[d] {
                return Err(ChainError::DimensionMismatch(format!(
                    "∂_{d} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    cells[d - 1],
                    cells[d]
                )));
            }
        }
        let c = ChainComplex {
            ring,
            cells,
            boundaries,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn with_ring(mut self, ring: CoefficientRing) -> Self {
        self.ring = ring;
        self
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// `∂_d` for `d ≥ 1`.
    pub fn boundary(&self, d: usize) -> Option<&IntMatrix> {
        d.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    fn check_square_zero(&self) -> Result<(), ChainError> {
        for d in 1..self.boundaries.len() {
            let lower = &self.boundaries[d - 1];
            let upper = &self.boundaries[d];
            for (j, col) in upper.columns().iter().enumerate() {
                let mut acc: Vec<BigInt> = vec![BigInt::zero(); lower.rows()];
                for (k, c) in col.iter() {
                    for (i, v) in lower.column(*k).iter() {
                        acc[*i] += c * v;
                    }
                }
                if let Some(row) = acc.iter().position(|x| !x.is_zero()) {
                    return Err(ChainError::BoundarySquareNonzero {
                        degree: d,
                        row,
                        col: j,
                    });
                }
            }
        }
        Ok(())
    }
}

impl ChainOperator for ChainComplex {
    fn top_degree(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    fn cell_count(&self, degree: usize) -> usize {
        self.cells.get(degree).copied().unwrap_or(0)
    }

    fn boundary_into(&self, degree: usize, j: usize, out: &mut Vec<(usize, i64)>) {
        out.clear();
        if let Some(b) = self.boundary(degree) {
            out.extend(
                b.column(j)
                    .iter()
                    .map(|(i, v)| (*i, v.to_i64().expect("boundary entries fit in i64"))),
            );
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Elementary divisors greater than one; always empty over a field.
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub ring: CoefficientRing,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn torsion(&self, degree: usize) -> &[BigInt] {
        self.degrees.get(degree).map_or(&[], |d| &d.torsion)
    }

    /// Betti numbers with trailing zero degrees removed.
    pub fn betti_trimmed(&self) -> Vec<usize> {
        let mut b = self.betti();
        while b.len() > 1 && b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(d, h)| {
                if d % 2 == 0 {
                    h.betti as i64
                } else {
                    -(h.betti as i64)
                }
            })
            .sum()
    }

    /// One line per degree: `H_d = Z^b + Z/t + …`.
    pub fn render(&self) -> String {
        let base = match self.ring {
            CoefficientRing::Integers => "Z".to_string(),
            CoefficientRing::Rationals => "Q".to_string(),
            CoefficientRing::PrimeField(p) => format!("F{p}"),
        };
        let mut out = String::new();
        for (d, h) in self.degrees.iter().enumerate() {
            let mut parts = Vec::new();
            if h.betti > 0 {
                parts.push(if h.betti == 1 {
                    base.clone()
                } else {
                    format!("{base}^{}", h.betti)
                });
            }
            parts.extend(h.torsion.iter().map(|t| format!("Z/{t}")));
            if parts.is_empty() {
                parts.push("0".into());
            }
            out.push_str(&format!("H_{d} = {}\n", parts.join(" + ")));
        }
        out
    }
}

pub fn euler_characteristic(cells: &[usize]) -> i64 {
    cells
        .iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// Homology of an explicit chain complex over its own ring.
pub fn homology(c: &ChainComplex) -> HomologySummary {
    let top = c.cells.len();
    let mut ranks = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for d in 1..top {
        let b = &c.boundaries[d - 1];
        match c.ring {
            CoefficientRing::Integers => {
                let inv = invariant_factors(b);
                ranks[d] = inv.len();
                torsion[d - 1] = inv.into_iter().filter(|x| !x.is_one()).collect();
            }
            CoefficientRing::Rationals => {
                ranks[d] =
                    ColumnReduction::new(&Rationals, &int_matrix_to_field(&Rationals, b), false)
                        .rank();
            }
            CoefficientRing::PrimeField(p) => {
                let f = PrimeField::new(p).expect("ring holds a prime");
                ranks[d] = ColumnReduction::new(&f, &int_matrix_to_field(&f, b), false).rank();
            }
        }
    }
    let degrees = (0..top)
        .map(|d| DegreeHomology {
            betti: c.cells[d] - ranks[d] - ranks[d + 1],
            torsion: std::mem::take(&mut torsion[d]),
        })
        .collect();
    HomologySummary {
        ring: c.ring,
        degrees,
    }
}

/// Homology of an implicit boundary operator.
///
/// Fields go through the clearing reduction; ℤ materializes each boundary
/// matrix and takes invariant factors.
pub fn homology_of_operator<Op: ChainOperator + ?Sized>(
    op: &Op,
    ring: CoefficientRing,
) -> HomologySummary {
    let Some(top) = op.top_degree() else {
        return HomologySummary {
            ring,
            degrees: Vec::new(),
        };
    };
    let cells: Vec<usize> = (0..=top).map(|d| op.cell_count(d)).collect();
    let mut ranks = vec![0usize; top + 2];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    match ring {
        CoefficientRing::Integers => {
            let mut raw = Vec::new();
            for d in 1..=top {
                let mut cols = Vec::with_capacity(cells[d]);
                for j in 0..cells[d] {
                    op.boundary_into(d, j, &mut raw);
                    cols.push(SparseVec::from_sorted_unchecked(
                        raw.iter().map(|&(i, v)| (i, BigInt::from(v))).collect(),
                    ));
                }
                let m =
                    IntMatrix::from_columns(cells[d - 1], cols).expect("operator rows in range");
                let inv = invariant_factors(&m);
                ranks[d] = inv.len();
                torsion[d - 1] = inv.into_iter().filter(|x| !x.is_one()).collect();
            }
        }
        CoefficientRing::Rationals => {
            for (d, r) in boundary_ranks(&Rationals, op).into_iter().enumerate() {
                ranks[d] = r;
            }
        }
        CoefficientRing::PrimeField(p) => {
            let f = PrimeField::new(p).expect("ring holds a prime");
            for (d, r) in boundary_ranks(&f, op).into_iter().enumerate() {
                ranks[d] = r;
            }
        }
    }
    let degrees = (0..=top)
        .map(|d| DegreeHomology {
            betti: cells[d] - ranks[d] - ranks[d + 1],
            torsion: std::mem::take(&mut torsion[d]),
        })
        .collect();
    HomologySummary { ring, degrees }
}
