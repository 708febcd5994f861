//! Column-major sparse vectors and matrices with exact entries.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ring::{CoefficientRing, Field};
use super::ChainError;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec<T> {
    entries: Vec<(usize, T)>,
}

impl<T> SparseVec<T> {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    /// Wraps entries that are already sorted, deduplicated and nonzero.
    pub fn from_sorted_unchecked(entries: Vec<(usize, T)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, T)> {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Largest index with a nonzero entry (the reduction pivot).
    pub fn low(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, T)> {
        self.entries.iter()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U, is_zero: impl Fn(&U) -> bool) -> SparseVec<U> {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter_map(|(i, v)| {
                    let u = f(v);
                    (!is_zero(&u)).then_some((*i, u))
                })
                .collect(),
        }
    }
}

impl<T: Clone> SparseVec<T> {
    /// Builds from unordered `(index, value)` pairs, summing duplicates.
    pub fn from_pairs<F: Field<Elem = T>>(field: &F, mut pairs: Vec<(usize, T)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, T)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(&last.1, &v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|e| !field.is_zero(&e.1));
        SparseVec { entries }
    }

    pub fn from_dense<F: Field<Elem = T>>(field: &F, dense: &[T]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !field.is_zero(v))
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense<F: Field<Elem = T>>(&self, field: &F, len: usize) -> Vec<T> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn unit<F: Field<Elem = T>>(field: &F, index: usize) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    pub fn scale<F: Field<Elem = T>>(&self, field: &F, c: &T) -> Self {
        if field.is_zero(c) {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.mul(c, v)))
                .collect(),
        }
    }

    pub fn neg<F: Field<Elem = T>>(&self, field: &F) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.neg(v)))
                .collect(),
        }
    }

    /// Returns `self + c·other`.
    pub fn axpy<F: Field<Elem = T>>(&self, field: &F, c: &T, other: &SparseVec<T>) -> SparseVec<T> {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        axpy_into(field, &self.entries, c, &other.entries, &mut out);
        SparseVec { entries: out }
    }

    pub fn add<F: Field<Elem = T>>(&self, field: &F, other: &SparseVec<T>) -> SparseVec<T> {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub<F: Field<Elem = T>>(&self, field: &F, other: &SparseVec<T>) -> SparseVec<T> {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    pub fn dot<F: Field<Elem = T>>(&self, field: &F, other: &SparseVec<T>) -> T {
        let (mut i, mut j) = (0, 0);
        let mut acc = field.zero();
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (&self.entries[i], &other.entries[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = field.add(&acc, &field.mul(&a.1, &b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Merges `a + c·b` into `out` (cleared first). Both inputs sorted.
pub(crate) fn axpy_into<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    c: &F::Elem,
    b: &[(usize, F::Elem)],
    out: &mut Vec<(usize, F::Elem)>,
) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, field.mul(c, &b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
                if !field.is_zero(&v) {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(k, v)| (*k, field.mul(c, v))));
}

/// A column-major sparse matrix: column `j` holds the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<T>>,
}

impl<T: Clone> SparseMatrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<T>>) -> Result<Self, ChainError> {
        for c in &columns {
            if let Some(low) = c.low() {
                if low >= rows {
                    return Err(ChainError::DimensionMismatch(format!(
                        "row index {low} out of range for {rows} rows"
                    )));
                }
            }
        }
        Ok(SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec<T> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<T>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&T> {
        self.columns[col].get(row)
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn map<U: Clone>(
        &self,
        mut f: impl FnMut(&T) -> U,
        is_zero: impl Fn(&U) -> bool,
    ) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|c| c.map(&mut f, &is_zero))
                .collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix<T> {
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: cols
                .into_iter()
                .map(SparseVec::from_sorted_unchecked)
                .collect(),
        }
    }
}

impl<T: Clone> SparseMatrix<T> {
    pub fn from_triplets<F: Field<Elem = T>>(
        field: &F,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self, ChainError> {
        let mut per_col: Vec<Vec<(usize, T)>> = vec![Vec::new(); cols];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(ChainError::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            per_col[j].push((i, v));
        }
        Ok(SparseMatrix {
            rows,
            cols,
            columns: per_col
                .into_iter()
                .map(|c| SparseVec::from_pairs(field, c))
                .collect(),
        })
    }

    pub fn identity<F: Field<Elem = T>>(field: &F, n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|j| SparseVec::unit(field, j)).collect(),
        }
    }

    pub fn mul_vec<F: Field<Elem = T>>(
        &self,
        field: &F,
        x: &SparseVec<T>,
    ) -> Result<SparseVec<T>, ChainError> {
        if let Some(low) = x.low() {
            if low >= self.cols {
                return Err(ChainError::DimensionMismatch(format!(
                    "vector index {low} exceeds {} columns",
                    self.cols
                )));
            }
        }
        let mut acc = SparseVec::new();
        for (j, c) in x.iter() {
            acc = acc.axpy(field, c, &self.columns[*j]);
        }
        Ok(acc)
    }

    pub fn mul<F: Field<Elem = T>>(
        &self,
        field: &F,
        other: &SparseMatrix<T>,
    ) -> Result<SparseMatrix<T>, ChainError> {
        if self.cols != other.rows {
            return Err(ChainError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other
            .columns
            .iter()
            .map(|c| self.mul_vec(field, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}

/// Integer matrices as read from and written to disk.
pub type IntMatrix = SparseMatrix<BigInt>;

/// Maps an integer matrix into a field, dropping entries that vanish there.
pub fn int_matrix_to_field<F: Field>(field: &F, m: &IntMatrix) -> SparseMatrix<F::Elem> {
    m.map(|v| field.from_bigint(v), |u| field.is_zero(u))
}

/// Integer matrix from small entries.
pub fn int_matrix_from_i64(
    rows: usize,
    cols: usize,
    triplets: &[(usize, usize, i64)],
) -> IntMatrix {
    let mut per_col: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
    for &(i, j, v) in triplets {
        assert!(i < rows && j < cols, "entry ({i},{j}) out of range");
        if v != 0 {
            per_col[j].push((i, BigInt::from(v)));
        }
    }
    let columns = per_col
        .into_iter()
        .map(|mut c| {
            c.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, BigInt)> = Vec::new();
            for (i, v) in c {
                match merged.last_mut() {
                    Some(l) if l.0 == i => l.1 += v,
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            SparseVec::from_sorted_unchecked(merged)
        })
        .collect();
    SparseMatrix {
        rows,
        cols,
        columns,
    }
}

/// Integer matrix from a dense row-major array.
pub fn int_matrix_from_dense(rows: &[Vec<i64>]) -> IntMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut trip = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), c, "ragged dense matrix");
        for (j, v) in row.iter().enumerate() {
            trip.push((i, j, *v));
        }
    }
    int_matrix_from_i64(r, c, &trip)
}

pub fn int_matrix_to_dense(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (i, j, v) in m.triplets() {
        out[i][j] = v.clone();
    }
    out
}

/// A matrix together with the ring its entries are meant in, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub ring: CoefficientRing,
    pub matrix: IntMatrix,
}

impl MatrixFile {
    /// Parses `rows cols ring` followed by `row col value` lines.
    ///
    /// Values are reduced into `[0, p)` for prime-field files. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, ChainError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hn, header) = lines
            .next()
            .ok_or_else(|| ChainError::Parse("empty matrix file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(ChainError::Parse(format!(
                "line {hn}: expected `rows cols ring`"
            )));
        }
        let rows: usize = h[0]
            .parse()
            .map_err(|_| ChainError::Parse(format!("line {hn}: bad row count")))?;
        let cols: usize = h[1]
            .parse()
            .map_err(|_| ChainError::Parse(format!("line {hn}: bad column count")))?;
        let ring: CoefficientRing = h[2].parse()?;
        let mut per_col: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        let mut seen = rustc_hash::FxHashSet::default();
        for (n, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(ChainError::Parse(format!(
                    "line {n}: expected `row col value`"
                )));
            }
            let i: usize = t[0]
                .parse()
                .map_err(|_| ChainError::Parse(format!("line {n}: bad row index")))?;
            let j: usize = t[1]
                .parse()
                .map_err(|_| ChainError::Parse(format!("line {n}: bad column index")))?;
            let mut v: BigInt = t[2]
                .parse()
                .map_err(|_| ChainError::Parse(format!("line {n}: bad value")))?;
            if i >= rows || j >= cols {
                return Err(ChainError::Parse(format!(
                    "line {n}: entry ({i}, {j}) out of range"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(ChainError::Parse(format!(
                    "line {n}: duplicate entry ({i}, {j})"
                )));
            }
            if let CoefficientRing::PrimeField(p) = ring {
                let p = BigInt::from(p);
                v = ((v % &p) + &p) % &p;
            }
            if !v.is_zero() {
                per_col[j].push((i, v));
            }
        }
        let columns = per_col
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|e| e.0);
                SparseVec::from_sorted_unchecked(c)
            })
            .collect();
        Ok(MatrixFile {
            ring,
            matrix: SparseMatrix {
                rows,
                cols,
                columns,
            },
        })
    }

    /// Canonical text form: header, then triplets in column-major order.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.matrix.rows(),
            self.matrix.cols(),
            self.ring
        );
        for (i, j, v) in self.matrix.triplets() {
            let _ = writeln!(out, "{i} {j} {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::ring::{PrimeField, Rationals};

    #[test]
    fn axpy_cancels_entries() {
        let f = PrimeField::new(5).unwrap();
        let a = SparseVec::from_pairs(&f, vec![(0, 1), (3, 2)]);
        let b = SparseVec::from_pairs(&f, vec![(3, 1), (4, 1)]);
        let r = a.axpy(&f, &3, &b);
        assert_eq!(r.entries(), &[(0, 1), (4, 3)]);
    }

    #[test]
    fn transpose_and_multiply() {
        let q = Rationals;
        let m = int_matrix_to_field(&q, &int_matrix_from_dense(&[vec![1, 2], vec![0, 3]]));
        let t = m.transpose();
        assert_eq!(t.get(1, 0), Some(&q.from_i64(2)));
        let prod = m.mul(&q, &t).unwrap();
        // [[1,2],[0,3]] * [[1,0],[2,3]] = [[5,6],[6,9]]
        assert_eq!(prod.get(0, 0), Some(&q.from_i64(5)));
        assert_eq!(prod.get(1, 1), Some(&q.from_i64(9)));
    }

    #[test]
    fn matrix_file_rejects_duplicates_and_reduces_mod_p() {
        assert!(MatrixFile::parse("2 2 Z\n0 0 1\n0 0 2\n").is_err());
        let f = MatrixFile::parse("2 2 Fp:3\n1 0 -1\n0 1 3\n").unwrap();
        assert_eq!(f.render(), "2 2 Fp:3\n1 0 2\n");
    }
}
