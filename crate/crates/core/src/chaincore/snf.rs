//! Smith normal form over ℤ.
//!
//! Two routes: a dense reduction that also records the unimodular transforms,
//! and a sparse route for large boundary matrices that first eliminates unit
//! pivots and only runs the dense reduction on the residual block.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use super::sparse::IntMatrix;

/// `U · M · V = S` with `S` diagonal and `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// The full diagonal, length `min(rows, cols)`, nonnegative.
    pub diagonal: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rank: usize,
}

impl SmithForm {
    /// The diagonal matrix `S` as a dense array.
    pub fn s_matrix(&self) -> Vec<Vec<BigInt>> {
        let rows = self.u.len();
        let cols = self.v.len();
        let mut s = vec![vec![BigInt::zero(); cols]; rows];
        for (i, d) in self.diagonal.iter().enumerate() {
            s[i][i] = d.clone();
        }
        s
    }

    /// Nonzero diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate().take(k) {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !bl[j].is_zero() {
                    out[i][j] += x * &bl[j];
                }
            }
        }
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn dense_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let a = super::sparse::int_matrix_to_dense(m);
    smith_dense(a, m.rows(), m.cols(), true)
}

/// Dense SNF of an explicit array; transforms are skipped when `track` is false.
pub(crate) fn smith_dense(
    mut a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    track: bool,
) -> SmithForm {
    let mut u = if track { identity(rows) } else { Vec::new() };
    let mut v = if track { identity(cols) } else { Vec::new() };
    let n = rows.min(cols);
    let mut rank = 0;

    // Row op: row_i += k * row_j (also on U). Column op: col_i += k * col_j (also on V).
    fn row_axpy(a: &mut [Vec<BigInt>], i: usize, k: &BigInt, j: usize) {
        let (ri, rj) = if i < j {
            let (lo, hi) = a.split_at_mut(j);
            (&mut lo[i], &hi[0])
        } else {
            let (lo, hi) = a.split_at_mut(i);
            (&mut hi[0], &lo[j])
        };
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            if !y.is_zero() {
                *x += k * y;
            }
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], i: usize, k: &BigInt, j: usize) {
        for row in a.iter_mut() {
            if !row[j].is_zero() {
                let t = k * &row[j];
                row[i] += t;
            }
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..n {
        loop {
            // Pivot: smallest nonzero magnitude in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                a.swap(pi, t);
                if track {
                    u.swap(pi, t);
                }
            }
            if pj != t {
                swap_cols(&mut a, pj, t);
                if track {
                    swap_cols(&mut v, pj, t);
                }
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let k = -q;
                row_axpy(&mut a, i, &k, t);
                if track {
                    row_axpy(&mut u, i, &k, t);
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                let k = -q;
                col_axpy(&mut a, j, &k, t);
                if track {
                    col_axpy(&mut v, j, &k, t);
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Divisibility: pull a non-multiple into row t and retry.
            let piv = a[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &piv).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, t, &one, i);
                    if track {
                        row_axpy(&mut u, t, &one, i);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if track {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        rank += 1;
    }
    let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
    SmithForm {
        diagonal,
        u,
        v,
        rank,
    }
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
///
/// Unit pivots are eliminated sparsely (Markowitz-style choice by column
/// length, then row length); the remaining block goes through dense SNF.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut elim = UnitEliminator::new(m);
    let units = elim.run();
    let residual = elim.residual();
    let mut out = vec![BigInt::one(); units];
    if let Some((dense, r, c)) = residual {
        let snf = smith_dense(dense, r, c, false);
        out.extend(snf.diagonal.into_iter().filter(|d| !d.is_zero()));
    }
    out
}

/// Invariant factors by the dense route only (used as a cross-check).
pub fn invariant_factors_dense(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m)
        .diagonal
        .into_iter()
        .filter(|d| !d.is_zero())
        .collect()
}

struct UnitEliminator {
    rows: Vec<FxHashMap<usize, i64>>,
    cols: Vec<FxHashSet<usize>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    overflow: bool,
    big: Option<Vec<Vec<BigInt>>>,
}

impl UnitEliminator {
    fn new(m: &IntMatrix) -> Self {
        let mut rows = vec![FxHashMap::default(); m.rows()];
        let mut cols = vec![FxHashSet::default(); m.cols()];
        let mut overflow = false;
        for (i, j, v) in m.triplets() {
            match v.to_i64() {
                Some(x) if x.unsigned_abs() < (1u64 << 40) => {
                    rows[i].insert(j, x);
                    cols[j].insert(i);
                }
                _ => overflow = true,
            }
        }
        let big = overflow.then(|| super::sparse::int_matrix_to_dense(m));
        UnitEliminator {
            row_alive: vec![true; m.rows()],
            col_alive: vec![true; m.cols()],
            rows,
            cols,
            overflow,
            big,
        }
    }

    fn run(&mut self) -> usize {
        if self.overflow {
            return 0;
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(j, c)| Reverse((c.len(), j)))
            .collect();
        let mut units = 0;
        while let Some(Reverse((len, c))) = heap.pop() {
            if !self.col_alive[c] || self.cols[c].len() != len || len == 0 {
                continue;
            }
            let pivot_row = self.cols[c]
                .iter()
                .copied()
                .filter(|&r| self.rows[r][&c].abs() == 1)
                .min_by_key(|&r| (self.rows[r].len(), r));
            let Some(r) = pivot_row else { continue };
            let s = self.rows[r][&c];
            let pivot_entries: Vec<(usize, i64)> =
                self.rows[r].iter().map(|(&j, &v)| (j, v)).collect();
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&k| k != r).collect();
            let mut touched = FxHashSet::default();
            for k in others {
                let factor = self.rows[k][&c] * s;
                for &(j, v) in &pivot_entries {
                    let cur = self.rows[k].get(&j).copied().unwrap_or(0);
                    let Some(new) = factor.checked_mul(v).and_then(|fv| cur.checked_sub(fv)) else {
                        self.overflow = true;
                        return units;
                    };
                    if new.unsigned_abs() >= (1u64 << 40) {
                        self.overflow = true;
                        return units;
                    }
                    if new == 0 {
                        self.rows[k].remove(&j);
                        self.cols[j].remove(&k);
                    } else {
                        self.rows[k].insert(j, new);
                        self.cols[j].insert(k);
                    }
                    touched.insert(j);
                }
            }
            for &(j, _) in &pivot_entries {
                self.cols[j].remove(&r);
                touched.insert(j);
            }
            self.rows[r].clear();
            self.row_alive[r] = false;
            self.col_alive[c] = false;
            self.cols[c].clear();
            units += 1;
            for j in touched {
                if self.col_alive[j] && !self.cols[j].is_empty() {
                    heap.push(Reverse((self.cols[j].len(), j)));
                }
            }
        }
        units
    }

    /// The surviving nonzero block as a dense array.
    fn residual(&mut self) -> Option<(Vec<Vec<BigInt>>, usize, usize)> {
        if let Some(big) = self.big.take() {
            let r = big.len();
            let c = big.first().map_or(0, |x| x.len());
            return Some((big, r, c));
        }
        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.row_alive[i] && !self.rows[i].is_empty())
            .collect();
        let live_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&j| self.col_alive[j] && !self.cols[j].is_empty())
            .collect();
        if live_rows.is_empty() || live_cols.is_empty() {
            return None;
        }
        let col_pos: FxHashMap<usize, usize> =
            live_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (p, &i) in live_rows.iter().enumerate() {
            for (&j, &v) in &self.rows[i] {
                dense[p][col_pos[&j]] = BigInt::from(v);
            }
        }
        Some((dense, live_rows.len(), live_cols.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::sparse::int_matrix_from_dense;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_and_zero() {
        let id = int_matrix_from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_normal_form(&id).diagonal, big(&[1, 1, 1]));
        let z = int_matrix_from_dense(&[vec![0, 0, 0], vec![0, 0, 0]]);
        let s = smith_normal_form(&z);
        assert_eq!(s.diagonal, big(&[0, 0]));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn two_by_two() {
        let m = int_matrix_from_dense(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal, big(&[2, 4]));
        let lhs = dense_mul(
            &dense_mul(&s.u, &super::super::sparse::int_matrix_to_dense(&m)),
            &s.v,
        );
        assert_eq!(lhs, s.s_matrix());
        assert_eq!(dense_det(&s.u).abs(), BigInt::one());
        assert_eq!(dense_det(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn sparse_and_dense_routes_agree() {
        let m = int_matrix_from_dense(&[
            vec![1, 1, 0, 0],
            vec![-1, 0, 1, 0],
            vec![0, -1, -1, 2],
            vec![0, 0, 0, 4],
        ]);
        assert_eq!(invariant_factors(&m), invariant_factors_dense(&m));
    }

    #[test]
    fn bareiss_determinant() {
        let a: Vec<Vec<BigInt>> = vec![big(&[2, 0, 1]), big(&[1, 3, 2]), big(&[1, 1, 2])];
        assert_eq!(dense_det(&a), BigInt::from(6));
    }
}
