//! Column reduction over a field.
//!
//! `R = M·V` with `V` upper unitriangular and the lowest nonzero rows of the
//! nonzero columns of `R` pairwise distinct. Pivots are looked up by row.

use super::ring::Field;
use super::sparse::{axpy_into, SparseMatrix, SparseVec};
use super::ChainError;

/// A reduced matrix together with (optionally) its reduction transform.
#[derive(Clone, Debug)]
pub struct ColumnReduction<F: Field> {
    field: F,
    rows: usize,
    reduced: Vec<SparseVec<F::Elem>>,
    transform: Option<Vec<SparseVec<F::Elem>>>,
    pivot_col: Vec<Option<usize>>,
}

impl<F: Field> ColumnReduction<F> {
    pub fn new(field: &F, m: &SparseMatrix<F::Elem>, track: bool) -> Self {
        let mut pivot_col: Vec<Option<usize>> = vec![None; m.rows()];
        let mut reduced: Vec<SparseVec<F::Elem>> = Vec::with_capacity(m.cols());
        let mut transform = track.then(|| Vec::with_capacity(m.cols()));
        let mut buf = Vec::new();
        let mut vbuf = Vec::new();
        for (j, col) in m.columns().iter().enumerate() {
            let mut r: Vec<(usize, F::Elem)> = col.entries().to_vec();
            let mut v: Vec<(usize, F::Elem)> = vec![(j, field.one())];
            while let Some(&(low, ref val)) = r.last() {
                let Some(p) = pivot_col[low] else { break };
                let pr = &reduced[p];
                let pv = pr.entries().last().expect("pivot column nonzero").1.clone();
                let c = field.neg(&field.div(val, &pv).expect("pivot nonzero"));
                axpy_into(field, &r, &c, pr.entries(), &mut buf);
                std::mem::swap(&mut r, &mut buf);
                if let Some(t) = transform.as_ref() {
                    let t: &Vec<SparseVec<F::Elem>> = t;
                    axpy_into(field, &v, &c, t[p].entries(), &mut vbuf);
                    std::mem::swap(&mut v, &mut vbuf);
                }
            }
            if let Some(&(low, _)) = r.last() {
                pivot_col[low] = Some(j);
            }
            reduced.push(SparseVec::from_sorted_unchecked(r));
            if let Some(t) = transform.as_mut() {
                t.push(SparseVec::from_sorted_unchecked(v));
            }
        }
        ColumnReduction {
            field: field.clone(),
            rows: m.rows(),
            reduced,
            transform,
            pivot_col,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.reduced.len()
    }

    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_empty()).count()
    }

    /// The reduced column `R_j`.
    pub fn reduced_column(&self, j: usize) -> &SparseVec<F::Elem> {
        &self.reduced[j]
    }

    /// The transform column `V_j`, when tracked.
    pub fn transform_column(&self, j: usize) -> Option<&SparseVec<F::Elem>> {
        self.transform.as_ref().map(|t| &t[j])
    }

    /// Column whose lowest entry sits in `row`.
    pub fn pivot_column(&self, row: usize) -> Option<usize> {
        self.pivot_col.get(row).copied().flatten()
    }

    /// Basis of the kernel: the columns `V_j` with `R_j = 0`.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F::Elem>> {
        let t = self
            .transform
            .as_ref()
            .expect("kernel basis needs a tracked transform");
        self.reduced
            .iter()
            .zip(t)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Basis of the image: the nonzero reduced columns.
    pub fn image_basis(&self) -> Vec<SparseVec<F::Elem>> {
        self.reduced
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .collect()
    }

    /// Reduces `b` against the pivots. Returns the remainder and the
    /// combination `c` of reduced columns with `b = remainder + R·c`.
    pub fn reduce_vector(
        &self,
        b: &SparseVec<F::Elem>,
    ) -> (SparseVec<F::Elem>, Vec<(usize, F::Elem)>) {
        let f = &self.field;
        let mut r: Vec<(usize, F::Elem)> = b.entries().to_vec();
        let mut kept: Vec<(usize, F::Elem)> = Vec::new();
        let mut coeffs = Vec::new();
        let mut buf = Vec::new();
        while let Some((low, val)) = r.last().cloned() {
            match self.pivot_column(low) {
                Some(p) => {
                    let pr = &self.reduced[p];
                    let pv = &pr.entries().last().expect("pivot column nonzero").1;
                    let c = f.div(&val, pv).expect("pivot nonzero");
                    coeffs.push((p, c.clone()));
                    axpy_into(f, &r, &f.neg(&c), pr.entries(), &mut buf);
                    std::mem::swap(&mut r, &mut buf);
                }
                None => {
                    kept.push(r.pop().expect("nonempty"));
                }
            }
        }
        kept.reverse();
        (SparseVec::from_sorted_unchecked(kept), coeffs)
    }

    /// Some `x` with `M·x = b`, or `None` when `b` is outside the image.
    pub fn solve(&self, b: &SparseVec<F::Elem>) -> Result<Option<SparseVec<F::Elem>>, ChainError> {
        if b.low().is_some_and(|l| l >= self.rows) {
            return Err(ChainError::DimensionMismatch(format!(
                "right-hand side index {} exceeds {} rows",
                b.low().unwrap_or(0),
                self.rows
            )));
        }
        let t = self
            .transform
            .as_ref()
            .expect("solve needs a tracked transform");
        let (rem, coeffs) = self.reduce_vector(b);
        if !rem.is_empty() {
            return Ok(None);
        }
        let f = &self.field;
        let mut x: Vec<(usize, F::Elem)> = Vec::new();
        let mut buf = Vec::new();
        for (p, c) in coeffs {
            axpy_into(f, &x, &c, t[p].entries(), &mut buf);
            std::mem::swap(&mut x, &mut buf);
        }
        Ok(Some(SparseVec::from_sorted_unchecked(x)))
    }
}

/// A graded boundary operator whose columns are generated on demand.
///
/// Entries are small integers; they are mapped into the working field.
pub trait ChainOperator: Sync {
    /// Largest degree with cells (`None` for the empty complex).
    fn top_degree(&self) -> Option<usize>;
    fn cell_count(&self, degree: usize) -> usize;
    /// Boundary of cell `j` in `degree`, as `(row, coefficient)` sorted by row.
    fn boundary_into(&self, degree: usize, j: usize, out: &mut Vec<(usize, i64)>);
}

/// Ranks of `∂_d` for every degree, computed top-down with clearing.
///
/// `ranks[d]` is the rank of `∂_d : C_d → C_{d−1}` (`ranks[0] = 0`).
pub fn boundary_ranks<F: Field, Op: ChainOperator + ?Sized>(field: &F, op: &Op) -> Vec<usize> {
    let Some(top) = op.top_degree() else {
        return Vec::new();
    };
    let mut ranks = vec![0usize; top + 1];
    // Cells of degree d that are pivot rows of ∂_{d+1}; their columns of ∂_d reduce to zero.
    let mut cleared: Vec<bool> = Vec::new();
    for d in (1..=top).rev() {
        let cols = op.cell_count(d);
        let rows = op.cell_count(d - 1);
        let mut arena = ReducedArena::<F>::new(rows);
        let mut raw = Vec::new();
        let mut work: Vec<(usize, F::Elem)> = Vec::new();
        let mut buf = Vec::new();
        for j in 0..cols {
            if cleared.get(j).copied().unwrap_or(false) {
                continue;
            }
            op.boundary_into(d, j, &mut raw);
            work.clear();
            work.extend(
                raw.iter()
                    .map(|&(i, v)| (i, field.from_i64(v)))
                    .filter(|(_, v)| !field.is_zero(v)),
            );
            while let Some(&(low, ref val)) = work.last() {
                let Some(p) = arena.pivot(low) else { break };
                let pcol = arena.column(p);
                let pv = &pcol.last().expect("stored columns are nonzero").1;
                let c = field.neg(&field.div(val, pv).expect("pivot nonzero"));
                axpy_into(field, &work, &c, pcol, &mut buf);
                std::mem::swap(&mut work, &mut buf);
            }
            if let Some(&(low, _)) = work.last() {
                arena.push(low, &work);
            }
        }
        ranks[d] = arena.count();
        cleared = arena.pivot_rows();
    }
    ranks
}

/// Append-only storage of reduced columns keyed by pivot row.
struct ReducedArena<F: Field> {
    entries: Vec<(usize, F::Elem)>,
    offsets: Vec<usize>,
    by_row: Vec<u32>,
}

impl<F: Field> ReducedArena<F> {
    fn new(rows: usize) -> Self {
        ReducedArena {
            entries: Vec::new(),
            offsets: vec![0],
            by_row: vec![u32::MAX; rows],
        }
    }

    fn pivot(&self, row: usize) -> Option<usize> {
        let p = self.by_row[row];
        (p != u32::MAX).then_some(p as usize)
    }

    fn column(&self, p: usize) -> &[(usize, F::Elem)] {
        &self.entries[self.offsets[p]..self.offsets[p + 1]]
    }

    fn push(&mut self, low: usize, col: &[(usize, F::Elem)]) {
        let id = self.offsets.len() - 1;
        self.entries.extend_from_slice(col);
        self.offsets.push(self.entries.len());
        self.by_row[low] = u32::try_from(id).expect("fewer than 2^32 pivots");
    }

    fn count(&self) -> usize {
        self.offsets.len() - 1
    }

    fn pivot_rows(&self) -> Vec<bool> {
        self.by_row.iter().map(|&p| p != u32::MAX).collect()
    }
}
