//! Cohomology bases, coordinates and the product table of a cochain algebra.
//!
//! In each degree the pivots are keyed by lowest index: first the reduced
//! coboundary columns (coordinate zero), then one reduced cocycle per
//! cohomology basis element. That reduced cocycle is the representative, so
//! reducing any cocycle against the pivots reads off its coordinates.

use std::sync::OnceLock;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::chaincore::{ColumnReduction, Field, SparseVec};

use super::algebra::{CochainAlgebra, Elem};
use super::MasseyError;

struct DegreeData<F: Field> {
    /// Basis of the cocycles `ker(δ : A^d → A^{d+1})`.
    cocycles: Vec<SparseVec<F::Elem>>,
    /// `pivot[row]`: reduced vector with that lowest index and its class index.
    pivot: Vec<Option<(SparseVec<F::Elem>, Option<usize>)>>,
    reps: Vec<SparseVec<F::Elem>>,
}

/// Lazily computed cohomology of a cochain algebra over a field.
pub struct Cohomology<A: CochainAlgebra> {
    algebra: A,
    degrees: Vec<OnceLock<DegreeData<A::F>>>,
    /// Tracked reduction of `δ : A^d → A^{d+1}`, shared by degrees `d` and `d + 1`.
    reductions: Vec<OnceLock<ColumnReduction<A::F>>>,
}

fn reduce_by_pivots<F: Field>(
    field: &F,
    pivot: &[Option<(SparseVec<F::Elem>, Option<usize>)>],
    v: &SparseVec<F::Elem>,
    coords: &mut [F::Elem],
) -> SparseVec<F::Elem> {
    let mut r = v.clone();
    while let Some(low) = r.low() {
        let Some((p, class)) = &pivot[low] else { break };
        let pv = &p.entries().last().expect("pivots are nonzero").1;
        let rv = r.get(low).expect("low entry");
        let c = field.div(rv, pv).expect("pivot nonzero");
        if let Some(k) = class {
            coords[*k] = field.add(&coords[*k], &c);
        }
        r = r.axpy(field, &field.neg(&c), p);
    }
    r
}

impl<A: CochainAlgebra> Cohomology<A> {
    pub fn new(algebra: A) -> Self {
        let n = algebra.top_degree() + 1;
        Cohomology {
            algebra,
            degrees: (0..n).map(|_| OnceLock::new()).collect(),
            reductions: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn algebra(&self) -> &A {
        &self.algebra
    }

    pub fn field(&self) -> &A::F {
        self.algebra.field()
    }

    pub fn top_degree(&self) -> usize {
        self.algebra.top_degree()
    }

    fn data(&self, d: usize) -> Option<&DegreeData<A::F>> {
        let cell = self.degrees.get(d)?;
        Some(cell.get_or_init(|| self.compute(d)))
    }

    fn reduction(&self, d: usize) -> &ColumnReduction<A::F> {
        self.reductions[d]
            .get_or_init(|| ColumnReduction::new(self.field(), &self.algebra.differential(d), true))
    }

    fn compute(&self, d: usize) -> DegreeData<A::F> {
        let f = self.field();
        let n = self.algebra.dim(d);
        let incoming = (d > 0).then(|| self.reduction(d - 1));
        let cocycles = self.reduction(d).kernel_basis();
        let mut pivot: Vec<Option<(SparseVec<Elem<A>>, Option<usize>)>> = vec![None; n];
        if let Some(inc) = incoming {
            for col in inc.image_basis() {
                let low = col.low().expect("image columns are nonzero");
                pivot[low] = Some((col, None));
            }
        }
        let mut reps = Vec::new();
        for z in &cocycles {
            let mut scratch = vec![f.zero(); reps.len()];
            let r = reduce_by_pivots(f, &pivot, z, &mut scratch);
            if let Some(low) = r.low() {
                pivot[low] = Some((r.clone(), Some(reps.len())));
                reps.push(r);
            }
        }
        DegreeData {
            cocycles,
            pivot,
            reps,
        }
    }

    /// `dim H^d`.
    pub fn dimension(&self, d: usize) -> usize {
        self.data(d).map_or(0, |x| x.reps.len())
    }

    /// Cocycle representatives of the chosen basis of `H^d`.
    pub fn representatives(&self, d: usize) -> &[SparseVec<Elem<A>>] {
        self.data(d).map_or(&[], |x| x.reps.as_slice())
    }

    /// A basis of the cocycles in degree `d`.
    pub fn cocycle_basis(&self, d: usize) -> &[SparseVec<Elem<A>>] {
        self.data(d).map_or(&[], |x| x.cocycles.as_slice())
    }

    pub fn is_cocycle(&self, d: usize, v: &SparseVec<Elem<A>>) -> bool {
        let delta = self.algebra.differential(d);
        delta.cols() == 0
            || delta
                .mul_vec(self.field(), v)
                .map(|w| w.is_empty())
                .unwrap_or(false)
    }

    /// Coordinates of the class of a cocycle in the chosen basis.
    pub fn coordinates(
        &self,
        d: usize,
        cocycle: &SparseVec<Elem<A>>,
    ) -> Result<Vec<Elem<A>>, MasseyError> {
        let f = self.field();
        let Some(data) = self.data(d) else {
            return if cocycle.is_empty() {
                Ok(Vec::new())
            } else {
                Err(MasseyError::NotCocycle(d))
            };
        };
        let mut coords = vec![f.zero(); data.reps.len()];
        let rest = reduce_by_pivots(f, &data.pivot, cocycle, &mut coords);
        if !rest.is_empty() {
            return Err(MasseyError::NotCocycle(d));
        }
        Ok(coords)
    }

    /// The cocycle `Σ cᵢ · repᵢ`.
    pub fn cocycle_of(
        &self,
        d: usize,
        coords: &[Elem<A>],
    ) -> Result<SparseVec<Elem<A>>, MasseyError> {
        let reps = self.representatives(d);
        if coords.len() != reps.len() {
            return Err(MasseyError::Shape(format!(
                "class in degree {d} needs {} coordinates, got {}",
                reps.len(),
                coords.len()
            )));
        }
        let f = self.field();
        Ok(coords
            .iter()
            .zip(reps)
            .fold(SparseVec::new(), |acc, (c, r)| acc.axpy(f, c, r)))
    }

    /// Some `w` with `δw = b` for `b` in degree `d`, or `None`.
    pub fn solve_coboundary(&self, d: usize, b: &SparseVec<Elem<A>>) -> Option<SparseVec<Elem<A>>> {
        if b.is_empty() {
            return Some(SparseVec::new());
        }
        if d == 0 || d >= self.reductions.len() {
            return None;
        }
        self.reduction(d - 1).solve(b).expect("dimensions agree")
    }

    /// Coordinates of the product of two classes.
    pub fn product(
        &self,
        p: usize,
        x: &[Elem<A>],
        q: usize,
        y: &[Elem<A>],
    ) -> Result<Vec<Elem<A>>, MasseyError> {
        let a = self.cocycle_of(p, x)?;
        let b = self.cocycle_of(q, y)?;
        self.coordinates(p + q, &self.algebra.multiply(p, &a, q, &b))
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> Elem<A> {
        let f = self.field();
        match f.elements() {
            Some(all) => all[(rng.next_u32() as usize) % all.len()].clone(),
            None => f.from_i64((rng.next_u32() % 7) as i64 - 3),
        }
    }

    /// A random combination of the cocycle basis in degree `d`.
    pub fn random_cocycle(&self, d: usize, rng: &mut dyn RngCore) -> SparseVec<Elem<A>> {
        let f = self.field();
        let mut acc = SparseVec::new();
        for z in self.cocycle_basis(d) {
            let c = self.random_elem(rng);
            acc = acc.axpy(f, &c, z);
        }
        acc
    }

    /// `δw` for a random cochain `w` of degree `d − 1`.
    pub fn random_coboundary(&self, d: usize, rng: &mut dyn RngCore) -> SparseVec<Elem<A>> {
        if d == 0 {
            return SparseVec::new();
        }
        let f = self.field();
        let n = self.algebra.dim(d - 1);
        let w = SparseVec::from_pairs(f, (0..n).map(|i| (i, self.random_elem(rng))).collect());
        self.algebra
            .differential(d - 1)
            .mul_vec(f, &w)
            .expect("dimensions agree")
    }
}

/// Cohomology dimensions and the structure constants of the product on the
/// chosen bases, as rationals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyRing {
    pub dimensions: Vec<usize>,
    /// `(p, q, i, j, coordinates of eᵢ·eⱼ in H^{p+q})`, nonzero products only.
    pub products: Vec<(usize, usize, usize, usize, Vec<String>)>,
}

/// The additive structure and full product table.
pub fn cohomology_ring<A: CochainAlgebra>(
    h: &Cohomology<A>,
) -> Result<CohomologyRing, MasseyError> {
    let f = h.field();
    let top = h.top_degree();
    let dimensions: Vec<usize> = (0..=top).map(|d| h.dimension(d)).collect();
    let mut products = Vec::new();
    for p in 0..=top {
        for q in 0..=top - p {
            for i in 0..dimensions[p] {
                for j in 0..dimensions[q] {
                    let mut x = vec![f.zero(); dimensions[p]];
                    x[i] = f.one();
                    let mut y = vec![f.zero(); dimensions[q]];
                    y[j] = f.one();
                    let c = h.product(p, &x, q, &y)?;
                    if c.iter().any(|v| !f.is_zero(v)) {
                        products.push((p, q, i, j, c.iter().map(|v| f.format(v)).collect()));
                    }
                }
            }
        }
    }
    Ok(CohomologyRing {
        dimensions,
        products,
    })
}
