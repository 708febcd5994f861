//! Simplicial cochains and the Alexander–Whitney cup product.
//!
//! Cochains are indexed by the position of a simplex in its dimension list.
//! `(φ ∪ ψ)(v₀…v_{p+q}) = φ(v₀…v_p) · ψ(v_p…v_{p+q})` in the global vertex order.

use std::sync::OnceLock;

use crate::chaincore::{ChainOperator, Field, SparseMatrix, SparseVec};

use super::complex::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<E> {
    pub degree: usize,
    pub values: SparseVec<E>,
}

impl<E: Clone> Cochain<E> {
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            values: SparseVec::new(),
        }
    }

    /// The constant cochain with value one on every vertex.
    pub fn unit<F: Field<Elem = E>>(field: &F, k: &SimplicialComplex) -> Self {
        let values =
            SparseVec::from_sorted_unchecked((0..k.count(0)).map(|i| (i, field.one())).collect());
        Cochain { degree: 0, values }
    }
}

/// `δφ(σ) = Σᵢ (−1)ⁱ φ(dᵢσ)`.
pub fn coboundary<F: Field>(
    field: &F,
    k: &SimplicialComplex,
    c: &Cochain<F::Elem>,
) -> Cochain<F::Elem> {
    let d = c.degree;
    let dense = c.values.to_dense(field, k.count(d));
    let mut pairs = Vec::new();
    let mut face = Vec::with_capacity(d + 1);
    for (j, s) in k.simplices(d + 1).enumerate() {
        let mut acc = field.zero();
        for skip in 0..=d + 1 {
            face.clear();
            face.extend(
                s.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v),
            );
            let idx = k.index_of(&face).expect("closed under faces");
            let v = &dense[idx];
            if !field.is_zero(v) {
                acc = if skip % 2 == 0 {
                    field.add(&acc, v)
                } else {
                    field.sub(&acc, v)
                };
            }
        }
        if !field.is_zero(&acc) {
            pairs.push((j, acc));
        }
    }
    Cochain {
        degree: d + 1,
        values: SparseVec::from_sorted_unchecked(pairs),
    }
}

/// Front and back face indices of every `(p+q)`-simplex.
#[derive(Clone, Debug)]
pub struct CupTable {
    pub p: usize,
    pub q: usize,
    pub faces: Vec<(u32, u32)>,
}

impl CupTable {
    pub fn new(k: &SimplicialComplex, p: usize, q: usize) -> Self {
        let faces = k
            .simplices(p + q)
            .map(|s| {
                let f = k.index_of(&s[..=p]).expect("front face present") as u32;
                let b = k.index_of(&s[p..]).expect("back face present") as u32;
                (f, b)
            })
            .collect();
        CupTable { p, q, faces }
    }
}

fn cup_with_table<F: Field>(
    field: &F,
    k: &SimplicialComplex,
    table: &CupTable,
    a: &Cochain<F::Elem>,
    b: &Cochain<F::Elem>,
) -> Cochain<F::Elem> {
    let da = a.values.to_dense(field, k.count(a.degree));
    let db = b.values.to_dense(field, k.count(b.degree));
    let mut pairs = Vec::new();
    for (j, &(f, bk)) in table.faces.iter().enumerate() {
        let x = &da[f as usize];
        if field.is_zero(x) {
            continue;
        }
        let y = &db[bk as usize];
        if field.is_zero(y) {
            continue;
        }
        pairs.push((j, field.mul(x, y)));
    }
    Cochain {
        degree: a.degree + b.degree,
        values: SparseVec::from_sorted_unchecked(pairs),
    }
}

/// Alexander–Whitney cup product; zero when the degree exceeds `dim K`.
pub fn cup<F: Field>(
    field: &F,
    k: &SimplicialComplex,
    a: &Cochain<F::Elem>,
    b: &Cochain<F::Elem>,
) -> Cochain<F::Elem> {
    let n = a.degree + b.degree;
    if k.dim().is_none_or(|d| n > d) {
        return Cochain::zero(n);
    }
    cup_with_table(field, k, &CupTable::new(k, a.degree, b.degree), a, b)
}

/// The cochain algebra of a complex with cached coboundaries and cup tables.
#[derive(Debug)]
pub struct SimplicialCochains<F: Field> {
    field: F,
    complex: SimplicialComplex,
    coboundaries: Vec<OnceLock<SparseMatrix<F::Elem>>>,
    tables: Vec<Vec<OnceLock<CupTable>>>,
}

impl<F: Field> SimplicialCochains<F> {
    pub fn new(field: F, complex: SimplicialComplex) -> Self {
        let n = complex.dim().map_or(0, |d| d + 1);
        SimplicialCochains {
            field,
            coboundaries: (0..n).map(|_| OnceLock::new()).collect(),
            tables: (0..n)
                .map(|_| (0..n).map(|_| OnceLock::new()).collect())
                .collect(),
            complex,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// `δ : C^d → C^{d+1}` as a matrix (rows are `(d+1)`-simplices).
    pub fn coboundary_matrix(&self, d: usize) -> SparseMatrix<F::Elem> {
        match self.coboundaries.get(d) {
            Some(cell) => cell
                .get_or_init(|| {
                    // Transpose of the boundary, filled row by row so columns stay sorted.
                    let f = &self.field;
                    let (one, minus) = (f.one(), f.neg(&f.one()));
                    let mut cols: Vec<Vec<(usize, F::Elem)>> =
                        vec![Vec::new(); self.complex.count(d)];
                    let mut raw = Vec::new();
                    for j in 0..self.complex.count(d + 1) {
                        self.complex.boundary_into(d + 1, j, &mut raw);
                        for &(i, v) in &raw {
                            cols[i].push((j, if v > 0 { one.clone() } else { minus.clone() }));
                        }
                    }
                    let cols = cols
                        .into_iter()
                        .map(SparseVec::from_sorted_unchecked)
                        .collect();
                    SparseMatrix::from_columns(self.complex.count(d + 1), cols)
                        .expect("indices in range")
                })
                .clone(),
            None => SparseMatrix::zero(0, 0),
        }
    }

    pub fn cup(&self, a: &Cochain<F::Elem>, b: &Cochain<F::Elem>) -> Cochain<F::Elem> {
        let n = a.degree + b.degree;
        if self.complex.dim().is_none_or(|d| n > d) {
            return Cochain::zero(n);
        }
        let table = self.tables[a.degree][b.degree]
            .get_or_init(|| CupTable::new(&self.complex, a.degree, b.degree));
        cup_with_table(&self.field, &self.complex, table, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaincore::{PrimeField, Rationals};
    use crate::simplicial::construct::{boundary_sphere, staircase_torus};
    use num_rational::BigRational;

    #[test]
    fn unit_is_neutral() {
        let f = Rationals;
        let k = boundary_sphere(2);
        let one = Cochain::unit(&f, &k);
        let psi = Cochain {
            degree: 2,
            values: SparseVec::from_pairs(&f, vec![(1, BigRational::from_integer(3.into()))]),
        };
        assert_eq!(cup(&f, &k, &one, &psi), psi);
        assert_eq!(cup(&f, &k, &psi, &one), psi);
    }

    #[test]
    fn leibniz_on_torus() {
        let f = PrimeField::new(5).unwrap();
        let k = staircase_torus(3).unwrap();
        let a = Cochain {
            degree: 0,
            values: SparseVec::from_pairs(&f, vec![(0, 2), (3, 1), (7, 4)]),
        };
        let b = Cochain {
            degree: 1,
            values: SparseVec::from_pairs(&f, vec![(1, 3), (5, 1), (20, 2)]),
        };
        let lhs = coboundary(&f, &k, &cup(&f, &k, &a, &b));
        let r1 = cup(&f, &k, &coboundary(&f, &k, &a), &b);
        let r2 = cup(&f, &k, &a, &coboundary(&f, &k, &b));
        assert_eq!(lhs.values, r1.values.add(&f, &r2.values));
    }
}
