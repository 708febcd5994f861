use crate::chaincore::{Field, SparseMatrix, SparseVec};
use crate::simplicial::{Cochain, SimplicialCochains};

pub type Elem<A> = <<A as CochainAlgebra>::F as Field>::Elem;

/// A finite-dimensional cochain-level algebra over a field.
///
/// Each degree has a basis indexed `0..dim(d)`; vectors are sparse in it.
pub trait CochainAlgebra: Sync {
    type F: Field;

    fn field(&self) -> &Self::F;
    /// Largest degree that may be nonzero.
    fn top_degree(&self) -> usize;
    fn dim(&self, degree: usize) -> usize;
    /// `δ : A^d → A^{d+1}`, with rows indexed by the degree `d+1` basis.
    fn differential(&self, degree: usize) -> SparseMatrix<<Self::F as Field>::Elem>;
    /// The product of `a ∈ A^p` and `b ∈ A^q`; zero when `p + q` exceeds the top degree.
    fn multiply(
        &self,
        p: usize,
        a: &SparseVec<<Self::F as Field>::Elem>,
        q: usize,
        b: &SparseVec<<Self::F as Field>::Elem>,
    ) -> SparseVec<<Self::F as Field>::Elem>;
}

impl<F: Field> CochainAlgebra for SimplicialCochains<F> {
    type F = F;

    fn field(&self) -> &F {
        SimplicialCochains::field(self)
    }

    fn top_degree(&self) -> usize {
        self.complex().dim().unwrap_or(0)
    }

    fn dim(&self, degree: usize) -> usize {
        self.complex().count(degree)
    }

    fn differential(&self, degree: usize) -> SparseMatrix<F::Elem> {
        if degree >= self.top_degree() {
            return SparseMatrix::zero(0, self.dim(degree));
        }
        self.coboundary_matrix(degree)
    }

    fn multiply(
        &self,
        p: usize,
        a: &SparseVec<F::Elem>,
        q: usize,
        b: &SparseVec<F::Elem>,
    ) -> SparseVec<F::Elem> {
        let ca = Cochain {
            degree: p,
            values: a.clone(),
        };
        let cb = Cochain {
            degree: q,
            values: b.clone(),
        };
        self.cup(&ca, &cb).values
    }
}

impl<A: CochainAlgebra> CochainAlgebra for &A {
    type F = A::F;

    fn field(&self) -> &A::F {
        (**self).field()
    }
    fn top_degree(&self) -> usize {
        (**self).top_degree()
    }
    fn dim(&self, degree: usize) -> usize {
        (**self).dim(degree)
    }
    fn differential(&self, degree: usize) -> SparseMatrix<Elem<A>> {
        (**self).differential(degree)
    }
    fn multiply(
        &self,
        p: usize,
        a: &SparseVec<Elem<A>>,
        q: usize,
        b: &SparseVec<Elem<A>>,
    ) -> SparseVec<Elem<A>> {
        (**self).multiply(p, a, q, b)
    }
}
