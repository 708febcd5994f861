//! The orbit configuration space of two points in S³ as a simplicial complement.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chaincore::{homology_of_operator, CoefficientRing, HomologySummary};
use crate::simplicial::{
    complement_model_streaming, graph_subcomplex, s3_with_action, GroupAction, PieceOracle,
    S3Model, SimplicialComplex, SimplicialError,
};

use super::formulas::poincare_polynomial;
use super::ConfError;

/// Top simplices of `K × L` in the staircase triangulation.
pub fn projected_product_size(k: &SimplicialComplex, l: &SimplicialComplex) -> u128 {
    let dims = |c: &SimplicialComplex| -> Vec<u128> {
        let mut counts = Vec::new();
        for s in c.maximal_simplices() {
            let d = s.len() - 1;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    };
    let (a, b) = (dims(k), dims(l));
    let mut total = 0u128;
    for (p, &x) in a.iter().enumerate() {
        for (q, &y) in b.iter().enumerate() {
            total += x * y * binomial(p + q, p);
        }
    }
    total
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Membership in `Δ_k = {(v, g^k v)}` read directly off product vertex ids.
struct DiagonalOracle<'a> {
    complex: &'a SimplicialComplex,
    bound: usize,
    /// `piece_of[a·n + b]`.
    piece_of: Vec<u32>,
}

impl<'a> DiagonalOracle<'a> {
    fn new(action: &'a GroupAction) -> Self {
        let complex = action.complex();
        let n = complex.vertex_bound();
        let mut piece_of = vec![u32::MAX; n * n];
        for k in 0..action.order() {
            let p = action.power(k);
            for &a in complex.vertices() {
                piece_of[a as usize * n + p.apply(a) as usize] = k as u32;
            }
        }
        DiagonalOracle {
            complex,
            bound: n,
            piece_of,
        }
    }
}

impl PieceOracle for DiagonalOracle<'_> {
    fn piece(&self, v: u32) -> Option<u32> {
        let p = self.piece_of[v as usize];
        (p != u32::MAX).then_some(p)
    }

    fn piece_contains(&self, _piece: u32, s: &[u32]) -> bool {
        // Within one Δ_k the first coordinates are distinct and increasing.
        let firsts: Vec<u32> = s.iter().map(|&v| v / self.bound as u32).collect();
        self.complex.contains(&firsts)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplementRun {
    pub m: usize,
    pub q: usize,
    pub model: S3Model,
    pub ring: CoefficientRing,
    pub s3_f_vector: Vec<usize>,
    pub product_top_simplices: u128,
    pub complement_f_vector: Vec<usize>,
    pub homology: HomologySummary,
    pub expected_betti: Vec<usize>,
    pub matches_formula: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum ComplementOutcome {
    Completed(ComplementRun),
    Refused {
        m: usize,
        q: usize,
        model: S3Model,
        projected_top_simplices: u128,
        budget: u128,
    },
}

/// Builds the S³ model with the `(1, q)` action, removes the `m` graph
/// subcomplexes `Δ_k` from the staircase square and computes homology.
/// Refuses without building anything when the projected product exceeds `budget`.
pub fn complement_pipeline(
    m: usize,
    q: usize,
    model: S3Model,
    ring: CoefficientRing,
    budget: u128,
) -> Result<ComplementOutcome, ConfError> {
    let start = Instant::now();
    let action = s3_with_action(m, q, model)?;
    let s = action.complex();
    let projected = projected_product_size(s, s);
    if projected > budget {
        return Ok(ComplementOutcome::Refused {
            m,
            q,
            model,
            projected_top_simplices: projected,
            budget,
        });
    }
    // Each Δ_k must be a subcomplex of the staircase product.
    for k in 0..m {
        graph_subcomplex(s, s, &action.power(k)).map_err(ConfError::from)?;
    }
    let oracle = DiagonalOracle::new(&action);
    let n = s.vertex_bound();
    let model_cx = complement_model_streaming(
        n * n,
        |emit| crate::simplicial::staircase_top_simplices(s, s, |t| emit(t)),
        &oracle,
    );
    let homology = homology_of_operator(&model_cx.complex, ring);
    let expected: Vec<usize> = poincare_polynomial(m, 2)
        .into_iter()
        .map(|c| usize::try_from(c).expect("small coefficients"))
        .collect();
    let mut betti = homology.betti();
    betti.resize(expected.len().max(betti.len()), 0);
    let mut exp_padded = expected.clone();
    exp_padded.resize(betti.len(), 0);
    Ok(ComplementOutcome::Completed(ComplementRun {
        m,
        q,
        model,
        ring,
        s3_f_vector: s.f_vector(),
        product_top_simplices: projected,
        complement_f_vector: model_cx.complex.f_vector(),
        matches_formula: betti == exp_padded,
        homology,
        expected_betti: expected,
        seconds: start.elapsed().as_secs_f64(),
    }))
}

impl From<SimplicialError> for ConfError {
    fn from(e: SimplicialError) -> Self {
        ConfError::Simplicial(e)
    }
}
