//! The split model `(∨_{m−1} S²) × S³` and its Massey sweep.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chaincore::Rationals;
use crate::cupmassey::{massey_sweep, Cohomology, SweepPattern, SweepReport};
use crate::simplicial::{
    boundary_sphere, staircase_product, wedge, SimplicialCochains, SimplicialComplex,
};

use super::ConfError;

/// `wedge(m − 1 copies of ∂Δ³) × ∂Δ⁴` in the staircase triangulation.
pub fn split_model(m: usize) -> Result<SimplicialComplex, ConfError> {
    if m < 2 {
        return Err(ConfError::Invalid(format!(
            "order must be at least 2, got {m}"
        )));
    }
    let s2 = boundary_sphere(2);
    let pieces: Vec<_> = (0..m - 1).map(|_| (s2.clone(), 0u32)).collect();
    let w = wedge(&pieces)?;
    Ok(staircase_product(&w, &boundary_sphere(3)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitSweep {
    pub m: usize,
    pub f_vector: Vec<usize>,
    pub cohomology_dimensions: Vec<usize>,
    pub sweep: SweepReport,
    pub seconds: f64,
}

impl SplitSweep {
    pub fn all_trivial(&self) -> bool {
        self.sweep.all_trivial()
    }
}

/// Massey sweep over ℚ in degrees `(2, 2, 2)` on the split model.
/// The sweep stops, flagged incomplete, after `budget` triples.
pub fn split_model_sweep(
    m: usize,
    pattern: SweepPattern,
    budget: usize,
) -> Result<SplitSweep, ConfError> {
    let start = Instant::now();
    let k = split_model(m)?;
    let f_vector = k.f_vector();
    let h = Cohomology::new(SimplicialCochains::new(Rationals, k));
    let cohomology_dimensions = (0..=h.top_degree()).map(|d| h.dimension(d)).collect();
    let sweep = massey_sweep(&h, [2, 2, 2], pattern, budget)?;
    Ok(SplitSweep {
        m,
        f_vector,
        cohomology_dimensions,
        sweep,
        seconds: start.elapsed().as_secs_f64(),
    })
}
